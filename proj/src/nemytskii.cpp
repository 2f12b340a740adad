#include "tamecert/nemytskii.hpp"

#include "tamecert/errors.hpp"
#include "tamecert/sampling.hpp"

#include <algorithm>
#include <cmath>

namespace tamecert {

CompOp::CompOp(BivarFn phi, const GridConfig &grid, EtaRange range,
               int check_samples)
    : phi_(phi), d2phi_(phi.partial(0, 1)), grid_(Grid::get(grid)),
      range_(range) {
  if (!(range_.lo <= range_.hi))
    throw ConfigError("empty eta range");
  check_nonvanishing(phi_, range_.lo, range_.hi, check_samples);
}

std::vector<double> CompOp::checked_values(const SmoothFn &x) const {
  if (x.config() != grid_->config())
    throw ConfigError("function grid does not match operator grid");
  std::vector<double> vals = x.node_values();
  for (std::size_t j = 0; j < vals.size(); ++j)
    if (!(vals[j] >= range_.lo && vals[j] <= range_.hi))
      throw RangeError("x(" + std::to_string(grid_->nodes()[j]) +
                       ") = " + std::to_string(vals[j]) +
                       " leaves the admissible range [" +
                       std::to_string(range_.lo) + ", " +
                       std::to_string(range_.hi) + "]");
  return vals;
}

std::vector<double> CompOp::apply_at_nodes(const SmoothFn &x) const {
  const std::vector<double> vals = checked_values(x);
  std::vector<double> out(vals.size());
  phi_.eval_many(grid_->nodes(), vals, out);
  return out;
}

std::vector<double> CompOp::d2phi_at_nodes(const SmoothFn &y) const {
  const std::vector<double> vals = checked_values(y);
  std::vector<double> out(vals.size());
  d2phi_.eval_many(grid_->nodes(), vals, out);
  return out;
}

SmoothFn CompOp::apply(const SmoothFn &x) const {
  return project(grid_, apply_at_nodes(x));
}

SmoothFn CompOp::deriv_apply(const SmoothFn &y, const SmoothFn &v) const {
  std::vector<double> d = d2phi_at_nodes(y);
  const std::vector<double> vv = v.node_values();
  for (std::size_t j = 0; j < d.size(); ++j)
    d[j] *= vv[j];
  return project(grid_, d);
}

SmoothFn CompOp::ell_apply(const SmoothFn &y0, const SmoothFn &w) const {
  std::vector<double> d = d2phi_at_nodes(y0);
  const std::vector<double> ww = w.node_values();
  for (std::size_t j = 0; j < d.size(); ++j) {
    if (std::abs(d[j]) <= kVanishTol)
      throw SingularDerivativeError(
          "d2 phi(s, y0(s)) vanishes at s = " +
          std::to_string(grid_->nodes()[j]));
    d[j] = ww[j] / d[j];
  }
  return project(grid_, d);
}

SmoothFn CompOp::f1_apply(const SmoothFn &y0, const SmoothFn &y) const {
  return y - ell_apply(y0, apply(y));
}

SmoothFn CompOp::derivative_difference(const SmoothFn &y0, const SmoothFn &y1,
                                       const SmoothFn &v) const {
  const std::vector<double> d0 = d2phi_at_nodes(y0);
  const std::vector<double> d1 = d2phi_at_nodes(y1);
  const std::vector<double> vv = v.node_values();
  std::vector<double> out(d0.size());
  for (std::size_t j = 0; j < d0.size(); ++j) {
    if (std::abs(d0[j]) <= kVanishTol)
      throw SingularDerivativeError(
          "d2 phi(s, y0(s)) vanishes at s = " +
          std::to_string(grid_->nodes()[j]));
    out[j] = (d1[j] - d0[j]) / d0[j] * vv[j];
  }
  return project(grid_, out);
}

double contraction_ratio(const CompOp &op, const SmoothFn &y0,
                         const Grading &m, int pairs, std::uint64_t seed) {
  if (pairs < 1)
    throw ConfigError("contraction_ratio needs at least one pair");
  double worst = 0.0;
  int used = 0;
  for (int k = 0; k < pairs; ++k) {
    auto rng = sample_engine(seed, Stream::Contraction,
                             static_cast<std::uint64_t>(k));
    const double ra = uniform(rng, 0.0, 1.0);
    const double rb = uniform(rng, 0.0, 1.0);
    const SmoothFn ua = random_disk_element(op.grid(), m, ra, rng);
    const SmoothFn ub = random_disk_element(op.grid(), m, rb, rng);
    const SmoothFn y8 = lincomb(1.0, y0, 2.0, ua);
    const SmoothFn y9 = lincomb(1.0, y0, 2.0, ub);
    const double den = gauge_norm(y8 - y9, m);
    if (den == 0.0)
      continue;
    const double num = gauge_norm(op.f1_apply(y0, y8) - op.f1_apply(y0, y9), m);
    worst = std::max(worst, num / den);
    ++used;
  }
  if (used == 0)
    throw SamplingError("every sampled pair was degenerate");
  return worst;
}

ColoReport colo_check(const CompOp &op, const SmoothFn &y0, double epsilon,
                      const Grading &m, int samples, std::uint64_t seed) {
  if (!(epsilon > 0.0))
    throw ConfigError("colo_check needs epsilon > 0");
  if (samples < 1)
    throw ConfigError("colo_check needs at least one sample");
  ColoReport report;
  report.epsilon = epsilon;
  report.samples = samples;
  report.passed = true;
  double worst_excess = -1.0;
  for (int k = 0; k < samples; ++k) {
    auto rng = sample_engine(seed, Stream::Colo, static_cast<std::uint64_t>(k));
    const SmoothFn u = random_disk_element(op.grid(), m, 1.0, rng);
    const SmoothFn v = random_disk_element(op.grid(), m, 1.0, rng);
    const SmoothFn y1 = lincomb(1.0, y0, 2.0, u);
    const double gv = gauge_norm(v, m);
    const double lhs = gauge_norm(op.derivative_difference(y0, y1, v), m);
    const double ratio = lhs / gv;
    const double excess = lhs - (epsilon * gv + kColoSlack);
    if (excess > 0.0)
      report.passed = false;
    // Keep the worst case as witness, preferring actual violations.
    if (!report.witness_u || excess > worst_excess) {
      worst_excess = std::max(worst_excess, excess);
      report.witness_u = u;
      report.witness_v = v;
    }
    report.worst_ratio = std::max(report.worst_ratio, ratio);
  }
  return report;
}

} // namespace tamecert
