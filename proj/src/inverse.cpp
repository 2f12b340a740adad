#include "tamecert/inverse.hpp"

#include "tamecert/errors.hpp"
#include "tamecert/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace tamecert {

namespace {

std::vector<double> axpy(double a, std::span<const double> x,
                         std::span<const double> y) {
  std::vector<double> out(y.begin(), y.end());
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] += a * x[k];
  return out;
}

std::vector<double> draw_probe(const LinearModel &model, std::mt19937_64 &rng) {
  if (model.probe)
    return model.probe(rng);
  std::vector<double> x(model.dim);
  for (double &v : x)
    v = uniform(rng, -1.0, 1.0);
  return x;
}

void check_model(const LinearModel &model) {
  if (model.dim < 1 || !model.apply || !model.norm)
    throw ConfigError("linear model needs a positive dimension, a map and a "
                      "norm");
}

} // namespace

std::vector<double> neumann_inverse(const LinearModel &model,
                                    std::span<const double> x, int *terms) {
  check_model(model);
  if (static_cast<int>(x.size()) != model.dim)
    throw ConfigError("vector dimension does not match the model");
  std::vector<double> y(x.begin(), x.end());
  std::vector<double> term(x.begin(), x.end());
  const double stop = kNeumannTermTol * model.norm(x);
  int k = 0;
  for (double nt = model.norm(term); nt >= stop && nt > 0.0;
       nt = model.norm(term)) {
    if (++k > kNeumannMaxTerms)
      throw ConstructionError("Neumann series did not converge after " +
                              std::to_string(kNeumannMaxTerms) + " terms");
    const std::vector<double> lt = model.apply(term);
    for (std::size_t i = 0; i < term.size(); ++i)
      term[i] -= lt[i];
    for (std::size_t i = 0; i < y.size(); ++i)
      y[i] += term[i];
  }
  if (terms)
    *terms = k;
  return y;
}

NeumannReport neumann_bound(const LinearModel &model, double epsilon,
                            int probes, std::uint64_t seed) {
  check_model(model);
  if (!(epsilon >= 0.0 && epsilon < 1.0))
    throw ConfigError("neumann_bound needs 0 <= eps < 1");
  if (probes < 1)
    throw ConfigError("neumann_bound needs at least one probe");
  std::vector<std::vector<double>> xs;
  xs.reserve(probes);
  for (int k = 0; k < probes; ++k) {
    auto rng = sample_engine(seed, Stream::Probes, static_cast<std::uint64_t>(k));
    xs.push_back(draw_probe(model, rng));
  }
  for (const auto &x : xs) {
    const double nx = model.norm(x);
    const double defect = model.norm(axpy(-1.0, x, model.apply(x)));
    if (defect > (epsilon + kNeumannRelTol) * nx)
      throw PremiseError("nu(ell x - x) = " + std::to_string(defect) +
                             " exceeds eps nu(x) = " +
                             std::to_string(epsilon * nx),
                         x);
  }
  NeumannReport rep;
  rep.epsilon = epsilon;
  rep.probes = probes;
  rep.passed = true;
  const double inv_bound = 1.0 / (1.0 - epsilon);
  const double def_bound = epsilon / (1.0 - epsilon);
  for (const auto &x : xs) {
    const double nx = model.norm(x);
    if (nx == 0.0)
      continue;
    int terms = 0;
    const std::vector<double> y = neumann_inverse(model, x, &terms);
    rep.max_terms = std::max(rep.max_terms, terms);
    const double ri = model.norm(y) / nx;
    const double rd = model.norm(axpy(-1.0, x, y)) / nx;
    const double rf = model.norm(model.apply(x)) / nx;
    rep.worst_inverse_ratio = std::max(rep.worst_inverse_ratio, ri);
    rep.worst_defect_ratio = std::max(rep.worst_defect_ratio, rd);
    rep.worst_forward_ratio = std::max(rep.worst_forward_ratio, rf);
    const bool ok = ri <= inv_bound + kNeumannRelTol &&
                    rd <= def_bound + kNeumannRelTol;
    if (!ok && rep.passed) {
      rep.passed = false;
      rep.witness = x;
    }
  }
  return rep;
}

// ------------------------------------------------------------ Newton solver

std::vector<double> gauge_rounding_floor(const GridPtr &grid,
                                         const Grading &m, double scale) {
  constexpr double kSafety = 4.0;
  constexpr std::uint64_t kNoiseSeed = 0x5eed;
  auto rng = sample_engine(kNoiseSeed, Stream::Probes, 0);
  const double amp = std::numeric_limits<double>::epsilon() * scale;
  std::vector<double> noise(grid->size());
  for (double &v : noise)
    v = (rng() & 1u) ? amp : -amp;
  std::vector<double> floor = project(grid, noise).sup_abs_all();
  if (floor.size() != m.size())
    throw ConfigError("grading order does not match the grid");
  for (std::size_t i = 0; i < floor.size(); ++i)
    floor[i] *= kSafety / m[i];
  return floor;
}

InversionResult newton_invert(const CompOp &op, const SmoothFn &y0,
                              const SmoothFn &x, const Grading &m,
                              double epsilon, double tol, int maxiter) {
  if (!(epsilon > 0.0 && epsilon <= 0.5))
    throw ConfigError("newton_invert needs 0 < eps <= 1/2");
  if (!(tol > 0.0) || maxiter < 1)
    throw ConfigError("newton_invert needs tol > 0 and maxiter >= 1");
  const GridPtr &grid = op.grid();
  const std::vector<double> d0 = op.d2phi_at_nodes(y0);
  for (std::size_t j = 0; j < d0.size(); ++j)
    if (std::abs(d0[j]) <= kVanishTol)
      throw SingularDerivativeError("d2 phi(s, y0(s)) vanishes at s = " +
                                    std::to_string(grid->nodes()[j]));
  const std::vector<double> xv = x.node_values();

  // Projected ell(x - f(y)) and the node residual x - f(y). The difference is
  // taken on coefficients so a small x - f(y) riding on a large f(y) keeps its
  // high derivatives.
  auto correction = [&](const SmoothFn &y, double &res) {
    const std::vector<double> fy = op.apply_at_nodes(y);
    res = 0.0;
    for (std::size_t j = 0; j < fy.size(); ++j)
      res = std::max(res, std::abs(xv[j] - fy[j]));
    std::vector<double> dv = (x - project(grid, fy)).node_values();
    for (std::size_t j = 0; j < dv.size(); ++j)
      dv[j] /= d0[j];
    return project(grid, dv);
  };

  InversionResult r(y0);
  std::vector<double> floors;
  r.epsilon = epsilon;
  r.iterates.push_back(y0);
  {
    const std::vector<double> f0 = op.apply_at_nodes(y0);
    double scale = y0.sup_abs(0);
    for (std::size_t j = 0; j < d0.size(); ++j)
      scale = std::max(scale, (std::abs(xv[j]) + std::abs(f0[j])) /
                                  std::abs(d0[j]));
    floors = gauge_rounding_floor(grid, m, scale);
    r.noise_floor = *std::max_element(floors.begin(), floors.end());
  }
  auto resolved = [&](const SmoothFn &corr) {
    const std::vector<double> sup = corr.sup_abs_all();
    for (std::size_t i = 0; i < sup.size(); ++i)
      if (!(sup[i] / m[i] < std::max(tol, floors[i])))
        return false;
    return true;
  };
  double res0 = 0.0;
  SmoothFn step = correction(y0, res0);
  r.v0_gauge = gauge_norm(step, m);
  if (!(r.v0_gauge <= 1.0 + kAdmissibleSlack))
    throw InadmissibleTargetError(
        "gauge(ell(x - f(y0))) = " + std::to_string(r.v0_gauge) +
        " exceeds 1; target outside the admissible set");
  r.residual_sup = res0;
  double pending = r.v0_gauge;
  bool done = resolved(step);
  r.cauchy_ok = true;
  r.domain_ok = true;
  auto fail = [&](std::string why) {
    if (r.failure.empty())
      r.failure = std::move(why);
  };
  for (int it = 0; it < maxiter && !done; ++it) {
    const SmoothFn next = r.y + step;
    const double inc = gauge_norm(step, m);
    const double dist = gauge_norm(next - y0, m);
    r.iterates.push_back(next);
    r.increments.push_back(inc);
    r.ratios.push_back(r.increments.size() < 2
                           ? std::numeric_limits<double>::quiet_NaN()
                           : inc / r.increments[r.increments.size() - 2]);
    r.y = next;
    if (r.ratios.size() >= 2 && !(r.ratios.back() <= epsilon + kRatioSlack)) {
      r.cauchy_ok = false;
      fail("increment ratio " + std::to_string(r.ratios.back()) +
           " exceeds eps at step " + std::to_string(it + 1));
    }
    if (!(dist <= 2.0 + kDomainSlack)) {
      r.domain_ok = false;
      fail("iterate " + std::to_string(it + 1) + " left y0 + 2 B_m (gauge " +
           std::to_string(dist) + ")");
    }
    double res = 0.0;
    try {
      step = correction(next, res);
    } catch (const RangeError &e) {
      r.domain_ok = false;
      r.residuals.push_back(std::numeric_limits<double>::quiet_NaN());
      r.residual_sup = std::numeric_limits<double>::infinity();
      fail(e.what());
      break;
    }
    r.residuals.push_back(res);
    r.residual_sup = res;
    pending = gauge_norm(step, m);
    done = resolved(step);
    if (done)
      break;
    if (!r.domain_ok)
      break;
  }
  r.converged = done;
  if (!r.converged)
    fail("no convergence within " + std::to_string(maxiter) + " iterations");
  if (!r.increments.empty())
    r.error_bound = std::min(epsilon / (1.0 - epsilon) * r.increments.back(),
                             pending / (1.0 - epsilon));
  const double lhs = gauge_norm(r.y - y0, m);
  r.lipschitz_ok = lhs <= r.v0_gauge / (1.0 - epsilon) + kLipSlack;
  if (!r.lipschitz_ok)
    fail("gauge(y - y0) = " + std::to_string(lhs) +
         " exceeds (1 - eps)^-1 gauge(v0)");
  return r;
}

void write_result_csv(std::ostream &os, const InversionResult &r) {
  os << "iter,increment,ratio,residual\n";
  char buf[128];
  auto num = [&](double v) -> std::string {
    if (std::isnan(v))
      return "nan";
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  };
  for (std::size_t i = 0; i < r.increments.size(); ++i) {
    os << (i + 1) << ',' << num(r.increments[i]) << ',' << num(r.ratios[i])
       << ',' << num(r.residuals[i]) << '\n';
  }
}

SmoothFn admissible_target(const CompOp &op, const SmoothFn &y0,
                           const Grading &m, double radius,
                           std::mt19937_64 &rng) {
  const SmoothFn w = random_disk_element(op.grid(), m, radius, rng);
  return op.apply(y0) + op.deriv_apply(y0, w);
}

LipschitzReport inverse_lipschitz_check(const CompOp &op, const SmoothFn &y0,
                                        const Grading &m, double epsilon,
                                        int pairs, std::uint64_t seed) {
  if (pairs < 1)
    throw ConfigError("inverse_lipschitz_check needs at least one pair");
  LipschitzReport rep;
  rep.pairs = pairs;
  rep.passed = true;
  rep.worst_excess = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < pairs; ++k) {
    auto rng =
        sample_engine(seed, Stream::Targets, static_cast<std::uint64_t>(k));
    const SmoothFn x1 =
        admissible_target(op, y0, m, uniform(rng, 0.0, 0.9), rng);
    const SmoothFn x2 =
        admissible_target(op, y0, m, uniform(rng, 0.0, 0.9), rng);
    const InversionResult g1 = newton_invert(op, y0, x1, m, epsilon);
    const InversionResult g2 = newton_invert(op, y0, x2, m, epsilon);
    if (!g1.certified() || !g2.certified()) {
      rep.passed = false;
      if (rep.failure.empty())
        rep.failure = "solve failed for target pair " + std::to_string(k) +
                      ": " + (g1.certified() ? g2.failure : g1.failure);
      continue;
    }
    const double lhs = gauge_norm(g1.y - g2.y, m);
    const double rhs = gauge_norm(op.ell_apply(y0, x1 - x2), m);
    const double excess = lhs - rhs / (1.0 - epsilon);
    rep.worst_excess = std::max(rep.worst_excess, excess);
    if (rhs > 0.0)
      rep.worst_ratio = std::max(rep.worst_ratio, lhs / rhs);
    if (!(excess <= kLipSlack)) {
      rep.passed = false;
      if (rep.failure.empty())
        rep.failure = "pair " + std::to_string(k) + " violates the bound by " +
                      std::to_string(excess);
    }
  }
  return rep;
}

InvertibilityReport derivative_invertibility(const CompOp &op,
                                             const SmoothFn &y0,
                                             const SmoothFn &y1,
                                             const Grading &m, double epsilon,
                                             int probes, std::uint64_t seed) {
  if (!(epsilon >= 0.0 && epsilon < 1.0))
    throw ConfigError("derivative_invertibility needs 0 <= eps < 1");
  const GridPtr grid = op.grid();
  const std::vector<double> d0 = op.d2phi_at_nodes(y0);
  const std::vector<double> d1 = op.d2phi_at_nodes(y1);
  std::vector<double> mult(d0.size());
  for (std::size_t j = 0; j < d0.size(); ++j) {
    if (std::abs(d0[j]) <= kVanishTol)
      throw SingularDerivativeError("d2 phi(s, y0(s)) vanishes at s = " +
                                    std::to_string(grid->nodes()[j]));
    mult[j] = d1[j] / d0[j];
  }
  LinearModel model;
  model.dim = grid->degree() + 1;
  model.apply = [grid, mult](std::span<const double> c) {
    const SmoothFn w(grid, std::vector<double>(c.begin(), c.end()));
    std::vector<double> vals = w.node_values();
    for (std::size_t j = 0; j < vals.size(); ++j)
      vals[j] *= mult[j];
    const SmoothFn out = project(grid, vals);
    return std::vector<double>(out.coeffs().begin(), out.coeffs().end());
  };
  model.norm = [grid, m](std::span<const double> c) {
    return gauge_norm(SmoothFn(grid, std::vector<double>(c.begin(), c.end())),
                      m)
        .value();
  };
  model.probe = [grid](std::mt19937_64 &rng) {
    const SmoothFn p = random_polynomial(grid, rng);
    return std::vector<double>(p.coeffs().begin(), p.coeffs().end());
  };
  InvertibilityReport rep;
  rep.inverse_norm_bound = 1.0 / (1.0 - epsilon);
  rep.forward_norm_bound = 1.0 + epsilon;
  try {
    rep.neumann = neumann_bound(model, epsilon, probes, seed);
    rep.premise_ok = true;
  } catch (const PremiseError &e) {
    rep.witness = e.witness();
    rep.failure = e.what();
    return rep;
  }
  const bool forward_ok = rep.neumann.worst_forward_ratio <=
                          rep.forward_norm_bound + kNeumannRelTol;
  rep.passed = rep.neumann.passed && forward_ok;
  if (!rep.neumann.passed) {
    rep.witness = rep.neumann.witness;
    rep.failure = "Neumann bounds violated";
  } else if (!forward_ok) {
    rep.failure = "forward bound (1 + eps) violated";
  }
  return rep;
}

} // namespace tamecert
