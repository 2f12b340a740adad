#include "tamecert/cli.hpp"

#include "tamecert/bivar.hpp"
#include "tamecert/funrep.hpp"
#include "tamecert/grading.hpp"
#include "tamecert/inverse.hpp"
#include "tamecert/nemytskii.hpp"
#include "tamecert/sampling.hpp"
#include "tamecert/tameness.hpp"

#include <cmath>
#include <functional>
#include <ostream>
#include <sstream>
#include <vector>

namespace tamecert {

namespace {

constexpr int kSelftestDegree = 32;
constexpr int kSelftestSamples = 129;
constexpr int kSelftestOrder = 4;
constexpr int kSelftestL0 = 2;

GridConfig small_grid() {
  return GridConfig{kSelftestDegree, kSelftestSamples, kSelftestOrder};
}

/// Empty on success, otherwise the name of the first failing property.
using Suite = std::function<std::string()>;

std::string suite_funrep() {
  const GridPtr grid = Grid::get(small_grid());
  auto rng = sample_engine(0, Stream::Selftest, 0);
  for (int k = 0; k < 8; ++k) {
    const SmoothFn p = random_polynomial(grid, rng);
    const SmoothFn q = project(grid, p.node_values());
    for (int c = 0; c <= grid->degree(); ++c)
      if (std::abs(q.coeffs()[c] - p.coeffs()[c]) > 1e-12)
        return "projection reproduces polynomials";
    std::stringstream ss;
    write_smoothfn(ss, p);
    const SmoothFn r = read_smoothfn(ss, grid);
    for (int c = 0; c <= grid->degree(); ++c)
      if (r.coeffs()[c] != p.coeffs()[c])
        return "text round trip";
  }
  const double a[] = {0.0, 0.0, 0.0, 1.0};
  const SmoothFn cube = SmoothFn::from_monomials(grid, a);
  const SmoothFn d = cube.derivative();
  for (double s : {0.0, 0.25, 0.7, 1.0})
    if (std::abs(d(s) - 3.0 * s * s) > 1e-11)
      return "derivative of s^3";
  return {};
}

std::string suite_bivar() {
  const BivarFn phi = BivarFn::parse("eta + eta^3 + s*eta");
  const BivarFn d2 = phi.partial(0, 1);
  for (double s : {0.0, 0.5, 1.0})
    for (double eta : {-1.0, 0.3, 2.0}) {
      if (std::abs(d2.eval(s, eta) - (1.0 + 3.0 * eta * eta + s)) > 1e-12)
        return "symbolic partial in eta";
      const Jet2 j = phi.jet(3, s, eta);
      if (std::abs(j.at(0, 3) - 6.0) > 1e-12 || std::abs(j.at(1, 1) - 1.0) > 1e-12)
        return "jet entries";
    }
  try {
    check_nonvanishing(BivarFn::parse("eta^2/2"), -1.0, 1.0);
    return "vanishing derivative detected";
  } catch (const VanishingDerivativeError &) {
  }
  return {};
}

std::string suite_grading() {
  const GridPtr grid = Grid::get(small_grid());
  const Grading m({0.5, 1.0, 2.0, 4.0, 8.0});
  auto rng = sample_engine(0, Stream::Selftest, 1);
  for (int k = 0; k < 8; ++k) {
    const SmoothFn x = random_polynomial(grid, rng);
    const double g = gauge_norm(x, m).value();
    if (std::abs(gauge_norm(3.0 * x, m).value() - 3.0 * g) > 1e-12 * g)
      return "gauge homogeneity";
    const DiskScaling ds = scale_to_disk(x, m);
    if (std::abs(gauge_norm(ds.u, m).value() - 1.0) > 1e-12)
      return "absorption onto the unit sphere";
    if (!disk_contains(random_disk_element(grid, m, 0.9, rng), m))
      return "disk sample containment";
  }
  std::stringstream ss;
  write_grading(ss, m);
  if (!(read_grading(ss) == m))
    return "grading round trip";
  return {};
}

std::string suite_nemytskii() {
  const CompOp op(BivarFn::parse("eta + eta^3"), small_grid());
  const GridPtr grid = op.grid();
  const SmoothFn y0 = SmoothFn::zero(grid);
  auto rng = sample_engine(0, Stream::Selftest, 2);
  const SmoothFn v = random_polynomial(grid, rng);
  const SmoothFn back = op.ell_apply(y0, op.deriv_apply(y0, v));
  if ((back - v).sup_abs(0) > 1e-12)
    return "ell inverts f'(y0)";
  const GeneratorFamily gen =
      build_generator(op, y0, kSelftestL0, kSelftestOrder);
  const ColoReport colo = colo_check(op, y0, 0.5, gen.canonical(), 16);
  if (!colo.passed)
    return "colo condition at the canonical grading";
  return {};
}

std::string suite_tameness(bool fault_theta) {
  const CompOp op(BivarFn::parse("eta + eta^3"), small_grid());
  const SmoothFn y0 = SmoothFn::zero(op.grid());
  const GeneratorFamily gen =
      build_generator(op, y0, kSelftestL0, kSelftestOrder);
  std::vector<double> m = gen.canonical().values();
  if (fault_theta)
    for (int i = gen.l0() + 1; i <= gen.max_order(); ++i)
      m[i] = std::max(m[i - 1], 0.5 * gen.theta(gen.n()[0], m[i - 1], i - 1));
  const Grading grading(m);
  if (!gen.is_member(grading))
    return "M-membership of the canonical grading";
  if (!verify_star(gen, grading, 16).passed)
    return "star inclusion";
  if (!check_derivative_bound(gen, grading, 8).passed)
    return "derivative bound";
  auto rng = sample_engine(0, Stream::Selftest, 3);
  for (int k = 0; k < 4; ++k) {
    const SmoothFn u = random_disk_element(op.grid(), grading, 1.0, rng);
    const SmoothFn v = random_disk_element(op.grid(), grading, 1.0, rng);
    if (chi_identity_residual(op, gen.chi(), u, v) > 1e-9)
      return "chi identity";
  }
  return {};
}

std::string suite_inverse() {
  LinearModel scalar;
  scalar.dim = 1;
  scalar.apply = [](std::span<const double> x) {
    return std::vector<double>{0.75 * x[0]};
  };
  scalar.norm = [](std::span<const double> x) { return std::abs(x[0]); };
  const NeumannReport nb = neumann_bound(scalar, 0.25, 16);
  if (!nb.passed || std::abs(nb.worst_inverse_ratio - 1.0 / 0.75) > 1e-12)
    return "Neumann bounds on the scalar model";

  const CompOp op(BivarFn::parse("eta + eta^3"), small_grid());
  const GridPtr grid = op.grid();
  const SmoothFn y0 = SmoothFn::zero(grid);
  const GeneratorFamily gen =
      build_generator(op, y0, kSelftestL0, kSelftestOrder);
  const SmoothFn x = SmoothFn::constant(grid, 0.005);
  const InversionResult res =
      newton_invert(op, y0, x, gen.canonical(), 0.5, kDefaultTol);
  if (!res.certified())
    return "Newton certificates";
  if (res.residual_sup > 1e-10)
    return "Newton residual";
  return {};
}

} // namespace

int cmd_selftest(const SelftestOptions &opts, std::ostream &out) {
  const std::vector<std::pair<const char *, Suite>> suites = {
      {"funrep", suite_funrep},
      {"bivar", suite_bivar},
      {"grading", suite_grading},
      {"nemytskii", suite_nemytskii},
      {"tameness", [&] { return suite_tameness(opts.fault_theta); }},
      {"inverse", suite_inverse},
  };
  int code = 0;
  for (const auto &[name, run] : suites) {
    std::string failure;
    try {
      failure = run();
    } catch (const std::exception &e) {
      failure = std::string("unexpected exception: ") + e.what();
    }
    if (failure.empty()) {
      out << "PASS " << name << '\n';
    } else {
      out << "FAIL " << name << ": " << failure << '\n';
      code = 1;
    }
  }
  return code;
}

} // namespace tamecert
