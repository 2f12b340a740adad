#include "support.hpp"

#include "tamecert/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

using namespace tamecert;
using testing_support::grid;
using testing_support::horner;
using testing_support::random_monomials;

namespace {

std::vector<double> monomial_derivative(std::vector<double> a, int order) {
  for (int k = 0; k < order; ++k) {
    if (a.size() <= 1)
      return {0.0};
    std::vector<double> d(a.size() - 1);
    for (std::size_t j = 1; j < a.size(); ++j)
      d[j - 1] = static_cast<double>(j) * a[j];
    a = std::move(d);
  }
  return a;
}

} // namespace

TEST(GridConfig, RejectsBadSizes) {
  EXPECT_THROW((GridConfig{0, 257, 8}.validate()), ConfigError);
  EXPECT_THROW((GridConfig{64, 64, 8}.validate()), ConfigError);
  EXPECT_THROW((GridConfig{64, 257, -1}.validate()), ConfigError);
  EXPECT_NO_THROW(GridConfig{}.validate());
}

TEST(SmoothFn, EvalMatchesHornerOnMonomials) {
  auto g = grid();
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = random_monomials(rng, 12);
    const SmoothFn f = SmoothFn::from_monomials(g, a);
    for (double s = 0.0; s <= 1.0; s += 0.01)
      EXPECT_NEAR(f(s), horner(a, s), 1e-12);
  }
}

TEST(SmoothFn, DerivativesMatchMonomialCalculus) {
  auto g = grid();
  std::mt19937_64 rng(12);
  const auto a = random_monomials(rng, 10);
  const SmoothFn f = SmoothFn::from_monomials(g, a);
  for (int order = 0; order <= 8; ++order) {
    const auto da = monomial_derivative(a, order);
    const SmoothFn df = f.derivative(order);
    double scale = 1.0;
    for (double c : da)
      scale = std::max(scale, std::abs(c));
    for (double s = 0.0; s <= 1.0; s += 0.05)
      EXPECT_NEAR(df(s), horner(da, s), 1e-11 * scale) << "order " << order;
  }
}

TEST(SmoothFn, SupAbsOfIdentity) {
  auto g = grid();
  const SmoothFn x = SmoothFn::identity(g);
  EXPECT_DOUBLE_EQ(x.sup_abs(0), 1.0);
  EXPECT_NEAR(x.sup_abs(1), 1.0, 1e-14);
  EXPECT_NEAR(x.sup_abs(2), 0.0, 1e-14);
  EXPECT_EQ(SmoothFn::zero(g).sup_abs(3), 0.0);
  EXPECT_THROW(x.sup_abs(9), OrderRangeError);
}

TEST(SmoothFn, SupAbsAgreesWithDenseSampling) {
  auto g = grid();
  const double a[] = {0.0, 3.0, 0.0, -4.5, 0.0, 1.2};
  const SmoothFn f = SmoothFn::from_monomials(g, a);
  for (int order = 0; order <= 3; ++order) {
    const SmoothFn df = f.derivative(order);
    double dense = 0.0;
    const int n = 10 * g->size();
    for (int j = 0; j <= n; ++j)
      dense = std::max(dense, std::abs(df(static_cast<double>(j) / n)));
    EXPECT_NEAR(f.sup_abs(order), dense, 1e-6 * dense);
  }
}

TEST(SmoothFn, LincombIsPointwise) {
  auto g = grid();
  std::mt19937_64 rng(13);
  const SmoothFn f = random_polynomial(g, rng);
  const SmoothFn h = random_polynomial(g, rng);
  const SmoothFn c = lincomb(1.5, f, -0.25, h);
  for (int j = 0; j < 100; ++j) {
    const double s = j / 99.0;
    EXPECT_NEAR(c(s), 1.5 * f(s) - 0.25 * h(s), 1e-12);
  }
  EXPECT_EQ((f - f).sup_abs(0), 0.0);
  const SmoothFn two = lincomb(2.0, SmoothFn::constant(g, 1.0), 0.0, h);
  EXPECT_NEAR(two(0.3), 2.0, 1e-15);
}

TEST(SmoothFn, LincombRejectsMismatchedGrids) {
  const SmoothFn f = SmoothFn::zero(grid(64, 257, 8));
  const SmoothFn h = SmoothFn::zero(grid(32, 129, 8));
  EXPECT_THROW(lincomb(1.0, f, 1.0, h), ConfigError);
}

TEST(SmoothFn, DerivativeCommutesWithLincomb) {
  auto g = grid();
  std::mt19937_64 rng(14);
  const SmoothFn f = random_polynomial(g, rng);
  const SmoothFn h = random_polynomial(g, rng);
  const SmoothFn lhs = lincomb(0.7, f, 2.0, h).derivative();
  const SmoothFn rhs = lincomb(0.7, f.derivative(), 2.0, h.derivative());
  for (int k = 0; k <= g->degree(); ++k)
    EXPECT_NEAR(lhs.coeffs()[k], rhs.coeffs()[k], 1e-12);
}

TEST(SmoothFn, SupAbsScalesWithFactor) {
  auto g = grid();
  std::mt19937_64 rng(15);
  const SmoothFn f = random_polynomial(g, rng);
  for (double t : {-3.0, 0.5, 7.0})
    for (int i = 0; i <= 4; ++i)
      EXPECT_NEAR(lincomb(t, f, 0.0, f).sup_abs(i), std::abs(t) * f.sup_abs(i),
                  1e-12 * std::max(1.0, std::abs(t) * f.sup_abs(i)));
}

TEST(Project, ReproducesPolynomials) {
  auto g = grid();
  std::mt19937_64 rng(16);
  for (int trial = 0; trial < 10; ++trial) {
    const SmoothFn f = random_polynomial(g, rng, 40);
    const SmoothFn p = project(g, f.node_values());
    for (int k = 0; k <= g->degree(); ++k)
      EXPECT_NEAR(p.coeffs()[k], f.coeffs()[k], 1e-12);
    EXPECT_FALSE(p.aliasing_warning());
  }
  const SmoothFn id = project(g, SmoothFn::identity(g).node_values());
  EXPECT_LE(testing_support::sup_diff(id, SmoothFn::identity(g)), 1e-13);
}

TEST(Project, ZeroSamplesGiveZero) {
  auto g = grid();
  std::vector<double> z(g->size(), 0.0);
  EXPECT_EQ(project(g, z).sup_abs(0), 0.0);
}

TEST(Project, ExponentialAtDegree32) {
  auto g = grid(32, 129, 8);
  std::vector<double> v;
  for (double s : g->nodes())
    v.push_back(std::exp(s));
  const SmoothFn p = project(g, v);
  for (int j = 0; j <= 2000; ++j) {
    const double s = j / 2000.0;
    EXPECT_NEAR(p(s), std::exp(s), 1e-10);
  }
}

TEST(Project, FlagsAliasing) {
  auto g = grid(16, 65, 4);
  std::vector<double> v;
  for (double s : g->nodes())
    v.push_back(std::abs(s - 0.5));
  EXPECT_TRUE(project(g, v).aliasing_warning());
}

TEST(Project, RejectsBadSamples) {
  auto g = grid();
  std::vector<double> v(g->size(), 1.0);
  v[3] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(project(g, v), DataError);
  EXPECT_THROW(project(g, std::vector<double>(5, 0.0)), DataError);
}

TEST(SmoothFn, TextRoundTrip) {
  auto g = grid();
  std::mt19937_64 rng(17);
  const SmoothFn f = random_polynomial(g, rng);
  std::stringstream ss;
  write_smoothfn(ss, f);
  const SmoothFn h = read_smoothfn(ss, g);
  for (int k = 0; k <= g->degree(); ++k)
    EXPECT_EQ(h.coeffs()[k], f.coeffs()[k]);
}

TEST(Sampling, StreamsAreIndexAddressable) {
  auto a = sample_engine(42, Stream::Colo, 7);
  auto b = sample_engine(42, Stream::Colo, 7);
  auto c = sample_engine(42, Stream::Star, 7);
  const auto x = a();
  EXPECT_EQ(x, b());
  EXPECT_NE(x, c());
}
