#include "support.hpp"

#include "tamecert/errors.hpp"
#include "tamecert/inverse.hpp"
#include "tamecert/tameness.hpp"

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include <sstream>

using namespace tamecert;
using testing_support::cubic_root;
using testing_support::sup_diff;

namespace {

double max_norm(std::span<const double> x) {
  double r = 0.0;
  for (double v : x)
    r = std::max(r, std::abs(v));
  return r;
}

LinearModel scalar_model(double a) {
  LinearModel m;
  m.dim = 1;
  m.apply = [a](std::span<const double> x) { return std::vector<double>{a * x[0]}; };
  m.norm = max_norm;
  return m;
}

LinearModel matrix_model(const Eigen::MatrixXd &A) {
  LinearModel m;
  m.dim = static_cast<int>(A.rows());
  m.apply = [A](std::span<const double> x) {
    const Eigen::VectorXd y =
        A * Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
    return std::vector<double>(y.data(), y.data() + y.size());
  };
  m.norm = max_norm;
  return m;
}

/// I + E with the max-norm operator norm of E equal to eps.
Eigen::MatrixXd perturbed_identity(int n, double eps, std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  Eigen::MatrixXd E(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      E(i, j) = U(rng);
  const double row = E.cwiseAbs().rowwise().sum().maxCoeff();
  return Eigen::MatrixXd::Identity(n, n) + (eps / row) * E;
}

CompOp op_of(const char *phi) {
  return CompOp(BivarFn::parse(phi), GridConfig{64, 257, 6});
}

} // namespace

TEST(Neumann, IdentityIsTight) {
  LinearModel id;
  id.dim = 4;
  id.apply = [](std::span<const double> x) {
    return std::vector<double>(x.begin(), x.end());
  };
  id.norm = max_norm;
  const NeumannReport r = neumann_bound(id, 0.0, 20);
  EXPECT_TRUE(r.passed);
  EXPECT_EQ(r.worst_inverse_ratio, 1.0);
  EXPECT_EQ(r.worst_defect_ratio, 0.0);
}

TEST(Neumann, ScalarBoundsAttained) {
  const NeumannReport r = neumann_bound(scalar_model(0.8), 0.2, 20);
  EXPECT_TRUE(r.passed);
  EXPECT_NEAR(r.worst_inverse_ratio, 1.25, 1e-12);
  EXPECT_NEAR(r.worst_defect_ratio, 0.25, 1e-12);
}

TEST(Neumann, MatrixAgainstDenseSolve) {
  std::mt19937_64 rng(51);
  for (double eps : {0.1, 0.25, 0.49}) {
    const Eigen::MatrixXd A = perturbed_identity(6, eps, rng);
    const LinearModel model = matrix_model(A);
    const NeumannReport r = neumann_bound(model, eps, 100, 3);
    EXPECT_TRUE(r.passed) << eps;
    EXPECT_LE(r.worst_inverse_ratio, 1.0 / (1.0 - eps) + 1e-10);
    const auto lu = A.partialPivLu();
    for (int k = 0; k < 10; ++k) {
      const Eigen::VectorXd x = Eigen::VectorXd::Random(6);
      const auto y = neumann_inverse(model, std::span<const double>(x.data(), 6));
      const Eigen::VectorXd ref = lu.solve(x);
      for (int i = 0; i < 6; ++i)
        EXPECT_NEAR(y[i], ref(i), 1e-12);
    }
  }
}

TEST(Neumann, PremiseViolationCarriesWitness) {
  try {
    neumann_bound(scalar_model(0.5), 0.2, 5);
    FAIL() << "expected a premise error";
  } catch (const PremiseError &e) {
    EXPECT_EQ(e.witness().size(), 1u);
  }
  EXPECT_THROW(neumann_bound(scalar_model(1.0), 1.0), ConfigError);
}

TEST(Newton, IdentityOneStep) {
  const CompOp op = op_of("eta");
  const GridPtr g = op.grid();
  const SmoothFn x = SmoothFn::identity(g);
  const InversionResult r = newton_invert(op, SmoothFn::zero(g), x,
                                          Grading::constant(6, 1.0));
  EXPECT_TRUE(r.certified()) << r.failure;
  EXPECT_EQ(r.increments.size(), 1u);
  EXPECT_EQ(r.iterates.size(), 2u);
  EXPECT_EQ(r.residual_sup, 0.0);
  EXPECT_LE(sup_diff(r.y, x), 1e-15);
}

TEST(Newton, LinearOneStep) {
  const CompOp op = op_of("2*eta");
  const GridPtr g = op.grid();
  const SmoothFn x = SmoothFn::identity(g);
  const InversionResult r = newton_invert(op, SmoothFn::zero(g), x,
                                          Grading::constant(6, 1.0));
  EXPECT_TRUE(r.certified()) << r.failure;
  EXPECT_EQ(r.increments.size(), 1u);
  EXPECT_LE(sup_diff(r.y, 0.5 * x), 1e-15);
  EXPECT_LE(r.residual_sup, 1e-15);
}

TEST(Newton, SmallTargetOffsetOnLargeBase) {
  // x - f(y0) is tiny next to f(y0) = s but has large high derivatives.
  const CompOp op = op_of("2*eta + s");
  const GridPtr g = op.grid();
  const SmoothFn y0 = SmoothFn::zero(g);
  const Grading m = build_generator(op, y0, 2, 6).canonical();
  auto rng = sample_engine(9, Stream::Targets, 0);
  const SmoothFn w = random_disk_element(g, m, 0.8, rng);
  const InversionResult r = newton_invert(op, y0, op.apply(y0) + 2.0 * w, m);
  ASSERT_TRUE(r.certified()) << r.failure;
  EXPECT_NEAR(r.v0_gauge, 0.8, 1e-12);
  EXPECT_EQ(r.increments.size(), 1u);
  EXPECT_LE(gauge_norm(r.y - w, m).value(), 1e-10);
}

class CubicNewton : public ::testing::Test {
protected:
  CubicNewton()
      : op(op_of("eta + eta^3")), g(op.grid()), y0(SmoothFn::zero(g)),
        m(build_generator(op, y0, 2, 6).canonical()) {}
  CompOp op;
  GridPtr g;
  SmoothFn y0;
  Grading m;
};

TEST_F(CubicNewton, ConstantTargetMatchesScalarRoots) {
  const double c = 0.05;
  const Grading big = m.scaled(std::max(1.0, c / m[0]));
  const InversionResult r =
      newton_invert(op, y0, SmoothFn::constant(g, c), big);
  ASSERT_TRUE(r.certified()) << r.failure;
  const double root = cubic_root(c);
  for (double s : g->nodes())
    EXPECT_NEAR(r.y(s), root, 1e-10);
  for (double q : r.ratios)
    if (!std::isnan(q))
      EXPECT_LE(q, 0.5 + kRatioSlack);
}

TEST_F(CubicNewton, CertificatesAndConsistency) {
  for (int k = 0; k < 8; ++k) {
    auto rng = sample_engine(1, Stream::Targets, k);
    const SmoothFn x = admissible_target(op, y0, m, 0.9, rng);
    const InversionResult r = newton_invert(op, y0, x, m);
    ASSERT_TRUE(r.certified()) << r.failure;
    for (const SmoothFn &yi : r.iterates)
      EXPECT_LE(gauge_norm(yi - y0, m).value(), 2.0 + kDomainSlack);
    for (std::size_t i = 0; i < r.increments.size(); ++i) {
      EXPECT_GE(r.increments[i], 0.0);
      if (i > 0)
        EXPECT_LE(r.ratios[i], 0.5 + kRatioSlack);
    }
    const std::vector<double> fy = op.apply_at_nodes(r.y);
    const std::vector<double> xv = x.node_values();
    for (std::size_t j = 0; j < fy.size(); ++j)
      EXPECT_LE(std::abs(fy[j] - xv[j]), 10 * kDefaultTol);
    const SmoothFn h = op.ell_apply(y0, x) - op.ell_apply(y0, op.apply(r.y)) + r.y;
    EXPECT_LE(gauge_norm(r.y - h, m).value(), std::max(kDefaultTol, r.noise_floor));
  }
}

TEST_F(CubicNewton, RoundTrip) {
  for (int k = 0; k < 8; ++k) {
    auto rng = sample_engine(2, Stream::Targets, k);
    const SmoothFn y_true = y0 + random_disk_element(g, m, 0.5, rng);
    const InversionResult r = newton_invert(op, y0, op.apply(y_true), m);
    ASSERT_TRUE(r.certified()) << r.failure;
    EXPECT_LE(sup_diff(r.y, y_true), 1e-9);
  }
}

TEST_F(CubicNewton, InadmissibleTargetRejected) {
  EXPECT_THROW(newton_invert(op, y0, SmoothFn::constant(g, 10 * m[0]), m),
               InadmissibleTargetError);
  EXPECT_THROW(newton_invert(op, y0, y0, m, 0.75), ConfigError);
}

TEST_F(CubicNewton, LipschitzBound) {
  const LipschitzReport r = inverse_lipschitz_check(op, y0, m, 0.5, 32, 0);
  EXPECT_TRUE(r.passed) << r.failure;
  EXPECT_EQ(r.pairs, 32);
  EXPECT_LE(r.worst_excess, kLipSlack);
}

TEST(Lipschitz, LinearIsEquality) {
  const CompOp op = op_of("2*eta");
  const GridPtr g = op.grid();
  const SmoothFn y0 = SmoothFn::zero(g);
  const Grading m = Grading::constant(6, 1.0);
  auto rng = sample_engine(3, Stream::Targets, 0);
  const SmoothFn x1 = admissible_target(op, y0, m, 0.7, rng);
  const SmoothFn x2 = admissible_target(op, y0, m, 0.4, rng);
  const SmoothFn y1 = newton_invert(op, y0, x1, m).y;
  const SmoothFn y2 = newton_invert(op, y0, x2, m).y;
  EXPECT_NEAR(gauge_norm(y1 - y2, m).value(),
              gauge_norm(op.ell_apply(y0, x1 - x2), m).value(), 1e-12);
  EXPECT_EQ(gauge_norm(y1 - y1, m).value(), 0.0);
}

TEST_F(CubicNewton, DerivativeInvertibility) {
  const InvertibilityReport same = derivative_invertibility(op, y0, y0, m, 0.5);
  EXPECT_TRUE(same.passed);
  EXPECT_NEAR(same.neumann.worst_inverse_ratio, 1.0, 1e-12);
  auto rng = sample_engine(4, Stream::Members, 0);
  const SmoothFn y1 = y0 + random_disk_element(g, m, 0.5, rng);
  const InvertibilityReport r = derivative_invertibility(op, y0, y1, m, 0.5, 64);
  EXPECT_TRUE(r.passed) << r.failure;
  EXPECT_EQ(r.inverse_norm_bound, 2.0);
  EXPECT_EQ(r.forward_norm_bound, 1.5);
  EXPECT_LE(r.neumann.worst_inverse_ratio, 2.0 + 1e-10);
  EXPECT_LE(r.neumann.worst_forward_ratio, 1.5 + 1e-10);
}

TEST(Invertibility, LinearIsIdentity) {
  const CompOp op = op_of("2*eta + s");
  const GridPtr g = op.grid();
  const Grading m = Grading::constant(6, 1.0);
  const InvertibilityReport r = derivative_invertibility(
      op, SmoothFn::zero(g), SmoothFn::constant(g, 0.5), m, 0.5, 16);
  EXPECT_TRUE(r.passed);
  EXPECT_LE(r.neumann.worst_defect_ratio, 1e-12);
}

TEST(ResultCsv, Format) {
  const CompOp op = op_of("eta + eta^3");
  const GridPtr g = op.grid();
  const InversionResult r =
      newton_invert(op, SmoothFn::zero(g), SmoothFn::constant(g, 0.01),
                    Grading::constant(6, 0.02));
  std::ostringstream os;
  write_result_csv(os, r);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "iter,increment,ratio,residual");
  std::getline(is, line);
  EXPECT_EQ(line.rfind("1,", 0), 0u);
  EXPECT_NE(line.find(",nan,"), std::string::npos);
  int rows = 1;
  while (std::getline(is, line))
    ++rows;
  EXPECT_EQ(rows, static_cast<int>(r.increments.size()));
}
