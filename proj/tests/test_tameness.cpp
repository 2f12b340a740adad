#include "support.hpp"

#include "tamecert/errors.hpp"
#include "tamecert/tameness.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <functional>

using namespace tamecert;
using testing_support::grid;

namespace {

CompOp op_of(const char *phi, int N = 8) {
  return CompOp(BivarFn::parse(phi), GridConfig{64, 257, N});
}

/// chi by the fundamental theorem of calculus, no quadrature involved.
double chi_closed_form(const BivarFn &phi, double s, double x, double eta) {
  const BivarFn d2 = phi.partial(0, 1);
  if (eta == 0.0)
    return 4.0 * phi.partial(0, 2).eval(s, x) / d2.eval(s, x);
  return 4.0 * (d2.eval(s, x + 2.0 * eta) - d2.eval(s, x)) /
         (2.0 * eta * d2.eval(s, x));
}

/// Extended-precision kernels for the spectral oracle.
struct OracleKernel {
  const char *text;
  std::function<long double(long double, long double)> eval;
};

const OracleKernel kOracleKernels[] = {
    {"2.5", [](long double, long double) { return 2.5L; }},
    {"s", [](long double s, long double) { return s; }},
    {"s*eta", [](long double s, long double e) { return s * e; }},
    {"exp(eta)", [](long double, long double e) { return std::exp(e); }},
};

} // namespace

TEST(Quadrature, GaussLegendreExactness) {
  const QuadratureRule r = gauss_legendre01(8);
  ASSERT_EQ(r.nodes.size(), 8u);
  for (int d = 0; d < 16; ++d) {
    double q = 0.0;
    for (std::size_t k = 0; k < r.nodes.size(); ++k)
      q += r.weights[k] * std::pow(r.nodes[k], d);
    EXPECT_NEAR(q, 1.0 / (d + 1), 1e-15);
  }
  EXPECT_THROW(gauss_legendre01(1), ConfigError);
}

TEST(Chi, AffinePhiVanishes) {
  const CompOp op = op_of("2*eta + s");
  const ChiKernel chi(op, SmoothFn::identity(op.grid()));
  EXPECT_TRUE(chi.is_zero());
  EXPECT_EQ(chi.eval(0.3, 0.7), 0.0);
}

TEST(Chi, ExponentialClosedForm) {
  const CompOp op = op_of("exp(eta)");
  const ChiKernel chi(op, SmoothFn::zero(op.grid()));
  EXPECT_NEAR(chi.eval(0.5, 0.0), 4.0, 1e-12);
  for (double eta : {-1.0, -0.3, 0.2, 0.9}) {
    const double expect = 2.0 * (std::exp(2.0 * eta) - 1.0) / eta;
    EXPECT_NEAR(chi.eval(0.4, eta), expect, 1e-10);
  }
}

TEST(Chi, PolynomialMatchesFundamentalTheorem) {
  for (const char *text : {"eta + eta^3", "eta + s*eta^3 + eta^5/7",
                           "2*eta + s*eta^3 + eta^5"}) {
    const CompOp op = op_of(text);
    std::mt19937_64 rng(41);
    const SmoothFn x = 0.1 * random_polynomial(op.grid(), rng, 3);
    const ChiKernel chi(op, x);
    for (double s : {0.0, 0.37, 1.0})
      for (double eta : {-1.0, -0.25, 0.0, 0.6}) {
        const double ref = chi_closed_form(op.phi(), s, x(s), eta);
        EXPECT_NEAR(chi.eval(s, eta), ref, 1e-12 * std::max(1.0, std::abs(ref)))
            << text;
      }
  }
}

TEST(Chi, JetMatchesFiniteDifferences) {
  const CompOp op = op_of("eta + s*eta^3");
  const SmoothFn x = 0.2 * SmoothFn::identity(op.grid());
  const ChiKernel chi(op, x);
  const Jet2 j = chi.jet(2, 0.4, 0.3);
  const double h = 1e-5;
  EXPECT_NEAR(j.at(0, 0), chi.eval(0.4, 0.3), 1e-13);
  EXPECT_NEAR(j.at(1, 0), (chi.eval(0.4 + h, 0.3) - chi.eval(0.4 - h, 0.3)) / (2 * h),
              1e-7);
  EXPECT_NEAR(j.at(0, 1), (chi.eval(0.4, 0.3 + h) - chi.eval(0.4, 0.3 - h)) / (2 * h),
              1e-7);
}

TEST(Chi, IdentityResidual) {
  std::mt19937_64 rng(42);
  const CompOp cubic = op_of("eta + eta^3");
  const GridPtr g = cubic.grid();
  const SmoothFn x = SmoothFn::zero(g);
  const ChiKernel chi(cubic, x);
  for (int k = 0; k < 5; ++k) {
    const SmoothFn u = 0.2 * random_polynomial(g, rng);
    const SmoothFn v = 0.2 * random_polynomial(g, rng);
    EXPECT_LE(chi_identity_residual(cubic, chi, u, v), 1e-9);
    EXPECT_EQ(chi_identity_residual(cubic, chi, SmoothFn::zero(g), v), 0.0);
  }
  const CompOp lin = op_of("2*eta + s");
  const ChiKernel zero(lin, x);
  EXPECT_LE(chi_identity_residual(lin, zero, 0.3 * random_polynomial(g, rng),
                                  random_polynomial(g, rng)),
            1e-14);
}

TEST(JetPolynomials, StructureAndCounts) {
  const std::size_t counts[] = {1, 8, 21, 44, 81, 140, 229, 362};
  const auto P = build_P(8);
  ASSERT_EQ(P.size(), 8u);
  for (int i = 1; i <= 8; ++i) {
    const JetPolynomial &p = P[i - 1];
    EXPECT_EQ(p.order, i);
    EXPECT_EQ(p.terms.size(), counts[i - 1]) << "P_" << i;
    for (const JetMonomial &t : p.terms) {
      EXPECT_FALSE(t.xi.empty());
      EXPECT_GE(t.zeta.size(), 1u);
      EXPECT_LE(t.eta, i - 1);
      for (int z : t.zeta)
        EXPECT_LE(z, i - 1);
      for (auto [a, b] : t.xi)
        EXPECT_LE(a + b, i);
      EXPECT_NE(t.coeff, 0);
    }
  }
  const JetMonomial &base = P[0].terms.at(0);
  EXPECT_EQ(base.coeff, 1);
  EXPECT_EQ(base.xi, (std::vector<std::pair<int, int>>{{1, 0}}));
  EXPECT_EQ(base.eta, 0);
  EXPECT_EQ(base.zeta, std::vector<int>{0});
  EXPECT_EQ(&jet_polynomial(3), &jet_polynomial(3));
}

TEST(JetDerivative, Examples) {
  auto g = grid(64, 257, 8);
  const BivarFn s_kernel = BivarFn::parse("s");
  const SmoothFn u = SmoothFn::identity(g);
  const SmoothFn one = SmoothFn::constant(g, 1.0);
  EXPECT_NEAR(jet_derivative(s_kernel, u, one, 1, 0.4), 0.8, 1e-14);
  const BivarFn c = BivarFn::constant(3.0);
  const SmoothFn uc = SmoothFn::constant(g, 0.7);
  const SmoothFn vc = SmoothFn::constant(g, -1.2);
  for (int i = 1; i <= 6; ++i)
    EXPECT_EQ(jet_derivative(c, uc, vc, i, 0.3), 0.0);
  EXPECT_THROW(jet_derivative(c, uc, vc, 0, 0.3), OrderRangeError);
}

TEST(JetDerivative, MatchesSpectralDifferentiation) {
  auto g = grid(64, 257, 8);
  for (const OracleKernel &k : kOracleKernels) {
    const BivarFn chi1 = BivarFn::parse(k.text);
    for (int pair = 0; pair < 4; ++pair) {
      auto rng = sample_engine(5, Stream::Selftest, pair);
      const SmoothFn u = 0.5 * random_polynomial(g, rng, 3);
      const SmoothFn v = random_polynomial(g, rng, 3);
      auto w = [&](long double s) {
        const long double us = testing_support::eval_ld(u, s);
        return k.eval(s, us) * us * testing_support::eval_ld(v, s);
      };
      for (int i = 1; i <= 5; ++i) {
        double scale = 0.0, worst = 0.0;
        for (double s = 0.0; s <= 1.0; s += 0.125) {
          const double ref =
              static_cast<double>(testing_support::spectral_derivative_ld(w, 48, i, s));
          scale = std::max(scale, std::abs(ref));
          worst = std::max(worst, std::abs(jet_derivative(chi1, u, v, i, s) - ref));
        }
        EXPECT_LE(worst, 1e-7 * std::max(scale, 1.0)) << k.text << " order " << i;
      }
    }
  }
}

TEST(Majorants, ZeroKernel) {
  const BivarFn zero = BivarFn::constant(0.0);
  const MajorantTable t = build_rho(zero, 6);
  EXPECT_EQ(t.B0(), 1.0);
  for (int i = 0; i <= 6; ++i)
    for (double s : {0.0, 0.5, 3.0}) {
      EXPECT_EQ(t.R(i, s), 0.0);
      EXPECT_EQ(t.rho(i, s), s);
    }
  EXPECT_NEAR(theta0(t, 0.2, 1.0, 0), 25.0 / 14.0, 1e-15);
  EXPECT_EQ(theta0(t, 0.2, 0.0, 3), 0.0);
  EXPECT_THROW(theta0(t, 0.5, 1.0, 0), DomainError);
  EXPECT_THROW(theta0(t, 0.0, 1.0, 0), DomainError);
}

TEST(Majorants, SingleMonomialBound) {
  const MajorantTable t = build_rho(BivarFn::parse("s"), 3);
  for (double s : {0.0, 0.5, 2.0})
    EXPECT_NEAR(bound_R(jet_polynomial(1), t.xi_sup(), s), s * s, 1e-15);
}

TEST(Majorants, RhoMonotone) {
  const CompOp op = op_of("eta + eta^3 + s*eta^2");
  const ChiKernel chi(op, SmoothFn::zero(op.grid()));
  const MajorantTable t = build_rho(chi, 6);
  EXPECT_GE(t.B0(), 1.0);
  for (int i = 0; i <= 6; ++i) {
    EXPECT_EQ(t.rho(i, 0.0), 0.0);
    double prev = 0.0;
    for (double s = 0.0; s <= 4.0; s += 0.25) {
      const double r = t.rho(i, s);
      EXPECT_GE(r, s);
      EXPECT_GE(r, prev);
      if (i > 0)
        EXPECT_GE(r, t.rho(i - 1, s));
      prev = r;
    }
  }
}

TEST(BuildN, ZeroKernelReplay) {
  const MajorantTable t = build_rho(BivarFn::constant(0.0), 4);
  // With rho(i, s) = s and B0 = 1 the recursion is n_{i+1} = n_i / (1 - n0(2 + n0)).
  for (int l0 : {1, 2, 3}) {
    double n0 = 1.0 / 3.0;
    std::vector<double> ref;
    for (int halvings = 0; halvings < 64; ++halvings, n0 *= 0.5) {
      const double d = 1.0 - n0 * (2.0 + n0);
      if (!(d > 0.0))
        continue;
      ref = {n0};
      for (int i = 0; i < l0; ++i)
        ref.push_back(ref.back() / d);
      if (l0 * ref.back() <= 1.0)
        break;
    }
    EXPECT_EQ(build_n(l0, t), ref) << "l0 = " << l0;
  }
  EXPECT_THROW(build_n(0, t), ConfigError);
}

TEST(BuildN, Constraints) {
  const CompOp op = op_of("eta + eta^3");
  const ChiKernel chi(op, SmoothFn::zero(op.grid()));
  const MajorantTable t = build_rho(chi, 6);
  for (int l0 = 1; l0 <= 4; ++l0) {
    const auto n = build_n(l0, t);
    ASSERT_EQ(static_cast<int>(n.size()), l0 + 1);
    EXPECT_LE(n[0], 1.0 / (3.0 * t.B0()));
    EXPECT_LE(l0 * n[l0], 1.0);
    for (int i = 0; i < l0; ++i) {
      EXPECT_LE(n[i], n[i + 1]);
      EXPECT_LE(theta0(t, n[0], n[i], i), n[i + 1]);
    }
  }
}

TEST(XSequences, Examples) {
  auto g = grid(64, 257, 6);
  const double n0 = 0.25;
  const XSequences z = x_sequences(SmoothFn::zero(g), n0, 2, 6);
  const XSequences two = x_sequences(SmoothFn::constant(g, 2.0), n0, 2, 6);
  const XSequences id = x_sequences(SmoothFn::identity(g), n0, 2, 6);
  for (int i = 0; i <= 6; ++i) {
    EXPECT_EQ(z.x0[i], 1.0);
    EXPECT_EQ(z.x1[i], 1.0 / n0);
    EXPECT_EQ(two.x0[i], 3.0);
    EXPECT_NEAR(two.x1[i], 1.0 / n0, 1e-15);
    EXPECT_NEAR(id.x0[i], 2.0, 1e-14);
    EXPECT_NEAR(id.x1[i], 1.0 / n0, 1e-13);
  }
}

class Generator : public ::testing::Test {
protected:
  Generator()
      : op(BivarFn::parse("eta + eta^3"), GridConfig{64, 257, 6}),
        gen(build_generator(op, SmoothFn::zero(op.grid()), 2, 6)) {}
  CompOp op;
  GeneratorFamily gen;
};

TEST_F(Generator, CanonicalIsMember) {
  const Grading m = gen.canonical();
  std::string why;
  EXPECT_TRUE(gen.is_member(m, &why)) << why;
  for (int i = 0; i <= 2; ++i)
    EXPECT_EQ(m[i], gen.n()[i]);
  for (int i = 2; i < 6; ++i)
    EXPECT_EQ(m[i + 1], gen.theta(gen.n()[0], m[i], i));
  EXPECT_NEAR(gen.B0(), 25.0, 1e-9);
  EXPECT_GT(gen.embedding_scale(), 0.0);
  EXPECT_LE(gauge_norm(gen.chi().base(), m.scaled(gen.embedding_scale())).value(),
            1.0);
}

TEST_F(Generator, MergeAndAbsorb) {
  const Grading m = gen.canonical();
  EXPECT_EQ(gen.merge(m, m), m);
  const auto a = gen.absorb(gen.n());
  EXPECT_EQ(a.epsilon, 1.0);
  EXPECT_EQ(a.m, m);
  const std::vector<double> ten(7, 10.0);
  const auto b = gen.absorb(ten);
  double eps = 1e300;
  for (int i = 0; i <= 2; ++i)
    eps = std::min(eps, gen.n()[i] / 10.0);
  EXPECT_LE(b.epsilon, eps);
  EXPECT_GE(b.epsilon, eps * (1.0 - 1e-15));
  EXPECT_TRUE(gen.is_member(b.m));
  for (int i = 0; i <= 6; ++i)
    EXPECT_LE(b.epsilon * ten[i], b.m[i]);
  const Grading merged = gen.merge(m, b.m);
  EXPECT_TRUE(gen.is_member(merged));
  for (int i = 0; i <= 6; ++i)
    EXPECT_GE(merged[i], std::max(m[i], b.m[i]));
}

TEST_F(Generator, NonMembersRejected) {
  std::vector<double> v = gen.canonical().values();
  v[3] *= 0.5;
  std::string why;
  EXPECT_FALSE(gen.is_member(Grading(v), &why));
  EXPECT_NE(why.find("m_3"), std::string::npos);
  EXPECT_THROW(gen.merge(Grading(v), gen.canonical()), MembershipError);
  EXPECT_THROW(verify_star(gen, Grading(v)), MembershipError);
}

TEST_F(Generator, StarHolds) {
  const StarReport r = verify_star(gen, gen.canonical(), 64);
  EXPECT_TRUE(r.passed);
  EXPECT_TRUE(r.contained);
  EXPECT_TRUE(r.inside_v0);
  EXPECT_LE(r.worst_gauge, 1.0);
}

TEST_F(Generator, DerivativeBoundHolds) {
  const DerivBoundReport r = check_derivative_bound(gen, gen.canonical(), 16);
  EXPECT_TRUE(r.passed) << "order " << r.worst_order << " ratio " << r.worst_ratio;
  EXPECT_GT(r.checks, 0);
}

TEST(GeneratorAffine, Trivial) {
  const CompOp op = op_of("2*eta + s", 6);
  const GeneratorFamily gen =
      build_generator(op, SmoothFn::identity(op.grid()), 2, 6);
  EXPECT_TRUE(gen.chi_zero());
  EXPECT_EQ(gen.B0(), 1.0);
  EXPECT_TRUE(gen.is_member(gen.canonical()));
  EXPECT_TRUE(verify_star(gen, gen.canonical(), 8).passed);
}

TEST(GeneratorConfig, Rejections) {
  const CompOp op = op_of("eta", 4);
  const SmoothFn x = SmoothFn::zero(op.grid());
  EXPECT_THROW(build_generator(op, x, 0, 4), ConfigError);
  EXPECT_THROW(build_generator(op, x, 2, 6), ConfigError);
}
