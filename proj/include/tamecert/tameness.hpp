#pragma once

// Constructive tameness certificate for the composition operator: the kernel
// chi, the jet recursion P, the majorants R, rho, theta, the sequences n, x0,
// x1, the grading family M and the sampled checks of its defining properties.

#include "tamecert/bivar.hpp"
#include "tamecert/funrep.hpp"
#include "tamecert/grading.hpp"
#include "tamecert/nemytskii.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace tamecert {

inline constexpr int kDefaultQuadNodes = 32;
inline constexpr int kDefaultChiBoxSamples = 33;
inline constexpr int kMaxHalvings = 64;
inline constexpr double kChiEtaLo = -1.0;
inline constexpr double kChiEtaHi = 1.0;
inline constexpr double kDerivBoundSlack = 1e-9;

struct QuadratureRule {
  std::vector<double> nodes;   ///< in [0, 1]
  std::vector<double> weights; ///< sum to 1
};

/// n-point Gauss-Legendre rule on [0, 1]; exact for degree < 2n.
QuadratureRule gauss_legendre01(int n);

/// chi(s, eta) = 4 / d2 phi(s, x(s)) * int_0^1 d2^2 phi(s, x(s) + 2 t eta) dt,
/// with every partial obtained by differentiating under the integral.
class ChiKernel final : public Kernel2 {
public:
  ChiKernel(const CompOp &op, SmoothFn x, int quad_nodes = kDefaultQuadNodes);

  double eval(double s, double eta) const override;
  Jet2 jet(int order, double s, double eta) const override;

  /// True when d2^2 phi is symbolically zero, so chi vanishes identically.
  bool is_zero() const noexcept { return zero_; }
  const SmoothFn &base() const noexcept { return x_; }
  int quad_nodes() const noexcept { return static_cast<int>(rule_.nodes.size()); }
  expr::NodeId integrand() const noexcept { return integrand_; }

private:
  std::shared_ptr<const expr::Tape> tape(int order) const;
  std::vector<double> xjet(int order, double s) const;

  expr::NodeId integrand_;
  SmoothFn x_;
  QuadratureRule rule_;
  bool zero_;
  std::vector<SmoothFn> xders_;
  mutable std::mutex mutex_;
  mutable std::map<int, std::shared_ptr<const expr::Tape>> tapes_;
};

/// sup over nodes of |2 ell((f'(x + 2u) - f'(x)) v) - chi(., u) u v|, with the
/// left side taken pointwise before projection.
double chi_identity_residual(const CompOp &op, const ChiKernel &chi,
                             const SmoothFn &u, const SmoothFn &v);

/// One term c * prod xi_(a,b) * eta_k * prod zeta_j.
struct JetMonomial {
  std::int64_t coeff = 0;
  std::vector<std::pair<int, int>> xi; ///< sorted multiset of partial indices
  int eta = 0;
  std::vector<int> zeta; ///< sorted multiset of u-jet indices

  /// Number of eta and zeta factors.
  int degree() const noexcept { return 1 + static_cast<int>(zeta.size()); }
};

struct JetPolynomial {
  int order = 0;
  std::vector<JetMonomial> terms;

  /// xi: jet of chi_1 at (s, u(s)); eta, zeta: jets of v and u at s.
  double eval(const Jet2 &xi, std::span<const double> eta,
              std::span<const double> zeta) const;
};

/// P_i for i >= 1. Built once per process; the reference stays valid.
const JetPolynomial &jet_polynomial(int i);

/// P_1 .. P_{max_order}; element k holds P_{k+1}.
std::vector<JetPolynomial> build_P(int max_order);

/// The three leading terms of the i-th derivative of chi_1(., u) u v.
double leading_terms(int i, const Jet2 &xi, std::span<const double> eta,
                     std::span<const double> zeta);

/// (chi_1(., u) u v)^(i)(s) via the leading terms plus P_i.
double jet_derivative(const Kernel2 &chi1, const SmoothFn &u,
                      const SmoothFn &v, int i, double s);

/// Box sups of every partial of chi up to `order` over I x [lo, hi].
Jet2 jet_box_sup(const Kernel2 &chi, int order, double eta_lo = kChiEtaLo,
                 double eta_hi = kChiEtaHi,
                 int samples = kDefaultChiBoxSamples);

/// sum |c| * prod xi_sup * s^degree over the monomials of p.
double bound_R(const JetPolynomial &p, const Jet2 &xi_sup, double s);

class MajorantTable {
public:
  /// xi_sup must reach order max_order + 1.
  MajorantTable(Jet2 xi_sup, int max_order);

  double B0() const noexcept { return b0_; }
  int max_order() const noexcept { return n_; }
  const Jet2 &xi_sup() const noexcept { return xi_sup_; }

  /// R_i(s), built from P_{i+1}, for 0 <= i <= N.
  double R(int i, double s) const;
  /// rho(0, s) = max(s, R_0 s); rho(i+1, s) = max(rho(i, s), R_{i+1} s).
  double rho(int i, double s) const;

private:
  Jet2 xi_sup_;
  int n_;
  double b0_;
  std::vector<std::vector<double>> r_coeffs_; ///< R_i(s) = sum_d c_d s^d
};

MajorantTable build_rho(const Kernel2 &chi, int max_order,
                        int box_samples = kDefaultChiBoxSamples);

/// rho(i, s) / (1 - B0 r (2 + r)); DomainError when B0 r (2 + r) >= 1.
double theta0(const MajorantTable &table, double r, double s, int i);
/// max(theta0, x1_{i+1}).
double theta(const MajorantTable &table, std::span<const double> x1, double r,
             double s, int i);

/// n_0 .. n_l0 satisfying the theta0 recursion, n_0 <= 1/(3 B0) and
/// l0 n_l0 <= 1.
std::vector<double> build_n(int l0, const MajorantTable &table);

struct XSequences {
  std::vector<double> x0;
  std::vector<double> x1;
};

XSequences x_sequences(const SmoothFn &x, double n0, int l0, int max_order);

class GeneratorFamily {
public:
  GeneratorFamily(int l0, std::vector<double> n, XSequences xs,
                  MajorantTable table, std::shared_ptr<const ChiKernel> chi);

  int l0() const noexcept { return l0_; }
  int max_order() const noexcept { return table_.max_order(); }
  double B0() const noexcept { return table_.B0(); }
  const std::vector<double> &n() const noexcept { return n_; }
  const std::vector<double> &x0() const noexcept { return xs_.x0; }
  const std::vector<double> &x1() const noexcept { return xs_.x1; }
  const MajorantTable &table() const noexcept { return table_; }
  const ChiKernel &chi() const noexcept { return *chi_; }
  bool chi_zero() const noexcept { return chi_->is_zero(); }

  double theta0(double r, double s, int i) const;
  double theta(double r, double s, int i) const;

  /// m_i = n_i for i <= l0, then m_{i+1} = theta(n_0, m_i, i).
  Grading canonical() const;

  /// Prefix equal to n, theta0 steps below l0 and theta steps from l0 on.
  /// On failure `why` names the first violated condition.
  bool is_member(const Grading &m, std::string *why = nullptr) const;
  void require_member(const Grading &m) const;

  /// A member dominating both inputs.
  Grading merge(const Grading &m1, const Grading &m2) const;

  struct Absorbed {
    Grading m;
    double epsilon;
  };
  /// eps b_i <= m_i for every i; entries of b past its length are
  /// unconstrained.
  Absorbed absorb(std::span<const double> b) const;

  /// x0_l0 / n0: the base point lies in t B_m for every member m.
  double embedding_scale() const;

private:
  Grading extend(std::vector<double> prefix,
                 std::span<const double> floor) const;

  int l0_;
  std::vector<double> n_;
  XSequences xs_;
  MajorantTable table_;
  std::shared_ptr<const ChiKernel> chi_;
};

/// Assembles chi, the majorants, n and the x-sequences for phi at x.
GeneratorFamily build_generator(const CompOp &op, const SmoothFn &x, int l0,
                                int max_order,
                                int quad_nodes = kDefaultQuadNodes,
                                int box_samples = kDefaultChiBoxSamples);

struct StarReport {
  bool passed = false;
  bool contained = false;  ///< every sampled w lies in B_m
  bool inside_v0 = false;  ///< l0 m_i <= 1 for i <= l0
  double worst_gauge = 0.0;
  int samples = 0;
  std::optional<SmoothFn> witness_u;
  std::optional<SmoothFn> witness_v;
};

/// Sampled check of chi(., u) u v in B_m for u, v in B_m, and B_m in V0 / 2.
/// Throws MembershipError when m is not a member.
StarReport verify_star(const GeneratorFamily &gen, const Grading &m,
                       int samples = kDefaultDiskSamples,
                       std::uint64_t seed = 0);

struct DerivBoundReport {
  bool passed = false;
  double worst_ratio = 0.0; ///< max |lhs| / bound
  int worst_order = 0;
  double worst_s = 0.0;
  int checks = 0;
};

/// Sampled check of |(chi(., u) u v)^(i+1)| <= B0 (m0 + 2) m0 m_{i+1} +
/// rho(i, m_i) for u, v in B_m and i + 1 <= N, at every `stride`-th node.
DerivBoundReport check_derivative_bound(const GeneratorFamily &gen,
                                        const Grading &m,
                                        int samples = kDefaultDiskSamples,
                                        std::uint64_t seed = 0,
                                        int stride = 16);

} // namespace tamecert
