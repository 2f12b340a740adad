#pragma once

// Perturbation-of-identity bounds and the simplified Newton iteration
// y_{i+1} = y_i + ell(x - f(y_i)) with its certificates.

#include "tamecert/funrep.hpp"
#include "tamecert/grading.hpp"
#include "tamecert/nemytskii.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace tamecert {

inline constexpr double kRatioSlack = 1e-6;
inline constexpr double kLipSlack = 1e-9;
inline constexpr double kDomainSlack = 1e-6;
inline constexpr double kAdmissibleSlack = 1e-9;
inline constexpr double kDefaultTol = 1e-12;
inline constexpr int kDefaultMaxIter = 200;
inline constexpr double kNeumannTermTol = 1e-14;
inline constexpr double kNeumannRelTol = 1e-10;
inline constexpr int kNeumannMaxTerms = 100000;
inline constexpr int kDefaultProbes = 100;

/// A linear map on R^dim with a norm. `probe` draws test vectors; when empty,
/// coordinates are uniform on [-1, 1].
struct LinearModel {
  int dim = 0;
  std::function<std::vector<double>(std::span<const double>)> apply;
  std::function<double(std::span<const double>)> norm;
  std::function<std::vector<double>(std::mt19937_64 &)> probe;
};

/// x + sum_k (id - ell)^k x, truncated once a term's norm drops below
/// kNeumannTermTol * norm(x). `terms` receives the number of terms summed.
std::vector<double> neumann_inverse(const LinearModel &model,
                                    std::span<const double> x,
                                    int *terms = nullptr);

struct NeumannReport {
  bool passed = false;
  double epsilon = 0.0;
  int probes = 0;
  double worst_inverse_ratio = 0.0; ///< max nu(ell^-1 x) / nu(x)
  double worst_defect_ratio = 0.0;  ///< max nu(ell^-1 x - x) / nu(x)
  double worst_forward_ratio = 0.0; ///< max nu(ell x) / nu(x)
  int max_terms = 0;
  std::vector<double> witness; ///< first probe violating a bound
};

/// Checks nu(ell x - x) <= eps nu(x) on seeded probes (PremiseError with the
/// refuting probe otherwise), then both conclusions nu(ell^-1 x) <=
/// (1-eps)^-1 nu(x) and nu(ell^-1 x - x) <= eps (1-eps)^-1 nu(x), each up to
/// kNeumannRelTol nu(x).
NeumannReport neumann_bound(const LinearModel &model, double epsilon,
                            int probes = kDefaultProbes,
                            std::uint64_t seed = 0);

struct InversionResult {
  explicit InversionResult(SmoothFn start) : y(std::move(start)) {}

  SmoothFn y;
  std::vector<SmoothFn> iterates;   ///< y_0, y_1, ...
  std::vector<double> increments;   ///< gauge(y_{i+1} - y_i)
  std::vector<double> ratios;       ///< increments[i] / increments[i-1]
  std::vector<double> residuals;    ///< sup_j |phi(s_j, y_{i+1}(s_j)) - x(s_j)|
  double residual_sup = 0.0;
  double v0_gauge = 0.0;            ///< gauge(ell(x - f(y0)))
  /// min(eps / (1 - eps) * last increment, pending / (1 - eps)), where
  /// pending is the gauge of the correction that was not applied.
  double error_bound = 0.0;
  double epsilon = 0.0;
  double noise_floor = 0.0;         ///< largest per-order rounding floor
  bool converged = false;
  bool cauchy_ok = false;
  bool domain_ok = false;
  bool lipschitz_ok = false;
  std::string failure;              ///< first certificate failure, if any

  bool certified() const noexcept {
    return converged && cauchy_ok && domain_ok && lipschitz_ok;
  }
};

/// Per-order sup|p^(i)| / m_i of the projection p of rounding-sized node
/// noise of amplitude eps_mach * scale, times a safety factor. Corrections
/// below these levels are not resolvable in the gauge of m.
std::vector<double> gauge_rounding_floor(const GridPtr &grid, const Grading &m,
                                         double scale);

/// Iterates until the pending correction is below max(tol, floor_i) in every
/// order i, or maxiter steps were taken.
/// Throws InadmissibleTargetError when gauge(ell(x - f(y0))) > 1 and
/// ConfigError unless 0 < eps <= 1/2. An escape from y0 + 2 B_m or from the
/// operator's eta range ends the iteration with domain_ok = false.
InversionResult newton_invert(const CompOp &op, const SmoothFn &y0,
                              const SmoothFn &x, const Grading &m,
                              double epsilon = 0.5, double tol = kDefaultTol,
                              int maxiter = kDefaultMaxIter);

/// Header `iter,increment,ratio,residual`, one row per step, %.17g numbers.
void write_result_csv(std::ostream &os, const InversionResult &r);

/// f(y0) + f'(y0) w for a seeded w with gauge(w) = radius.
SmoothFn admissible_target(const CompOp &op, const SmoothFn &y0,
                           const Grading &m, double radius,
                           std::mt19937_64 &rng);

struct LipschitzReport {
  bool passed = false;
  int pairs = 0;
  double worst_excess = 0.0; ///< max lhs - (1-eps)^-1 rhs
  double worst_ratio = 0.0;  ///< max lhs / rhs over pairs with rhs > 0
  std::string failure;
};

/// gauge(g x1 - g x2) <= (1-eps)^-1 gauge(ell(x1 - x2)) + kLipSlack on seeded
/// admissible target pairs.
LipschitzReport inverse_lipschitz_check(const CompOp &op, const SmoothFn &y0,
                                        const Grading &m, double epsilon,
                                        int pairs = kDefaultPairs,
                                        std::uint64_t seed = 0);

struct InvertibilityReport {
  bool passed = false;
  bool premise_ok = false;
  NeumannReport neumann;
  double inverse_norm_bound = 0.0; ///< (1 - eps)^-1
  double forward_norm_bound = 0.0; ///< 1 + eps
  std::vector<double> witness;
  std::string failure;
};

/// Perturbation-of-identity check for w -> ell(f'(y1) w) on Chebyshev
/// coefficient vectors normed by the gauge of m.
InvertibilityReport derivative_invertibility(const CompOp &op,
                                             const SmoothFn &y0,
                                             const SmoothFn &y1,
                                             const Grading &m, double epsilon,
                                             int probes = kDefaultDiskSamples,
                                             std::uint64_t seed = 0);

} // namespace tamecert
