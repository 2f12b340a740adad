#pragma once

// The composition operator f(x)(s) = phi(s, x(s)), its derivative, the frozen
// inverse derivative and the sampled inclusion check behind local inversion.

#include "tamecert/bivar.hpp"
#include "tamecert/funrep.hpp"
#include "tamecert/grading.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace tamecert {

inline constexpr double kColoSlack = 1e-7;
inline constexpr int kDefaultDiskSamples = 64;
inline constexpr int kDefaultPairs = 64;

/// Values of x(s) the operator accepts; d2 phi is checked nonvanishing here.
struct EtaRange {
  double lo = -8.0;
  double hi = 8.0;
};

class CompOp {
public:
  /// Throws VanishingDerivativeError when d2 phi has a zero on I x range.
  CompOp(BivarFn phi, const GridConfig &grid, EtaRange range = {},
         int check_samples = kDefaultBoxSamples);

  const BivarFn &phi() const noexcept { return phi_; }
  const BivarFn &d2phi() const noexcept { return d2phi_; }
  const GridPtr &grid() const noexcept { return grid_; }
  EtaRange range() const noexcept { return range_; }

  /// Node values of x, checked against the admissible eta range.
  std::vector<double> checked_values(const SmoothFn &x) const;

  /// phi(s_j, x(s_j)) at every node, before projection.
  std::vector<double> apply_at_nodes(const SmoothFn &x) const;
  /// d2 phi(s_j, y(s_j)) at every node.
  std::vector<double> d2phi_at_nodes(const SmoothFn &y) const;

  SmoothFn apply(const SmoothFn &x) const;
  /// f'(y) v = d2 phi(., y) v.
  SmoothFn deriv_apply(const SmoothFn &y, const SmoothFn &v) const;
  /// (f'(y0))^{-1} w = w / d2 phi(., y0).
  SmoothFn ell_apply(const SmoothFn &y0, const SmoothFn &w) const;
  /// y - ell(f(y)), the map whose contraction drives the iteration.
  SmoothFn f1_apply(const SmoothFn &y0, const SmoothFn &y) const;

  /// ell((f'(y1) - f'(y0)) v), evaluated pointwise then projected.
  SmoothFn derivative_difference(const SmoothFn &y0, const SmoothFn &y1,
                                 const SmoothFn &v) const;

private:
  BivarFn phi_;
  BivarFn d2phi_;
  GridPtr grid_;
  EtaRange range_;
};

/// Largest sampled gauge(f1 y8 - f1 y9) / gauge(y8 - y9) over pairs drawn from
/// y0 + 2 B_m.
double contraction_ratio(const CompOp &op, const SmoothFn &y0,
                         const Grading &m, int pairs = kDefaultPairs,
                         std::uint64_t seed = 0);

struct ColoReport {
  bool passed = false;
  double epsilon = 0.0;
  double worst_ratio = 0.0; ///< max gauge(lhs) / gauge(v)
  int samples = 0;
  std::optional<SmoothFn> witness_u;
  std::optional<SmoothFn> witness_v;
};

/// Sampled check of (f'(y0 + 2u) - f'(y0)) B_m in eps f'(y0) B_m, in the
/// ell-transported form gauge(ell (f'(y1) - f'(y0)) v) <= eps gauge(v).
ColoReport colo_check(const CompOp &op, const SmoothFn &y0, double epsilon,
                      const Grading &m, int samples = kDefaultDiskSamples,
                      std::uint64_t seed = 0);

} // namespace tamecert
