#pragma once

// Truncated Chebyshev model of smooth functions on I = [0, 1].

#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

namespace tamecert {

struct GridConfig {
  int degree = 64;     ///< spectral degree D
  int samples = 257;   ///< number M of sampling nodes (Chebyshev-Lobatto)
  int max_order = 8;   ///< highest derivative order N tracked by norms

  void validate() const;
  bool operator==(const GridConfig &) const = default;
};

inline constexpr double kDefaultAliasingTol = 1e-8;
/// Projected coefficients at most this times the largest sample are zeroed.
inline constexpr double kChopRelTol = 8.0 * 2.220446049250313e-16;

/// Precomputed nodes and basis tables for one GridConfig. Shared, immutable.
class Grid {
public:
  /// Returns the cached grid for `cfg`, building it on first use.
  static std::shared_ptr<const Grid> get(const GridConfig &cfg);

  const GridConfig &config() const noexcept { return cfg_; }
  int degree() const noexcept { return cfg_.degree; }
  int size() const noexcept { return cfg_.samples; }
  int max_order() const noexcept { return cfg_.max_order; }

  /// Sampling nodes in increasing order, s_0 = 0 and s_{M-1} = 1.
  std::span<const double> nodes() const noexcept { return nodes_; }

  /// T_k at node j, row-major (k * M + j).
  double basis(int k, int j) const noexcept {
    return basis_[static_cast<std::size_t>(k) * cfg_.samples + j];
  }

  explicit Grid(const GridConfig &cfg);

private:
  GridConfig cfg_;
  std::vector<double> nodes_;
  std::vector<double> basis_;
};

using GridPtr = std::shared_ptr<const Grid>;

/// A polynomial of degree <= D on [0, 1] stored by its Chebyshev coefficients
/// in the variable x = 2s - 1. Immutable value type.
class SmoothFn {
public:
  SmoothFn(GridPtr grid, std::vector<double> coeffs, bool aliasing = false);

  static SmoothFn zero(GridPtr grid);
  static SmoothFn constant(GridPtr grid, double c);
  /// f(s) = s
  static SmoothFn identity(GridPtr grid);
  /// Coefficients given in the monomial basis sum_k a_k s^k.
  static SmoothFn from_monomials(GridPtr grid, std::span<const double> a);

  const GridPtr &grid() const noexcept { return grid_; }
  const GridConfig &config() const noexcept { return grid_->config(); }
  int degree() const noexcept { return grid_->degree(); }
  std::span<const double> coeffs() const noexcept { return coeffs_; }

  /// True when the projection that produced this value flagged an
  /// under-resolved coefficient tail.
  bool aliasing_warning() const noexcept { return aliasing_; }

  /// Clenshaw evaluation; throws DomainError outside [0, 1].
  double eval(double s) const;
  double operator()(double s) const { return eval(s); }

  SmoothFn derivative() const;
  SmoothFn derivative(int order) const;

  /// Values of the `order`-th derivative at every grid node.
  std::vector<double> node_values(int order = 0) const;

  /// max_j |f^(i)(s_j)|, refined by a local search around the largest node
  /// values. Still a lower estimate of the true sup over I.
  double sup_abs(int order) const;

  /// sup_abs(i) for i = 0..N in one sweep.
  std::vector<double> sup_abs_all() const;

  SmoothFn scaled(double t) const;

private:
  GridPtr grid_;
  std::vector<double> coeffs_;
  bool aliasing_ = false;
};

/// a f + b g; throws ConfigError on mismatched grids.
SmoothFn lincomb(double a, const SmoothFn &f, double b, const SmoothFn &g);

SmoothFn operator+(const SmoothFn &f, const SmoothFn &g);
SmoothFn operator-(const SmoothFn &f, const SmoothFn &g);
SmoothFn operator*(double t, const SmoothFn &f);

/// Discrete Chebyshev projection of node values onto degree <= D, with
/// rounding-level coefficients chopped.
SmoothFn project(const GridPtr &grid, std::span<const double> samples,
                 double aliasing_tol = kDefaultAliasingTol);

/// Text form: first line D, then D+1 coefficients one per line.
void write_smoothfn(std::ostream &os, const SmoothFn &f);
SmoothFn read_smoothfn(std::istream &is, const GridPtr &grid);

} // namespace tamecert
