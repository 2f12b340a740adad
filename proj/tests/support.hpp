#pragma once

#include "tamecert/funrep.hpp"
#include "tamecert/grading.hpp"
#include "tamecert/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <limits>
#include <random>
#include <vector>

namespace testing_support {

inline tamecert::GridPtr grid(int degree = 64, int samples = 257,
                              int max_order = 8) {
  return tamecert::Grid::get(tamecert::GridConfig{degree, samples, max_order});
}

inline double sup_diff(const tamecert::SmoothFn &a, const tamecert::SmoothFn &b) {
  return (a - b).sup_abs(0);
}

/// Root of eta + eta^3 = c by bisection then a few Newton polishes.
inline double cubic_root(double c) {
  double lo = -2.0 - std::abs(c), hi = 2.0 + std::abs(c);
  for (int k = 0; k < 200 && hi - lo > 1e-15; ++k) {
    const double mid = 0.5 * (lo + hi);
    (mid + mid * mid * mid < c ? lo : hi) = mid;
  }
  double r = 0.5 * (lo + hi);
  for (int k = 0; k < 3; ++k)
    r -= (r + r * r * r - c) / (1.0 + 3.0 * r * r);
  return r;
}

/// Monomial coefficients a_0..a_d drawn uniformly from [-1, 1].
inline std::vector<double> random_monomials(std::mt19937_64 &rng, int d) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::vector<double> a(d + 1);
  for (double &x : a)
    x = U(rng);
  return a;
}

inline double horner(const std::vector<double> &a, double s) {
  double r = 0.0;
  for (auto it = a.rbegin(); it != a.rend(); ++it)
    r = r * s + *it;
  return r;
}


/// Clenshaw evaluation of a SmoothFn in extended precision.
inline long double eval_ld(const tamecert::SmoothFn &f, long double s) {
  const auto c = f.coeffs();
  const long double x = 2.0L * s - 1.0L;
  long double b1 = 0.0L, b2 = 0.0L;
  for (auto k = static_cast<std::ptrdiff_t>(c.size()) - 1; k >= 1; --k) {
    const long double b0 = c[k] + 2.0L * x * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return c[0] + x * b1 - b2;
}

/// Spectral differentiation in extended precision: Chebyshev interpolation
/// of g at n + 1 Lobatto points of [0, 1], coefficient recurrence for the
/// derivative, evaluation at s.
inline long double spectral_derivative_ld(
    const std::function<long double(long double)> &g, int n, int order,
    long double s) {
  const long double pi = std::numbers::pi_v<long double>;
  std::vector<long double> vals(n + 1), c(n + 1, 0.0L);
  for (int j = 0; j <= n; ++j)
    vals[j] = g(0.5L * (1.0L - std::cos(pi * j / n)));
  for (int k = 0; k <= n; ++k) {
    long double acc = 0.0L;
    for (int j = 0; j <= n; ++j) {
      const long double w = (j == 0 || j == n) ? 0.5L : 1.0L;
      acc += w * vals[j] * std::cos(pi * k * j / n);
    }
    // Lobatto nodes run from x = 1 down to x = -1, so T_k picks up (-1)^k.
    c[k] = acc * ((k == 0 || k == n) ? 1.0L : 2.0L) / n * ((k % 2) ? -1.0L : 1.0L);
  }
  // Rounding noise in the tail is amplified like k^(2 order); drop it.
  long double cmax = 0.0L;
  for (long double v : c)
    cmax = std::max(cmax, std::abs(v));
  for (long double &v : c)
    if (std::abs(v) <= 64.0L * std::numeric_limits<long double>::epsilon() * cmax)
      v = 0.0L;
  for (int r = 0; r < order; ++r) {
    std::vector<long double> d(n + 1, 0.0L);
    for (int k = n - 1; k >= 0; --k)
      d[k] = (k + 2 <= n ? d[k + 2] : 0.0L) + 2.0L * (k + 1) * c[k + 1];
    d[0] *= 0.5L;
    for (auto &v : d)
      v *= 2.0L; // chain rule for x = 2s - 1
    c = std::move(d);
  }
  const long double x = 2.0L * s - 1.0L;
  long double b1 = 0.0L, b2 = 0.0L;
  for (int k = n; k >= 1; --k) {
    const long double b0 = c[k] + 2.0L * x * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return c[0] + x * b1 - b2;
}

} // namespace testing_support
