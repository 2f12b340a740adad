#include "tamecert/funrep.hpp"

#include "tamecert/errors.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <mutex>
#include <numbers>
#include <ostream>
#include <sstream>
#include <tuple>

namespace tamecert {

void GridConfig::validate() const {
  if (degree < 1)
    throw ConfigError("spectral degree D must be >= 1");
  if (samples < degree + 1)
    throw ConfigError("sample count M must be >= D + 1");
  if (max_order < 1)
    throw ConfigError("max derivative order N must be >= 1");
}

Grid::Grid(const GridConfig &cfg) : cfg_(cfg) {
  cfg_.validate();
  const int m = cfg_.samples;
  const int n = m - 1;
  nodes_.resize(m);
  std::vector<double> theta(m);
  for (int j = 0; j < m; ++j) {
    // theta runs from pi down to 0 so that s increases with j.
    theta[j] = n == 0 ? 0.0 : std::numbers::pi * (n - j) / n;
    nodes_[j] = 0.5 * (1.0 + std::cos(theta[j]));
  }
  nodes_.front() = 0.0;
  nodes_.back() = 1.0;
  const int d = cfg_.degree;
  basis_.resize(static_cast<std::size_t>(d + 1) * m);
  // T_k(x_j) = cos(pi k (n - j) / n); reducing k (n - j) mod 2n first keeps
  // the error at one rounding for every k.
  for (int k = 0; k <= d; ++k)
    for (int j = 0; j < m; ++j) {
      const long r = n == 0 ? 0 : (static_cast<long>(k) * (n - j)) % (2L * n);
      basis_[static_cast<std::size_t>(k) * m + j] =
          n == 0 ? 1.0 : std::cos(std::numbers::pi * static_cast<double>(r) / n);
    }
}

std::shared_ptr<const Grid> Grid::get(const GridConfig &cfg) {
  static std::mutex mutex;
  static std::map<std::tuple<int, int, int>, std::shared_ptr<const Grid>> cache;
  cfg.validate();
  std::lock_guard lock(mutex);
  auto key = std::make_tuple(cfg.degree, cfg.samples, cfg.max_order);
  auto it = cache.find(key);
  if (it != cache.end())
    return it->second;
  auto grid = std::make_shared<const Grid>(cfg);
  cache.emplace(key, grid);
  return grid;
}

SmoothFn::SmoothFn(GridPtr grid, std::vector<double> coeffs, bool aliasing)
    : grid_(std::move(grid)), coeffs_(std::move(coeffs)), aliasing_(aliasing) {
  if (!grid_)
    throw ConfigError("SmoothFn needs a grid");
  if (static_cast<int>(coeffs_.size()) != grid_->degree() + 1)
    throw DataError("expected " + std::to_string(grid_->degree() + 1) +
                    " coefficients, got " + std::to_string(coeffs_.size()));
  for (double c : coeffs_)
    if (!std::isfinite(c))
      throw DataError("non-finite coefficient");
}

SmoothFn SmoothFn::zero(GridPtr grid) {
  const int d = grid->degree();
  return SmoothFn(std::move(grid), std::vector<double>(d + 1, 0.0));
}

SmoothFn SmoothFn::constant(GridPtr grid, double c) {
  std::vector<double> a(grid->degree() + 1, 0.0);
  a[0] = c;
  return SmoothFn(std::move(grid), std::move(a));
}

SmoothFn SmoothFn::identity(GridPtr grid) {
  // s = (1 + x) / 2
  std::vector<double> a(grid->degree() + 1, 0.0);
  a[0] = 0.5;
  a[1] = 0.5;
  return SmoothFn(std::move(grid), std::move(a));
}

SmoothFn SmoothFn::from_monomials(GridPtr grid, std::span<const double> a) {
  const int d = grid->degree();
  if (static_cast<int>(a.size()) > d + 1)
    throw DataError("monomial degree exceeds spectral degree");
  // Horner in Chebyshev arithmetic: p <- p * s + a_k, with s = (T0 + T1)/2.
  std::vector<double> p(d + 1, 0.0);
  for (auto k = static_cast<std::ptrdiff_t>(a.size()) - 1; k >= 0; --k) {
    std::vector<double> q(d + 1, 0.0);
    // x * T_0 = T_1, x * T_n = (T_{n-1} + T_{n+1}) / 2
    for (int n = 0; n <= d; ++n) {
      if (p[n] == 0.0)
        continue;
      if (n == 0) {
        if (d >= 1)
          q[1] += p[0];
      } else {
        q[n - 1] += 0.5 * p[n];
        if (n + 1 <= d)
          q[n + 1] += 0.5 * p[n];
      }
    }
    for (int n = 0; n <= d; ++n)
      p[n] = 0.5 * (p[n] + q[n]);
    p[0] += a[k];
  }
  return SmoothFn(std::move(grid), std::move(p));
}

double SmoothFn::eval(double s) const {
  if (!(s >= 0.0 && s <= 1.0))
    throw DomainError("evaluation point s = " + std::to_string(s) +
                      " outside [0, 1]");
  const double x = 2.0 * s - 1.0;
  double b1 = 0.0, b2 = 0.0;
  for (auto k = static_cast<std::ptrdiff_t>(coeffs_.size()) - 1; k >= 1; --k) {
    const double b0 = coeffs_[k] + 2.0 * x * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return coeffs_[0] + x * b1 - b2;
}

namespace {

std::vector<double> differentiate(std::span<const double> c) {
  const auto n = static_cast<std::ptrdiff_t>(c.size()) - 1;
  std::vector<double> d(c.size(), 0.0);
  if (n < 1)
    return d;
  // d_{k-1} = d_{k+1} + 2 k c_k, then halve d_0; factor 2 from dx/ds.
  d[n - 1] = 2.0 * n * c[n];
  for (auto k = n - 1; k >= 1; --k)
    d[k - 1] = (k + 1 <= n ? d[k + 1] : 0.0) + 2.0 * k * c[k];
  d[0] *= 0.5;
  for (auto &v : d)
    v *= 2.0;
  return d;
}


double clenshaw(std::span<const double> c, double s) {
  const double x = 2.0 * s - 1.0;
  double b1 = 0.0, b2 = 0.0;
  for (auto k = static_cast<std::ptrdiff_t>(c.size()) - 1; k >= 1; --k) {
    const double b0 = c[k] + 2.0 * x * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return c[0] + x * b1 - b2;
}

constexpr double kSupCandidateRel = 1e-3;
constexpr int kGoldenSteps = 40;

/// Node maximum of |p|, refined by golden-section search between the
/// neighbours of every node local maximum within kSupCandidateRel of it.
double refined_sup(const Grid &grid, std::span<const double> c,
                   std::span<const double> vals) {
  const int m = static_cast<int>(vals.size());
  double best = 0.0;
  for (double v : vals)
    best = std::max(best, std::abs(v));
  if (best == 0.0)
    return 0.0;
  const double cut = (1.0 - kSupCandidateRel) * best;
  const auto nodes = grid.nodes();
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double refined = best;
  for (int j = 0; j < m; ++j) {
    const double a = std::abs(vals[j]);
    if (a < cut || (j > 0 && std::abs(vals[j - 1]) > a) ||
        (j + 1 < m && std::abs(vals[j + 1]) > a))
      continue;
    double lo = nodes[std::max(j - 1, 0)];
    double hi = nodes[std::min(j + 1, m - 1)];
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = std::abs(clenshaw(c, x1)), f2 = std::abs(clenshaw(c, x2));
    for (int it = 0; it < kGoldenSteps; ++it) {
      if (f1 > f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - g * (hi - lo);
        f1 = std::abs(clenshaw(c, x1));
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + g * (hi - lo);
        f2 = std::abs(clenshaw(c, x2));
      }
    }
    refined = std::max({refined, f1, f2});
  }
  return refined;
}

} // namespace

SmoothFn SmoothFn::derivative() const {
  return SmoothFn(grid_, differentiate(coeffs_));
}

SmoothFn SmoothFn::derivative(int order) const {
  std::vector<double> c = coeffs_;
  for (int i = 0; i < order; ++i)
    c = differentiate(c);
  return SmoothFn(grid_, std::move(c));
}

std::vector<double> SmoothFn::node_values(int order) const {
  std::vector<double> c = coeffs_;
  for (int i = 0; i < order; ++i)
    c = differentiate(c);
  const int m = grid_->size();
  std::vector<double> out(m, 0.0);
  for (int k = 0; k <= grid_->degree(); ++k) {
    if (c[k] == 0.0)
      continue;
    for (int j = 0; j < m; ++j)
      out[j] += c[k] * grid_->basis(k, j);
  }
  return out;
}

double SmoothFn::sup_abs(int order) const {
  if (order < 0 || order > grid_->max_order())
    throw OrderRangeError("derivative order " + std::to_string(order) +
                          " outside [0, " +
                          std::to_string(grid_->max_order()) + "]");
  std::vector<double> c = coeffs_;
  for (int i = 0; i < order; ++i)
    c = differentiate(c);
  return refined_sup(*grid_, c, node_values(order));
}

std::vector<double> SmoothFn::sup_abs_all() const {
  const int n = grid_->max_order();
  const int m = grid_->size();
  std::vector<double> out(n + 1, 0.0);
  std::vector<double> c = coeffs_;
  std::vector<double> vals(m);
  for (int i = 0; i <= n; ++i) {
    if (i > 0)
      c = differentiate(c);
    for (int j = 0; j < m; ++j) {
      double v = 0.0;
      for (int k = 0; k <= grid_->degree(); ++k)
        v += c[k] * grid_->basis(k, j);
      vals[j] = v;
    }
    out[i] = refined_sup(*grid_, c, vals);
  }
  return out;
}

SmoothFn SmoothFn::scaled(double t) const {
  std::vector<double> c = coeffs_;
  for (auto &v : c)
    v *= t;
  return SmoothFn(grid_, std::move(c));
}

SmoothFn lincomb(double a, const SmoothFn &f, double b, const SmoothFn &g) {
  if (f.config() != g.config())
    throw ConfigError("lincomb of functions on different grids");
  std::vector<double> c(f.coeffs().size());
  for (std::size_t k = 0; k < c.size(); ++k)
    c[k] = a * f.coeffs()[k] + b * g.coeffs()[k];
  return SmoothFn(f.grid(), std::move(c));
}

SmoothFn operator+(const SmoothFn &f, const SmoothFn &g) {
  return lincomb(1.0, f, 1.0, g);
}
SmoothFn operator-(const SmoothFn &f, const SmoothFn &g) {
  return lincomb(1.0, f, -1.0, g);
}
SmoothFn operator*(double t, const SmoothFn &f) { return f.scaled(t); }

SmoothFn project(const GridPtr &grid, std::span<const double> samples,
                 double aliasing_tol) {
  const int m = grid->size();
  const int d = grid->degree();
  if (static_cast<int>(samples.size()) != m)
    throw DataError("project expects " + std::to_string(m) + " samples, got " +
                    std::to_string(samples.size()));
  for (double v : samples)
    if (!std::isfinite(v))
      throw DataError("non-finite sample value");
  const int n = m - 1;
  std::vector<double> c(d + 1, 0.0);
  for (int k = 0; k <= d; ++k) {
    double acc = 0.0;
    for (int j = 0; j < m; ++j) {
      const double w = (j == 0 || j == n) ? 0.5 : 1.0;
      acc += w * samples[j] * grid->basis(k, j);
    }
    const double scale = (k == 0 || k == n) ? 1.0 / n : 2.0 / n;
    c[k] = acc * scale;
  }
  const int tail = std::max(1, static_cast<int>(std::ceil(0.1 * (d + 1))));
  double tail_max = 0.0;
  for (int k = d + 1 - tail; k <= d; ++k)
    tail_max = std::max(tail_max, std::abs(c[k]));
  // Coefficients at the rounding level of the samples carry no information,
  // yet their high derivatives would dominate every gauge with N >= 2.
  double vmax = 0.0;
  for (double v : samples)
    vmax = std::max(vmax, std::abs(v));
  const double chop = kChopRelTol * vmax;
  for (double &ck : c)
    if (std::abs(ck) <= chop)
      ck = 0.0;
  return SmoothFn(grid, std::move(c), tail_max > aliasing_tol);
}

void write_smoothfn(std::ostream &os, const SmoothFn &f) {
  char buf[64];
  os << f.degree() << '\n';
  for (double c : f.coeffs()) {
    std::snprintf(buf, sizeof buf, "%.17g", c);
    os << buf << '\n';
  }
}

SmoothFn read_smoothfn(std::istream &is, const GridPtr &grid) {
  int d = 0;
  if (!(is >> d))
    throw DataError("missing degree line");
  if (d != grid->degree())
    throw ConfigError("stored degree " + std::to_string(d) +
                      " does not match grid degree " +
                      std::to_string(grid->degree()));
  std::vector<double> c(d + 1);
  for (auto &v : c)
    if (!(is >> v))
      throw DataError("truncated coefficient list");
  return SmoothFn(grid, std::move(c));
}

} // namespace tamecert
