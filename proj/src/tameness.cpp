#include "tamecert/tameness.hpp"

#include "tamecert/errors.hpp"
#include "tamecert/sampling.hpp"

#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>

namespace tamecert {

namespace {

constexpr int kChiMaxJetOrder = 16;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

} // namespace

QuadratureRule gauss_legendre01(int n) {
  if (n < 2)
    throw ConfigError("quadrature needs at least 2 nodes");
  gsl_integration_glfixed_table *t =
      gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(n));
  if (t == nullptr)
    throw ConfigError("cannot build a " + std::to_string(n) +
                      "-point Gauss-Legendre rule");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i)
    gsl_integration_glfixed_point(0.0, 1.0, static_cast<std::size_t>(i),
                                  &rule.nodes[i], &rule.weights[i], t);
  gsl_integration_glfixed_table_free(t);
  return rule;
}

// ---------------------------------------------------------------- chi kernel

ChiKernel::ChiKernel(const CompOp &op, SmoothFn x, int quad_nodes)
    : x_(std::move(x)), rule_(gauss_legendre01(quad_nodes)) {
  using namespace expr;
  const NodeId X = xder(0);
  const NodeId d2 = op.phi().partial(0, 1).root();
  const NodeId d22 = op.phi().partial(0, 2).root();
  double c = 0.0;
  zero_ = is_constant(d22, &c) && c == 0.0;
  const NodeId shifted = add(X, mul(mul(constant(2.0), var_t()), var_eta()));
  integrand_ = div(mul(constant(4.0), substitute_eta(d22, shifted)),
                   substitute_eta(d2, X));
  xders_.reserve(kChiMaxJetOrder + 1);
  xders_.push_back(x_);
  for (int k = 1; k <= kChiMaxJetOrder; ++k)
    xders_.push_back(xders_.back().derivative());
  op.checked_values(x_);
}

std::shared_ptr<const expr::Tape> ChiKernel::tape(int order) const {
  std::lock_guard lock(mutex_);
  if (auto it = tapes_.find(order); it != tapes_.end())
    return it->second;
  std::vector<expr::NodeId> roots(Jet2::size_for(order));
  for (int t = 0; t <= order; ++t)
    for (int i1 = 0; i1 <= t; ++i1) {
      expr::NodeId r = integrand_;
      for (int k = 0; k < i1; ++k)
        r = expr::diff(r, expr::Var::S);
      for (int k = 0; k < t - i1; ++k)
        r = expr::diff(r, expr::Var::Eta);
      roots[Jet2::index(i1, t - i1)] = r;
    }
  auto tp = std::make_shared<const expr::Tape>(roots);
  return tapes_.emplace(order, tp).first->second;
}

std::vector<double> ChiKernel::xjet(int order, double s) const {
  std::vector<double> j(order + 1);
  for (int k = 0; k <= order; ++k)
    j[k] = xders_[k].eval(s);
  return j;
}

double ChiKernel::eval(double s, double eta) const {
  return jet(0, s, eta).at(0, 0);
}

Jet2 ChiKernel::jet(int order, double s, double eta) const {
  if (order < 0 || order > kChiMaxJetOrder)
    throw OrderRangeError("chi jet order " + std::to_string(order) +
                          " outside [0, " + std::to_string(kChiMaxJetOrder) +
                          "]");
  if (!(s >= 0.0 && s <= 1.0))
    throw DomainError("s = " + std::to_string(s) + " outside [0, 1]");
  Jet2 out(order);
  if (zero_)
    return out;
  auto tp = tape(order);
  const std::vector<double> xj = xjet(order, s);
  std::vector<double> vals(Jet2::size_for(order));
  std::vector<double> acc(vals.size(), 0.0);
  std::vector<double> scratch;
  for (std::size_t q = 0; q < rule_.nodes.size(); ++q) {
    tp->eval({s, eta, rule_.nodes[q], xj}, vals, scratch);
    for (std::size_t k = 0; k < vals.size(); ++k)
      acc[k] += rule_.weights[q] * vals[k];
  }
  for (int t = 0; t <= order; ++t)
    for (int i1 = 0; i1 <= t; ++i1)
      out.at(i1, t - i1) = acc[Jet2::index(i1, t - i1)];
  return out;
}

double chi_identity_residual(const CompOp &op, const ChiKernel &chi,
                             const SmoothFn &u, const SmoothFn &v) {
  const SmoothFn &x = chi.base();
  const std::vector<double> d0 = op.d2phi_at_nodes(x);
  const std::vector<double> d1 = op.d2phi_at_nodes(lincomb(1.0, x, 2.0, u));
  const std::vector<double> uu = u.node_values();
  const std::vector<double> vv = v.node_values();
  const auto nodes = op.grid()->nodes();
  double worst = 0.0;
  for (std::size_t j = 0; j < d0.size(); ++j) {
    if (std::abs(d0[j]) <= kVanishTol)
      throw SingularDerivativeError("d2 phi(s, x(s)) vanishes at s = " +
                                    std::to_string(nodes[j]));
    const double lhs = 2.0 * (d1[j] - d0[j]) / d0[j] * vv[j];
    const double rhs = chi.eval(nodes[j], uu[j]) * uu[j] * vv[j];
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

// ------------------------------------------------------------ jet recursion

namespace {

struct MonoKey {
  std::vector<std::pair<int, int>> xi;
  int eta;
  std::vector<int> zeta;
  auto operator<=>(const MonoKey &) const = default;
};

using Poly = std::map<MonoKey, std::int64_t>;

void add_term(Poly &p, MonoKey key, std::int64_t c) {
  std::sort(key.xi.begin(), key.xi.end());
  std::sort(key.zeta.begin(), key.zeta.end());
  auto [it, inserted] = p.emplace(std::move(key), c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0)
      p.erase(it);
  }
}

// Total s-derivative along (s, u(s)) with eta_k = v^(k), zeta_k = u^(k).
Poly total_derivative(const Poly &p) {
  Poly out;
  for (const auto &[key, c] : p) {
    for (std::size_t f = 0; f < key.xi.size(); ++f) {
      MonoKey a = key;
      a.xi[f].first += 1;
      add_term(out, std::move(a), c);
      MonoKey b = key;
      b.xi[f].second += 1;
      b.zeta.push_back(1);
      add_term(out, std::move(b), c);
    }
    {
      MonoKey e = key;
      e.eta += 1;
      add_term(out, std::move(e), c);
    }
    for (std::size_t f = 0; f < key.zeta.size(); ++f) {
      MonoKey z = key;
      z.zeta[f] += 1;
      add_term(out, std::move(z), c);
    }
  }
  return out;
}

Poly leading_poly(int i) {
  Poly p;
  add_term(p, {{{0, 1}}, 0, {i, 0}}, 1);
  add_term(p, {{{0, 0}}, 0, {i}}, 1);
  add_term(p, {{{0, 0}}, i, {0}}, 1);
  return p;
}

JetPolynomial to_jet_polynomial(int order, const Poly &p) {
  JetPolynomial out;
  out.order = order;
  out.terms.reserve(p.size());
  for (const auto &[key, c] : p)
    out.terms.push_back({c, key.xi, key.eta, key.zeta});
  return out;
}

} // namespace

double JetPolynomial::eval(const Jet2 &xi, std::span<const double> eta,
                           std::span<const double> zeta) const {
  double sum = 0.0;
  for (const JetMonomial &t : terms) {
    double v = static_cast<double>(t.coeff) * eta[t.eta];
    for (const auto &[a, b] : t.xi)
      v *= xi.at(a, b);
    for (int k : t.zeta)
      v *= zeta[k];
    sum += v;
  }
  return sum;
}

const JetPolynomial &jet_polynomial(int i) {
  if (i < 1)
    throw OrderRangeError("jet polynomials start at order 1");
  static std::mutex mutex;
  static std::deque<JetPolynomial> cache;
  static Poly last;
  std::lock_guard lock(mutex);
  if (cache.empty()) {
    add_term(last, {{{1, 0}}, 0, {0}}, 1);
    cache.push_back(to_jet_polynomial(1, last));
  }
  while (static_cast<int>(cache.size()) < i) {
    const int k = static_cast<int>(cache.size());
    // P_{k+1} = D(L_k) - L_{k+1} + D(P_k)
    Poly next = total_derivative(leading_poly(k));
    for (const auto &[key, c] : leading_poly(k + 1))
      add_term(next, key, -c);
    for (const auto &[key, c] : total_derivative(last))
      add_term(next, key, c);
    last = std::move(next);
    cache.push_back(to_jet_polynomial(k + 1, last));
  }
  return cache[i - 1];
}

std::vector<JetPolynomial> build_P(int max_order) {
  if (max_order < 1)
    throw OrderRangeError("build_P needs max_order >= 1");
  std::vector<JetPolynomial> out;
  out.reserve(max_order);
  for (int i = 1; i <= max_order; ++i)
    out.push_back(jet_polynomial(i));
  return out;
}

double leading_terms(int i, const Jet2 &xi, std::span<const double> eta,
                     std::span<const double> zeta) {
  return xi.at(0, 1) * zeta[i] * zeta[0] * eta[0] +
         xi.at(0, 0) * zeta[i] * eta[0] + xi.at(0, 0) * zeta[0] * eta[i];
}

double jet_derivative(const Kernel2 &chi1, const SmoothFn &u,
                      const SmoothFn &v, int i, double s) {
  if (i < 1)
    throw OrderRangeError("jet_derivative needs order >= 1");
  std::vector<double> uj(i + 1), vj(i + 1);
  SmoothFn du = u, dv = v;
  for (int k = 0; k <= i; ++k) {
    uj[k] = du.eval(s);
    vj[k] = dv.eval(s);
    if (k < i) {
      du = du.derivative();
      dv = dv.derivative();
    }
  }
  const Jet2 xi = chi1.jet(i, s, uj[0]);
  return leading_terms(i, xi, vj, uj) + jet_polynomial(i).eval(xi, vj, uj);
}

// ------------------------------------------------------------------ majorants

Jet2 jet_box_sup(const Kernel2 &chi, int order, double eta_lo, double eta_hi,
                 int samples) {
  if (!(eta_lo <= eta_hi))
    throw ConfigError("jet_box_sup needs eta_lo <= eta_hi");
  if (samples < 2)
    throw ConfigError("jet_box_sup needs at least 2 samples per axis");
  Jet2 sup(order);
  for (int a = 0; a < samples; ++a) {
    const double s = static_cast<double>(a) / (samples - 1);
    for (int b = 0; b < samples; ++b) {
      const double eta =
          eta_lo + (eta_hi - eta_lo) * static_cast<double>(b) / (samples - 1);
      const Jet2 j = chi.jet(order, s, eta);
      for (int t = 0; t <= order; ++t)
        for (int i1 = 0; i1 <= t; ++i1)
          sup.at(i1, t - i1) =
              std::max(sup.at(i1, t - i1), std::abs(j.at(i1, t - i1)));
    }
  }
  return sup;
}

double bound_R(const JetPolynomial &p, const Jet2 &xi_sup, double s) {
  if (!(s >= 0.0))
    throw DomainError("bound_R needs s >= 0");
  double sum = 0.0;
  for (const JetMonomial &t : p.terms) {
    double v = std::abs(static_cast<double>(t.coeff));
    for (const auto &[a, b] : t.xi)
      v *= xi_sup.at(a, b);
    if (v != 0.0)
      sum += v * std::pow(s, t.degree());
  }
  return sum;
}

MajorantTable::MajorantTable(Jet2 xi_sup, int max_order)
    : xi_sup_(std::move(xi_sup)), n_(max_order) {
  if (max_order < 0)
    throw OrderRangeError("negative majorant order");
  if (xi_sup_.order() < max_order + 1)
    throw OrderRangeError("chi sup table must reach order " +
                          std::to_string(max_order + 1));
  b0_ = 1.0 + std::max(xi_sup_.at(0, 0), xi_sup_.at(0, 1));
  r_coeffs_.resize(max_order + 1);
  for (int i = 0; i <= max_order; ++i) {
    auto &c = r_coeffs_[i];
    for (const JetMonomial &t : jet_polynomial(i + 1).terms) {
      double v = std::abs(static_cast<double>(t.coeff));
      for (const auto &[a, b] : t.xi)
        v *= xi_sup_.at(a, b);
      if (static_cast<int>(c.size()) <= t.degree())
        c.resize(t.degree() + 1, 0.0);
      c[t.degree()] += v;
    }
  }
}

double MajorantTable::R(int i, double s) const {
  if (i < 0 || i > n_)
    throw OrderRangeError("R index " + std::to_string(i) + " outside [0, " +
                          std::to_string(n_) + "]");
  if (!(s >= 0.0))
    throw DomainError("R needs s >= 0");
  const auto &c = r_coeffs_[i];
  double sum = 0.0;
  for (std::size_t d = c.size(); d-- > 0;)
    sum = sum * s + c[d];
  return sum;
}

double MajorantTable::rho(int i, double s) const {
  if (i < 0 || i > n_)
    throw OrderRangeError("rho index " + std::to_string(i) + " outside [0, " +
                          std::to_string(n_) + "]");
  double r = std::max(s, R(0, s));
  for (int k = 1; k <= i; ++k)
    r = std::max(r, R(k, s));
  return r;
}

MajorantTable build_rho(const Kernel2 &chi, int max_order, int box_samples) {
  return MajorantTable(
      jet_box_sup(chi, max_order + 1, kChiEtaLo, kChiEtaHi, box_samples),
      max_order);
}

double theta0(const MajorantTable &table, double r, double s, int i) {
  const double d = table.B0() * r * (2.0 + r);
  if (!(r > 0.0) || !(d < 1.0))
    throw DomainError("theta0 undefined: B0 r (2 + r) = " + fmt(d) +
                      " for r = " + fmt(r));
  return table.rho(i, s) / (1.0 - d);
}

double theta(const MajorantTable &table, std::span<const double> x1, double r,
             double s, int i) {
  if (i + 1 >= static_cast<int>(x1.size()))
    throw OrderRangeError("x1 sequence too short for theta at order " +
                          std::to_string(i));
  return std::max(theta0(table, r, s, i), x1[i + 1]);
}

std::vector<double> build_n(int l0, const MajorantTable &table) {
  if (l0 < 1)
    throw ConfigError("l0 must be at least 1");
  if (l0 > table.max_order())
    throw ConfigError("l0 = " + std::to_string(l0) +
                      " exceeds the maximal order " +
                      std::to_string(table.max_order()));
  double n0 = 1.0 / (3.0 * table.B0());
  for (int h = 0; h <= kMaxHalvings; ++h, n0 *= 0.5) {
    std::vector<double> n(l0 + 1);
    n[0] = n0;
    for (int i = 0; i < l0; ++i)
      n[i + 1] = theta0(table, n0, n[i], i);
    if (l0 * n[l0] <= 1.0)
      return n;
  }
  throw ConstructionError("no admissible n after " +
                          std::to_string(kMaxHalvings) + " halvings");
}

XSequences x_sequences(const SmoothFn &x, double n0, int l0, int max_order) {
  if (!(n0 > 0.0))
    throw ConfigError("x_sequences needs n0 > 0");
  if (l0 < 0 || l0 > max_order)
    throw ConfigError("x_sequences needs 0 <= l0 <= max_order");
  XSequences xs;
  xs.x0.resize(max_order + 1);
  double run = 0.0;
  for (int i = 0; i <= max_order; ++i) {
    run = std::max(run, 1.0 + x.sup_abs(i));
    xs.x0[i] = run;
  }
  xs.x1.resize(max_order + 1);
  for (int i = 0; i <= max_order; ++i)
    xs.x1[i] = xs.x0[i] / (n0 * xs.x0[l0]);
  return xs;
}

// ------------------------------------------------------------ the family M

GeneratorFamily::GeneratorFamily(int l0, std::vector<double> n, XSequences xs,
                                 MajorantTable table,
                                 std::shared_ptr<const ChiKernel> chi)
    : l0_(l0), n_(std::move(n)), xs_(std::move(xs)), table_(std::move(table)),
      chi_(std::move(chi)) {
  if (static_cast<int>(n_.size()) != l0_ + 1)
    throw ConfigError("n must have l0 + 1 entries");
  if (static_cast<int>(xs_.x1.size()) != table_.max_order() + 1)
    throw ConfigError("x-sequences must have N + 1 entries");
}

double GeneratorFamily::theta0(double r, double s, int i) const {
  return tamecert::theta0(table_, r, s, i);
}

double GeneratorFamily::theta(double r, double s, int i) const {
  return tamecert::theta(table_, xs_.x1, r, s, i);
}

Grading GeneratorFamily::extend(std::vector<double> prefix,
                                std::span<const double> floor) const {
  const int N = max_order();
  std::vector<double> m = std::move(prefix);
  m.resize(N + 1);
  for (int i = l0_; i < N; ++i) {
    double next = theta(n_[0], m[i], i);
    if (i + 1 < static_cast<int>(floor.size()))
      next = std::max(next, floor[i + 1]);
    if (!std::isfinite(next))
      throw ConstructionError("grading entry m_" + std::to_string(i + 1) +
                              " overflows double precision; lower N");
    m[i + 1] = next;
  }
  return Grading(std::move(m));
}

Grading GeneratorFamily::canonical() const { return extend(n_, {}); }

bool GeneratorFamily::is_member(const Grading &m, std::string *why) const {
  auto fail = [&](std::string msg) {
    if (why)
      *why = std::move(msg);
    return false;
  };
  const int N = max_order();
  if (m.max_order() != N)
    return fail("grading has " + std::to_string(m.size()) +
                " entries, expected " + std::to_string(N + 1));
  for (int i = 0; i <= l0_; ++i)
    if (m[i] != n_[i])
      return fail("m_" + std::to_string(i) + " = " + fmt(m[i]) +
                  " differs from n_" + std::to_string(i) + " = " + fmt(n_[i]));
  for (int i = 0; i < N; ++i) {
    double t;
    try {
      t = i < l0_ ? theta0(m[0], m[i], i) : theta(m[0], m[i], i);
    } catch (const DomainError &e) {
      return fail(e.what());
    }
    if (!(t <= m[i + 1]))
      return fail("theta(m_0, m_" + std::to_string(i) + ", " +
                  std::to_string(i) + ") = " + fmt(t) + " exceeds m_" +
                  std::to_string(i + 1) + " = " + fmt(m[i + 1]));
  }
  return true;
}

void GeneratorFamily::require_member(const Grading &m) const {
  std::string why;
  if (!is_member(m, &why))
    throw MembershipError("grading is not in M: " + why);
}

Grading GeneratorFamily::merge(const Grading &m1, const Grading &m2) const {
  require_member(m1);
  require_member(m2);
  std::vector<double> floor(m1.size());
  for (std::size_t i = 0; i < floor.size(); ++i)
    floor[i] = std::max(m1[i], m2[i]);
  return extend(n_, floor);
}

GeneratorFamily::Absorbed
GeneratorFamily::absorb(std::span<const double> b) const {
  if (static_cast<int>(b.size()) < l0_ + 1 ||
      static_cast<int>(b.size()) > max_order() + 1)
    throw ConfigError("absorb needs between l0 + 1 and N + 1 entries");
  for (double v : b)
    if (!(v > 0.0) || !std::isfinite(v))
      throw ConfigError("absorb needs positive finite entries");
  double eps = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= l0_; ++i)
    eps = std::min(eps, n_[i] / b[i]);
  for (int i = 0; i <= l0_; ++i)
    while (eps * b[i] > n_[i])
      eps = std::nextafter(eps, 0.0);
  std::vector<double> floor(b.size());
  for (std::size_t i = 0; i < b.size(); ++i)
    floor[i] = eps * b[i];
  return {extend(n_, floor), eps};
}

double GeneratorFamily::embedding_scale() const {
  return xs_.x0[l0_] / n_[0];
}

GeneratorFamily build_generator(const CompOp &op, const SmoothFn &x, int l0,
                                int max_order, int quad_nodes,
                                int box_samples) {
  if (l0 < 1)
    throw ConfigError("l0 must be at least 1");
  if (max_order < l0)
    throw ConfigError("maximal order must be at least l0");
  if (max_order > x.grid()->max_order())
    throw ConfigError("maximal order exceeds the grid's tracked order");
  auto chi = std::make_shared<const ChiKernel>(op, x, quad_nodes);
  MajorantTable table = build_rho(*chi, max_order, box_samples);
  std::vector<double> n = build_n(l0, table);
  XSequences xs = x_sequences(x, n[0], l0, max_order);
  return GeneratorFamily(l0, std::move(n), std::move(xs), std::move(table),
                         std::move(chi));
}

// ------------------------------------------------------------- verification

StarReport verify_star(const GeneratorFamily &gen, const Grading &m,
                       int samples, std::uint64_t seed) {
  gen.require_member(m);
  if (samples < 1)
    throw ConfigError("verify_star needs at least one sample");
  StarReport rep;
  rep.samples = samples;
  rep.inside_v0 = true;
  for (int i = 0; i <= gen.l0(); ++i)
    if (!(gen.l0() * m[i] <= 1.0))
      rep.inside_v0 = false;
  rep.contained = true;
  const GridPtr &grid = gen.chi().base().grid();
  const auto nodes = grid->nodes();
  std::vector<double> w(nodes.size());
  for (int k = 0; k < samples; ++k) {
    auto rng = sample_engine(seed, Stream::Star, static_cast<std::uint64_t>(k));
    const SmoothFn u = random_disk_element(grid, m, 1.0, rng);
    const SmoothFn v = random_disk_element(grid, m, 1.0, rng);
    const std::vector<double> uu = u.node_values();
    const std::vector<double> vv = v.node_values();
    for (std::size_t j = 0; j < nodes.size(); ++j)
      w[j] = gen.chi().eval(nodes[j], uu[j]) * uu[j] * vv[j];
    const double g = gauge_norm(project(grid, w), m);
    if (!rep.witness_u || g > rep.worst_gauge) {
      rep.worst_gauge = g;
      rep.witness_u = u;
      rep.witness_v = v;
    }
    if (!(g <= 1.0 + kContainmentSlack))
      rep.contained = false;
  }
  rep.passed = rep.contained && rep.inside_v0;
  return rep;
}

DerivBoundReport check_derivative_bound(const GeneratorFamily &gen,
                                        const Grading &m, int samples,
                                        std::uint64_t seed, int stride) {
  gen.require_member(m);
  if (samples < 1 || stride < 1)
    throw ConfigError("check_derivative_bound needs samples, stride >= 1");
  const int N = gen.max_order();
  const GridPtr &grid = gen.chi().base().grid();
  const auto nodes = grid->nodes();
  const double m0 = m[0];
  const double lead = gen.B0() * (m0 + 2.0) * m0;
  DerivBoundReport rep;
  rep.passed = true;
  std::vector<double> uj(N + 1), vj(N + 1);
  for (int k = 0; k < samples; ++k) {
    auto rng =
        sample_engine(seed, Stream::DerivBound, static_cast<std::uint64_t>(k));
    const SmoothFn u = random_disk_element(grid, m, 1.0, rng);
    const SmoothFn v = random_disk_element(grid, m, 1.0, rng);
    std::vector<SmoothFn> du{u}, dv{v};
    for (int i = 1; i <= N; ++i) {
      du.push_back(du.back().derivative());
      dv.push_back(dv.back().derivative());
    }
    for (std::size_t j = 0; j < nodes.size(); j += stride) {
      const double s = nodes[j];
      for (int i = 0; i <= N; ++i) {
        uj[i] = du[i].eval(s);
        vj[i] = dv[i].eval(s);
      }
      const Jet2 xi = gen.chi().jet(N, s, uj[0]);
      for (int i = 0; i + 1 <= N; ++i) {
        const double lhs = std::abs(leading_terms(i + 1, xi, vj, uj) +
                                    jet_polynomial(i + 1).eval(xi, vj, uj));
        const double bound =
            lead * m[i + 1] + gen.table().rho(i, m[i]);
        const double ratio = bound > 0.0 ? lhs / bound : (lhs > 0.0 ? 1e300 : 0.0);
        ++rep.checks;
        if (ratio > rep.worst_ratio) {
          rep.worst_ratio = ratio;
          rep.worst_order = i + 1;
          rep.worst_s = s;
        }
        if (!(lhs <= bound * (1.0 + kDerivBoundSlack)))
          rep.passed = false;
      }
    }
  }
  return rep;
}

} // namespace tamecert
