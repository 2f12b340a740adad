#pragma once

// Smooth bivariate functions phi(s, eta) on I x R as expression trees.

#include "tamecert/expr.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tamecert {

inline constexpr double kVanishTol = 1e-9;
inline constexpr int kDefaultBoxSamples = 200;

/// All partials d1^i1 d2^i2 of some function at one point, for i1 + i2 <= order.
class Jet2 {
public:
  Jet2() = default;
  explicit Jet2(int order)
      : order_(order), values_(static_cast<std::size_t>(size_for(order)), 0.0) {}

  static constexpr int size_for(int order) {
    return (order + 1) * (order + 2) / 2;
  }
  static constexpr int index(int i1, int i2) {
    const int t = i1 + i2;
    return t * (t + 1) / 2 + i1;
  }

  int order() const noexcept { return order_; }
  double at(int i1, int i2) const { return values_.at(index(i1, i2)); }
  double &at(int i1, int i2) { return values_.at(index(i1, i2)); }
  const std::vector<double> &values() const noexcept { return values_; }

private:
  int order_ = 0;
  std::vector<double> values_;
};

/// Anything that can produce values and jets of a function on I x R.
class Kernel2 {
public:
  virtual ~Kernel2() = default;
  virtual double eval(double s, double eta) const = 0;
  virtual Jet2 jet(int order, double s, double eta) const = 0;
};

class BivarFn final : public Kernel2 {
public:
  /// Wraps an existing node; it must only reference s and eta.
  explicit BivarFn(expr::NodeId root);

  static BivarFn parse(std::string_view text);
  static BivarFn constant(double c);

  expr::NodeId root() const noexcept { return root_; }
  std::string to_string() const { return expr::print(root_); }

  /// d1^i1 d2^i2 phi, symbolically.
  BivarFn partial(int i1, int i2) const;

  bool is_constant(double *value = nullptr) const {
    return expr::is_constant(root_, value);
  }
  bool depends_on_eta() const { return expr::depends_on(root_, expr::Op::Eta); }

  double eval(double s, double eta) const override;
  /// out[j] = phi(s[j], eta[j]).
  void eval_many(std::span<const double> s, std::span<const double> eta,
                 std::span<double> out) const;
  Jet2 jet(int order, double s, double eta) const override;

  friend bool operator==(const BivarFn &a, const BivarFn &b) {
    return a.root_ == b.root_;
  }

private:
  expr::NodeId root_;
};

/// Numeric value; throws DomainError for s outside I and EvalError on
/// log of nonpositive, division by zero or non-finite results.
double eval2(const BivarFn &phi, double s, double eta);

Jet2 jet2(const BivarFn &phi, int order, double s, double eta);

/// max |phi| on a samples x samples grid over I x [eta_lo, eta_hi].
double box_sup(const Kernel2 &phi, double eta_lo, double eta_hi,
               int samples = kDefaultBoxSamples);

/// Throws VanishingDerivativeError at the grid point minimizing |d2 phi| when
/// that minimum is not above vanish_tol.
void check_nonvanishing(const BivarFn &phi, double eta_lo, double eta_hi,
                        int samples = kDefaultBoxSamples,
                        double vanish_tol = kVanishTol);

} // namespace tamecert
