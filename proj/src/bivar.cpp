#include "tamecert/bivar.hpp"

#include "tamecert/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>

namespace tamecert {

namespace {

// expr   := term (('+'|'-') term)*
// term   := factor (('*'|'/') factor)*
// factor := base ('^' INTEGER)?
// base   := NUMBER | 's' | 'eta' | FUNC '(' expr ')' | '(' expr ')'
class Parser {
public:
  explicit Parser(std::string_view text) : text_(text) {}

  expr::NodeId parse() {
    expr::NodeId e = parse_expr();
    skip_ws();
    if (pos_ != text_.size())
      throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
    return e;
  }

private:
  std::string_view text_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= text_.size())
        throw ParseError(std::string("expected '") + c + "' but input ended",
                         pos_);
      throw ParseError(std::string("expected '") + c + "'", pos_);
    }
  }

  expr::NodeId parse_expr() {
    expr::NodeId lhs = parse_term();
    for (;;) {
      if (accept('+'))
        lhs = expr::add(lhs, parse_term());
      else if (accept('-'))
        lhs = expr::sub(lhs, parse_term());
      else
        return lhs;
    }
  }

  expr::NodeId parse_term() {
    expr::NodeId lhs = parse_factor();
    for (;;) {
      if (accept('*')) {
        lhs = expr::mul(lhs, parse_factor());
      } else if (accept('/')) {
        const std::size_t at = pos_;
        expr::NodeId rhs = parse_factor();
        double c;
        if (expr::is_constant(rhs, &c) && c == 0.0)
          throw ParseError("denominator is identically zero", at);
        lhs = expr::div(lhs, rhs);
      } else {
        return lhs;
      }
    }
  }

  expr::NodeId parse_factor() {
    expr::NodeId base = parse_base();
    if (accept('^')) {
      skip_ws();
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_])))
        ++pos_;
      if (start == pos_)
        throw ParseError("expected integer exponent", start);
      int k = 0;
      auto res = std::from_chars(text_.data() + start, text_.data() + pos_, k);
      if (res.ec != std::errc())
        throw ParseError("exponent out of range", start);
      return expr::pow(base, k);
    }
    return base;
  }

  expr::NodeId parse_base() {
    skip_ws();
    if (pos_ >= text_.size())
      throw ParseError("unexpected end of input", pos_);
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      expr::NodeId e = parse_expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
      return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             std::isalpha(static_cast<unsigned char>(text_[pos_])))
        ++pos_;
      std::string_view id = text_.substr(start, pos_ - start);
      if (id == "s")
        return expr::var_s();
      if (id == "eta")
        return expr::var_eta();
      expr::Op op;
      if (id == "exp")
        op = expr::Op::Exp;
      else if (id == "sin")
        op = expr::Op::Sin;
      else if (id == "cos")
        op = expr::Op::Cos;
      else if (id == "log")
        op = expr::Op::Log;
      else
        throw ParseError("unknown identifier '" + std::string(id) + "'", start);
      expect('(');
      expr::NodeId arg = parse_expr();
      expect(')');
      return expr::unary(op, arg);
    }
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  expr::NodeId parse_number() {
    const std::size_t start = pos_;
    bool digits = false;
    while (pos_ < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
      digits = true;
    }
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
        digits = true;
      }
    }
    if (!digits)
      throw ParseError("malformed number", start);
    double v = 0.0;
    auto res = std::from_chars(text_.data() + start, text_.data() + pos_, v,
                               std::chars_format::fixed);
    if (res.ec != std::errc() || res.ptr != text_.data() + pos_)
      throw ParseError("malformed number", start);
    return expr::constant(v);
  }
};

std::shared_ptr<const expr::Tape> jet_tape(expr::NodeId root, int order) {
  static std::mutex mutex;
  static std::map<std::pair<expr::NodeId, int>,
                  std::shared_ptr<const expr::Tape>>
      cache;
  {
    std::lock_guard lock(mutex);
    auto it = cache.find({root, order});
    if (it != cache.end())
      return it->second;
  }
  std::vector<expr::NodeId> roots(Jet2::size_for(order));
  const BivarFn phi(root);
  for (int t = 0; t <= order; ++t)
    for (int i1 = 0; i1 <= t; ++i1)
      roots[Jet2::index(i1, t - i1)] = phi.partial(i1, t - i1).root();
  auto tape = std::make_shared<const expr::Tape>(roots);
  std::lock_guard lock(mutex);
  return cache.emplace(std::make_pair(root, order), tape).first->second;
}

void check_s(double s) {
  if (!(s >= 0.0 && s <= 1.0))
    throw DomainError("s = " + std::to_string(s) + " outside [0, 1]");
}

} // namespace

BivarFn::BivarFn(expr::NodeId root) : root_(root) {
  if (expr::depends_on(root_, expr::Op::T) ||
      expr::depends_on(root_, expr::Op::XDer))
    throw ConfigError("bivariate function may only reference s and eta");
}

BivarFn BivarFn::parse(std::string_view text) {
  return BivarFn(Parser(text).parse());
}

BivarFn BivarFn::constant(double c) { return BivarFn(expr::constant(c)); }

BivarFn BivarFn::partial(int i1, int i2) const {
  if (i1 < 0 || i2 < 0)
    throw OrderRangeError("negative derivative order");
  expr::NodeId r = root_;
  for (int k = 0; k < i1; ++k)
    r = expr::diff(r, expr::Var::S);
  for (int k = 0; k < i2; ++k)
    r = expr::diff(r, expr::Var::Eta);
  return BivarFn(r);
}

double BivarFn::eval(double s, double eta) const {
  check_s(s);
  return jet_tape(root_, 0)->eval1({s, eta, 0.0, {}});
}

void BivarFn::eval_many(std::span<const double> s, std::span<const double> eta,
                        std::span<double> out) const {
  auto tape = jet_tape(root_, 0);
  std::vector<double> scratch;
  for (std::size_t j = 0; j < s.size(); ++j) {
    check_s(s[j]);
    tape->eval({s[j], eta[j], 0.0, {}}, out.subspan(j, 1), scratch);
  }
}

Jet2 BivarFn::jet(int order, double s, double eta) const {
  check_s(s);
  if (order < 0)
    throw OrderRangeError("negative jet order");
  Jet2 out(order);
  std::vector<double> values(Jet2::size_for(order));
  std::vector<double> scratch;
  jet_tape(root_, order)->eval({s, eta, 0.0, {}}, values, scratch);
  for (int t = 0; t <= order; ++t)
    for (int i1 = 0; i1 <= t; ++i1)
      out.at(i1, t - i1) = values[Jet2::index(i1, t - i1)];
  return out;
}

double eval2(const BivarFn &phi, double s, double eta) {
  return phi.eval(s, eta);
}

Jet2 jet2(const BivarFn &phi, int order, double s, double eta) {
  return phi.jet(order, s, eta);
}

double box_sup(const Kernel2 &phi, double eta_lo, double eta_hi, int samples) {
  if (!(eta_lo <= eta_hi))
    throw ConfigError("box_sup needs eta_lo <= eta_hi");
  if (samples < 2)
    throw ConfigError("box_sup needs at least 2 samples per axis");
  double best = 0.0;
  for (int a = 0; a < samples; ++a) {
    const double s = static_cast<double>(a) / (samples - 1);
    for (int b = 0; b < samples; ++b) {
      const double eta =
          eta_lo + (eta_hi - eta_lo) * static_cast<double>(b) / (samples - 1);
      best = std::max(best, std::abs(phi.eval(s, eta)));
    }
  }
  return best;
}

void check_nonvanishing(const BivarFn &phi, double eta_lo, double eta_hi,
                        int samples, double vanish_tol) {
  if (!(eta_lo <= eta_hi))
    throw ConfigError("check_nonvanishing needs eta_lo <= eta_hi");
  if (samples < 2)
    throw ConfigError("check_nonvanishing needs at least 2 samples per axis");
  const BivarFn d2 = phi.partial(0, 1);
  double worst = std::numeric_limits<double>::infinity();
  double ws = 0.0, weta = 0.0;
  auto eta_at = [&](int b) {
    return eta_lo + (eta_hi - eta_lo) * static_cast<double>(b) / (samples - 1);
  };
  for (int a = 0; a < samples; ++a) {
    const double s = static_cast<double>(a) / (samples - 1);
    double prev = 0.0;
    for (int b = 0; b < samples; ++b) {
      const double eta = eta_at(b);
      const double v = d2.eval(s, eta);
      if (std::abs(v) < worst) {
        worst = std::abs(v);
        ws = s;
        weta = eta;
      }
      // A sign change between neighbours brackets a zero the grid missed.
      if (b > 0 && ((prev < 0.0 && v > 0.0) || (prev > 0.0 && v < 0.0))) {
        double lo = eta_at(b - 1), hi = eta;
        double flo = prev;
        for (int it = 0; it < 60; ++it) {
          const double mid = 0.5 * (lo + hi);
          const double fm = d2.eval(s, mid);
          if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
          } else {
            hi = mid;
          }
        }
        const double root = 0.5 * (lo + hi);
        throw VanishingDerivativeError(s, root, std::abs(d2.eval(s, root)));
      }
      prev = v;
    }
  }
  if (!(worst > vanish_tol))
    throw VanishingDerivativeError(ws, weta, worst);
}

} // namespace tamecert
