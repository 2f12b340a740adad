#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tamecert {

/// Broad classification used by the command line to pick an exit code.
enum class ErrorKind {
  Config,     ///< bad input, configuration or inadmissible data
  Numeric,    ///< evaluation failure, singular derivative, overflow
  Certificate ///< a verified inequality does not hold
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, std::string tag, const std::string &what)
      : std::runtime_error(what), kind_(kind), tag_(std::move(tag)) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// Short machine-readable name, e.g. "parse" or "singular-derivative".
  const std::string &tag() const noexcept { return tag_; }

private:
  ErrorKind kind_;
  std::string tag_;
};

struct ConfigError : Error {
  explicit ConfigError(const std::string &what)
      : Error(ErrorKind::Config, "config", what) {}
};

struct DomainError : Error {
  explicit DomainError(const std::string &what)
      : Error(ErrorKind::Numeric, "domain", what) {}
};

struct OrderRangeError : Error {
  explicit OrderRangeError(const std::string &what)
      : Error(ErrorKind::Numeric, "order-range", what) {}
};

struct DataError : Error {
  explicit DataError(const std::string &what)
      : Error(ErrorKind::Config, "data", what) {}
};

class ParseError : public Error {
public:
  ParseError(const std::string &what, std::size_t position)
      : Error(ErrorKind::Config, "parse",
              what + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

private:
  std::size_t position_;
};

/// Raised when a numeric evaluation hits log(x<=0), 0 division or overflow.
class EvalError : public Error {
public:
  EvalError(const std::string &what, double s, double eta)
      : Error(ErrorKind::Numeric, "eval",
              what + " at (s=" + std::to_string(s) +
                  ", eta=" + std::to_string(eta) + ")"),
        s_(s), eta_(eta) {}
  double s() const noexcept { return s_; }
  double eta() const noexcept { return eta_; }

private:
  double s_, eta_;
};

/// d/d(eta) phi vanishes somewhere on the sampled box: phi is inadmissible.
class VanishingDerivativeError : public Error {
public:
  VanishingDerivativeError(double s, double eta, double value)
      : Error(ErrorKind::Config, "vanishing-derivative",
              "|d2 phi| = " + std::to_string(value) +
                  " below tolerance at (s=" + std::to_string(s) +
                  ", eta=" + std::to_string(eta) + ")"),
        s_(s), eta_(eta) {}
  double s() const noexcept { return s_; }
  double eta() const noexcept { return eta_; }

private:
  double s_, eta_;
};

struct RangeError : Error {
  explicit RangeError(const std::string &what)
      : Error(ErrorKind::Numeric, "eta-range", what) {}
};

struct SingularDerivativeError : Error {
  explicit SingularDerivativeError(const std::string &what)
      : Error(ErrorKind::Numeric, "singular-derivative", what) {}
};

struct DegenerateInputError : Error {
  explicit DegenerateInputError(const std::string &what)
      : Error(ErrorKind::Config, "degenerate-input", what) {}
};

struct SamplingError : Error {
  explicit SamplingError(const std::string &what)
      : Error(ErrorKind::Numeric, "sampling", what) {}
};

/// A hypothesis of a bound fails; `witness` is the refuting probe.
class PremiseError : public Error {
public:
  explicit PremiseError(const std::string &what,
                        std::vector<double> witness = {})
      : Error(ErrorKind::Certificate, "premise", what),
        witness_(std::move(witness)) {}
  const std::vector<double> &witness() const noexcept { return witness_; }

private:
  std::vector<double> witness_;
};

struct ConstructionError : Error {
  explicit ConstructionError(const std::string &what)
      : Error(ErrorKind::Numeric, "construction", what) {}
};

struct MembershipError : Error {
  explicit MembershipError(const std::string &what)
      : Error(ErrorKind::Certificate, "membership", what) {}
};

struct InadmissibleTargetError : Error {
  explicit InadmissibleTargetError(const std::string &what)
      : Error(ErrorKind::Certificate, "inadmissible-target", what) {}
};

} // namespace tamecert
