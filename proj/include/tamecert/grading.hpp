#pragma once

// Graded sup-norm disks B_m = { x : |x^(i)(s)| <= m_i } and their gauges.

#include "tamecert/funrep.hpp"

#include <iosfwd>
#include <limits>
#include <vector>

namespace tamecert {

inline constexpr double kContainmentSlack = 1e-9;

/// Positive, finite, nondecreasing sequence m_0..m_N.
class Grading {
public:
  explicit Grading(std::vector<double> m);

  /// m_i = c for every order.
  static Grading constant(int max_order, double c);

  int max_order() const noexcept { return static_cast<int>(m_.size()) - 1; }
  std::size_t size() const noexcept { return m_.size(); }
  double operator[](std::size_t i) const { return m_.at(i); }
  const std::vector<double> &values() const noexcept { return m_; }

  Grading scaled(double t) const;

  friend bool operator==(const Grading &, const Grading &) = default;

private:
  std::vector<double> m_;
};

/// Minkowski functional of a disk; +inf is representable but never produced
/// by the truncated model.
class GaugeValue {
public:
  constexpr GaugeValue() = default;
  constexpr explicit GaugeValue(double v) : value_(v) {}
  static constexpr GaugeValue infinite() {
    return GaugeValue(std::numeric_limits<double>::infinity());
  }

  constexpr double value() const noexcept { return value_; }
  constexpr bool is_infinite() const noexcept {
    return value_ == std::numeric_limits<double>::infinity();
  }
  constexpr operator double() const noexcept { return value_; }

private:
  double value_ = 0.0;
};

/// max_i sup|x^(i)| / m_i.
GaugeValue gauge_norm(const SmoothFn &x, const Grading &m);

bool disk_contains(const SmoothFn &x, const Grading &m,
                   double slack = kContainmentSlack);

struct DiskScaling {
  double t;
  SmoothFn u; ///< x / t, gauge exactly one
};

/// Absorption: x = t u with u on the unit sphere of the disk.
DiskScaling scale_to_disk(const SmoothFn &x, const Grading &m);

/// Whitespace or comma separated decimals.
Grading read_grading(std::istream &is);
void write_grading(std::ostream &os, const Grading &m);

} // namespace tamecert
