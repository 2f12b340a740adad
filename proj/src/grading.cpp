#include "tamecert/grading.hpp"

#include "tamecert/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>

namespace tamecert {

Grading::Grading(std::vector<double> m) : m_(std::move(m)) {
  if (m_.empty())
    throw ConfigError("grading needs at least one entry");
  for (std::size_t i = 0; i < m_.size(); ++i) {
    if (!(std::isfinite(m_[i]) && m_[i] > 0.0))
      throw ConfigError("grading entry m_" + std::to_string(i) +
                        " must be positive and finite");
    if (i > 0 && m_[i] < m_[i - 1])
      throw ConfigError("grading must be nondecreasing (m_" +
                        std::to_string(i) + " < m_" + std::to_string(i - 1) +
                        ")");
  }
}

Grading Grading::constant(int max_order, double c) {
  return Grading(std::vector<double>(max_order + 1, c));
}

Grading Grading::scaled(double t) const {
  std::vector<double> out = m_;
  for (auto &v : out)
    v *= t;
  return Grading(std::move(out));
}

GaugeValue gauge_norm(const SmoothFn &x, const Grading &m) {
  if (m.max_order() != x.config().max_order)
    throw ConfigError("grading has " + std::to_string(m.size()) +
                      " entries but functions track orders 0.." +
                      std::to_string(x.config().max_order));
  const std::vector<double> sups = x.sup_abs_all();
  double g = 0.0;
  for (std::size_t i = 0; i < sups.size(); ++i)
    g = std::max(g, sups[i] / m[i]);
  return GaugeValue(g);
}

bool disk_contains(const SmoothFn &x, const Grading &m, double slack) {
  return gauge_norm(x, m).value() <= 1.0 + slack;
}

DiskScaling scale_to_disk(const SmoothFn &x, const Grading &m) {
  const double t = gauge_norm(x, m).value();
  if (t == 0.0)
    throw DegenerateInputError("cannot scale the zero function onto the disk");
  return {t, x.scaled(1.0 / t)};
}

Grading read_grading(std::istream &is) {
  std::vector<double> m;
  std::string token;
  auto flush = [&] {
    if (token.empty())
      return;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception &) {
      used = 0;
    }
    if (used != token.size())
      throw DataError("malformed grading entry '" + token + "'");
    m.push_back(v);
    token.clear();
  };
  char c;
  while (is.get(c)) {
    if (c == ',' || std::isspace(static_cast<unsigned char>(c)))
      flush();
    else
      token.push_back(c);
  }
  flush();
  return Grading(std::move(m));
}

void write_grading(std::ostream &os, const Grading &m) {
  char buf[64];
  for (std::size_t i = 0; i < m.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", m[i]);
    os << (i ? " " : "") << buf;
  }
  os << '\n';
}

} // namespace tamecert
