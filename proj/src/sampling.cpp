#include "tamecert/sampling.hpp"

#include <algorithm>

namespace tamecert {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

} // namespace

std::mt19937_64 sample_engine(std::uint64_t seed, Stream stream,
                              std::uint64_t index) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ static_cast<std::uint64_t>(stream));
  h = splitmix64(h ^ index);
  return std::mt19937_64(h);
}

double uniform01(std::mt19937_64 &rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform(std::mt19937_64 &rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

SmoothFn random_polynomial(const GridPtr &grid, std::mt19937_64 &rng,
                           int degree) {
  const int d = std::min(degree, grid->degree());
  std::vector<double> c(grid->degree() + 1, 0.0);
  bool nonzero = false;
  while (!nonzero) {
    for (int k = 0; k <= d; ++k) {
      c[k] = uniform(rng, -1.0, 1.0);
      nonzero = nonzero || c[k] != 0.0;
    }
  }
  return SmoothFn(grid, std::move(c));
}

SmoothFn random_disk_element(const GridPtr &grid, const Grading &m,
                             double radius, std::mt19937_64 &rng, int degree) {
  SmoothFn p = random_polynomial(grid, rng, degree);
  return scale_to_disk(p, m).u.scaled(radius);
}

} // namespace tamecert
