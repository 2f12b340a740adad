#pragma once

// Seeded, order-independent sampling of disk elements. Sample k of stream S
// under seed X depends only on (X, S, k).

#include "tamecert/funrep.hpp"
#include "tamecert/grading.hpp"

#include <cstdint>
#include <random>

namespace tamecert {

inline constexpr int kSampleDegree = 8;

/// Stream tags, one per sampling site.
enum class Stream : std::uint64_t {
  Colo = 1,
  Contraction = 2,
  Star = 3,
  Targets = 4,
  Probes = 5,
  DerivBound = 6,
  Selftest = 7,
  Members = 8,
};

std::mt19937_64 sample_engine(std::uint64_t seed, Stream stream,
                              std::uint64_t index);

/// Uniform on [0, 1) from the top 53 bits; identical on every platform.
double uniform01(std::mt19937_64 &rng);
double uniform(std::mt19937_64 &rng, double lo, double hi);

/// Nonzero polynomial of degree <= `degree` with Chebyshev coefficients drawn
/// uniformly from [-1, 1].
SmoothFn random_polynomial(const GridPtr &grid, std::mt19937_64 &rng,
                           int degree = kSampleDegree);

/// Random polynomial rescaled so that its gauge with respect to m is exactly
/// `radius`.
SmoothFn random_disk_element(const GridPtr &grid, const Grading &m,
                             double radius, std::mt19937_64 &rng,
                             int degree = kSampleDegree);

} // namespace tamecert
