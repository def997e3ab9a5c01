#pragma once

// Seeded generators for property tests and verification suites. Only
// std::mt19937_64 raw output is used (its sequence is fixed by the standard);
// range reduction is done here so results do not depend on the standard
// library's distribution implementations.

#include <cstdint>
#include <random>
#include <vector>

#include "iwasawa/ring.hpp"

namespace iwasawa {

std::uint64_t splitmix64(std::uint64_t x);

/// Seed for trial `index` of a suite run with `seed`.
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t index);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform in [lo, hi].
  std::int64_t uniform(std::int64_t lo, std::int64_t hi);
  bool coin() { return (next() >> 63) != 0; }
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

/// Polynomial of degree <= max_degree with uniform residue coefficients.
IwasawaSeries random_polynomial(const RingParams& params, int max_degree, Rng& rng);

/// Random series that is nonzero at precision: uniform coefficients, then
/// scaled by p^mu with mu drawn below N.
IwasawaSeries random_nonzero_series(const RingParams& params, Rng& rng);

/// X^d + p * (random polynomial of degree < d).
IwasawaSeries random_distinguished(const RingParams& params, int degree, Rng& rng);

/// Random polynomial with unit constant term and degree <= max_degree.
IwasawaSeries random_unit_polynomial(const RingParams& params, int max_degree, Rng& rng);

}  // namespace iwasawa
