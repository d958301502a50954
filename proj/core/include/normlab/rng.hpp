#pragma once

#include "normlab/scalar.hpp"

#include <cstdint>
#include <vector>

namespace normlab {

/// Deterministic 64-bit generator (splitmix64-seeded xoshiro256**). Every
/// randomized routine in the library threads one of these through explicitly
/// so results depend only on the seed, never on the standard library build.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next();

  /// Uniform double in [0, 1).
  double unit();

  /// Uniform double in [-1, 1).
  double symmetric();

  /// Uniform integer in [lo, hi].
  std::int64_t range(std::int64_t lo, std::int64_t hi);

  /// Random rational num/den with 1 <= |num| <= max_num, 1 <= den <= max_den,
  /// random sign.
  Rational signed_rational(int max_num, int max_den);

  /// Uniform rational in [0, 1) with the given denominator grid.
  Rational unit_rational(std::int64_t denominator_grid);

  /// k distinct indices from [0, n), sorted.
  std::vector<std::size_t> distinct_indices(std::size_t n, std::size_t k);

  /// A fresh generator split off deterministically from this one.
  Rng split();

 private:
  std::uint64_t s_[4];
};

}  // namespace normlab
