#pragma once

#include "normlab/scalar.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace normlab {

/// 2^-N sum over all sign patterns of |sum_j eps_j a_j|^p, by exhaustive
/// Gray-code enumeration (patterns come in +/- pairs, so 2^(N-1) visits).
/// Exact for exact a and integer p; float64 otherwise. N <= 24.
Scalar khintchine_expectation_pth_power(std::span<const Scalar> a, const Scalar& p);

/// The p-th root of the above; exact when both the sum and the root are
/// rational.
Scalar khintchine_expectation(std::span<const Scalar> a, const Scalar& p);

/// Empirical two-sided comparison constants between ||sum a_j R_j||_p and
/// ||a||_2 at a fixed length N. A_hat is the smallest ratio found and B_hat
/// the largest, so A_hat upper-bounds the true minimum and B_hat
/// lower-bounds the true maximum; each is certified by its stored witness.
struct KhintchineReport {
  Scalar p;
  unsigned N = 0;
  Scalar A_hat, B_hat;
  std::vector<Rational> witness_min, witness_max;
};

/// Searches coordinate vectors, the flat vector, seeded random directions,
/// and local rational descent/ascent with the given iteration budget.
/// Candidates are rational throughout, so for integer p the extrema are
/// selected by exact comparisons.
KhintchineReport khintchine_empirical_constants(unsigned N, const Scalar& p, unsigned budget,
                                                std::uint64_t seed);

/// ratio(a)^(2p) = E_p(a)^2 / (sum a^2)^p for integer p, used for exact
/// ratio comparisons between rational candidates.
Rational khintchine_ratio_power(std::span<const Rational> a, long long p_int);

}  // namespace normlab
