#pragma once

#include "normlab/discretize.hpp"
#include "normlab/rng.hpp"
#include "normlab/subspace.hpp"

namespace normlab::testing {

/// Brute-force sweep of the discretization ratio over random sphere
/// directions, the independent oracle for the exact p = 1 solver. Returns
/// the extreme ratios observed.
struct SweepExtrema {
  double min_ratio = 0;
  double max_ratio = 0;
};
SweepExtrema ratio_sweep(const Subspace& x, const SamplingSet& s, double p,
                         std::size_t directions, std::uint64_t seed);

/// Small random exact instance for solver cross-checks: a dim-dimensional
/// subspace over a cells-cell geometry-carrying partition of [0,1), plus a
/// sampling set of points points.
struct SolverInstance {
  Subspace subspace;
  SamplingSet sampling;
};
SolverInstance random_instance(std::uint64_t seed, std::size_t cells, std::size_t dim,
                               std::size_t points);

/// Validity-checked permutation oracle: asserts directly (independent of the
/// library's validator) that the permutation pair fixes the weighted
/// cell-value matrix.
bool symmetry_fixes_matrix(const Subspace& x, const IndexPermutationSymmetry& sym);

}  // namespace normlab::testing
