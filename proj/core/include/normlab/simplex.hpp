#pragma once

#include "normlab/scalar.hpp"

#include <vector>

namespace normlab {

/// Linear program in computational standard form:
///   maximize objective . x   subject to   A x <= b,  x >= 0,
/// with every entry of b nonnegative so the slack basis is feasible from the
/// start (phase one is never needed for the programs built here).
struct LpProblem {
  std::vector<std::vector<Rational>> constraint_matrix;
  std::vector<Rational> rhs;
  std::vector<Rational> objective;
};

struct LpSolution {
  enum class Status { Optimal, Unbounded };
  Status status = Status::Optimal;
  Rational value;
  std::vector<Rational> x;
  std::size_t pivots = 0;
};

/// Dense exact-rational simplex. Pivots by steepest reduced cost and falls
/// back to Bland's least-index rule after a run of degenerate pivots, which
/// rules out cycling while keeping typical runs short. Deterministic.
LpSolution solve_lp(const LpProblem& lp);

}  // namespace normlab
