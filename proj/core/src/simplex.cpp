#include "normlab/simplex.hpp"

#include <stdexcept>

namespace normlab {

namespace {
constexpr std::size_t kStallLimit = 64;  // degenerate pivots before Bland takes over
}

LpSolution solve_lp(const LpProblem& lp) {
  const std::size_t m = lp.constraint_matrix.size();
  const std::size_t n = lp.objective.size();
  if (lp.rhs.size() != m) throw std::invalid_argument("solve_lp: rhs size mismatch");
  for (const auto& row : lp.constraint_matrix)
    if (row.size() != n) throw std::invalid_argument("solve_lp: constraint row size mismatch");
  for (const auto& b : lp.rhs)
    if (b < 0) throw std::invalid_argument("solve_lp: rhs must be nonnegative");

  const std::size_t cols = n + m + 1;  // structural + slack + rhs
  std::vector<std::vector<Rational>> t(m, std::vector<Rational>(cols, Rational(0)));
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < n; ++c) t[r][c] = lp.constraint_matrix[r][c];
    t[r][n + r] = 1;
    t[r][cols - 1] = lp.rhs[r];
  }
  std::vector<Rational> cost(cols, Rational(0));  // reduced costs, rhs slot unused
  for (std::size_t c = 0; c < n; ++c) cost[c] = lp.objective[c];

  std::vector<std::size_t> basis(m);
  for (std::size_t r = 0; r < m; ++r) basis[r] = n + r;

  LpSolution out;
  bool bland = false;
  std::size_t stall = 0;

  for (;;) {
    // Entering column.
    std::size_t enter = cols - 1;
    if (bland) {
      for (std::size_t c = 0; c < cols - 1; ++c)
        if (cost[c] > 0) {
          enter = c;
          break;
        }
    } else {
      const Rational* best = nullptr;
      for (std::size_t c = 0; c < cols - 1; ++c)
        if (cost[c] > 0 && (!best || cost[c] > *best)) {
          best = &cost[c];
          enter = c;
        }
    }
    if (enter == cols - 1) break;  // optimal

    // Leaving row by minimum ratio, ties by smallest basis label.
    std::size_t leave = m;
    Rational best_ratio;
    for (std::size_t r = 0; r < m; ++r) {
      if (t[r][enter] <= 0) continue;
      Rational ratio = t[r][cols - 1] / t[r][enter];
      if (leave == m || ratio < best_ratio ||
          (ratio == best_ratio && basis[r] < basis[leave])) {
        leave = r;
        best_ratio = ratio;
      }
    }
    if (leave == m) {
      out.status = LpSolution::Status::Unbounded;
      return out;
    }
    if (best_ratio.is_zero()) {
      if (++stall > kStallLimit) bland = true;
    } else {
      stall = 0;
    }

    // Pivot.
    const Rational piv = t[leave][enter];
    for (std::size_t c = 0; c < cols; ++c) t[leave][c] /= piv;
    for (std::size_t r = 0; r < m; ++r) {
      if (r == leave || t[r][enter].is_zero()) continue;
      const Rational f = t[r][enter];
      for (std::size_t c = 0; c < cols; ++c) {
        if (t[leave][c].is_zero()) continue;
        t[r][c] -= f * t[leave][c];
      }
    }
    {
      const Rational f = cost[enter];
      if (!f.is_zero())
        for (std::size_t c = 0; c < cols; ++c) {
          if (t[leave][c].is_zero()) continue;
          cost[c] -= f * t[leave][c];
        }
    }
    basis[leave] = enter;
    ++out.pivots;
  }

  out.x.assign(n, Rational(0));
  for (std::size_t r = 0; r < m; ++r)
    if (basis[r] < n) out.x[basis[r]] = t[r][cols - 1];
  out.value = 0;
  for (std::size_t c = 0; c < n; ++c)
    if (!out.x[c].is_zero()) out.value += lp.objective[c] * out.x[c];
  return out;
}

}  // namespace normlab
