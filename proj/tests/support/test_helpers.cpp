#include "test_helpers.hpp"

#include <cmath>

namespace normlab::testing {

SweepExtrema ratio_sweep(const Subspace& x, const SamplingSet& s, double p,
                         std::size_t directions, std::uint64_t seed) {
  const std::size_t n = x.dim();
  const std::size_t cells = x.space()->cell_count();
  linalg::Mat values(cells, linalg::Vec(n));
  linalg::Vec weights(cells);
  for (std::size_t c = 0; c < cells; ++c) {
    weights[c] = x.space()->weight(c).dbl();
    for (std::size_t j = 0; j < n; ++j) values[c][j] = x.basis(j).value(c).dbl();
  }
  std::vector<linalg::Vec> rows;
  for (const auto& t : s.points) {
    const std::size_t cell = x.space()->locate(t);
    rows.push_back(values[cell]);
  }

  Rng rng(seed);
  SweepExtrema out{std::numeric_limits<double>::infinity(), 0.0};
  for (std::size_t d = 0; d < directions; ++d) {
    linalg::Vec a(n);
    for (auto& v : a) v = rng.symmetric();
    const double norm = linalg::norm2(a);
    if (norm < 1e-12) continue;
    double num = 0;
    for (const auto& row : rows) num += std::pow(std::fabs(linalg::dot(row, a)), p);
    num /= static_cast<double>(rows.size());
    double den = 0;
    for (std::size_t c = 0; c < cells; ++c)
      den += weights[c] * std::pow(std::fabs(linalg::dot(values[c], a)), p);
    if (den <= 0) continue;
    const double ratio = num / den;
    out.min_ratio = std::min(out.min_ratio, ratio);
    out.max_ratio = std::max(out.max_ratio, ratio);
  }
  return out;
}

SolverInstance random_instance(std::uint64_t seed, std::size_t cells, std::size_t dim,
                               std::size_t points) {
  Rng rng(seed);
  for (int attempt = 0; attempt < 64; ++attempt) {
    // geometry-carrying space with random rational breakpoints
    std::vector<Rational> cuts;
    for (std::size_t i = 0; i + 1 < cells; ++i)
      cuts.push_back(Rational(rng.range(1, 95), 97));
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    if (cuts.size() + 1 != cells) continue;
    std::vector<Scalar> bp;
    bp.emplace_back(0);
    for (const auto& c : cuts) bp.emplace_back(c);
    bp.emplace_back(1);
    auto space = PartitionSpace::from_breakpoints(std::move(bp));

    std::vector<StepFunction> basis;
    for (std::size_t j = 0; j < dim; ++j) {
      std::vector<Scalar> v;
      for (std::size_t c = 0; c < cells; ++c) v.emplace_back(rng.signed_rational(9, 4));
      basis.emplace_back(space, std::move(v));
    }
    try {
      Subspace x(std::move(basis));
      SamplingSet s;
      for (std::size_t k = 0; k < points; ++k) s.points.emplace_back(rng.unit_rational(1009));
      return {std::move(x), std::move(s)};
    } catch (const std::invalid_argument&) {
      // rank-deficient draw, retry
    }
  }
  throw std::logic_error("random_instance: could not draw a full-rank basis");
}

bool symmetry_fixes_matrix(const Subspace& x, const IndexPermutationSymmetry& sym) {
  const std::size_t cells = x.space()->cell_count();
  const std::size_t n = x.dim();
  if (sym.cell_perm.size() != cells || sym.basis_perm.size() != n) return false;
  for (std::size_t i = 0; i < cells; ++i) {
    if (x.space()->weight(sym.cell_perm[i]) != x.space()->weight(i)) return false;
    for (std::size_t j = 0; j < n; ++j)
      if (x.basis(sym.basis_perm[j]).value(sym.cell_perm[i]) != x.basis(j).value(i))
        return false;
  }
  return true;
}

}  // namespace normlab::testing
