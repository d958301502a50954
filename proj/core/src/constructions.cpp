#include "normlab/constructions.hpp"

#include "normlab/khintchine.hpp"

#include <algorithm>
#include <map>

namespace normlab {

std::vector<unsigned> L1FamilyMeta::tuple_of_index(std::size_t j) const {
  if (j <= n || j > N) throw std::invalid_argument("tuple_of_index: j must lie in (n, N]");
  std::size_t v = j - n - 1;
  std::vector<unsigned> tuple(n);
  for (unsigned k = 0; k < n; ++k) {
    tuple[k] = static_cast<unsigned>(v % alphabet) + 1;
    v /= alphabet;
  }
  return tuple;
}

std::optional<std::size_t> L1FamilyMeta::index_of_tuple(const std::vector<unsigned>& tuple) const {
  if (tuple.size() != n) return std::nullopt;
  std::size_t v = 0;
  for (unsigned k = n; k-- > 0;) {
    if (tuple[k] < 1 || tuple[k] > alphabet) return std::nullopt;
    v = v * alphabet + (tuple[k] - 1);
  }
  return n + 1 + v;
}

std::size_t L1FamilyMeta::bump_cell(unsigned k, unsigned i) const {
  if (k < 1 || k > n || i < 1 || i > alphabet)
    throw std::invalid_argument("bump_cell: index out of range");
  return static_cast<std::size_t>(k - 1) * alphabet + (i - 1);
}

std::pair<std::size_t, std::size_t> L1FamilyMeta::block_cells(std::size_t j) const {
  if (j < 1 || j > N) throw std::invalid_argument("block_cells: j out of range");
  return {(j - 1) * alphabet, j * alphabet};
}

std::vector<std::size_t> L1FamilyMeta::support_cells(std::size_t j) const {
  std::vector<std::size_t> cells;
  if (j > n) {
    const auto tuple = tuple_of_index(j);
    for (unsigned k = 1; k <= n; ++k) cells.push_back(bump_cell(k, tuple[k - 1]));
  }
  const auto [b, e] = block_cells(j);
  for (std::size_t c = b; c < e; ++c) cells.push_back(c);
  return cells;
}

L1Family l1_basis(unsigned n, unsigned inv_eps, std::size_t n_bound) {
  if (n < 1 || inv_eps < 1) throw std::invalid_argument("l1_basis: n and 1/eps must be positive");

  L1FamilyMeta meta;
  meta.n = n;
  meta.inv_eps = inv_eps;
  meta.alphabet = static_cast<std::size_t>(inv_eps) * n;
  meta.eps = Rational(1, inv_eps);

  std::size_t tuples = 1;
  for (unsigned k = 0; k < n; ++k) {
    if (tuples > n_bound / meta.alphabet + 1)
      throw resource_error("l1_basis: N exceeds the configured bound");
    tuples *= meta.alphabet;
  }
  meta.N = n + tuples;
  if (meta.N > n_bound) throw resource_error("l1_basis: N exceeds the configured bound");
  meta.grid_cells = meta.alphabet * meta.N;

  auto space = make_uniform_partition(meta.grid_cells);
  const Scalar amplitude(static_cast<long long>(meta.N));

  std::vector<StepFunction> basis;
  basis.reserve(meta.N);
  for (std::size_t j = 1; j <= meta.N; ++j) {
    std::vector<Scalar> values(meta.grid_cells, Scalar(0));
    for (std::size_t c : meta.support_cells(j)) values[c] = amplitude;
    basis.emplace_back(space, std::move(values));
  }
  return {Subspace(std::move(basis)), std::move(meta)};
}

Scalar l1_perturbation_bound(const L1FamilyMeta& meta, const Subspace& x) {
  if (x.dim() != meta.N) throw std::invalid_argument("l1_perturbation_bound: wrong subspace");
  Scalar worst(0);
  const Scalar amplitude(static_cast<long long>(meta.N));
  for (std::size_t j = 1; j <= meta.N; ++j) {
    const auto [b, e] = meta.block_cells(j);
    Scalar norm(0);
    const auto& f = x.basis(j - 1);
    for (std::size_t c = 0; c < f.cell_count(); ++c) {
      Scalar v = f.value(c);
      if (c >= b && c < e) v -= amplitude;
      if (v.is_zero()) continue;
      norm += x.space()->weight(c) * v.abs();
    }
    if (norm > worst) worst = norm;
  }
  return worst;
}

Rational l1_combination_norm(const L1FamilyMeta& meta,
                             const std::vector<std::pair<std::size_t, Rational>>& coeffs) {
  std::map<std::size_t, Rational> acc;
  const Rational amplitude(static_cast<long long>(meta.N));
  for (const auto& [j, a] : coeffs) {  // j is 0-based, matching Subspace::basis
    if (a.is_zero()) continue;
    const Rational v = a * amplitude;
    for (std::size_t c : meta.support_cells(j + 1)) acc[c] += v;
  }
  const Rational cell_width(1, static_cast<long long>(meta.grid_cells));
  Rational norm(0);
  for (const auto& [c, v] : acc) {
    if (v.is_zero()) continue;
    norm += cell_width * boost::multiprecision::abs(v);
  }
  return norm;
}

namespace {

// Lifts a permutation of bump alphabet value i <-> i2 in coordinate k0 to
// basis and cell indices.
IndexPermutationSymmetry alphabet_transposition(const L1FamilyMeta& meta, unsigned k0, unsigned i1,
                                                unsigned i2) {
  IndexPermutationSymmetry sym;
  sym.basis_perm.resize(meta.N);
  sym.cell_perm.resize(meta.grid_cells);
  for (std::size_t j = 0; j < meta.N; ++j) sym.basis_perm[j] = j;
  for (std::size_t c = 0; c < meta.grid_cells; ++c) sym.cell_perm[c] = c;

  for (std::size_t j = meta.n + 1; j <= meta.N; ++j) {
    auto tuple = meta.tuple_of_index(j);
    unsigned& ik = tuple[k0 - 1];
    if (ik == i1)
      ik = i2;
    else if (ik == i2)
      ik = i1;
    else
      continue;
    const std::size_t j2 = *meta.index_of_tuple(tuple);
    sym.basis_perm[j - 1] = j2 - 1;
    const auto [b, e] = meta.block_cells(j);
    const auto [b2, e2] = meta.block_cells(j2);
    (void)e2;
    for (std::size_t t = 0; b + t < e; ++t) sym.cell_perm[b + t] = b2 + t;
  }
  std::swap(sym.cell_perm[meta.bump_cell(k0, i1)], sym.cell_perm[meta.bump_cell(k0, i2)]);
  return sym;
}

IndexPermutationSymmetry coordinate_swap(const L1FamilyMeta& meta, unsigned k0, unsigned k1) {
  IndexPermutationSymmetry sym;
  sym.basis_perm.resize(meta.N);
  sym.cell_perm.resize(meta.grid_cells);
  for (std::size_t j = 0; j < meta.N; ++j) sym.basis_perm[j] = j;
  for (std::size_t c = 0; c < meta.grid_cells; ++c) sym.cell_perm[c] = c;

  sym.basis_perm[k0 - 1] = k1 - 1;
  sym.basis_perm[k1 - 1] = k0 - 1;
  for (unsigned i = 1; i <= meta.alphabet; ++i) {
    sym.cell_perm[meta.bump_cell(k0, i)] = meta.bump_cell(k1, i);
    sym.cell_perm[meta.bump_cell(k1, i)] = meta.bump_cell(k0, i);
  }
  for (std::size_t j = meta.n + 1; j <= meta.N; ++j) {
    auto tuple = meta.tuple_of_index(j);
    std::swap(tuple[k0 - 1], tuple[k1 - 1]);
    const std::size_t j2 = *meta.index_of_tuple(tuple);
    if (j2 == j) continue;
    sym.basis_perm[j - 1] = j2 - 1;
    const auto [b, e] = meta.block_cells(j);
    const auto [b2, e2] = meta.block_cells(j2);
    (void)e2;
    for (std::size_t t = 0; b + t < e; ++t) sym.cell_perm[b + t] = b2 + t;
  }
  return sym;
}

}  // namespace

std::vector<IndexPermutationSymmetry> l1_family_symmetries(const L1FamilyMeta& meta) {
  std::vector<IndexPermutationSymmetry> gens;
  for (unsigned k = 1; k <= meta.n; ++k)
    for (unsigned i = 1; i < meta.alphabet; ++i)
      gens.push_back(alphabet_transposition(meta, k, i, i + 1));
  for (unsigned k = 1; k < meta.n; ++k) gens.push_back(coordinate_swap(meta, k, k + 1));
  return gens;
}

StepFunction rademacher(unsigned m) {
  if (m < 1 || m > 30) throw resource_error("rademacher: m must lie in [1, 30]");
  const std::size_t cells = std::size_t{1} << m;
  auto space = make_uniform_partition(cells);
  std::vector<Scalar> values;
  values.reserve(cells);
  for (std::size_t c = 0; c < cells; ++c) values.emplace_back(c % 2 == 0 ? -1 : 1);
  return StepFunction(std::move(space), std::move(values));
}

namespace {

int rademacher_sign_on_fine_grid(unsigned j, unsigned grid_log2, std::size_t cell) {
  // R_j is constant on runs of 2^(grid_log2 - j) fine cells; the coarse cell
  // index decides the sign, (-1)^(index + 1).
  const std::size_t coarse = cell >> (grid_log2 - j);
  return coarse % 2 == 0 ? -1 : 1;
}

Rational exact_rational_of(const Scalar& p) {
  if (p.is_exact()) return p.rat();
  return Rational(p.dbl());  // double -> rational conversion is exact
}

}  // namespace

RademacherSystem::RademacherSystem(unsigned N, Scalar p)
    : N_(N),
      p_(std::move(p)),
      amplitude_(ScaledRational::one(1)),
      width_(ScaledRational::one(1)) {
  if (N_ < 1 || N_ > 20)
    throw resource_error("rademacher_subspace: N must lie in [1, 20] (2^N grid cells)");
  const Rational pr = exact_rational_of(p_);
  if (pr < 1 || pr >= 2)
    throw std::invalid_argument("rademacher_subspace: p must lie in [1, 2)");

  amplitude_ = ScaledRational(1, Rational(1) / pr - Rational(1, 2), N_);
  width_ = ScaledRational(1, pr / 2 - 1, N_);

  // amplitude^p * width = N^0 = 1; the substitution identity in tag form.
  auto amp_p = amplitude_.pow_rational(pr);
  if (!amp_p || amp_p->times(width_).cmp_rational(Rational(1)) != 0)
    throw std::logic_error("rademacher_subspace: scale tags fail the unit-norm identity");

  const std::size_t cells = std::size_t{1} << N_;
  auto space = make_uniform_partition(cells);
  std::vector<StepFunction> basis;
  basis.reserve(N_);
  for (unsigned j = 1; j <= N_; ++j) {
    std::vector<Scalar> values;
    values.reserve(cells);
    for (std::size_t c = 0; c < cells; ++c)
      values.emplace_back(rademacher_sign_on_fine_grid(j, N_, c));
    basis.emplace_back(space, std::move(values));
  }
  system_ = std::make_shared<const Subspace>(std::move(basis));
}

Scalar RademacherSystem::y_lp_norm_pth_power(std::span<const Scalar> a) const {
  if (a.size() != N_) throw std::invalid_argument("y_lp_norm: coefficient count mismatch");
  return khintchine_expectation_pth_power(a, p_);
}

ScaledRational RademacherSystem::y_linf_norm(std::span<const Rational> a) const {
  if (a.size() != N_) throw std::invalid_argument("y_linf_norm: coefficient count mismatch");
  Rational sum(0);
  for (const auto& v : a) sum += boost::multiprecision::abs(v);
  if (sum.is_zero()) return ScaledRational::zero(N_);
  return amplitude_.times_rational(sum);
}

bool RademacherSystem::in_support(const Rational& t) const {
  if (t < 0) return false;
  return width_.cmp_rational(t) > 0;  // t < N^(p/2-1)
}

std::size_t RademacherSystem::dyadic_cell_of(const Rational& t) const {
  // Cell c of [0,1) with c 2^-N <= N^(1-p/2) t < (c+1) 2^-N, located by
  // exact comparisons of t against breakpoints scaled back by the width.
  const std::size_t cells = std::size_t{1} << N_;
  std::size_t lo = 0, hi = cells;  // invariant: breakpoint(lo) <= s < breakpoint(hi)
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    // s >= mid / 2^N  <=>  t >= width * mid / 2^N
    const ScaledRational threshold =
        width_.times_rational(Rational(static_cast<long long>(mid), static_cast<long long>(cells)));
    if (threshold.cmp_rational(t) <= 0)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

RademacherSystem::SignedMagnitude RademacherSystem::y_evaluate(unsigned j,
                                                               const Rational& t) const {
  if (j < 1 || j > N_) throw std::invalid_argument("y_evaluate: index out of range");
  if (t < 0) throw std::domain_error("y_evaluate: t must be nonnegative");
  if (!in_support(t)) return {0, ScaledRational::zero(N_)};
  const std::size_t cell = t.is_zero() ? 0 : dyadic_cell_of(t);
  return {rademacher_sign_on_fine_grid(j, N_, cell), amplitude_};
}

std::vector<int> RademacherSystem::sign_pattern_at(const Rational& t) const {
  if (!in_support(t)) throw std::domain_error("sign_pattern_at: t outside the support");
  const std::size_t cell = t.is_zero() ? 0 : dyadic_cell_of(t);
  std::vector<int> pattern(N_);
  for (unsigned j = 1; j <= N_; ++j) pattern[j - 1] = rademacher_sign_on_fine_grid(j, N_, cell);
  return pattern;
}

RademacherSystem rademacher_subspace(unsigned N, const Scalar& p) {
  return RademacherSystem(N, p);
}

}  // namespace normlab
