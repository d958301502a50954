#include "normlab/discretize.hpp"
#include "normlab/parallel.hpp"
#include "normlab/rng.hpp"
#include "normlab/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace normlab {

namespace {

// ----- cell classes: cells grouped by identical evaluation functional -----

struct CellClasses {
  linalg::RatMat rows;            // one row of basis values per class
  std::vector<Rational> weights;  // total cell measure per class
  std::vector<std::size_t> representative;
  std::vector<std::size_t> class_of;  // cell -> class
};

CellClasses build_cell_classes(const Subspace& x) {
  CellClasses cc;
  std::map<linalg::RatVec, std::size_t> seen;
  cc.class_of.resize(x.space()->cell_count());
  for (std::size_t i = 0; i < x.space()->cell_count(); ++i) {
    linalg::RatVec row(x.dim());
    for (std::size_t j = 0; j < x.dim(); ++j) row[j] = x.basis(j).value(i).rat();
    auto [it, fresh] = seen.emplace(std::move(row), cc.rows.size());
    if (fresh) {
      cc.rows.push_back(it->first);
      cc.weights.emplace_back(0);
      cc.representative.push_back(i);
    }
    cc.weights[it->second] += x.space()->weight(i).rat();
    cc.class_of[i] = it->second;
  }
  return cc;
}

// ----- symmetry validation and orbit machinery -----

bool is_permutation(const std::vector<std::size_t>& p, std::size_t n) {
  if (p.size() != n) return false;
  std::vector<bool> hit(n, false);
  for (auto v : p) {
    if (v >= n || hit[v]) return false;
    hit[v] = true;
  }
  return true;
}

// Exact check that relabelling cells by sigma and basis indices by pi leaves
// the weighted cell-value matrix unchanged.
bool validate_symmetry(const Subspace& x, const IndexPermutationSymmetry& sym) {
  const std::size_t cells = x.space()->cell_count();
  const std::size_t n = x.dim();
  if (!is_permutation(sym.cell_perm, cells) || !is_permutation(sym.basis_perm, n)) return false;
  for (std::size_t i = 0; i < cells; ++i)
    if (x.space()->weight(sym.cell_perm[i]) != x.space()->weight(i)) return false;
  for (std::size_t i = 0; i < cells; ++i) {
    const std::size_t si = sym.cell_perm[i];
    for (std::size_t j = 0; j < n; ++j)
      if (x.basis(sym.basis_perm[j]).value(si) != x.basis(j).value(i)) return false;
  }
  return true;
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

// Generator action projected onto cell classes; classes must map onto
// classes for a validated symmetry.
std::vector<std::size_t> class_action(const CellClasses& cc,
                                      const IndexPermutationSymmetry& sym) {
  std::vector<std::size_t> image(cc.rows.size());
  for (std::size_t c = 0; c < cc.rows.size(); ++c)
    image[c] = cc.class_of[sym.cell_perm[cc.representative[c]]];
  return image;
}

// ----- the invariant-restricted gauge LP for one evaluation class -----
//
// maximize psi . a  over  sum_i W_i |phi_i . a| <= 1, with a restricted to
// the subspace invariant under a validated symmetry subgroup fixing psi's
// class. Averaging an optimum over the subgroup keeps feasibility and the
// objective, so the restriction is lossless.
struct ClassLp {
  Rational value;
  linalg::RatVec witness;  // full-dimension coefficients
};

ClassLp solve_class_lp(const CellClasses& cc, std::size_t target_class,
                       const std::vector<const IndexPermutationSymmetry*>& stabilizer,
                       const std::vector<std::vector<std::size_t>>& stabilizer_class_action,
                       std::size_t dim) {
  // variable orbits under the stabilizer
  UnionFind var_uf(dim);
  for (const auto* g : stabilizer)
    for (std::size_t j = 0; j < dim; ++j) var_uf.unite(j, g->basis_perm[j]);
  std::map<std::size_t, std::size_t> var_orbit_index;
  std::vector<std::vector<std::size_t>> var_orbits;
  std::vector<std::size_t> orbit_of_var(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    const std::size_t root = var_uf.find(j);
    auto [it, fresh] = var_orbit_index.emplace(root, var_orbits.size());
    if (fresh) var_orbits.emplace_back();
    var_orbits[it->second].push_back(j);
    orbit_of_var[j] = it->second;
  }

  // class orbits under the stabilizer
  UnionFind class_uf(cc.rows.size());
  for (const auto& action : stabilizer_class_action)
    for (std::size_t c = 0; c < cc.rows.size(); ++c) class_uf.unite(c, action[c]);
  std::map<std::size_t, std::size_t> class_orbit_index;
  std::vector<std::vector<std::size_t>> class_orbits;
  for (std::size_t c = 0; c < cc.rows.size(); ++c) {
    const std::size_t root = class_uf.find(c);
    auto [it, fresh] = class_orbit_index.emplace(root, class_orbits.size());
    if (fresh) class_orbits.emplace_back();
    class_orbits[it->second].push_back(c);
  }

  const std::size_t v = var_orbits.size();
  const std::size_t co = class_orbits.size();

  // reduced rows and weights
  linalg::RatMat reduced(co, linalg::RatVec(v, Rational(0)));
  std::vector<Rational> reduced_weight(co, Rational(0));
  for (std::size_t c = 0; c < co; ++c) {
    const auto& members = class_orbits[c];
    const auto& row = cc.rows[members.front()];
    for (std::size_t ov = 0; ov < v; ++ov)
      for (std::size_t j : var_orbits[ov]) reduced[c][ov] += row[j];
    for (std::size_t m : members) reduced_weight[c] += cc.weights[m];
  }
  linalg::RatVec objective(v, Rational(0));
  for (std::size_t ov = 0; ov < v; ++ov)
    for (std::size_t j : var_orbits[ov]) objective[ov] += cc.rows[target_class][j];

  // columns: alpha+ (v), alpha- (v), slacks s (co); rows: 2co sign splits + budget
  LpProblem lp;
  const std::size_t cols = 2 * v + co;
  lp.objective.assign(cols, Rational(0));
  for (std::size_t ov = 0; ov < v; ++ov) {
    lp.objective[ov] = objective[ov];
    lp.objective[v + ov] = -objective[ov];
  }
  lp.constraint_matrix.reserve(2 * co + 1);
  lp.rhs.assign(2 * co + 1, Rational(0));
  for (std::size_t c = 0; c < co; ++c) {
    linalg::RatVec pos(cols, Rational(0)), neg(cols, Rational(0));
    for (std::size_t ov = 0; ov < v; ++ov) {
      pos[ov] = reduced[c][ov];
      pos[v + ov] = -reduced[c][ov];
      neg[ov] = -reduced[c][ov];
      neg[v + ov] = reduced[c][ov];
    }
    pos[2 * v + c] = -1;
    neg[2 * v + c] = -1;
    lp.constraint_matrix.push_back(std::move(pos));
    lp.constraint_matrix.push_back(std::move(neg));
  }
  linalg::RatVec budget(cols, Rational(0));
  for (std::size_t c = 0; c < co; ++c) budget[2 * v + c] = reduced_weight[c];
  lp.constraint_matrix.push_back(std::move(budget));
  lp.rhs.back() = 1;

  const LpSolution sol = solve_lp(lp);
  if (sol.status != LpSolution::Status::Optimal)
    throw std::logic_error("nikolskii: gauge LP unbounded (rank-deficient basis?)");

  ClassLp out;
  out.value = sol.value;
  out.witness.assign(dim, Rational(0));
  for (std::size_t j = 0; j < dim; ++j) {
    const std::size_t ov = orbit_of_var[j];
    out.witness[j] = sol.x[ov] - sol.x[v + ov];
  }
  return out;
}

Rational full_space_ratio_p1(const CellClasses& cc, std::size_t target_class,
                             const linalg::RatVec& a) {
  Rational num(0);
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (a[j].is_zero() || cc.rows[target_class][j].is_zero()) continue;
    num += cc.rows[target_class][j] * a[j];
  }
  Rational den(0);
  for (std::size_t c = 0; c < cc.rows.size(); ++c) {
    Rational dot(0);
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (a[j].is_zero() || cc.rows[c][j].is_zero()) continue;
      dot += cc.rows[c][j] * a[j];
    }
    if (dot.is_zero()) continue;
    den += cc.weights[c] * boost::multiprecision::abs(dot);
  }
  if (den.is_zero()) throw std::logic_error("nikolskii: witness with zero norm");
  return num / den;
}

NikolskiiResult nikolskii_p1_exact(const Subspace& x,
                                   std::span<const IndexPermutationSymmetry> symmetries) {
  CellClasses cc = build_cell_classes(x);

  std::vector<const IndexPermutationSymmetry*> valid;
  std::vector<std::vector<std::size_t>> actions;
  for (const auto& sym : symmetries) {
    if (!validate_symmetry(x, sym))
      throw std::invalid_argument("nikolskii_constant: supplied symmetry fails validation");
    valid.push_back(&sym);
    actions.push_back(class_action(cc, sym));
  }

  // orbits of classes under the whole validated group
  UnionFind orbit_uf(cc.rows.size());
  for (const auto& action : actions)
    for (std::size_t c = 0; c < cc.rows.size(); ++c) orbit_uf.unite(c, action[c]);
  std::vector<std::size_t> reps;
  for (std::size_t c = 0; c < cc.rows.size(); ++c)
    if (orbit_uf.find(c) == c) reps.push_back(c);

  // resource estimate: tableau cells over all representative LPs,
  // conservatively assuming no stabilizer reduction
  {
    const std::size_t rows = 2 * cc.rows.size() + 1;
    const std::size_t cols = 2 * x.dim() + cc.rows.size();
    if (reps.size() * rows * (cols + rows) > kNikolskiiLpCellCap)
      throw resource_error("nikolskii_constant: p=1 LP route over the resource cap");
  }

  struct RepResult {
    Rational value;
    linalg::RatVec witness;
  };
  std::vector<RepResult> results(reps.size());

  parallel_for(reps.size(), [&](std::size_t idx) {
    const std::size_t rep = reps[idx];
    std::vector<const IndexPermutationSymmetry*> stabilizer;
    std::vector<std::vector<std::size_t>> stab_actions;
    for (std::size_t g = 0; g < valid.size(); ++g) {
      if (actions[g][rep] == rep) {
        stabilizer.push_back(valid[g]);
        stab_actions.push_back(actions[g]);
      }
    }
    ClassLp lp = solve_class_lp(cc, rep, stabilizer, stab_actions, x.dim());
    // exact self-check: the lifted witness must reproduce the LP optimum
    if (!lp.value.is_zero()) {
      const Rational ratio = full_space_ratio_p1(cc, rep, lp.witness);
      if (ratio != lp.value)
        throw std::logic_error("nikolskii: symmetry-reduced LP failed witness verification");
    }
    results[idx] = {std::move(lp.value), std::move(lp.witness)};
  });

  std::size_t best = 0;
  for (std::size_t i = 1; i < results.size(); ++i)
    if (results[i].value > results[best].value) best = i;

  NikolskiiResult out;
  out.kind = BoundKind::Exact;
  out.value = Scalar(results[best].value);
  out.witness_cell = cc.representative[reps[best]];
  out.witness.reserve(x.dim());
  for (const auto& c : results[best].witness) out.witness.emplace_back(c);
  return out;
}

// ----- p = 2: closed form through the Gram inverse -----

NikolskiiResult nikolskii_p2(const Subspace& x) {
  NikolskiiResult out;
  out.kind = BoundKind::Exact;
  const std::size_t n = x.dim();
  const auto gram = x.gram();

  if (x.all_exact()) {
    linalg::RatMat g(n, linalg::RatVec(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) g[i][j] = gram[i][j].rat();
    auto ginv = linalg::invert(g);
    if (!ginv) throw std::invalid_argument("nikolskii_constant: singular Gram matrix");
    CellClasses cc = build_cell_classes(x);
    Rational best(-1);
    std::size_t best_class = 0;
    linalg::RatVec best_witness;
    for (std::size_t c = 0; c < cc.rows.size(); ++c) {
      linalg::RatVec gpsi(n, Rational(0));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          if (cc.rows[c][j].is_zero()) continue;
          gpsi[i] += (*ginv)[i][j] * cc.rows[c][j];
        }
      Rational q(0);
      for (std::size_t i = 0; i < n; ++i) q += cc.rows[c][i] * gpsi[i];
      if (q > best) {
        best = q;
        best_class = c;
        best_witness = std::move(gpsi);
      }
    }
    out.witness_cell = cc.representative[best_class];
    out.witness.reserve(n);
    for (const auto& v : best_witness) out.witness.emplace_back(v);
    if (auto root = rat_sqrt_exact(best))
      out.value = Scalar(std::move(*root));
    else
      out.value = Scalar(std::sqrt(best.convert_to<double>()));
    return out;
  }

  linalg::Mat g(n, linalg::Vec(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g[i][j] = gram[i][j].dbl();
  auto chol = linalg::cholesky_lower(g);
  if (!chol) throw std::invalid_argument("nikolskii_constant: singular Gram matrix");
  double best = -1;
  std::size_t best_cell = 0;
  linalg::Vec best_psi;
  for (std::size_t c = 0; c < x.space()->cell_count(); ++c) {
    linalg::Vec psi(n);
    for (std::size_t j = 0; j < n; ++j) psi[j] = x.basis(j).value(c).dbl();
    // q = psi^T G^-1 psi via two triangular solves
    linalg::Vec y = psi;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < i; ++k) y[i] -= (*chol)[i][k] * y[k];
      y[i] /= (*chol)[i][i];
    }
    const double q = linalg::dot(y, y);
    if (q > best) {
      best = q;
      best_cell = c;
      best_psi = std::move(psi);
    }
  }
  linalg::Vec w = best_psi;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < i; ++k) w[i] -= (*chol)[i][k] * w[k];
    w[i] /= (*chol)[i][i];
  }
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t k = i + 1; k < n; ++k) w[i] -= (*chol)[k][i] * w[k];
    w[i] /= (*chol)[i][i];
  }
  out.witness_cell = best_cell;
  out.witness.reserve(n);
  for (double v : w) out.witness.emplace_back(v);
  out.value = Scalar(std::sqrt(best));
  return out;
}

// ----- search fallback shared with the p > 2 beta check -----

struct RatioSearchResult {
  double value = 0;
  linalg::RatVec witness;
  std::size_t cell = 0;
};

RatioSearchResult search_linf_lp(const Subspace& x, double p, unsigned budget,
                                 std::uint64_t seed,
                                 std::span<const std::vector<Rational>> warm_starts) {
  const std::size_t n = x.dim();
  const std::size_t cells = x.space()->cell_count();
  const linalg::Mat values = x.value_matrix_double();
  linalg::Vec weights(cells);
  for (std::size_t c = 0; c < cells; ++c) weights[c] = x.space()->weight(c).dbl();

  struct Eval {
    double ratio;
    std::size_t cell;
  };
  auto evaluate = [&](const linalg::RatVec& a) -> Eval {
    linalg::Vec ad(n);
    for (std::size_t j = 0; j < n; ++j) ad[j] = a[j].convert_to<double>();
    double linf = 0, lp_pow = 0;
    std::size_t arg = 0;
    for (std::size_t c = 0; c < cells; ++c) {
      double dot = 0;
      for (std::size_t j = 0; j < n; ++j) dot += values[c][j] * ad[j];
      const double mag = std::fabs(dot);
      if (mag > linf) {
        linf = mag;
        arg = c;
      }
      if (mag > 0) lp_pow += weights[c] * std::pow(mag, p);
    }
    if (lp_pow <= 0) return {0.0, 0};
    return {linf / std::pow(lp_pow, 1.0 / p), arg};
  };

  std::vector<linalg::RatVec> pool;
  for (std::size_t j = 0; j < n; ++j) {
    linalg::RatVec e(n, Rational(0));
    e[j] = 1;
    pool.push_back(std::move(e));
  }
  pool.emplace_back(n, Rational(1));
  for (const auto& w : warm_starts)
    if (w.size() == n) pool.push_back(w);
  Rng rng(seed);
  for (unsigned r = 0; r < std::max(8u, budget / 8); ++r) {
    linalg::RatVec a(n);
    for (auto& v : a) v = rng.signed_rational(9, 4);
    pool.push_back(std::move(a));
  }

  std::vector<Eval> evals(pool.size());
  parallel_for(pool.size(), [&](std::size_t i) { evals[i] = evaluate(pool[i]); });
  std::size_t best = 0;
  for (std::size_t i = 1; i < pool.size(); ++i)
    if (evals[i].ratio > evals[best].ratio) best = i;

  RatioSearchResult out{evals[best].ratio, pool[best], evals[best].cell};
  Rational step(1);
  unsigned used = 0;
  while (used < budget && step >= Rational(1, 64)) {
    bool improved = false;
    for (std::size_t j = 0; j < n && used < budget; ++j) {
      for (int dir : {+1, -1}) {
        linalg::RatVec a = out.witness;
        a[j] += dir > 0 ? step : -step;
        ++used;
        const Eval e = evaluate(a);
        if (e.ratio > out.value) {
          out.value = e.ratio;
          out.witness = std::move(a);
          out.cell = e.cell;
          improved = true;
        }
      }
    }
    if (!improved) step /= 2;
  }
  return out;
}

}  // namespace

NikolskiiResult nikolskii_constant(const Subspace& x, const Scalar& p,
                                   std::span<const IndexPermutationSymmetry> symmetries,
                                   unsigned budget, std::uint64_t seed) {
  if (p < Scalar(1)) throw std::invalid_argument("nikolskii_constant: p must be at least 1");
  if (p == Scalar(2)) return nikolskii_p2(x);
  if (p == Scalar(1) && x.all_exact()) return nikolskii_p1_exact(x, symmetries);

  RatioSearchResult search = search_linf_lp(x, p.dbl(), budget, seed, {});
  NikolskiiResult out;
  out.kind = BoundKind::WitnessBound;
  out.value = Scalar(search.value);
  out.witness_cell = search.cell;
  out.witness.reserve(x.dim());
  for (const auto& v : search.witness) out.witness.emplace_back(v);
  return out;
}

BetaCheckReport p_gt_2_beta_check(const Subspace& x, const Scalar& p, const Scalar& A,
                                  const Scalar& B, const Scalar& B_p, unsigned budget,
                                  std::uint64_t seed,
                                  std::span<const std::vector<Rational>> warm_starts) {
  if (p <= Scalar(2)) throw std::invalid_argument("p_gt_2_beta_check: p must exceed 2");
  BetaCheckReport report;
  report.N = static_cast<unsigned>(x.dim());
  report.p = p;

  RatioSearchResult search = search_linf_lp(x, p.dbl(), budget, seed, warm_starts);
  const double n = static_cast<double>(x.dim());
  report.beta_measured = Scalar(search.value / std::pow(n, 1.0 / p.dbl()));
  report.lower_bound =
      Scalar(A.dbl() / (B.dbl() * B_p.dbl()) * std::pow(n, 0.5 - 1.0 / p.dbl()));
  report.holds = report.beta_measured.dbl() >= report.lower_bound.dbl();
  report.beta_witness.reserve(x.dim());
  for (const auto& v : search.witness) report.beta_witness.emplace_back(v);
  return report;
}

}  // namespace normlab
