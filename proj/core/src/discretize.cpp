#include "normlab/discretize.hpp"

#include "normlab/parallel.hpp"
#include "normlab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace normlab {

SamplingSet uniform_sampling(std::size_t M, const Scalar& L) {
  if (M == 0) throw std::invalid_argument("uniform_sampling: M must be positive");
  SamplingSet s;
  s.points.reserve(M);
  for (std::size_t j = 0; j < M; ++j)
    s.points.push_back(Scalar(Rational(static_cast<long long>(j), static_cast<long long>(M))) * L);
  return s;
}

Scalar empirical_p_sum(const StepFunction& f, const SamplingSet& s, const Scalar& p) {
  if (s.size() == 0) throw std::invalid_argument("empirical_p_sum: empty sampling set");
  const bool exact = p.is_exact_integer() && f.all_exact() &&
                     std::all_of(s.points.begin(), s.points.end(),
                                 [](const Scalar& t) { return t.is_exact(); });
  if (exact) {
    const long long k = p.as_int();
    Rational sum(0);
    for (const auto& t : s.points) {
      const Scalar v = evaluate(f, t);
      if (v.is_zero()) continue;
      sum += rat_pow_int(Rational(boost::multiprecision::abs(v.rat())), k);
    }
    return Scalar(sum / Rational(static_cast<long long>(s.size())));
  }
  const double pd = p.dbl();
  double sum = 0;
  for (const auto& t : s.points) sum += std::pow(std::fabs(evaluate(f, t).dbl()), pd);
  return Scalar(sum / static_cast<double>(s.size()));
}

std::vector<std::vector<Scalar>> evaluation_matrix(const Subspace& x, const SamplingSet& s) {
  std::vector<std::vector<Scalar>> m(s.size(), std::vector<Scalar>(x.dim(), Scalar(0)));
  for (std::size_t k = 0; k < s.size(); ++k) {
    const std::size_t cell = x.space()->locate(s.points[k]);
    for (std::size_t j = 0; j < x.dim(); ++j) m[k][j] = x.basis(j).value(cell);
  }
  return m;
}

bool validity_check(const Subspace& x, const SamplingSet& s, const Scalar& p) {
  (void)p;  // the rank condition settles positivity for every p at once
  if (s.size() < x.dim()) return false;
  const auto m = evaluation_matrix(x, s);
  const bool exact = x.all_exact() && std::all_of(s.points.begin(), s.points.end(),
                                                  [](const Scalar& t) { return t.is_exact(); });
  if (exact) {
    linalg::RatMat rm(m.size(), linalg::RatVec(x.dim()));
    for (std::size_t r = 0; r < m.size(); ++r)
      for (std::size_t c = 0; c < x.dim(); ++c) rm[r][c] = m[r][c].rat();
    return linalg::has_full_column_rank(rm);
  }
  linalg::Mat dm(m.size(), linalg::Vec(x.dim()));
  for (std::size_t r = 0; r < m.size(); ++r)
    for (std::size_t c = 0; c < x.dim(); ++c) dm[r][c] = m[r][c].dbl();
  return linalg::rank_double(dm) == x.dim();
}

namespace {

// Weighted linear forms defining the two gauges of the p = 1 ratio:
// numerator rows from sampling points (weight multiplicity / M), denominator
// rows from cell classes (weight = total cell measure of the class).
struct GaugeForms {
  linalg::RatMat rows;
  std::vector<Rational> weights;
};

GaugeForms numerator_forms(const Subspace& x, const SamplingSet& s) {
  GaugeForms g;
  std::map<linalg::RatVec, Rational> classes;
  const Rational unit(1, static_cast<long long>(s.size()));
  for (const auto& t : s.points) {
    const std::size_t cell = x.space()->locate(t);
    linalg::RatVec row(x.dim());
    for (std::size_t j = 0; j < x.dim(); ++j) row[j] = x.basis(j).value(cell).rat();
    classes[std::move(row)] += unit;
  }
  for (auto& [row, w] : classes) {
    g.rows.push_back(row);
    g.weights.push_back(w);
  }
  return g;
}

GaugeForms denominator_forms(const Subspace& x) {
  GaugeForms g;
  std::map<linalg::RatVec, Rational> classes;
  for (std::size_t i = 0; i < x.space()->cell_count(); ++i) {
    linalg::RatVec row(x.dim());
    for (std::size_t j = 0; j < x.dim(); ++j) row[j] = x.basis(j).value(i).rat();
    classes[std::move(row)] += x.space()->weight(i).rat();
  }
  for (auto& [row, w] : classes) {
    g.rows.push_back(row);
    g.weights.push_back(w);
  }
  return g;
}

Rational gauge_value(const GaugeForms& g, const linalg::RatVec& a) {
  Rational total(0);
  for (std::size_t i = 0; i < g.rows.size(); ++i) {
    Rational dot(0);
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (g.rows[i][j].is_zero() || a[j].is_zero()) continue;
      dot += g.rows[i][j] * a[j];
    }
    if (dot.is_zero()) continue;
    total += g.weights[i] * boost::multiprecision::abs(dot);
  }
  return total;
}

std::vector<Scalar> to_scalar_vec(const linalg::RatVec& v) {
  std::vector<Scalar> out;
  out.reserve(v.size());
  for (const auto& r : v) out.emplace_back(r);
  return out;
}

void require_exact_inputs(const Subspace& x, const SamplingSet& s, const char* who) {
  const bool exact = x.all_exact() && std::all_of(s.points.begin(), s.points.end(),
                                                  [](const Scalar& t) { return t.is_exact(); });
  if (!exact)
    throw std::invalid_argument(std::string(who) +
                                ": exact backend required (use disc_constants_search)");
}

}  // namespace

DiscretizationReport disc_constants_p2(const Subspace& x, const SamplingSet& s) {
  DiscretizationReport report;
  report.p = Scalar(2);
  report.M = s.size();
  report.valid = validity_check(x, s, Scalar(2));

  const std::size_t n = x.dim();
  const auto gram = x.gram();
  linalg::Mat g(n, linalg::Vec(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g[i][j] = gram[i][j].dbl();

  const auto ev = evaluation_matrix(x, s);
  linalg::Mat h(n, linalg::Vec(n, 0.0));
  for (std::size_t k = 0; k < s.size(); ++k)
    for (std::size_t i = 0; i < n; ++i) {
      const double vi = ev[k][i].dbl();
      if (vi == 0) continue;
      for (std::size_t j = 0; j < n; ++j) h[i][j] += vi * ev[k][j].dbl();
    }
  for (auto& row : h)
    for (auto& v : row) v /= static_cast<double>(s.size());

  auto eig = linalg::generalized_extreme_eigen(h, g);
  if (!eig) throw std::invalid_argument("disc_constants_p2: singular Gram matrix");

  report.B_value = Scalar(eig->max_value);
  report.B_witness.reserve(n);
  for (double v : eig->max_vector) report.B_witness.emplace_back(v);
  if (report.valid) {
    report.A_value = Scalar(eig->min_value);
    for (double v : eig->min_vector) report.A_witness.emplace_back(v);
  } else {
    report.A_value = Scalar(0);
    // an exactly annihilated direction, when the backend permits
    if (x.all_exact()) {
      linalg::RatMat rm(ev.size(), linalg::RatVec(n));
      bool exact_pts = true;
      for (std::size_t k = 0; k < ev.size() && exact_pts; ++k)
        for (std::size_t j = 0; j < n; ++j) {
          if (!ev[k][j].is_exact()) {
            exact_pts = false;
            break;
          }
          rm[k][j] = ev[k][j].rat();
        }
      if (exact_pts) {
        if (auto kernel = linalg::nullspace_vector(rm)) report.A_witness = to_scalar_vec(*kernel);
      }
    }
    if (report.A_witness.empty())
      for (double v : eig->min_vector) report.A_witness.emplace_back(v);
  }
  return report;
}

namespace {

// All rays on which dim-1 linearly independent forms from the pool vanish.
template <typename Visit>
void enumerate_vertex_rays(const linalg::RatMat& forms, std::size_t dim, Visit&& visit) {
  if (dim == 1) {
    visit(linalg::RatVec{Rational(1)});
    return;
  }
  const std::size_t need = dim - 1;
  std::vector<std::size_t> pick(need);
  for (std::size_t i = 0; i < need; ++i) pick[i] = i;
  if (forms.size() < need) return;
  std::size_t visited = 0;
  for (;;) {
    linalg::RatMat sub(need, linalg::RatVec(dim));
    for (std::size_t i = 0; i < need; ++i) sub[i] = forms[pick[i]];
    if (linalg::rank_exact(sub) == need) {
      if (auto ray = linalg::nullspace_vector(sub)) visit(std::move(*ray));
    }
    if (++visited > 2'000'000)
      throw resource_error("disc_constants_p1_exact: ray enumeration too large");
    // next combination
    std::size_t i = need;
    while (i-- > 0) {
      if (pick[i] + (need - i) < forms.size()) {
        ++pick[i];
        for (std::size_t k = i + 1; k < need; ++k) pick[k] = pick[k - 1] + 1;
        break;
      }
      if (i == 0) return;
    }
  }
}

}  // namespace

DiscretizationReport disc_constants_p1_exact(const Subspace& x, const SamplingSet& s,
                                             unsigned dim_bound) {
  require_exact_inputs(x, s, "disc_constants_p1_exact");
  if (x.dim() > dim_bound)
    throw resource_error("disc_constants_p1_exact: dim exceeds the combinatorial bound");

  DiscretizationReport report;
  report.p = Scalar(1);
  report.M = s.size();

  const GaugeForms num = numerator_forms(x, s);
  const GaugeForms den = denominator_forms(x);
  report.valid = linalg::has_full_column_rank(num.rows) && s.size() >= x.dim();

  linalg::RatMat pool = num.rows;
  pool.insert(pool.end(), den.rows.begin(), den.rows.end());

  bool first = true;
  Rational best_min, best_max;
  linalg::RatVec arg_min, arg_max;
  enumerate_vertex_rays(pool, x.dim(), [&](linalg::RatVec ray) {
    const Rational d = gauge_value(den, ray);
    if (d.is_zero()) return;  // cannot happen for a full-rank basis
    const Rational ratio = gauge_value(num, ray) / d;
    if (first || ratio < best_min) {
      best_min = ratio;
      arg_min = ray;
    }
    if (first || ratio > best_max) {
      best_max = ratio;
      arg_max = std::move(ray);
    }
    first = false;
  });
  if (first) throw std::logic_error("disc_constants_p1_exact: no rays enumerated");

  report.B_value = Scalar(best_max);
  report.B_witness = to_scalar_vec(arg_max);
  if (report.valid) {
    report.A_value = Scalar(best_min);
    report.A_witness = to_scalar_vec(arg_min);
  } else {
    report.A_value = Scalar(0);
    linalg::RatMat ev(num.rows);
    if (auto kernel = linalg::nullspace_vector(ev)) report.A_witness = to_scalar_vec(*kernel);
  }
  return report;
}

namespace {

struct DoubleForms {
  std::vector<linalg::Vec> rows;
  linalg::Vec weights;
};

DoubleForms numerator_forms_double(const Subspace& x, const SamplingSet& s) {
  DoubleForms d;
  const double unit = 1.0 / static_cast<double>(s.size());
  for (const auto& t : s.points) {
    const std::size_t cell = x.space()->locate(t);
    linalg::Vec row(x.dim());
    for (std::size_t j = 0; j < x.dim(); ++j) row[j] = x.basis(j).value(cell).dbl();
    d.rows.push_back(std::move(row));
    d.weights.push_back(unit);
  }
  return d;
}

DoubleForms denominator_forms_double(const Subspace& x) {
  DoubleForms d;
  for (std::size_t i = 0; i < x.space()->cell_count(); ++i) {
    linalg::Vec row(x.dim());
    for (std::size_t j = 0; j < x.dim(); ++j) row[j] = x.basis(j).value(i).dbl();
    d.rows.push_back(std::move(row));
    d.weights.push_back(x.space()->weight(i).dbl());
  }
  return d;
}

double gauge_value_double(const DoubleForms& g, const linalg::Vec& a, double p) {
  double total = 0;
  for (std::size_t i = 0; i < g.rows.size(); ++i) {
    const double dot = linalg::dot(g.rows[i], a);
    if (dot == 0) continue;
    total += g.weights[i] * (p == 1.0 ? std::fabs(dot) : std::pow(std::fabs(dot), p));
  }
  return total;
}

linalg::Vec gauge_subgradient(const DoubleForms& g, const linalg::Vec& a, double p) {
  linalg::Vec grad(a.size(), 0.0);
  for (std::size_t i = 0; i < g.rows.size(); ++i) {
    const double dot = linalg::dot(g.rows[i], a);
    if (dot == 0) continue;
    const double mag = p == 1.0 ? 1.0 : p * std::pow(std::fabs(dot), p - 1);
    const double c = g.weights[i] * (dot > 0 ? mag : -mag);
    for (std::size_t j = 0; j < a.size(); ++j) grad[j] += c * g.rows[i][j];
  }
  return grad;
}

}  // namespace

DiscretizationReport disc_constants_search(const Subspace& x, const SamplingSet& s,
                                           const Scalar& p, unsigned budget, std::uint64_t seed) {
  if (p < Scalar(1)) throw std::invalid_argument("disc_constants_search: p must be at least 1");
  DiscretizationReport report;
  report.p = p;
  report.M = s.size();
  report.A_kind = report.B_kind = BoundKind::WitnessBound;
  report.valid = validity_check(x, s, p);

  const double pd = p.dbl();
  const std::size_t n = x.dim();
  const DoubleForms num = numerator_forms_double(x, s);
  const DoubleForms den = denominator_forms_double(x);

  auto ratio_of = [&](const linalg::Vec& a) {
    const double d = gauge_value_double(den, a, pd);
    if (d <= 0) return std::numeric_limits<double>::quiet_NaN();
    return gauge_value_double(num, a, pd) / d;
  };

  // Multi-start projected subgradient on log ratio, ascent and descent.
  Rng rng(seed);
  std::vector<linalg::Vec> starts;
  for (std::size_t j = 0; j < n; ++j) {
    linalg::Vec e(n, 0.0);
    e[j] = 1.0;
    starts.push_back(std::move(e));
  }
  starts.push_back(linalg::Vec(n, 1.0));
  const unsigned extra = std::max<unsigned>(4, budget / 50);
  for (unsigned r = 0; r < extra; ++r) {
    linalg::Vec a(n);
    for (auto& v : a) v = rng.symmetric();
    if (linalg::norm2(a) > 1e-12) starts.push_back(std::move(a));
  }

  auto polish = [&](linalg::Vec a, bool maximize) {
    double scale = linalg::norm2(a);
    for (auto& v : a) v /= scale;
    double best = ratio_of(a);
    linalg::Vec best_a = a;
    double step = 0.25;
    for (unsigned it = 0; it < budget; ++it) {
      const double nv = gauge_value_double(num, a, pd);
      const double dv = gauge_value_double(den, a, pd);
      if (dv <= 0) break;
      linalg::Vec gn = gauge_subgradient(num, a, pd);
      linalg::Vec gd = gauge_subgradient(den, a, pd);
      linalg::Vec dir(n);
      for (std::size_t j = 0; j < n; ++j) dir[j] = gn[j] / std::max(nv, 1e-300) - gd[j] / dv;
      const double dn = linalg::norm2(dir);
      if (dn < 1e-15) break;
      for (std::size_t j = 0; j < n; ++j)
        a[j] += (maximize ? step : -step) * dir[j] / dn;
      const double an = linalg::norm2(a);
      if (an < 1e-12) break;
      for (auto& v : a) v /= an;
      const double r2 = ratio_of(a);
      if (std::isnan(r2)) break;
      if (maximize ? r2 > best : r2 < best) {
        best = r2;
        best_a = a;
      } else {
        step *= 0.7;
        a = best_a;
      }
    }
    return std::make_pair(best, best_a);
  };

  std::vector<std::pair<double, linalg::Vec>> asc(starts.size()), desc(starts.size());
  parallel_for(starts.size(), [&](std::size_t i) {
    asc[i] = polish(starts[i], true);
    desc[i] = polish(starts[i], false);
  });
  double best_max = -1, best_min = std::numeric_limits<double>::infinity();
  linalg::Vec arg_max, arg_min;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    if (!std::isnan(asc[i].first) && asc[i].first > best_max) {
      best_max = asc[i].first;
      arg_max = asc[i].second;
    }
    if (!std::isnan(desc[i].first) && desc[i].first < best_min) {
      best_min = desc[i].first;
      arg_min = desc[i].second;
    }
  }

  // Certify through exact re-evaluation when the backend permits: snap the
  // witness to a rational grid and report its exact ratio.
  const bool exact_capable = p.is_exact_integer() && x.all_exact() &&
                             std::all_of(s.points.begin(), s.points.end(),
                                         [](const Scalar& t) { return t.is_exact(); });
  auto finalize = [&](const linalg::Vec& a, bool maximize) -> std::pair<Scalar, std::vector<Scalar>> {
    if (exact_capable && p.rat() == 1) {
      linalg::RatVec ra(n);
      for (std::size_t j = 0; j < n; ++j)
        ra[j] = Rational(static_cast<long long>(std::llround(a[j] * (1LL << 40))), 1LL << 40);
      const GaugeForms numx = numerator_forms(x, s);
      const GaugeForms denx = denominator_forms(x);
      const Rational d = gauge_value(denx, ra);
      if (!d.is_zero()) return {Scalar(gauge_value(numx, ra) / d), to_scalar_vec(ra)};
    }
    std::vector<Scalar> w;
    w.reserve(n);
    for (double v : a) w.emplace_back(v);
    return {Scalar(maximize ? best_max : best_min), std::move(w)};
  };
  auto [bv, bw] = finalize(arg_max, true);
  report.B_value = bv;
  report.B_witness = std::move(bw);
  auto [av, aw] = finalize(arg_min, false);
  report.A_value = av;
  report.A_witness = std::move(aw);
  if (!report.valid) report.A_value = Scalar(0);
  return report;
}

AdversarialWitness l1_adversarial_witness(const L1FamilyMeta& meta, const Subspace& x,
                                          const SamplingSet& s) {
  AdversarialWitness out;
  out.tuple.resize(meta.n);
  for (unsigned k = 1; k <= meta.n; ++k) {
    // first sampling point landing in block k; validity guarantees one
    const Rational lo(static_cast<long long>(k - 1), static_cast<long long>(meta.N));
    const Rational hi(static_cast<long long>(k), static_cast<long long>(meta.N));
    bool found = false;
    for (const auto& t : s.points) {
      if (!t.is_exact()) continue;
      if (t.rat() >= lo && t.rat() < hi) {
        const std::size_t cell = x.space()->locate(t);
        out.tuple[k - 1] = static_cast<unsigned>(cell - (k - 1) * meta.alphabet) + 1;
        found = true;
        break;
      }
    }
    if (!found)
      throw std::invalid_argument(
          "l1_adversarial_witness: no sampling point in block " + std::to_string(k) +
          " (sampling set is not valid for the family)");
  }
  out.j_star = *meta.index_of_tuple(out.tuple);

  const auto& witness_fn = x.basis(out.j_star - 1);
  const Scalar empirical = empirical_p_sum(witness_fn, s, Scalar(1));
  const Scalar norm = lp_norm(witness_fn, Scalar(1));
  out.ratio = empirical / norm;

  // n N / ((1 + eps) M) with 1 + eps = (inv_eps + 1)/inv_eps
  out.bound = Rational(static_cast<long long>(meta.n) * static_cast<long long>(meta.N) *
                           meta.inv_eps,
                       static_cast<long long>(meta.inv_eps + 1) *
                           static_cast<long long>(s.size()));
  out.holds = out.ratio.is_exact() ? (out.ratio.rat() >= out.bound)
                                   : (out.ratio.dbl() >= out.bound.convert_to<double>());
  return out;
}

RademacherSamplingReport rademacher_sampling_bound(const RademacherSystem& sys,
                                                   const SamplingSet& s) {
  const Rational pr = sys.p().is_exact() ? sys.p().rat() : Rational(sys.p().dbl());
  RademacherSamplingReport report{.in_support_count = 0,
                                  .valid = false,
                                  .sum = ScaledRational::zero(sys.size()),
                                  .bound = ScaledRational(1, Rational(2) - pr / 2, sys.size()),
                                  .holds = false,
                                  .annihilated = {}};

  std::vector<std::vector<int>> patterns;
  for (const auto& t : s.points) {
    const Rational tr = t.is_exact() ? t.rat() : Rational(t.dbl());
    if (tr < 0 || tr >= 1)
      throw std::domain_error("rademacher_sampling_bound: point outside [0, 1)");
    if (!sys.in_support(tr)) continue;
    patterns.push_back(sys.sign_pattern_at(tr));
  }
  report.in_support_count = patterns.size();

  linalg::RatMat m(patterns.size(), linalg::RatVec(sys.size()));
  for (std::size_t r = 0; r < patterns.size(); ++r)
    for (unsigned j = 0; j < sys.size(); ++j) m[r][j] = patterns[r][j];
  report.valid = patterns.size() >= sys.size() && linalg::has_full_column_rank(m);
  if (!report.valid) {
    if (auto kernel = linalg::nullspace_vector(m)) report.annihilated = *kernel;
    if (patterns.empty()) {
      // every coefficient vector is annihilated; name the first basis vector
      report.annihilated.assign(sys.size(), Rational(0));
      report.annihilated[0] = 1;
    }
    return report;
  }

  // each in-support point contributes |y_1|^p = N^(1 - p/2)
  auto amp_p = sys.amplitude().pow_rational(pr);
  if (!amp_p) throw std::logic_error("rademacher_sampling_bound: amplitude tag not exact");
  report.sum =
      amp_p->times_rational(Rational(static_cast<long long>(report.in_support_count)));
  report.holds = report.sum.cmp(report.bound) >= 0;
  return report;
}

}  // namespace normlab
