#include "normlab/suites.hpp"

#include "normlab/discretize.hpp"
#include "normlab/frames.hpp"
#include "normlab/khintchine.hpp"
#include "normlab/parallel.hpp"
#include "normlab/rng.hpp"
#include "normlab/truncation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

namespace normlab {

namespace {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

std::vector<std::pair<std::size_t, Rational>> sparse_coeffs(Rng& rng, std::size_t dim,
                                                            unsigned max_nnz = 8) {
  const auto nnz = static_cast<std::size_t>(
      rng.range(1, std::min<long long>(max_nnz, static_cast<long long>(dim))));
  std::vector<std::pair<std::size_t, Rational>> out;
  for (auto i : rng.distinct_indices(dim, nnz)) out.emplace_back(i, rng.signed_rational(9, 9));
  return out;
}

std::vector<Scalar> dense_coeffs(const std::vector<std::pair<std::size_t, Rational>>& sparse,
                                 std::size_t dim) {
  std::vector<Scalar> out(dim, Scalar(0));
  for (const auto& [i, v] : sparse) out[i] = Scalar(v);
  return out;
}

std::string counted(std::size_t failures, std::size_t total) {
  return std::to_string(total - failures) + "/" + std::to_string(total) + " probes";
}

}  // namespace

bool SuiteResult::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

void SuiteResult::check(const std::string& name, bool pass, const std::string& detail,
                        const std::string& backend) {
  checks.push_back({name, pass, detail, backend});
}

void SuiteResult::record(const std::string& name, const Scalar& value) {
  numbers.emplace_back(name, value);
}

// ---------------------------------------------------------------------------
// t21: the perturbed-indicator family
// ---------------------------------------------------------------------------

SuiteResult t21_suite(unsigned n, unsigned inv_eps, unsigned probes, unsigned sampling_trials,
                      std::uint64_t seed) {
  Stopwatch watch;
  SuiteResult suite;
  {
    std::ostringstream name;
    name << "t21(n=" << n << ",inv_eps=" << inv_eps << ")";
    suite.name = name.str();
  }
  Rng rng(seed);

  auto family = l1_basis(n, inv_eps);
  const auto& meta = family.meta;
  const auto& x = family.subspace;
  suite.record("N", Scalar(static_cast<long long>(meta.N)));
  suite.record("grid_cells", Scalar(static_cast<long long>(meta.grid_cells)));
  suite.record("eps", Scalar(meta.eps));

  // (a) the perturbation norm is exactly eps
  {
    const Scalar bound = l1_perturbation_bound(meta, x);
    suite.record("perturbation_bound", bound);
    suite.check("perturbation_norm_equals_eps", bound.is_exact() && bound.rat() == meta.eps,
                bound.to_string() + " vs " + rat_to_string(meta.eps), "exact");
  }

  // (b) two-sided l1 frame inequality, seeded probes then all +-e_j +- e_k
  {
    const Rational lo = Rational(1) - meta.eps;
    const Rational hi = Rational(1) + meta.eps;
    std::size_t failures = 0;
    for (unsigned t = 0; t < probes; ++t) {
      const auto coeffs = sparse_coeffs(rng, meta.N);
      Rational sum(0);
      for (const auto& [i, v] : coeffs) sum += boost::multiprecision::abs(v);
      const Rational norm = l1_combination_norm(meta, coeffs);
      if (!(lo * sum <= norm && norm <= hi * sum)) ++failures;
    }
    suite.check("l1_frame_inequality_probes", failures == 0, counted(failures, probes), "exact");

    std::size_t pair_failures = 0, pair_total = 0;
    for (std::size_t j = 1; j <= meta.N; ++j) {
      for (std::size_t k = j + 1; k <= meta.N; ++k) {
        for (int sj : {+1, -1}) {
          for (int sk : {+1, -1}) {
            const Rational norm =
                l1_combination_norm(meta, {{j - 1, Rational(sj)}, {k - 1, Rational(sk)}});
            if (!(lo * 2 <= norm && norm <= hi * 2)) ++pair_failures;
            ++pair_total;
          }
        }
      }
    }
    suite.check("l1_frame_inequality_pairs", pair_failures == 0,
                counted(pair_failures, pair_total), "exact");
  }

  // (c) sup-norm constant against (1-eps)^-1 N
  {
    const auto symmetries = l1_family_symmetries(meta);
    const NikolskiiResult nik = nikolskii_constant(x, Scalar(1), symmetries);
    suite.record("nikolskii_p1", nik.value);
    if (inv_eps == 1) {
      suite.check("nikolskii_bound", true, "eps = 1: ceiling vacuous, value " +
                  nik.value.to_string(), "exact");
    } else {
      const Rational ceiling = Rational(static_cast<long long>(meta.N) * inv_eps, inv_eps - 1);
      suite.record("nikolskii_ceiling", Scalar(ceiling));
      suite.check("nikolskii_bound", nik.value.is_exact() && nik.value.rat() <= ceiling,
                  nik.value.to_string() + " <= " + rat_to_string(ceiling), "exact");
    }
  }

  // (d) adversarial witnesses over seeded valid sampling sets
  {
    std::size_t failures = 0;
    for (unsigned trial = 0; trial < sampling_trials; ++trial) {
      SamplingSet s;
      for (std::size_t j = 1; j <= meta.N; ++j) {
        // one point per block keeps every set valid
        const Rational at(static_cast<long long>(rng.range(0, 996)), 997);
        s.points.emplace_back(Rational(static_cast<long long>(j - 1),
                                       static_cast<long long>(meta.N)) +
                              at / Rational(static_cast<long long>(meta.N)));
      }
      const auto extra = static_cast<std::size_t>(rng.range(0, static_cast<long long>(meta.N)));
      for (std::size_t e = 0; e < extra; ++e)
        s.points.emplace_back(rng.unit_rational(99991));
      if (!validity_check(x, s, Scalar(1))) {
        ++failures;
        continue;
      }
      const AdversarialWitness w = l1_adversarial_witness(meta, x, s);
      if (!w.holds) ++failures;
      if (trial == 0) {
        suite.record("adversarial_ratio", w.ratio);
        suite.record("adversarial_bound", Scalar(w.bound));
      }
    }
    suite.check("adversarial_ratio_bound", failures == 0, counted(failures, sampling_trials),
                "exact");
  }

  // (e) perfect discretization on the uniform grid
  {
    const SamplingSet s = uniform_sampling(meta.grid_cells);
    std::size_t failures = 0;
    for (unsigned t = 0; t < probes; ++t) {
      const auto coeffs = dense_coeffs(sparse_coeffs(rng, meta.N), meta.N);
      const StepFunction f = x.combination(coeffs);
      const Scalar empirical = empirical_p_sum(f, s, Scalar(1));
      const Scalar norm = lp_norm(f, Scalar(1));
      if (!(empirical.is_exact() && norm.is_exact() && empirical.rat() == norm.rat()))
        ++failures;
    }
    suite.check("perfect_uniform_discretization", failures == 0, counted(failures, probes),
                "exact");
    suite.record("perfect_M", Scalar(static_cast<long long>(meta.grid_cells)));
  }

  suite.elapsed_sec = watch.seconds();
  return suite;
}

// ---------------------------------------------------------------------------
// p32: scaled Rademacher subspaces
// ---------------------------------------------------------------------------

SuiteResult p32_suite(const std::vector<unsigned>& sizes, const std::vector<Scalar>& exponents,
                      unsigned probes, unsigned sampling_trials, std::uint64_t seed) {
  Stopwatch watch;
  SuiteResult suite;
  suite.name = "p32";
  Rng rng(seed);

  for (const Scalar& p : exponents) {
    const bool exact_p1 = p == Scalar(1);
    for (unsigned N : sizes) {
      const RademacherSystem sys(N, p);
      const std::string tag = "N=" + std::to_string(N) + ",p=" + p.to_string();

      // substitution equivalence: tag-scaled enumeration vs direct cell sums
      {
        Rng probe_rng = rng.split();
        std::vector<std::vector<Scalar>> batch;
        batch.reserve(probes);
        for (unsigned t = 0; t < probes; ++t)
          batch.push_back(dense_coeffs(sparse_coeffs(probe_rng, N, 6), N));
        std::vector<char> ok(probes, 0);
        parallel_for(probes, [&](std::size_t t) {
          const Scalar via_tags = sys.y_lp_norm_pth_power(batch[t]);
          const Scalar via_cells =
              lp_norm_pth_power(sys.normalized_system().combination(batch[t]), p);
          if (exact_p1) {
            ok[t] = via_tags.is_exact() && via_cells.is_exact() &&
                    via_tags.rat() == via_cells.rat();
          } else {
            const double a = via_tags.dbl(), b = via_cells.dbl();
            ok[t] = std::fabs(a - b) <= 1e-9 * std::max({1.0, std::fabs(a), std::fabs(b)});
          }
        });
        const auto failures =
            static_cast<std::size_t>(std::count(ok.begin(), ok.end(), 0));
        suite.check("substitution_equivalence(" + tag + ")", failures == 0,
                    counted(failures, probes), exact_p1 ? "exact" : "float64");
      }

      // sup-norm bound with the enumerated constant folded over the probes
      {
        const KhintchineReport kr = khintchine_empirical_constants(N, p, 200, rng.next());
        Rng probe_rng = rng.split();
        std::vector<std::vector<Rational>> probe_vecs;
        for (unsigned t = 0; t < probes; ++t) {
          auto sparse = sparse_coeffs(probe_rng, N, 6);
          std::vector<Rational> a(N, Rational(0));
          for (const auto& [i, v] : sparse) a[i] = v;
          probe_vecs.push_back(std::move(a));
        }
        std::size_t failures = 0;
        if (exact_p1) {
          Rational a_key = khintchine_ratio_power(kr.witness_min, 1);  // ratio^2
          for (const auto& a : probe_vecs)
            a_key = std::min(a_key, khintchine_ratio_power(a, 1));
          suite.record("A_hat_sq(" + tag + ")", Scalar(a_key));
          for (const auto& a : probe_vecs) {
            Rational abs_sum(0), e1(0);
            for (const auto& v : a) abs_sum += boost::multiprecision::abs(v);
            std::vector<Scalar> as;
            as.reserve(N);
            for (const auto& v : a) as.emplace_back(v);
            e1 = khintchine_expectation_pth_power(as, Scalar(1)).rat();
            // ||x||_inf^2 A^2 <= N^2 ||x||_1^2, with ||x||_inf^2 = N (sum |a|)^2
            const Rational lhs = Rational(static_cast<long long>(N)) * abs_sum * abs_sum * a_key;
            const Rational rhs =
                Rational(static_cast<long long>(N)) * Rational(static_cast<long long>(N)) * e1 * e1;
            if (lhs > rhs) ++failures;
          }
          suite.check("linf_bound(" + tag + ")", failures == 0,
                      counted(failures, probe_vecs.size()), "exact");
        } else {
          double a_hat = kr.A_hat.dbl();
          const double pd = p.dbl();
          std::vector<double> ratios;
          for (const auto& a : probe_vecs) {
            std::vector<Scalar> as;
            as.reserve(N);
            double sq = 0;
            for (const auto& v : a) {
              as.emplace_back(v);
              const double vd = v.convert_to<double>();
              sq += vd * vd;
            }
            const double e = khintchine_expectation_pth_power(as, p).dbl();
            ratios.push_back(std::pow(e, 1.0 / pd) / std::sqrt(sq));
          }
          for (double r : ratios) a_hat = std::min(a_hat, r);
          suite.record("A_hat(" + tag + ")", Scalar(a_hat));
          const double amp = sys.amplitude().to_double();
          for (std::size_t i = 0; i < probe_vecs.size(); ++i) {
            double abs_sum = 0, sq = 0;
            for (const auto& v : probe_vecs[i]) {
              const double vd = v.convert_to<double>();
              abs_sum += std::fabs(vd);
              sq += vd * vd;
            }
            const double linf = amp * abs_sum;
            const double lp = ratios[i] * std::sqrt(sq);
            const double rhs = std::pow(static_cast<double>(N), 1.0 / pd) / a_hat * lp;
            if (linf > rhs * (1 + 1e-9)) ++failures;
          }
          suite.check("linf_bound(" + tag + ")", failures == 0,
                      counted(failures, probe_vecs.size()), "float64");
        }
      }

      // in-support sampling lower bound over seeded valid sets
      {
        std::size_t failures = 0;
        Rng trial_rng = rng.split();
        const double width_dbl = sys.width().to_double();
        for (unsigned trial = 0; trial < sampling_trials; ++trial) {
          RademacherSamplingReport report;
          bool got_valid = false;
          for (int attempt = 0; attempt < 32 && !got_valid; ++attempt) {
            SamplingSet s;
            const auto count = N + 3;
            for (std::size_t i = 0; i < count; ++i) {
              const auto grid = static_cast<long long>(1) << 30;
              const auto hi = static_cast<long long>(width_dbl * 0.999 * grid);
              Rational t(trial_rng.range(0, std::max<long long>(hi, 1)), grid);
              s.points.emplace_back(std::move(t));
            }
            report = rademacher_sampling_bound(sys, s);
            got_valid = report.valid;
          }
          if (!got_valid || !report.holds) ++failures;
        }
        suite.check("sampling_lower_bound(" + tag + ")", failures == 0,
                    counted(failures, sampling_trials), "exact");
        if (N == 4 && exact_p1) {
          const ScaledRational bound(1, Rational(3, 2), 4);  // 4^(3/2) = 8
          const bool is_eight = bound.cmp_rational(Rational(8)) == 0;
          suite.check("bound_at_N4_p1_is_8", is_eight, "N^(2-p/2) = 8", "exact");
        }
      }
    }
  }

  suite.elapsed_sec = watch.seconds();
  return suite;
}

// ---------------------------------------------------------------------------
// p33: the p > 2 obstruction at p = 4
// ---------------------------------------------------------------------------

SuiteResult p33_suite(const std::vector<unsigned>& sizes, unsigned budget, std::uint64_t seed) {
  Stopwatch watch;
  SuiteResult suite;
  suite.name = "p33";
  const Scalar p(4);

  std::vector<std::vector<Rational>> warm;
  double previous_beta = 0;
  bool monotone = true;
  for (unsigned N : sizes) {
    const RademacherSystem sys(N, Scalar(1));  // carrier for the dyadic span
    const KhintchineReport kr = khintchine_empirical_constants(N, p, budget, seed + N);

    // pad earlier witnesses into the current dimension
    std::vector<std::vector<Rational>> starts;
    for (const auto& w : warm) {
      std::vector<Rational> padded(N, Rational(0));
      std::copy(w.begin(), w.end(), padded.begin());
      starts.push_back(std::move(padded));
    }

    const BetaCheckReport report = p_gt_2_beta_check(
        sys.normalized_system(), p, kr.A_hat, kr.B_hat, kr.B_hat, budget, seed ^ N, starts);
    const std::string tag = "N=" + std::to_string(N);
    suite.record("beta(" + tag + ")", report.beta_measured);
    suite.record("beta_floor(" + tag + ")", report.lower_bound);
    suite.record("A_hat(" + tag + ")", kr.A_hat);
    suite.record("B_hat(" + tag + ")", kr.B_hat);
    suite.check("beta_floor(" + tag + ")", report.holds,
                report.beta_measured.to_string() + " >= " + report.lower_bound.to_string(),
                "float64");
    suite.plot_points.emplace_back("beta_vs_N", static_cast<double>(N),
                                   report.beta_measured.dbl());

    if (report.beta_measured.dbl() + 1e-12 < previous_beta) monotone = false;
    previous_beta = report.beta_measured.dbl();

    std::vector<Rational> w;
    w.reserve(N);
    for (const auto& v : report.beta_witness) w.push_back(v.rat());
    warm.push_back(std::move(w));
  }
  suite.check("beta_monotone_growth", monotone, "measured beta non-decreasing in N", "float64");

  suite.elapsed_sec = watch.seconds();
  return suite;
}

// ---------------------------------------------------------------------------
// khintchine kernel identities
// ---------------------------------------------------------------------------

SuiteResult khintchine_suite(unsigned probes, std::uint64_t seed) {
  Stopwatch watch;
  SuiteResult suite;
  suite.name = "khintchine";
  Rng rng(seed);

  {
    const std::vector<Scalar> ones{Scalar(1), Scalar(1)};
    const Scalar e = khintchine_expectation(ones, Scalar(1));
    suite.record("E1_of_(1,1)", e);
    suite.check("expectation_(1,1)_p1", e.is_exact() && e.rat() == 1, e.to_string(), "exact");
  }
  {
    const std::vector<Scalar> a{Scalar(3), Scalar(4)};
    const Scalar e = khintchine_expectation(a, Scalar(2));
    suite.check("expectation_(3,4)_p2", e.is_exact() && e.rat() == 5, e.to_string(), "exact");
  }
  {
    std::size_t failures = 0;
    for (unsigned t = 0; t < probes; ++t) {
      const auto len = static_cast<std::size_t>(rng.range(1, 12));
      std::vector<Scalar> a;
      Rational sq(0);
      for (std::size_t i = 0; i < len; ++i) {
        const Rational v = rng.signed_rational(9, 9);
        sq += v * v;
        a.emplace_back(v);
      }
      const Scalar e2 = khintchine_expectation_pth_power(a, Scalar(2));
      if (!(e2.is_exact() && e2.rat() == sq)) ++failures;
    }
    suite.check("orthogonality_squared_form", failures == 0, counted(failures, probes), "exact");
  }

  suite.elapsed_sec = watch.seconds();
  return suite;
}

// ---------------------------------------------------------------------------
// l46: the stability lemma
// ---------------------------------------------------------------------------

namespace {

SpacePtr random_probability_space(Rng& rng, std::size_t cells) {
  std::vector<Rational> raw(cells);
  Rational total(0);
  for (auto& w : raw) {
    w = Rational(rng.range(1, 9), rng.range(1, 9));
    total += w;
  }
  std::vector<Scalar> weights;
  weights.reserve(cells);
  for (auto& w : raw) weights.emplace_back(w / total);
  return PartitionSpace::from_weights(std::move(weights));
}

Subspace random_exact_subspace(Rng& rng, const SpacePtr& space, std::size_t dim) {
  for (int attempt = 0; attempt < 32; ++attempt) {
    std::vector<StepFunction> basis;
    for (std::size_t j = 0; j < dim; ++j) {
      std::vector<Scalar> values;
      values.reserve(space->cell_count());
      for (std::size_t c = 0; c < space->cell_count(); ++c)
        values.emplace_back(rng.signed_rational(9, 3));
      basis.emplace_back(space, std::move(values));
    }
    try {
      return Subspace(std::move(basis));
    } catch (const std::invalid_argument&) {
      // rank-deficient draw, retry
    }
  }
  throw std::logic_error("random_exact_subspace: could not draw a full-rank basis");
}

void run_lemma_case(SuiteResult& suite, const std::string& tag, const Subspace& y,
                    unsigned probes, std::uint64_t seed) {
  const PartitionFrame frame = subspace_to_frame(y);
  const PRStabilityBounds stab = pr_stability_bounds(frame, 400, seed);
  const NikolskiiResult nik = nikolskii_constant(y, Scalar(2));
  const double beta = nik.value.dbl() / std::sqrt(static_cast<double>(y.dim()));

  const LemmaReport report =
      verify_stabpr_lemma(y, stab.C_upper, Scalar(beta), probes, seed ^ 0x5bd1u);
  suite.record("kappa(" + tag + ")", stab.C_upper);
  suite.record("beta(" + tag + ")", Scalar(beta));
  suite.check("lemma_preconditions(" + tag + ")", report.preconditions_ok,
              report.precondition_failure.empty() ? "ok" : report.precondition_failure,
              "float64");
  suite.check("lemma_zero_violations(" + tag + ")", report.violations == 0,
              std::to_string(report.violations) + " violations over " +
                  std::to_string(report.probes) + " probes, worst slack " +
                  double_to_string(report.worst_conclusion_slack),
              "float64");
}

}  // namespace

SuiteResult l46_suite(unsigned random_subspaces, unsigned probes, std::uint64_t seed) {
  Stopwatch watch;
  SuiteResult suite;
  suite.name = "l46";
  Rng rng(seed);

  {
    std::vector<StepFunction> basis;
    auto space = make_uniform_partition(2);
    basis.push_back(StepFunction::constant(space, Scalar(1)));
    basis.emplace_back(space, std::vector<Scalar>{Scalar(-1), Scalar(1)});
    run_lemma_case(suite, "span{1,R1}", Subspace(std::move(basis)), probes, rng.next());
  }
  for (unsigned i = 0; i < random_subspaces; ++i) {
    auto space = random_probability_space(rng, 8);
    auto y = random_exact_subspace(rng, space, 3);
    run_lemma_case(suite, "random#" + std::to_string(i), y, probes, rng.next());
  }

  suite.elapsed_sec = watch.seconds();
  return suite;
}

// ---------------------------------------------------------------------------
// t47: sampled stable phase retrieval, end to end
// ---------------------------------------------------------------------------

namespace {

PartitionFrame mercedes_partition_frame() {
  const double root3_2 = std::sqrt(3.0) / 2.0;
  std::vector<std::vector<Scalar>> vectors{
      {Scalar(1.0), Scalar(0.0)},
      {Scalar(-0.5), Scalar(root3_2)},
      {Scalar(-0.5), Scalar(-root3_2)},
  };
  return parseval_normalize(PartitionFrame(make_uniform_partition(3), std::move(vectors)));
}

void run_theorem_case(SuiteResult& suite, const std::string& tag, const PartitionFrame& frame,
                      const SamplingSet& s, unsigned probes, std::uint64_t seed) {
  const TheoremReport report = verify_pr_discretization_theorem(frame, s, probes, seed);
  suite.check("theorem_preconditions(" + tag + ")", report.preconditions_ok,
              report.preconditions_ok ? "ok" : report.precondition_failures.front(), "float64");
  suite.check("l2_chain(" + tag + ")", report.violations_l2 == 0,
              std::to_string(report.violations_l2) + " violations, worst slack " +
                  double_to_string(report.worst_slack_l2),
              "float64");
  suite.check("l1_chain(" + tag + ")", report.violations_l1 == 0,
              std::to_string(report.violations_l1) + " violations, worst slack " +
                  double_to_string(report.worst_slack_l1),
              "float64");
  suite.record("A(" + tag + ")", Scalar(report.A));
  suite.record("B(" + tag + ")", Scalar(report.B));
  suite.record("C(" + tag + ")", Scalar(report.C));
  suite.record("kappa(" + tag + ")", Scalar(report.kappa));
  suite.record("beta(" + tag + ")", Scalar(report.beta));
}

}  // namespace

SuiteResult t47_suite(unsigned probes, std::uint64_t seed) {
  Stopwatch watch;
  SuiteResult suite;
  suite.name = "t47";
  Rng rng(seed);

  {
    const PartitionFrame frame = mercedes_partition_frame();
    SamplingSet all_cells;
    const auto& bp = frame.space()->breakpoints();
    for (std::size_t c = 0; c < 3; ++c)
      all_cells.points.push_back((bp[c] + bp[c + 1]) / Scalar(2));
    run_theorem_case(suite, "mercedes", frame, all_cells, probes, rng.next());
  }
  {
    auto space = make_uniform_partition(16);
    std::vector<std::vector<Scalar>> vectors;
    Rng vec_rng = rng.split();
    for (std::size_t c = 0; c < 16; ++c) {
      std::vector<Scalar> v;
      for (int i = 0; i < 3; ++i) v.emplace_back(vec_rng.symmetric());
      vectors.push_back(std::move(v));
    }
    const PartitionFrame frame = parseval_normalize(PartitionFrame(space, std::move(vectors)));
    const SampledFrame sampled =
        sample_partition_frame(frame, SamplingStrategy::Greedy, 9, rng.next());
    run_theorem_case(suite, "seeded16", frame, sampled.points, probes, rng.next());
    suite.record("greedy_A(seeded16)", sampled.A);
    suite.record("greedy_B(seeded16)", sampled.B);
  }

  suite.elapsed_sec = watch.seconds();
  return suite;
}

// ---------------------------------------------------------------------------
// s5: the disjointly-supported truncation
// ---------------------------------------------------------------------------

SuiteResult s5_suite(unsigned K, const Scalar& p, const Rational& A_param, std::uint64_t seed) {
  Stopwatch watch;
  SuiteResult suite;
  suite.name = "s5";
  const Rational pr = p.is_exact() ? p.rat() : Rational(p.dbl());

  const InfiniteTruncation tr = infinite_truncation(p, K, A_param);
  suite.record("A_param", Scalar(A_param));
  suite.record("A_pow_p", tr.A_pow_p());

  suite.check("supports_pairwise_disjoint", tr.supports_exactly_disjoint(),
              "allocations tile, width tags at most 1",
              tr.A_pow_p().is_exact() ? "exact" : "float64");

  {
    bool all_ok = true;
    std::string detail;
    for (const auto& block : tr.blocks()) {
      const ScaledRational expected(1, pr / 2 - 2, block.N);
      const bool tag_ok = block.witness_norm_pth.cmp(expected) == 0;
      // independent route: coefficient^p x amplitude^p x width, with the
      // unit sign enumeration E|+-1|^p = 1
      std::vector<Scalar> e1(block.N, Scalar(0));
      e1[0] = Scalar(1);
      const Scalar unit = khintchine_expectation_pth_power(e1, p);
      const bool unit_ok = unit.is_exact() ? unit.rat() == 1
                                           : std::fabs(unit.dbl() - 1.0) < 1e-12;
      auto cp = block.witness_coefficient.pow_rational(pr);
      auto ap = block.inner->amplitude().pow_rational(pr);
      bool route_ok = false;
      if (cp && ap)
        route_ok = cp->times(*ap).times(block.inner->width()).cmp(expected) == 0;
      if (!(tag_ok && unit_ok && route_ok)) {
        all_ok = false;
        detail = "block N=" + std::to_string(block.N);
        break;
      }
      suite.plot_points.emplace_back("block_norm_pth", static_cast<double>(block.N),
                                     block.witness_norm_pth.to_double());
    }
    suite.check("block_witness_norms", all_ok, all_ok ? "||y_N||_p^p = N^(p/2-2)" : detail,
                "exact");
  }

  if (pr == 1) {
    bool ok = true;
    for (const auto& block : tr.blocks()) {
      const ScaledRational expected(1, Rational(-3, 2), block.N);
      ok = ok && block.witness_norm_pth.cmp(expected) == 0;
    }
    suite.check("p1_block_norm_is_N^-3/2", ok, "scale-tag comparison", "exact");
  }

  {
    const Scalar sum = tr.divergence_partial_sum();
    Scalar expected(0);
    for (unsigned N = 1; N <= K; ++N)
      expected += tr.A_pow_p() / Scalar(static_cast<long long>(N));
    const bool exact_case = sum.is_exact() && expected.is_exact();
    const bool ok = exact_case ? sum.rat() == expected.rat()
                               : std::fabs(sum.dbl() - expected.dbl()) < 1e-12;
    suite.record("divergence_partial_sum", sum);
    suite.check("divergence_partial_sum", ok, sum.to_string(),
                exact_case ? "exact" : "float64");
    double running = 0;
    for (unsigned N = 1; N <= K; ++N) {
      running += tr.A_pow_p().dbl() / static_cast<double>(N);
      suite.plot_points.emplace_back("divergence_partial_sums", static_cast<double>(N), running);
    }
  }

  // sanity: the parameter does not exceed the empirical Khintchine ceiling
  {
    const KhintchineReport kr = khintchine_empirical_constants(6, p, 150, seed);
    const bool ok = A_param.convert_to<double>() <= kr.A_hat.dbl() + 1e-9;
    suite.record("A_hat_reference", kr.A_hat);
    suite.check("A_param_below_empirical_ceiling", ok,
                rat_to_string(A_param) + " <= " + kr.A_hat.to_string(), "float64");
  }

  suite.elapsed_sec = watch.seconds();
  return suite;
}

}  // namespace normlab
