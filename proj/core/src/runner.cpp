#include "normlab/runner.hpp"

#include "normlab/discretize.hpp"
#include "normlab/frames.hpp"
#include "normlab/parallel.hpp"
#include "normlab/rng.hpp"
#include "normlab/serialization.hpp"
#include "normlab/truncation.hpp"

#include <cstdlib>
#include <sstream>

namespace normlab {

namespace {

ExperimentConfig with_env_backend(ExperimentConfig cfg) {
  if (const char* env = std::getenv("NORMLAB_BACKEND")) {
    const std::string value(env);
    if (value != "exact" && value != "float64")
      throw config_error("NORMLAB_BACKEND must be exact or float64");
    cfg.backend = value;
  }
  return cfg;
}

Subspace to_float64(const Subspace& x) {
  std::vector<Scalar> bp;
  for (const auto& b : x.space()->breakpoints()) bp.emplace_back(b.dbl());
  auto space = PartitionSpace::from_breakpoints(std::move(bp));
  std::vector<StepFunction> basis;
  basis.reserve(x.dim());
  for (std::size_t j = 0; j < x.dim(); ++j) {
    std::vector<Scalar> values;
    values.reserve(x.space()->cell_count());
    for (std::size_t c = 0; c < x.space()->cell_count(); ++c)
      values.emplace_back(x.basis(j).value(c).dbl());
    basis.emplace_back(space, std::move(values));
  }
  return Subspace(std::move(basis));
}

struct FamilyInstance {
  Subspace subspace;
  std::optional<L1FamilyMeta> l1_meta;
  std::string label;
};

FamilyInstance build_family(const ExperimentConfig& cfg) {
  const std::string family = cfg.family.value_or("l1");
  if (family == "l1") {
    auto fam = l1_basis(cfg.n.value_or(2), cfg.inv_eps.value_or(2));
    std::ostringstream label;
    label << "l1(n=" << cfg.n.value_or(2) << ",inv_eps=" << cfg.inv_eps.value_or(2) << ")";
    return {std::move(fam.subspace), std::move(fam.meta), label.str()};
  }
  if (family == "rademacher") {
    const unsigned N = cfg.N.value_or(4);
    RademacherSystem sys(N, cfg.p.value_or(Scalar(1)));
    return {sys.normalized_system(), std::nullopt, "rademacher(N=" + std::to_string(N) + ")"};
  }
  throw config_error("command needs family = l1 or rademacher");
}

SamplingSet build_sampling(const ExperimentConfig& cfg, const Subspace& x, Rng& rng) {
  const std::string strategy = cfg.strategy.value_or("uniform");
  const std::size_t M = cfg.M.value_or(x.space()->cell_count());
  if (strategy == "uniform") return uniform_sampling(M, x.space()->domain_length());
  if (strategy == "random") {
    SamplingSet s;
    for (std::size_t j = 0; j < M; ++j)
      s.points.push_back(Scalar(rng.unit_rational(1 << 20)) * x.space()->domain_length());
    return s;
  }
  throw config_error("discretize supports strategy = uniform or random");
}

SuiteResult construct_suite(const ExperimentConfig& cfg, std::uint64_t seed,
                            std::vector<std::pair<std::string, std::string>>& documents) {
  SuiteResult suite;
  suite.name = "construct";
  const std::string family = cfg.family.value_or("l1");
  if (family == "l1") {
    auto fam = l1_basis(cfg.n.value_or(2), cfg.inv_eps.value_or(2));
    suite.record("N", Scalar(static_cast<long long>(fam.meta.N)));
    suite.record("grid_cells", Scalar(static_cast<long long>(fam.meta.grid_cells)));
    suite.record("eps", Scalar(fam.meta.eps));
    suite.record("perturbation_bound", l1_perturbation_bound(fam.meta, fam.subspace));
    suite.check("construction", true, fam.meta.N ? "built" : "", "exact");
    documents.emplace_back("first_basis_function",
                           stepfn_to_json(fam.subspace.basis(0)));
  } else if (family == "rademacher") {
    const unsigned N = cfg.N.value_or(4);
    const Scalar p = cfg.p.value_or(Scalar(1));
    RademacherSystem sys(N, p);
    suite.record("N", Scalar(static_cast<long long>(N)));
    suite.record("amplitude", Scalar(sys.amplitude().to_double()));
    suite.record("width", Scalar(sys.width().to_double()));
    suite.check("construction", true, "built", "exact");
    documents.emplace_back("first_basis_function",
                           stepfn_to_json(sys.normalized_system().basis(0)));
  } else if (family == "infinite") {
    const Scalar p = cfg.p.value_or(Scalar(1));
    const Rational a = cfg.A_param.value_or(Rational(1, 2));
    InfiniteTruncation tr(p, cfg.K.value_or(5), a);
    suite.record("K", Scalar(static_cast<long long>(tr.K())));
    suite.record("divergence_partial_sum", tr.divergence_partial_sum());
    suite.check("supports_disjoint", tr.supports_exactly_disjoint(), "", "exact");
    for (const auto& block : tr.blocks())
      suite.plot_points.emplace_back("block_offsets", static_cast<double>(block.N),
                                     block.offset.dbl());
  } else {
    throw config_error("construct needs family = l1, rademacher, or infinite");
  }
  (void)seed;
  return suite;
}

SuiteResult discretize_suite(const ExperimentConfig& cfg, std::uint64_t seed,
                             std::vector<std::pair<std::string, std::string>>& documents) {
  SuiteResult suite;
  suite.name = "discretize";
  Rng rng(seed);
  FamilyInstance fam = build_family(cfg);
  const bool float_backend = cfg.backend.value_or("exact") == "float64";
  const Subspace x = float_backend ? to_float64(fam.subspace) : fam.subspace;
  const SamplingSet s = build_sampling(cfg, x, rng);
  const Scalar p = cfg.p.value_or(Scalar(2));

  DiscretizationReport report;
  if (!float_backend && p == Scalar(1) && x.dim() <= 6)
    report = disc_constants_p1_exact(x, s);
  else if (p == Scalar(2))
    report = disc_constants_p2(x, s);
  else
    report = disc_constants_search(x, s, p, cfg.budget_or(400), rng.next());
  report.family = fam.label;

  suite.record("A", report.A_value);
  suite.record("B", report.B_value);
  suite.record("M", Scalar(static_cast<long long>(report.M)));
  suite.check("discretization_valid", report.valid,
              report.valid ? "sampling set valid" : "rank-deficient sampling set",
              float_backend ? "float64" : "exact");
  documents.emplace_back("discretization_report", report_to_json(report));
  return suite;
}

SuiteResult nikolskii_suite_cmd(const ExperimentConfig& cfg) {
  SuiteResult suite;
  suite.name = "nikolskii";
  FamilyInstance fam = build_family(cfg);
  const Scalar p = cfg.p.value_or(Scalar(1));

  std::vector<IndexPermutationSymmetry> symmetries;
  if (fam.l1_meta) symmetries = l1_family_symmetries(*fam.l1_meta);
  const NikolskiiResult nik =
      nikolskii_constant(fam.subspace, p, symmetries, cfg.budget_or(400), cfg.seed_or(1));

  suite.record("N", Scalar(static_cast<long long>(fam.subspace.dim())));
  suite.record("value", nik.value);
  if (fam.l1_meta && fam.l1_meta->inv_eps > 1) {
    const Rational ceiling =
        Rational(static_cast<long long>(fam.l1_meta->N) * fam.l1_meta->inv_eps,
                 fam.l1_meta->inv_eps - 1);
    suite.record("bound", Scalar(ceiling));
    suite.check("value_below_bound",
                nik.value.is_exact() ? nik.value.rat() <= ceiling
                                     : nik.value.dbl() <= ceiling.convert_to<double>(),
                nik.value.to_string() + " <= " + rat_to_string(ceiling),
                nik.kind == BoundKind::Exact ? "exact" : "float64");
  } else {
    suite.check("computed", true, nik.value.to_string(), bound_kind_name(nik.kind));
  }
  return suite;
}

SuiteResult witness_suite_cmd(const ExperimentConfig& cfg, std::uint64_t seed) {
  SuiteResult suite;
  suite.name = "witness";
  Rng rng(seed);
  auto fam = l1_basis(cfg.n.value_or(2), cfg.inv_eps.value_or(2));
  SamplingSet s;
  for (std::size_t j = 1; j <= fam.meta.N; ++j) {
    const Rational at(static_cast<long long>(rng.range(0, 996)), 997);
    s.points.emplace_back(Rational(static_cast<long long>(j - 1),
                                   static_cast<long long>(fam.meta.N)) +
                          at / Rational(static_cast<long long>(fam.meta.N)));
  }
  const AdversarialWitness w = l1_adversarial_witness(fam.meta, fam.subspace, s);
  suite.record("j_star", Scalar(static_cast<long long>(w.j_star)));
  suite.record("ratio", w.ratio);
  suite.record("bound", Scalar(w.bound));
  suite.check("witness_ratio_bound", w.holds,
              w.ratio.to_string() + " >= " + rat_to_string(w.bound), "exact");
  return suite;
}

SuiteResult frames_suite_cmd(const ExperimentConfig& cfg, std::uint64_t seed) {
  SuiteResult suite;
  suite.name = "frames";
  Rng rng(seed);
  const std::size_t n = cfg.N.value_or(3);
  const std::size_t m = cfg.M.value_or(7);
  std::vector<std::vector<Scalar>> vectors;
  for (std::size_t k = 0; k < m; ++k) {
    std::vector<Scalar> v;
    for (std::size_t i = 0; i < n; ++i) v.emplace_back(rng.symmetric());
    vectors.push_back(std::move(v));
  }
  FiniteFrame frame = FiniteFrame::of(n, std::move(vectors));
  const FrameBounds bounds = frame_bounds(frame);
  suite.record("A", bounds.A);
  suite.record("B", bounds.B);
  const auto cp = complement_property(frame);
  const PRStabilityBounds stab = pr_stability_bounds(frame, cfg.budget_or(400), rng.next());
  suite.record("C_lower", stab.C_lower);
  suite.record("C_upper", stab.C_upper);
  suite.check("is_frame", bounds.is_frame, "", "float64");
  suite.check("stability_bounds_ordered",
              !stab.does_pr || stab.C_lower.dbl() <= stab.C_upper.dbl() * (1 + 1e-9),
              "C_lower <= C_upper", "float64");
  suite.check("complement_property_decided", true, cp.holds ? "holds" : "fails", "float64");
  return suite;
}

std::vector<SuiteResult> reproduce_suites(const ExperimentConfig& cfg, std::uint64_t seed) {
  const std::string target = cfg.target.value_or("");
  const unsigned probes = cfg.budget_or(200);
  std::vector<SuiteResult> suites;
  if (target == "t21") {
    if (cfg.n && cfg.inv_eps) {
      suites.push_back(t21_suite(*cfg.n, *cfg.inv_eps, probes, 5, seed));
    } else {
      for (unsigned n : {1u, 2u})
        for (unsigned inv_eps : {1u, 2u})
          suites.push_back(t21_suite(n, inv_eps, probes, 5, seed));
    }
  } else if (target == "p32") {
    std::vector<unsigned> sizes{2, 4, 8};
    if (cfg.N) sizes = {*cfg.N};
    std::vector<Scalar> ps{Scalar(1), Scalar(Rational(3, 2))};
    if (cfg.p) ps = {*cfg.p};
    suites.push_back(p32_suite(sizes, ps, std::min(probes, 100u), 5, seed));
  } else if (target == "p33") {
    std::vector<unsigned> sizes{2, 4, 8, 16};
    if (cfg.N) sizes = {*cfg.N};
    suites.push_back(p33_suite(sizes, cfg.budget_or(300), seed));
  } else if (target == "l46") {
    suites.push_back(l46_suite(2, std::min(probes, 300u), seed));
  } else if (target == "t47") {
    suites.push_back(t47_suite(std::min(probes, 300u), seed));
  } else if (target == "s5") {
    suites.push_back(s5_suite(cfg.K.value_or(5), cfg.p.value_or(Scalar(1)),
                              cfg.A_param.value_or(Rational(1, 2)), seed));
  } else {
    throw config_error("reproduce needs target in {t21, p32, p33, l46, t47, s5}");
  }
  return suites;
}

}  // namespace

RunOutcome run(const ExperimentConfig& raw_config) {
  const ExperimentConfig cfg = with_env_backend(raw_config);
  if (cfg.threads) set_thread_count(*cfg.threads);
  const std::uint64_t seed = cfg.seed_or(1);

  std::vector<SuiteResult> suites;
  std::vector<std::pair<std::string, std::string>> documents;

  if (cfg.command == "construct") {
    suites.push_back(construct_suite(cfg, seed, documents));
  } else if (cfg.command == "discretize") {
    suites.push_back(discretize_suite(cfg, seed, documents));
  } else if (cfg.command == "nikolskii") {
    suites.push_back(nikolskii_suite_cmd(cfg));
  } else if (cfg.command == "witness") {
    suites.push_back(witness_suite_cmd(cfg, seed));
  } else if (cfg.command == "frames") {
    suites.push_back(frames_suite_cmd(cfg, seed));
  } else if (cfg.command == "phase") {
    suites.push_back(t47_suite(cfg.budget_or(200), seed));
  } else if (cfg.command == "reproduce") {
    suites = reproduce_suites(cfg, seed);
  } else {
    throw config_error("unknown command '" + cfg.command + "'");
  }

  RunOutcome outcome;
  outcome.bundle = bundle_with_documents(suites, cfg, documents);
  bool all_pass = true;
  for (const auto& s : suites) all_pass = all_pass && s.all_pass();
  outcome.exit_code = all_pass ? kExitPass : kExitAssertionFailure;
  outcome.message = all_pass ? "all checks passed" : "at least one check failed";
  return outcome;
}

}  // namespace normlab
