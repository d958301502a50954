#include "normlab/frames.hpp"
#include "normlab/rng.hpp"

#include <algorithm>
#include <cmath>

namespace normlab {

namespace {

// Orthonormal basis of Y as step functions, via the Cholesky factor of the
// Gram matrix (float backend).
std::vector<StepFunction> orthonormal_basis(const Subspace& y) {
  const std::size_t n = y.dim();
  const auto gram = y.gram();
  linalg::Mat g(n, linalg::Vec(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g[i][j] = gram[i][j].dbl();
  auto chol = linalg::cholesky_lower(g);
  if (!chol) throw std::invalid_argument("orthonormal_basis: rank-deficient basis");
  const linalg::Mat& l = *chol;

  // e_k = sum_j c_{jk} b_j with C = L^-T: solve L^T c_k = unit_k.
  std::vector<StepFunction> onb;
  onb.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    linalg::Vec c(n, 0.0);
    c[k] = 1.0;
    for (std::size_t i = n; i-- > 0;) {
      for (std::size_t r = i + 1; r < n; ++r) c[i] -= l[r][i] * c[r];
      c[i] /= l[i][i];
    }
    std::vector<Scalar> coeffs;
    coeffs.reserve(n);
    for (double v : c) coeffs.emplace_back(v);
    onb.push_back(y.combination(coeffs));
  }
  return onb;
}

double l2_norm_double(const StepFunction& f) {
  double s = 0;
  for (std::size_t c = 0; c < f.cell_count(); ++c) {
    const double v = f.value(c).dbl();
    s += f.space()->weight(c).dbl() * v * v;
  }
  return std::sqrt(s);
}

double l1_norm_double(const StepFunction& f) {
  double s = 0;
  for (std::size_t c = 0; c < f.cell_count(); ++c)
    s += f.space()->weight(c).dbl() * std::fabs(f.value(c).dbl());
  return s;
}

}  // namespace

LemmaReport verify_stabpr_lemma(const Subspace& y, const Scalar& kappa, const Scalar& beta,
                                unsigned probes, std::uint64_t seed, double tol) {
  LemmaReport report;
  report.kappa = kappa.dbl();
  report.beta = beta.dbl();

  if (!y.space()->is_probability()) {
    report.precondition_failure = "space is not a probability space";
    return report;
  }
  const std::size_t n = y.dim();
  const double sqrt_n = std::sqrt(static_cast<double>(n));

  // hypothesis check: sup ||v||_inf / ||v||_2 <= beta sqrt(N)
  const NikolskiiResult nik = nikolskii_constant(y, Scalar(2));
  if (nik.value.dbl() > report.beta * sqrt_n * (1 + 1e-9)) {
    report.precondition_failure = "beta fails: sup ||y||_inf/||y||_2 = " +
                                  double_to_string(nik.value.dbl()) + " exceeds beta sqrt(N)";
    return report;
  }
  // kappa = +inf is a legitimate (vacuous) stability constant for spaces
  // whose frame fails phase retrieval; the conclusion then holds trivially.
  if (!(report.kappa > 0) || std::isnan(report.kappa)) {
    report.precondition_failure = "kappa is not a positive stability constant";
    return report;
  }
  report.preconditions_ok = true;

  const auto onb = orthonormal_basis(y);
  const double factor = std::pow(report.kappa, 3) *
                        std::pow(1 + report.beta * report.beta, 1.5);

  Rng rng(seed);
  report.worst_conclusion_slack = std::numeric_limits<double>::infinity();
  for (unsigned probe = 0; probe < probes; ++probe) {
    // random unit combination of the ONB
    linalg::Vec g(n);
    for (auto& v : g) v = rng.symmetric();
    const double gn = linalg::norm2(g);
    if (gn < 1e-12) continue;
    StepFunction x = StepFunction::zero(y.space());
    for (std::size_t k = 0; k < n; ++k) x = x + onb[k].scaled(Scalar(g[k] / gn));
    const double l2 = l2_norm_double(x);
    if (l2 < 1e-12) continue;
    x = x.scaled(Scalar(1.0 / l2));

    LemmaTrace trace;
    trace.x_l2 = l2_norm_double(x);
    trace.x_l1 = l1_norm_double(x);
    trace.gamma = std::cbrt(trace.x_l1);

    double prob_s = 0;
    std::vector<bool> in_s(x.cell_count(), false);
    for (std::size_t c = 0; c < x.cell_count(); ++c) {
      if (std::fabs(x.value(c).dbl()) > trace.gamma) {
        in_s[c] = true;
        prob_s += x.space()->weight(c).dbl();
      }
    }
    trace.prob_s = prob_s;
    trace.markov_ok = prob_s <= std::pow(trace.x_l1, 2.0 / 3.0) + tol;

    // companion: the ONB element with the smallest mass on S
    double best_ps = std::numeric_limits<double>::infinity();
    std::size_t best_j = 0;
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0;
      for (std::size_t c = 0; c < x.cell_count(); ++c) {
        if (!in_s[c]) continue;
        const double v = onb[j].value(c).dbl();
        s += x.space()->weight(c).dbl() * v * v;
      }
      if (s < best_ps) {
        best_ps = s;
        best_j = j;
      }
    }
    trace.companion_index = best_j;
    trace.companion_ps = std::sqrt(best_ps);
    trace.companion_ok = trace.companion_ps <= std::sqrt(prob_s) * report.beta + tol;

    const StepFunction f = x + onb[best_j];
    const StepFunction h = x - onb[best_j];
    double gap_sq = 0;
    for (std::size_t c = 0; c < x.cell_count(); ++c) {
      const double d = std::fabs(f.value(c).dbl()) - std::fabs(h.value(c).dbl());
      gap_sq += x.space()->weight(c).dbl() * d * d;
    }
    trace.fg_modulus_gap = std::sqrt(gap_sq);
    trace.cube_ok = std::pow(trace.fg_modulus_gap, 3) / 8.0 <=
                    std::pow(1 + report.beta * report.beta, 1.5) * trace.x_l1 + tol;

    const double diff_norm = l2_norm_double(f - h);  // = 2 ||e_j||
    const double sum_norm = l2_norm_double(f + h);   // = 2 ||x||
    trace.hypothesis_ok =
        !std::isfinite(report.kappa) ||
        std::min(diff_norm, sum_norm) <= report.kappa * trace.fg_modulus_gap + tol;

    const double rhs = factor * trace.x_l1;
    trace.conclusion_ok = trace.x_l1 <= trace.x_l2 + tol && trace.x_l2 <= rhs + tol;
    report.worst_conclusion_slack =
        std::min(report.worst_conclusion_slack, rhs - trace.x_l2);

    const bool ok = trace.markov_ok && trace.companion_ok && trace.cube_ok &&
                    trace.hypothesis_ok && trace.conclusion_ok;
    if (!ok) ++report.violations;
    if (!ok || report.traces.size() < 4) report.traces.push_back(trace);
    ++report.probes;
  }
  return report;
}

TheoremReport verify_pr_discretization_theorem(const PartitionFrame& f, const SamplingSet& s,
                                               unsigned probes, std::uint64_t seed,
                                               double tol) {
  TheoremReport report;
  const std::size_t n = f.dim();

  if (!f.is_parseval(1e-8))
    report.precondition_failures.push_back("frame operator is not the identity");
  report.beta = f.sup_vector_norm() / std::sqrt(static_cast<double>(n));
  report.provenance["beta"] = "sup_t ||x_t|| / sqrt(N) over the partition cells";

  const PRStabilityBounds full_bounds = pr_stability_bounds(f, 600, seed ^ 0x9e37u);
  report.kappa = full_bounds.C_upper.dbl();
  report.provenance["kappa"] = "subset-scan certified upper stability bound of the source frame";
  if (!full_bounds.does_pr)
    report.precondition_failures.push_back("source frame fails the complement property");

  // sampled frame (1/sqrt(M) normalization via weights 1/M)
  FiniteFrame sampled;
  sampled.dim = n;
  for (const auto& t : s.points) sampled.vectors.push_back(f.vector(f.space()->locate(t)));
  sampled.weights.assign(s.size(), Scalar(Rational(1, static_cast<long long>(s.size()))));

  const FrameBounds bounds = frame_bounds(sampled);
  report.A = bounds.A.dbl();
  report.B = bounds.B.dbl();
  report.provenance["A"] = "smallest eigenvalue of the (1/M)-weighted sampled frame operator";
  report.provenance["B"] = "largest eigenvalue of the (1/M)-weighted sampled frame operator";
  if (!bounds.is_frame)
    report.precondition_failures.push_back("sampled family does not span (A = 0)");

  const PRStabilityBounds sampled_bounds = pr_stability_bounds(sampled, 600, seed ^ 0x85ebu);
  report.C = sampled_bounds.C_upper.dbl();
  report.provenance["C"] = "subset-scan certified upper stability bound of the sampled frame";
  if (!sampled_bounds.does_pr)
    report.precondition_failures.push_back("sampled frame fails the complement property");

  report.preconditions_ok = report.precondition_failures.empty();
  if (!report.preconditions_ok) return report;

  report.lower_const_2 = std::sqrt(report.A) * std::pow(report.B, -1.5) *
                         std::pow(report.C, -3.0) *
                         std::pow(1 + report.beta * report.beta / report.A, -1.5);
  report.upper_const_2 = std::sqrt(report.B) * std::pow(report.kappa, 3.0) *
                         std::pow(1 + report.beta * report.beta, 1.5);

  Rng rng(seed);
  report.worst_slack_l2 = std::numeric_limits<double>::infinity();
  report.worst_slack_l1 = std::numeric_limits<double>::infinity();
  for (unsigned probe = 0; probe < probes; ++probe) {
    linalg::Vec xv(n);
    for (auto& v : xv) v = rng.symmetric();
    const double xn = linalg::norm2(xv);
    if (xn < 1e-12) continue;
    std::vector<Scalar> x;
    x.reserve(n);
    for (double v : xv) x.emplace_back(v / xn);

    const StepFunction y = f.analysis(x);
    const double y2_sq = lp_norm_pth_power(y, Scalar(2)).dbl();
    const double y1 = l1_norm_double(y);
    const double emp2 = empirical_p_sum(y, s, Scalar(2)).dbl();
    const double emp1 = empirical_p_sum(y, s, Scalar(1)).dbl();

    const double lo2 = report.A * y2_sq, hi2 = report.B * y2_sq;
    const bool ok2 = lo2 <= emp2 + tol && emp2 <= hi2 + tol;
    report.worst_slack_l2 =
        std::min({report.worst_slack_l2, emp2 - lo2, hi2 - emp2});

    const double lo1 = report.lower_const_2 * y1, hi1 = report.upper_const_2 * y1;
    const bool ok1 = lo1 <= emp1 + tol && emp1 <= hi1 + tol;
    report.worst_slack_l1 =
        std::min({report.worst_slack_l1, emp1 - lo1, hi1 - emp1});

    if (!ok2) ++report.violations_l2;
    if (!ok1) ++report.violations_l1;
    ++report.probes;
  }
  report.pass = report.violations_l2 == 0 && report.violations_l1 == 0;
  return report;
}

}  // namespace normlab
