#pragma once

#include "normlab/scalar.hpp"

#include <cstdint>
#include <tuple>
#include <vector>

namespace normlab {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
  std::string backend;  // "exact" when the comparison was decided exactly
};

struct SuiteResult {
  std::string name;
  std::vector<CheckResult> checks;
  std::vector<std::pair<std::string, Scalar>> numbers;  // every reported figure
  std::vector<std::tuple<std::string, double, double>> plot_points;  // series, x, y
  double elapsed_sec = 0;

  bool all_pass() const;
  void check(const std::string& name, bool pass, const std::string& detail,
             const std::string& backend);
  void record(const std::string& name, const Scalar& value);
};

/// The perturbed-indicator family suite: perturbation norm, the two-sided
/// l1 frame inequality on seeded and pair probes, the exact sup-norm
/// constant against its (1-eps)^-1 N ceiling, adversarial witnesses over
/// seeded valid sampling sets, and the perfect uniform discretization.
SuiteResult t21_suite(unsigned n, unsigned inv_eps, unsigned probes, unsigned sampling_trials,
                      std::uint64_t seed);

/// Scaled Rademacher subspaces: substitution equivalence of the two norm
/// routes, the empirical-constant sup-norm bound, and the in-support
/// sampling lower bound, across the given sizes and exponents.
SuiteResult p32_suite(const std::vector<unsigned>& sizes, const std::vector<Scalar>& exponents,
                      unsigned probes, unsigned sampling_trials, std::uint64_t seed);

/// p = 4 obstruction: measured minimal beta against the
/// (A/(B B_p)) N^(1/2-1/p) floor, with monotone growth across sizes.
SuiteResult p33_suite(const std::vector<unsigned>& sizes, unsigned budget, std::uint64_t seed);

/// Sign-enumeration kernel identities.
SuiteResult khintchine_suite(unsigned probes, std::uint64_t seed);

/// L1-vs-L2 stability lemma on span{1, R_1} and seeded random subspaces.
SuiteResult l46_suite(unsigned random_subspaces, unsigned probes, std::uint64_t seed);

/// Full sampled phase-retrieval pipeline on the Parseval Mercedes partition
/// frame and a seeded 16-cell example.
SuiteResult t47_suite(unsigned probes, std::uint64_t seed);

/// Disjointly-supported truncation: exact support disjointness, block
/// witness norms, and the divergence partial sum.
SuiteResult s5_suite(unsigned K, const Scalar& p, const Rational& A_param, std::uint64_t seed);

}  // namespace normlab
