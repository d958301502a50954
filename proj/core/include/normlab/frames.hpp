#pragma once

#include "normlab/discretize.hpp"
#include "normlab/subspace.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>

namespace normlab {

/// A finite weighted family of vectors in R^dim. Weight 1 per vector gives
/// the plain frame sums; sampled frames carry weight 1/M so frame sums match
/// the (1/M)-normalized empirical averages.
struct FiniteFrame {
  std::size_t dim = 0;
  std::vector<std::vector<Scalar>> vectors;
  std::vector<Scalar> weights;

  static FiniteFrame of(std::size_t dim, std::vector<std::vector<Scalar>> vectors,
                        std::optional<Scalar> uniform_weight = std::nullopt);
  std::size_t size() const { return vectors.size(); }
};

/// Optimal frame bounds: extreme eigenvalues of sum_j w_j x_j x_j^T by
/// Jacobi iteration. A = 0 flags a non-spanning family.
struct FrameBounds {
  Scalar A, B;
  bool is_frame = false;
};
FrameBounds frame_bounds(const FiniteFrame& f);

/// (<x, x_j>)_j.
std::vector<Scalar> analysis(const FiniteFrame& f, std::span<const Scalar> x);

/// Applies S^-1/2 so the frame operator becomes the identity.
FiniteFrame parseval_normalize(const FiniteFrame& f);

/// Real-case phase-retrieval decision: every subset or its complement spans.
/// Exhaustive over 2^M subsets, M <= 22; returns a failing subset otherwise.
struct ComplementPropertyResult {
  bool holds = false;
  std::optional<std::vector<std::size_t>> failing_subset;
};
ComplementPropertyResult complement_property(const FiniteFrame& f);

/// Stability constants for phase retrieval by the sign-split identity
///   || |Tx| - |Ty| ||^2 = min over subsets S of
///       sum_S w <x-y, x_j>^2 + sum_S^c w <x+y, x_j>^2,
/// so C_upper = (min_S [lmin(Phi_S) + lmin(Phi_S^c)])^(-1/2) is a certified
/// upper stability bound; C_lower is the best witness pair found by search.
struct PRStabilityBounds {
  Scalar C_lower, C_upper;
  bool does_pr = false;
  std::vector<Scalar> witness_x, witness_y;
  std::vector<std::size_t> witness_subset;
};
PRStabilityBounds pr_stability_bounds(const FiniteFrame& f, unsigned budget, std::uint64_t seed);

/// A continuous frame modeled on a finite probability partition: one vector
/// per cell, frame sums weighted by cell measure.
class PartitionFrame {
 public:
  PartitionFrame(SpacePtr space, std::vector<std::vector<Scalar>> vectors);

  const SpacePtr& space() const { return space_; }
  std::size_t dim() const { return dim_; }
  std::size_t cell_count() const { return vectors_.size(); }
  const std::vector<Scalar>& vector(std::size_t cell) const { return vectors_[cell]; }

  /// The step function t -> <x, x_t>.
  StepFunction analysis(std::span<const Scalar> x) const;

  linalg::Mat frame_operator_double() const;
  bool is_parseval(double tol = 1e-10) const;

  /// sup_t ||x_t||.
  double sup_vector_norm() const;

  /// The same family viewed as a weighted finite frame over the cells.
  FiniteFrame as_weighted_finite_frame() const;

 private:
  SpacePtr space_;
  std::size_t dim_;
  std::vector<std::vector<Scalar>> vectors_;
};

FrameBounds frame_bounds(const PartitionFrame& f);
PartitionFrame parseval_normalize(const PartitionFrame& f);
PRStabilityBounds pr_stability_bounds(const PartitionFrame& f, unsigned budget,
                                      std::uint64_t seed);

/// Forward correspondence: orthonormalize a basis of Y in L2 and read the
/// cell vectors x_t = (e_j(t))_j, a Parseval partition frame whose analysis
/// range is Y and whose sup ||x_t|| equals sup ||y||_inf / ||y||_2 on Y.
PartitionFrame subspace_to_frame(const Subspace& y);

/// Backward: the range subspace spanned by the coordinate functions.
Subspace frame_to_subspace(const PartitionFrame& f);

enum class SamplingStrategy { Uniform, Random, Greedy };

SamplingStrategy sampling_strategy_from_name(const std::string& name);

/// Samples cells by the strategy and returns the (1/sqrt(M))-normalized
/// finite frame together with its achieved bounds. A non-spanning selection
/// reports A = 0 rather than throwing. Greedy maximizes the minimum
/// eigenvalue of the running frame operator (a heuristic, no guarantee).
struct SampledFrame {
  SamplingSet points;
  FiniteFrame frame;
  Scalar A, B;
  double beta_sq = 0;  // sup ||x_t||^2 / N of the source frame, for scale reference
  bool spanning = false;
};
SampledFrame sample_partition_frame(const PartitionFrame& f, SamplingStrategy strategy,
                                    std::size_t M, std::uint64_t seed);

/// Proof trace of the L1-vs-L2 stability lemma on one unit probe.
struct LemmaTrace {
  double x_l1 = 0, x_l2 = 0;
  double gamma = 0;        // ||x||_1^(1/3)
  double prob_s = 0;       // measure of {|x| > gamma}
  double companion_ps = 0; // ||P_S y||_2 of the chosen companion
  std::size_t companion_index = 0;
  double fg_modulus_gap = 0;  // || |f| - |g| ||_2
  bool markov_ok = false, companion_ok = false, cube_ok = false;
  bool hypothesis_ok = false, conclusion_ok = false;
};

struct LemmaReport {
  bool preconditions_ok = false;
  std::string precondition_failure;
  double kappa = 0, beta = 0;
  std::size_t probes = 0, violations = 0;
  double worst_conclusion_slack = 0;  // min over probes of rhs - lhs
  std::vector<LemmaTrace> traces;     // a few leading probes plus any violations
};

/// Checks, per unit probe x in Y: ||x||_1 <= ||x||_2 and
/// ||x||_2 <= kappa^3 (1+beta^2)^(3/2) ||x||_1, emitting the full proof
/// trace (gamma, the Markov step, the companion, the cube inequality).
/// kappa must be a stability constant valid for every pair in Y (use
/// C_upper); beta the sup ||y||_inf / (sqrt(N) ||y||_2) bound.
LemmaReport verify_stabpr_lemma(const Subspace& y, const Scalar& kappa, const Scalar& beta,
                                unsigned probes, std::uint64_t seed, double tol = 1e-9);

struct TheoremReport {
  bool preconditions_ok = false;
  std::vector<std::string> precondition_failures;
  double A = 0, B = 0, C = 0, kappa = 0, beta = 0;
  std::map<std::string, std::string> provenance;
  double lower_const_2 = 0, upper_const_2 = 0;  // the L1 chain constants
  std::size_t probes = 0, violations_l2 = 0, violations_l1 = 0;
  double worst_slack_l2 = 0, worst_slack_l1 = 0;
  bool pass = false;
};

/// Full pipeline for the sampled stable-phase-retrieval discretization
/// statement: computes (A, B) of the sampled frame, certified C and kappa,
/// beta, then verifies both norm chains on random unit probes.
TheoremReport verify_pr_discretization_theorem(const PartitionFrame& f, const SamplingSet& s,
                                               unsigned probes, std::uint64_t seed,
                                               double tol = 1e-9);

}  // namespace normlab
