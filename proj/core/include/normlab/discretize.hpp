#pragma once

#include "normlab/constructions.hpp"
#include "normlab/subspace.hpp"

#include <cstdint>
#include <string>

namespace normlab {

/// M sampling points in the domain of a target space, multiplicity allowed.
struct SamplingSet {
  std::vector<Scalar> points;
  std::size_t size() const { return points.size(); }
};

/// Points t_j = (j-1) L / M as exact rationals (for exact L).
SamplingSet uniform_sampling(std::size_t M, const Scalar& L = Scalar(1));

/// (1/M) sum_j |f(t_j)|^p; exact for integer p on the exact backend.
Scalar empirical_p_sum(const StepFunction& f, const SamplingSet& s, const Scalar& p);

/// M x N matrix [x_j(t_k)].
std::vector<std::vector<Scalar>> evaluation_matrix(const Subspace& x, const SamplingSet& s);

/// True iff the evaluation matrix has rank N, i.e. the empirical p-sum is
/// positive on the whole subspace minus zero, for every p. Exact on the
/// rational backend (mod-p certificate with exact fallback).
bool validity_check(const Subspace& x, const SamplingSet& s, const Scalar& p);

enum class BoundKind { Exact, WitnessBound };

inline const char* bound_kind_name(BoundKind k) {
  return k == BoundKind::Exact ? "exact" : "witness-bound";
}

/// Two-sided discretization constants for one subspace and sampling set:
///   A ||f||_p^p <= (1/M) sum |f(t_j)|^p <= B ||f||_p^p on the subspace.
/// Exact kinds are true extrema; witness-bound kinds certify only the side
/// their witness proves (B_value a lower bound on the true B, A_value an
/// upper bound on the true A).
struct DiscretizationReport {
  Scalar p;
  Scalar A_value, B_value;
  BoundKind A_kind = BoundKind::Exact, B_kind = BoundKind::Exact;
  std::vector<Scalar> A_witness, B_witness;
  bool valid = false;
  std::size_t M = 0;
  std::string family;
};

/// p = 2: extreme generalized eigenvalues of the sampling Gram pencil,
/// assembled exactly where possible, solved by Cholesky reduction plus
/// cyclic Jacobi (off-diagonal mass below 1e-12).
DiscretizationReport disc_constants_p2(const Subspace& x, const SamplingSet& s);

/// p = 1, dim <= dim_bound: both sides of the ratio are piecewise-linear
/// gauges, so the extreme ratios are attained on rays where dim-1
/// independent defining forms vanish; enumerates all such rays exactly.
DiscretizationReport disc_constants_p1_exact(const Subspace& x, const SamplingSet& s,
                                             unsigned dim_bound = 6);

/// General p: multi-start projected subgradient search over the coefficient
/// sphere. Both kinds are witness bounds; deterministic under the seed.
DiscretizationReport disc_constants_search(const Subspace& x, const SamplingSet& s,
                                           const Scalar& p, unsigned budget, std::uint64_t seed);

/// sup ||f||_inf / ||f||_p over the subspace.
///   p = 1: exact, one LP per distinct evaluation-functional class, solved
///          by exact-rational simplex; validated symmetries cut the classes
///          to orbits and shrink each LP to its invariant subspace.
///   p = 2: exact form sqrt(psi^T G^-1 psi) maximized over cells.
///   else : search fallback with witness-bound semantics.
struct NikolskiiResult {
  Scalar value;
  std::vector<Scalar> witness;
  BoundKind kind = BoundKind::Exact;
  std::size_t witness_cell = 0;
};
NikolskiiResult nikolskii_constant(const Subspace& x, const Scalar& p,
                                   std::span<const IndexPermutationSymmetry> symmetries = {},
                                   unsigned budget = 400, std::uint64_t seed = 1);

/// Resource cap for the p = 1 LP route (classes x reduced tableau cells).
inline constexpr std::size_t kNikolskiiLpCellCap = 80'000'000;

/// Replays the adversarial step of the L1 family bound: reads off which bump
/// interval each block sample falls into, selects the basis index encoding
/// that tuple, and returns its exact empirical-to-norm ratio together with
/// the bound n N / ((1+eps) M) it must dominate.
struct AdversarialWitness {
  std::size_t j_star = 0;
  std::vector<unsigned> tuple;
  Scalar ratio;
  Rational bound;
  bool holds = false;
};
AdversarialWitness l1_adversarial_witness(const L1FamilyMeta& meta, const Subspace& x,
                                          const SamplingSet& s);

/// Sampling lower bound for the scaled Rademacher system: every valid set
/// has at least N points inside the support, each contributing
/// |y_1|^p = N^(1-p/2), so the plain sum dominates N^(2-p/2). All
/// comparisons are exact through the scale tags.
struct RademacherSamplingReport {
  std::size_t in_support_count = 0;
  bool valid = false;
  ScaledRational sum = ScaledRational::one(1);    // sum_j |y_1(t_j)|^p
  ScaledRational bound = ScaledRational::one(1);  // N^(2-p/2)
  bool holds = false;
  std::vector<Rational> annihilated;  // nonzero kernel coefficients when invalid
};
RademacherSamplingReport rademacher_sampling_bound(const RademacherSystem& sys,
                                                   const SamplingSet& s);

/// Checks the p > 2 obstruction: with l2-equivalence constants A <= B for a
/// normalized basis and the Khintchine upper constant B_p, the minimal beta
/// in ||f||_inf <= beta N^(1/p) ||f||_p must dominate (A/(B B_p)) N^(1/2-1/p).
struct BetaCheckReport {
  unsigned N = 0;
  Scalar p;
  Scalar beta_measured;
  Scalar lower_bound;
  bool holds = false;
  std::vector<Scalar> beta_witness;
};
BetaCheckReport p_gt_2_beta_check(const Subspace& x, const Scalar& p, const Scalar& A,
                                  const Scalar& B, const Scalar& B_p, unsigned budget,
                                  std::uint64_t seed,
                                  std::span<const std::vector<Rational>> warm_starts = {});

}  // namespace normlab
