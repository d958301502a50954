#pragma once

#include "normlab/scaled_rational.hpp"
#include "normlab/subspace.hpp"

#include <cstdint>
#include <optional>
#include <utility>

namespace normlab {

/// Combinatorial data of the perturbed-indicator family in L1[0,1):
/// N = n + (inv_eps*n)^n basis functions on the uniform grid of
/// inv_eps*n*N cells. Blocks j carry the indicator N*1_[(j-1)/N, j/N);
/// basis functions with j > n additionally carry one bump cell inside each
/// of the first n blocks, selected by a tuple over {1..inv_eps*n}^n.
///
/// The tuple enumeration is pinned: tuple_of_index(j) is the little-endian
/// base-(inv_eps*n) expansion of j-n-1, one-based per digit, so indices are
/// reproducible across runs and implementations.
struct L1FamilyMeta {
  unsigned n = 0;
  unsigned inv_eps = 0;
  std::size_t N = 0;           // n + alphabet^n
  std::size_t alphabet = 0;    // inv_eps * n
  std::size_t grid_cells = 0;  // inv_eps * n * N
  Rational eps;                // 1 / inv_eps

  std::vector<unsigned> tuple_of_index(std::size_t j) const;
  std::optional<std::size_t> index_of_tuple(const std::vector<unsigned>& tuple) const;

  /// Grid cell of bump interval I_k(i), k in 1..n, i in 1..alphabet.
  std::size_t bump_cell(unsigned k, unsigned i) const;

  /// Grid cell range [begin, end) of the main block of basis index j (1-based).
  std::pair<std::size_t, std::size_t> block_cells(std::size_t j) const;

  /// Sorted grid cells supporting basis index j (1-based).
  std::vector<std::size_t> support_cells(std::size_t j) const;

  /// Cells per block: alphabet for blocks 1..n (their bump partition),
  /// and inv_eps * n for every block.
  std::size_t cells_per_block() const { return alphabet; }
};

struct L1Family {
  Subspace subspace;
  L1FamilyMeta meta;
};

/// Builds the family for the given n >= 1 and integer 1/eps >= 1. All
/// arithmetic is exact. Throws resource_error when N would exceed the bound.
L1Family l1_basis(unsigned n, unsigned inv_eps, std::size_t n_bound = 5000);

/// max_j || x_j - N 1_block_j ||_1, computed exactly; equals eps by
/// construction (and 0 when every j <= n, which cannot happen here).
Scalar l1_perturbation_bound(const L1FamilyMeta& meta, const Subspace& x);

/// Exact L1 norm of sum_j a_j x_j from a sparse coefficient list, walking
/// only the touched cells.
Rational l1_combination_norm(const L1FamilyMeta& meta,
                             const std::vector<std::pair<std::size_t, Rational>>& coeffs);

/// A permutation pair (basis indices, cells) asserting that relabelling
/// both leaves the weighted cell-value matrix unchanged. Consumers validate
/// the claim exactly before using it.
struct IndexPermutationSymmetry {
  std::vector<std::size_t> basis_perm;  // j -> basis_perm[j]
  std::vector<std::size_t> cell_perm;   // i -> cell_perm[i]
};

/// Generators of the family's symmetry group: alphabet transpositions per
/// coordinate and coordinate swaps, each lifted to basis and cell indices.
std::vector<IndexPermutationSymmetry> l1_family_symmetries(const L1FamilyMeta& meta);

/// The m-th Rademacher function as the 2^m-cell step function with value
/// (-1)^j on [(j-1)/2^m, j/2^m), exact. Requires 1 <= m <= 30.
StepFunction rademacher(unsigned m);

/// The scaled Rademacher system: y_j(t) = N^(1/p-1/2) R_j(N^(1-p/2) t),
/// stored as the normalized system (R_j) on the 2^N dyadic grid plus the
/// amplitude and width scale tags, so norm and evaluation queries about the
/// y_j resolve exactly whenever the data permit.
class RademacherSystem {
 public:
  RademacherSystem(unsigned N, Scalar p);

  unsigned size() const { return N_; }
  const Scalar& p() const { return p_; }
  const Subspace& normalized_system() const { return *system_; }
  const ScaledRational& amplitude() const { return amplitude_; }  // N^(1/p-1/2)
  const ScaledRational& width() const { return width_; }          // N^(p/2-1)

  /// ||sum a_j y_j||_p^p = ||sum a_j R_j||_p^p, via sign-pattern enumeration.
  Scalar y_lp_norm_pth_power(std::span<const Scalar> a) const;

  /// ||sum a_j y_j||_inf = amplitude * sum |a_j|, exact for rational a.
  ScaledRational y_linf_norm(std::span<const Rational> a) const;

  struct SignedMagnitude {
    int sign = 0;  // 0 encodes the zero value (outside the support)
    ScaledRational magnitude;
  };

  /// Exact evaluation of y_j at rational t >= 0 (zero outside the support).
  SignedMagnitude y_evaluate(unsigned j, const Rational& t) const;

  /// t inside the support [0, width)?
  bool in_support(const Rational& t) const;

  /// Sign pattern (R_j(N^(1-p/2) t))_j at an in-support rational t.
  std::vector<int> sign_pattern_at(const Rational& t) const;

 private:
  std::size_t dyadic_cell_of(const Rational& t) const;

  unsigned N_;
  Scalar p_;
  std::shared_ptr<const Subspace> system_;
  ScaledRational amplitude_;
  ScaledRational width_;
};

RademacherSystem rademacher_subspace(unsigned N, const Scalar& p);

}  // namespace normlab
