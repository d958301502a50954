#pragma once

#include "normlab/constructions.hpp"

#include <memory>

namespace normlab {

/// One block of the disjointly-supported truncation: the dim-N scaled
/// Rademacher subspace carried onto [offset, offset + allocation) by the
/// affine substitution s = (A^p / N)(t - offset) and the amplitude rescale
/// A N^(-1/p). The substitution is an exact isometry of the p-norm, so block
/// norms resolve through the scale tags.
struct TruncationBlock {
  unsigned N = 0;
  Scalar offset;      // exact when A^p is rational
  Scalar allocation;  // A^-p * N
  std::shared_ptr<const RademacherSystem> inner;

  /// Scale applied to y_1 so the block witness has ||.||_p^p = N^(p/2-2).
  ScaledRational witness_coefficient = ScaledRational::one(1);

  /// ||y_N||_p^p of the designated witness, symbolically N^(p/2-2).
  ScaledRational witness_norm_pth = ScaledRational::one(1);

  /// Support width inside the allocation, N^(p/2) A^-p <= allocation.
  double support_width_dbl = 0;
};

class InfiniteTruncation {
 public:
  InfiniteTruncation(Scalar p, unsigned K, Rational A_param);

  const Scalar& p() const { return p_; }
  unsigned K() const { return K_; }
  const Rational& A_param() const { return A_param_; }
  const Scalar& A_pow_p() const { return A_pow_p_; }
  const std::vector<TruncationBlock>& blocks() const { return blocks_; }

  /// Allocations are consecutive right-open intervals, so supports are
  /// pairwise disjoint; exact when offsets are exact.
  bool supports_exactly_disjoint() const;

  /// sum_{N<=K} A^p / N, the truncated divergence lower bound; exact when
  /// A^p is rational.
  Scalar divergence_partial_sum() const;

  /// Float64 evaluation of the block-N witness at a global point t.
  double evaluate_block_witness(unsigned N, double t) const;

 private:
  Scalar p_;
  unsigned K_;
  Rational A_param_;
  Scalar A_pow_p_;
  std::vector<TruncationBlock> blocks_;
};

/// Builds the K-block truncation for 1 <= p < 2. The Khintchine constant
/// the construction scales by is an explicit parameter; pick a witness-backed
/// rational (see khintchine_empirical_constants) to keep sums exact.
InfiniteTruncation infinite_truncation(const Scalar& p, unsigned K, const Rational& A_param);

}  // namespace normlab
