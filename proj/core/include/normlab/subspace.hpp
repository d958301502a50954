#pragma once

#include "normlab/linalg.hpp"
#include "normlab/stepfn.hpp"

#include <span>

namespace normlab {

/// An ordered basis of step functions over one PartitionSpace. Construction
/// checks that the cell-value matrix has full column rank (exactly, in the
/// rational backend).
class Subspace {
 public:
  explicit Subspace(std::vector<StepFunction> basis);

  std::size_t dim() const { return basis_.size(); }
  const SpacePtr& space() const { return space_; }
  const StepFunction& basis(std::size_t j) const { return basis_[j]; }
  const std::vector<StepFunction>& basis() const { return basis_; }

  bool all_exact() const;

  /// Cell-value matrix, cells x dim.
  linalg::RatMat value_matrix_exact() const;
  linalg::Mat value_matrix_double() const;

  /// L2 Gram matrix of the basis (weighted by cell measures), exact when
  /// the subspace is exact.
  std::vector<std::vector<Scalar>> gram() const;

  StepFunction combination(std::span<const Scalar> coeffs) const;

 private:
  SpacePtr space_;
  std::vector<StepFunction> basis_;
};

/// The cell-wise combination sum_j coeffs[j] * basis_j.
StepFunction linear_combination(const Subspace& x, std::span<const Scalar> coeffs);

}  // namespace normlab
