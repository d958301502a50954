#pragma once

#include "normlab/partition.hpp"

#include <span>
#include <utility>
#include <vector>

namespace normlab {

/// One value per cell of a PartitionSpace. Arithmetic requires both operands
/// to live on the same space; common_refinement lifts functions to a shared
/// grid first when their spaces differ.
class StepFunction {
 public:
  StepFunction(SpacePtr space, std::vector<Scalar> values);

  const SpacePtr& space() const { return space_; }
  std::size_t cell_count() const { return values_.size(); }
  const Scalar& value(std::size_t i) const { return values_[i]; }
  const std::vector<Scalar>& values() const { return values_; }

  bool all_exact() const;

  StepFunction operator+(const StepFunction& o) const;
  StepFunction operator-(const StepFunction& o) const;
  StepFunction scaled(const Scalar& c) const;
  StepFunction abs() const;

  static StepFunction constant(const SpacePtr& space, const Scalar& c);
  static StepFunction zero(const SpacePtr& space) { return constant(space, Scalar(0)); }

 private:
  SpacePtr space_;
  std::vector<Scalar> values_;
};

/// Point evaluation at t (right-open cells: a breakpoint evaluates to the
/// cell on its right). Exact when t and the breakpoints are exact.
Scalar evaluate(const StepFunction& f, const Scalar& t);

/// Integral of |f|^p over the space, exact for exact inputs and integer p >= 1.
Scalar lp_norm_pth_power(const StepFunction& f, const Scalar& p);

/// (integral of |f|^p)^(1/p); exact when both the p-th power sum and its
/// root are rational, float64 otherwise. Requires p >= 1.
Scalar lp_norm(const StepFunction& f, const Scalar& p);

/// Essential supremum over the partition: max of |values|. Exact on the
/// exact backend.
Scalar linf_norm(const StepFunction& f);

/// Coarsest common refinement of geometry-carrying functions over one
/// interval, with each input re-expressed on the refined grid.
std::pair<SpacePtr, std::vector<StepFunction>> common_refinement(
    std::span<const StepFunction> fs);

}  // namespace normlab
