#pragma once

#include "normlab/scalar.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace normlab {

/// A finite measure space given by weighted cells, optionally carrying
/// interval geometry: breakpoints 0 = b_0 < b_1 < ... < b_K partitioning
/// [0, b_K) into right-open cells [b_{i-1}, b_i). Immutable after
/// construction and safe to share across threads.
class PartitionSpace {
 public:
  /// Abstract weighted space without geometry. All weights must be positive.
  static std::shared_ptr<const PartitionSpace> from_weights(std::vector<Scalar> weights);

  /// Geometry-carrying space; weights are the exact cell widths.
  static std::shared_ptr<const PartitionSpace> from_breakpoints(std::vector<Scalar> breakpoints);

  std::size_t cell_count() const { return weights_.size(); }
  const Scalar& weight(std::size_t i) const { return weights_[i]; }
  const std::vector<Scalar>& weights() const { return weights_; }

  bool has_geometry() const { return breakpoints_.has_value(); }
  const std::vector<Scalar>& breakpoints() const;
  const Scalar& domain_length() const;

  const Scalar& total_mass() const { return total_; }
  bool is_probability() const { return probability_; }

  /// True when every weight (and breakpoint, if present) is exact.
  bool all_exact() const { return all_exact_; }

  /// Index of the cell [b_{i-1}, b_i) containing t, by binary search.
  /// Throws std::domain_error when t lies outside [0, domain_length).
  std::size_t locate(const Scalar& t) const;

  /// Cell-by-cell equality; two step functions are combinable iff their
  /// spaces are the same object or compare equal.
  bool same_as(const PartitionSpace& o) const;

 private:
  PartitionSpace() = default;

  std::vector<Scalar> weights_;
  std::optional<std::vector<Scalar>> breakpoints_;
  Scalar total_;
  bool probability_ = false;
  bool all_exact_ = true;
};

using SpacePtr = std::shared_ptr<const PartitionSpace>;

/// The geometry-carrying partition of [0, 1) into K cells of exact width 1/K.
SpacePtr make_uniform_partition(std::size_t K);

}  // namespace normlab
