#include "normlab/partition.hpp"

#include <algorithm>

namespace normlab {

std::shared_ptr<const PartitionSpace> PartitionSpace::from_weights(std::vector<Scalar> weights) {
  if (weights.empty()) throw std::invalid_argument("PartitionSpace: no cells");
  auto space = std::shared_ptr<PartitionSpace>(new PartitionSpace());
  Scalar total(0);
  for (const auto& w : weights) {
    if (w.sign() <= 0) throw std::invalid_argument("PartitionSpace: weights must be positive");
    if (!w.is_exact()) space->all_exact_ = false;
    total += w;
  }
  space->weights_ = std::move(weights);
  space->total_ = total;
  space->probability_ = (total == Scalar(1));
  return space;
}

std::shared_ptr<const PartitionSpace> PartitionSpace::from_breakpoints(
    std::vector<Scalar> breakpoints) {
  if (breakpoints.size() < 2) throw std::invalid_argument("PartitionSpace: need at least one cell");
  if (!breakpoints.front().is_zero())
    throw std::invalid_argument("PartitionSpace: breakpoints must start at 0");
  std::vector<Scalar> weights;
  weights.reserve(breakpoints.size() - 1);
  for (std::size_t i = 1; i < breakpoints.size(); ++i) {
    Scalar w = breakpoints[i] - breakpoints[i - 1];
    if (w.sign() <= 0)
      throw std::invalid_argument("PartitionSpace: breakpoints must be strictly increasing");
    weights.push_back(std::move(w));
  }
  auto space = std::const_pointer_cast<PartitionSpace>(
      std::static_pointer_cast<const PartitionSpace>(from_weights(std::move(weights))));
  for (const auto& b : breakpoints)
    if (!b.is_exact()) space->all_exact_ = false;
  space->breakpoints_ = std::move(breakpoints);
  return space;
}

const std::vector<Scalar>& PartitionSpace::breakpoints() const {
  if (!breakpoints_) throw std::logic_error("PartitionSpace: no geometry");
  return *breakpoints_;
}

const Scalar& PartitionSpace::domain_length() const { return breakpoints().back(); }

std::size_t PartitionSpace::locate(const Scalar& t) const {
  const auto& bp = breakpoints();
  if (t < bp.front() || t >= bp.back())
    throw std::domain_error("PartitionSpace::locate: point outside the domain");
  // Largest i with bp[i] <= t; the cell is [bp[i], bp[i+1]).
  std::size_t lo = 0, hi = bp.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (bp[mid] <= t)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

bool PartitionSpace::same_as(const PartitionSpace& o) const {
  if (this == &o) return true;
  if (cell_count() != o.cell_count()) return false;
  if (has_geometry() != o.has_geometry()) return false;
  for (std::size_t i = 0; i < cell_count(); ++i)
    if (weights_[i] != o.weights_[i]) return false;
  if (has_geometry()) {
    for (std::size_t i = 0; i < breakpoints_->size(); ++i)
      if ((*breakpoints_)[i] != (*o.breakpoints_)[i]) return false;
  }
  return true;
}

SpacePtr make_uniform_partition(std::size_t K) {
  if (K == 0) throw std::invalid_argument("make_uniform_partition: K must be positive");
  std::vector<Scalar> bp;
  bp.reserve(K + 1);
  for (std::size_t i = 0; i <= K; ++i)
    bp.emplace_back(Rational(static_cast<long long>(i), static_cast<long long>(K)));
  return PartitionSpace::from_breakpoints(std::move(bp));
}

}  // namespace normlab
