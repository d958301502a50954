#include "normlab/subspace.hpp"

#include <algorithm>

namespace normlab {

Subspace::Subspace(std::vector<StepFunction> basis) : basis_(std::move(basis)) {
  if (basis_.empty()) throw std::invalid_argument("Subspace: empty basis");
  space_ = basis_.front().space();
  for (const auto& f : basis_) {
    if (f.space().get() != space_.get() && !f.space()->same_as(*space_))
      throw std::invalid_argument("Subspace: basis functions live on different spaces");
  }
  if (basis_.size() > space_->cell_count())
    throw std::invalid_argument("Subspace: more basis functions than cells");

  if (all_exact()) {
    if (!linalg::has_full_column_rank(value_matrix_exact()))
      throw std::invalid_argument("Subspace: basis is rank deficient");
  } else {
    if (linalg::rank_double(value_matrix_double()) != basis_.size())
      throw std::invalid_argument("Subspace: basis is rank deficient");
  }
}

bool Subspace::all_exact() const {
  return std::all_of(basis_.begin(), basis_.end(),
                     [](const StepFunction& f) { return f.all_exact(); });
}

linalg::RatMat Subspace::value_matrix_exact() const {
  linalg::RatMat m(space_->cell_count(), linalg::RatVec(basis_.size()));
  for (std::size_t j = 0; j < basis_.size(); ++j)
    for (std::size_t i = 0; i < space_->cell_count(); ++i)
      m[i][j] = basis_[j].value(i).rat();
  return m;
}

linalg::Mat Subspace::value_matrix_double() const {
  linalg::Mat m(space_->cell_count(), linalg::Vec(basis_.size()));
  for (std::size_t j = 0; j < basis_.size(); ++j)
    for (std::size_t i = 0; i < space_->cell_count(); ++i)
      m[i][j] = basis_[j].value(i).dbl();
  return m;
}

std::vector<std::vector<Scalar>> Subspace::gram() const {
  const std::size_t n = dim();
  std::vector<std::vector<Scalar>> g(n, std::vector<Scalar>(n, Scalar(0)));
  for (std::size_t i = 0; i < space_->cell_count(); ++i) {
    const Scalar& w = space_->weight(i);
    for (std::size_t j = 0; j < n; ++j) {
      const Scalar& vj = basis_[j].value(i);
      if (vj.is_zero()) continue;
      for (std::size_t k = j; k < n; ++k) {
        const Scalar& vk = basis_[k].value(i);
        if (vk.is_zero()) continue;
        g[j][k] += w * vj * vk;
      }
    }
  }
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < j; ++k) g[j][k] = g[k][j];
  return g;
}

StepFunction Subspace::combination(std::span<const Scalar> coeffs) const {
  if (coeffs.size() != dim())
    throw std::invalid_argument("linear_combination: coefficient count must match dim");
  std::vector<Scalar> values(space_->cell_count(), Scalar(0));
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    if (coeffs[j].is_zero()) continue;
    const auto& column = basis_[j].values();
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (column[i].is_zero()) continue;
      values[i] += coeffs[j] * column[i];
    }
  }
  return StepFunction(space_, std::move(values));
}

StepFunction linear_combination(const Subspace& x, std::span<const Scalar> coeffs) {
  return x.combination(coeffs);
}

}  // namespace normlab
