#include "normlab/stepfn.hpp"

#include <algorithm>
#include <cmath>

namespace normlab {

StepFunction::StepFunction(SpacePtr space, std::vector<Scalar> values)
    : space_(std::move(space)), values_(std::move(values)) {
  if (!space_) throw std::invalid_argument("StepFunction: null space");
  if (values_.size() != space_->cell_count())
    throw std::invalid_argument("StepFunction: one value per cell required");
}

bool StepFunction::all_exact() const {
  if (!space_->all_exact()) return false;
  return std::all_of(values_.begin(), values_.end(),
                     [](const Scalar& v) { return v.is_exact(); });
}

namespace {

void require_same_space(const StepFunction& a, const StepFunction& b) {
  if (a.space().get() == b.space().get()) return;
  if (!a.space()->same_as(*b.space()))
    throw std::invalid_argument("StepFunction: operands live on different spaces");
}

}  // namespace

StepFunction StepFunction::operator+(const StepFunction& o) const {
  require_same_space(*this, o);
  std::vector<Scalar> out(values_);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += o.values_[i];
  return StepFunction(space_, std::move(out));
}

StepFunction StepFunction::operator-(const StepFunction& o) const {
  require_same_space(*this, o);
  std::vector<Scalar> out(values_);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= o.values_[i];
  return StepFunction(space_, std::move(out));
}

StepFunction StepFunction::scaled(const Scalar& c) const {
  std::vector<Scalar> out(values_);
  for (auto& v : out) v *= c;
  return StepFunction(space_, std::move(out));
}

StepFunction StepFunction::abs() const {
  std::vector<Scalar> out;
  out.reserve(values_.size());
  for (const auto& v : values_) out.push_back(v.abs());
  return StepFunction(space_, std::move(out));
}

StepFunction StepFunction::constant(const SpacePtr& space, const Scalar& c) {
  return StepFunction(space, std::vector<Scalar>(space->cell_count(), c));
}

Scalar evaluate(const StepFunction& f, const Scalar& t) {
  return f.value(f.space()->locate(t));
}

Scalar lp_norm_pth_power(const StepFunction& f, const Scalar& p) {
  if (p < Scalar(1)) throw std::invalid_argument("lp_norm: p must be at least 1");
  const auto& space = *f.space();
  if (p.is_exact_integer() && f.all_exact()) {
    const long long k = p.as_int();
    Rational sum(0);
    for (std::size_t i = 0; i < f.cell_count(); ++i) {
      const Rational& v = f.value(i).rat();
      if (v.is_zero()) continue;
      Rational term = rat_pow_int(boost::multiprecision::abs(v), k);
      term *= space.weight(i).rat();
      sum += term;
    }
    return Scalar(std::move(sum));
  }
  const double pd = p.dbl();
  double sum = 0;
  for (std::size_t i = 0; i < f.cell_count(); ++i) {
    const double v = std::fabs(f.value(i).dbl());
    if (v == 0) continue;
    sum += space.weight(i).dbl() * std::pow(v, pd);
  }
  return Scalar(sum);
}

Scalar lp_norm(const StepFunction& f, const Scalar& p) {
  Scalar power = lp_norm_pth_power(f, p);
  if (power.is_exact()) {
    const long long k = p.as_int();  // exact power implies integer p
    if (k == 1) return power;
    if (auto root = rat_root_exact(power.rat(), static_cast<unsigned>(k))) {
      return Scalar(std::move(*root));
    }
    return Scalar(std::pow(power.dbl(), 1.0 / static_cast<double>(k)));
  }
  return Scalar(std::pow(power.dbl(), 1.0 / p.dbl()));
}

Scalar linf_norm(const StepFunction& f) {
  Scalar best(0);
  for (const auto& v : f.values()) {
    Scalar a = v.abs();
    if (a > best) best = std::move(a);
  }
  return best;
}

std::pair<SpacePtr, std::vector<StepFunction>> common_refinement(
    std::span<const StepFunction> fs) {
  if (fs.empty()) throw std::invalid_argument("common_refinement: no inputs");
  for (const auto& f : fs) {
    if (!f.space()->has_geometry())
      throw std::invalid_argument("common_refinement: inputs must carry geometry");
    if (f.space()->domain_length() != fs.front().space()->domain_length())
      throw std::invalid_argument("common_refinement: mismatched domains");
  }

  std::vector<Scalar> merged;
  for (const auto& f : fs)
    for (const auto& b : f.space()->breakpoints()) merged.push_back(b);
  std::sort(merged.begin(), merged.end());
  merged.erase(std::unique(merged.begin(), merged.end(),
                           [](const Scalar& a, const Scalar& b) { return a == b; }),
               merged.end());

  auto refined = PartitionSpace::from_breakpoints(merged);

  std::vector<StepFunction> lifted;
  lifted.reserve(fs.size());
  for (const auto& f : fs) {
    const auto& coarse = f.space()->breakpoints();
    std::vector<Scalar> values;
    values.reserve(refined->cell_count());
    std::size_t src = 0;
    for (std::size_t i = 0; i + 1 < merged.size(); ++i) {
      while (src + 2 < coarse.size() && coarse[src + 1] <= merged[i]) ++src;
      values.push_back(f.value(src));
    }
    lifted.emplace_back(refined, std::move(values));
  }
  return {refined, std::move(lifted)};
}

}  // namespace normlab
