#include "normlab/truncation.hpp"

#include <cmath>

namespace normlab {

namespace {

Rational exact_rational_of_scalar(const Scalar& p) {
  return p.is_exact() ? p.rat() : Rational(p.dbl());
}

// A^p as a Scalar, exact whenever the rational power resolves.
Scalar rational_power(const Rational& base, const Rational& expo) {
  const long long num = numerator(expo).convert_to<long long>();
  const unsigned den = denominator(expo).convert_to<unsigned>();
  if (auto exact = rat_root_exact(rat_pow_int(base, num), den)) return Scalar(std::move(*exact));
  return Scalar(std::pow(base.convert_to<double>(), expo.convert_to<double>()));
}

}  // namespace

InfiniteTruncation::InfiniteTruncation(Scalar p, unsigned K, Rational A_param)
    : p_(std::move(p)), K_(K), A_param_(std::move(A_param)) {
  const Rational pr = exact_rational_of_scalar(p_);
  if (pr < 1 || pr >= 2)
    throw std::invalid_argument("infinite_truncation: p must lie in [1, 2)");
  if (K_ < 1 || K_ > 16) throw resource_error("infinite_truncation: K must lie in [1, 16]");
  if (A_param_ <= 0) throw std::invalid_argument("infinite_truncation: A must be positive");

  A_pow_p_ = rational_power(A_param_, pr);

  Scalar offset(0);
  blocks_.reserve(K_);
  for (unsigned N = 1; N <= K_; ++N) {
    TruncationBlock block;
    block.N = N;
    block.offset = offset;
    block.allocation = Scalar(static_cast<long long>(N)) / A_pow_p_;
    block.inner = std::make_shared<const RademacherSystem>(N, p_);

    // witness x_N = N^(1/2 - 2/p) y_1, so ||x_N||_p^p = N^(p/2 - 2).
    block.witness_coefficient =
        ScaledRational(1, Rational(1, 2) - Rational(2) / pr, N);
    block.witness_norm_pth = ScaledRational(1, pr / 2 - 2, N);
    auto coeff_p = block.witness_coefficient.pow_rational(pr);
    if (!coeff_p || coeff_p->cmp(block.witness_norm_pth) != 0)
      throw std::logic_error("infinite_truncation: witness norm tag mismatch");

    block.support_width_dbl =
        block.inner->width().to_double() * block.allocation.dbl();
    offset += block.allocation;
    blocks_.push_back(std::move(block));
  }
}

bool InfiniteTruncation::supports_exactly_disjoint() const {
  // Consecutive allocations [M_N, M_N + alloc_N) tile the line; supports sit
  // inside them because the width tag N^(p/2-1) never exceeds 1 for p < 2.
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    const auto& b = blocks_[i];
    if (b.inner->width().cmp_rational(Rational(1)) > 0) return false;
    if (i + 1 < blocks_.size()) {
      const Scalar end = b.offset + b.allocation;
      if (end != blocks_[i + 1].offset) return false;
    }
  }
  return true;
}

Scalar InfiniteTruncation::divergence_partial_sum() const {
  Scalar sum(0);
  for (unsigned N = 1; N <= K_; ++N) sum += A_pow_p_ / Scalar(static_cast<long long>(N));
  return sum;
}

InfiniteTruncation infinite_truncation(const Scalar& p, unsigned K, const Rational& A_param) {
  return InfiniteTruncation(p, K, A_param);
}

double InfiniteTruncation::evaluate_block_witness(unsigned N, double t) const {
  if (N < 1 || N > K_) throw std::invalid_argument("evaluate_block_witness: block out of range");
  const auto& block = blocks_[N - 1];
  const double local = (t - block.offset.dbl()) * A_pow_p_.dbl() / static_cast<double>(N);
  if (local < 0 || local >= block.inner->width().to_double()) return 0.0;
  // sign of R_1 at the scaled point, magnitude = witness_coefficient * amplitude
  const double s = local / block.inner->width().to_double();
  const int sign = s < 0.5 ? -1 : 1;
  const double mag =
      block.witness_coefficient.to_double() * block.inner->amplitude().to_double();
  // the outer substitution also rescales the amplitude by A N^(-1/p)
  const double outer = A_param_.convert_to<double>() *
                       std::pow(static_cast<double>(N), -1.0 / p_.dbl());
  return sign * mag * outer;
}

}  // namespace normlab
