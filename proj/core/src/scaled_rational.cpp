#include "normlab/scaled_rational.hpp"

#include <cmath>

namespace normlab {

ScaledRational::ScaledRational(Rational r, Rational e, unsigned long long base)
    : r_(std::move(r)), e_(std::move(e)), base_(base) {
  if (base_ == 0) throw std::invalid_argument("ScaledRational: base must be positive");
  if (r_ < 0) throw std::invalid_argument("ScaledRational: coefficient must be nonnegative");
  if (r_.is_zero()) {
    zero_ = true;
    e_ = 0;
  }
  if (base_ == 1) e_ = 0;  // 1^e is 1, keep the form canonical
}

ScaledRational ScaledRational::times(const ScaledRational& o) const {
  if (base_ != o.base_) throw std::invalid_argument("ScaledRational: base mismatch");
  if (zero_ || o.zero_) return zero(base_);
  return ScaledRational(r_ * o.r_, e_ + o.e_, base_);
}

ScaledRational ScaledRational::times_rational(const Rational& q) const {
  if (q < 0) throw std::invalid_argument("ScaledRational: negative rational factor");
  if (zero_ || q.is_zero()) return zero(base_);
  return ScaledRational(r_ * q, e_, base_);
}

ScaledRational ScaledRational::pow_int(long long k) const {
  if (zero_) {
    if (k <= 0) throw std::domain_error("ScaledRational: zero to a nonpositive power");
    return zero(base_);
  }
  return ScaledRational(rat_pow_int(r_, k), e_ * Rational(k), base_);
}

std::optional<ScaledRational> ScaledRational::pow_rational(const Rational& p) const {
  if (zero_) {
    if (p <= 0) throw std::domain_error("ScaledRational: zero to a nonpositive power");
    return zero(base_);
  }
  if (denominator(p) == 1) return pow_int(numerator(p).convert_to<long long>());
  const long long a = numerator(p).convert_to<long long>();
  const unsigned b = denominator(p).convert_to<unsigned>();
  auto root = rat_root_exact(rat_pow_int(r_, a), b);
  if (!root) return std::nullopt;
  return ScaledRational(*root, e_ * p, base_);
}

int ScaledRational::cmp(const ScaledRational& o) const {
  if (base_ != o.base_) throw std::invalid_argument("ScaledRational: base mismatch");
  if (zero_ && o.zero_) return 0;
  if (zero_) return -1;
  if (o.zero_) return 1;
  // Clear both exponents to integers with the common denominator q, then
  // compare r1^q * B^(q e1 - q e2) against r2^q as plain rationals.
  const BigInt d1 = denominator(e_);
  const BigInt d2 = denominator(o.e_);
  const BigInt q = d1 / boost::multiprecision::gcd(d1, d2) * d2;
  const long long qi = q.convert_to<long long>();
  const Rational qe1 = e_ * Rational(q);
  const Rational qe2 = o.e_ * Rational(q);
  const long long d = (qe1 - qe2).convert_to<long long>();  // an exact integer
  Rational lhs = rat_pow_int(r_, qi) * rat_pow_int(Rational(static_cast<long long>(base_)), d);
  Rational rhs = rat_pow_int(o.r_, qi);
  return lhs.compare(rhs);
}

int ScaledRational::cmp_rational(const Rational& q) const {
  if (q < 0) return 1;  // values here are nonnegative
  if (q.is_zero()) return zero_ ? 0 : 1;
  return cmp(ScaledRational(q, 0, base_));
}

std::optional<Rational> ScaledRational::to_rational_exact() const {
  if (zero_) return Rational(0);
  const long long a = numerator(e_).convert_to<long long>();
  const unsigned b = denominator(e_).convert_to<unsigned>();
  auto power = rat_root_exact(rat_pow_int(Rational(static_cast<long long>(base_)), a), b);
  if (!power) return std::nullopt;
  return r_ * *power;
}

double ScaledRational::to_double() const {
  if (zero_) return 0.0;
  return r_.convert_to<double>() *
         std::pow(static_cast<double>(base_), e_.convert_to<double>());
}

std::string ScaledRational::to_string() const {
  if (zero_) return "0";
  return rat_to_string(r_) + " * " + std::to_string(base_) + "^(" + rat_to_string(e_) + ")";
}

}  // namespace normlab
