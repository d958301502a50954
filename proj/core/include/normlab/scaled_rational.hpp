#pragma once

#include "normlab/scalar.hpp"

namespace normlab {

/// The nonnegative real number r * base^e with r rational, e rational, and
/// base a positive integer. Comparisons are decided exactly by clearing the
/// exponents to integers and comparing integer powers; no floating point is
/// involved. Products and integer powers stay in the type; general addition
/// is intentionally not provided (a sum of different exponents leaves it).
class ScaledRational {
 public:
  /// Requires r > 0 (use zero() for the zero value) and base >= 2,
  /// except base 1 which forces e to be irrelevant.
  ScaledRational(Rational r, Rational e, unsigned long long base);

  static ScaledRational zero(unsigned long long base) { return ScaledRational(base); }
  static ScaledRational one(unsigned long long base) { return ScaledRational(1, 0, base); }

  bool is_zero() const { return zero_; }
  const Rational& coeff() const { return r_; }
  const Rational& exponent() const { return e_; }
  unsigned long long base() const { return base_; }

  ScaledRational times(const ScaledRational& o) const;
  ScaledRational times_rational(const Rational& q) const;
  ScaledRational pow_int(long long k) const;

  /// (r * base^e)^p for rational p. Exact whenever r^p is rational
  /// (always for integer p or r = 1); nullopt otherwise.
  std::optional<ScaledRational> pow_rational(const Rational& p) const;

  /// Exact trichotomy against another value with the same base.
  int cmp(const ScaledRational& o) const;

  /// Exact trichotomy against a plain nonnegative rational.
  int cmp_rational(const Rational& q) const;

  /// True when the value is exactly the rational q (i.e. base^e times r lands on q).
  bool equals_rational(const Rational& q) const { return cmp_rational(q) == 0; }

  /// The value collapsed to a rational when the exponent clears exactly, nullopt otherwise.
  std::optional<Rational> to_rational_exact() const;

  double to_double() const;
  std::string to_string() const;

 private:
  explicit ScaledRational(unsigned long long base)
      : r_(0), e_(0), base_(base), zero_(true) {}

  Rational r_;
  Rational e_;
  unsigned long long base_;
  bool zero_ = false;
};

}  // namespace normlab
