#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace normlab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Raised when a construction exceeds its configured desk-scale resource bound.
class resource_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Integer power of a rational, exact. Negative exponents invert (base must be nonzero).
Rational rat_pow_int(const Rational& base, long long e);

/// Exact square root of a nonnegative rational, if the result is rational.
std::optional<Rational> rat_sqrt_exact(const Rational& v);

/// Exact k-th root of a nonnegative rational, if the result is rational.
std::optional<Rational> rat_root_exact(const Rational& v, unsigned k);

/// Canonical text form: "p" when the denominator is 1, otherwise "p/q".
std::string rat_to_string(const Rational& v);

/// Parses "p", "p/q", or a plain integer with sign. Throws std::invalid_argument on junk.
Rational rat_from_string(const std::string& s);

/// A real scalar carried on one of two backends: exact rational or float64.
///
/// Exact values are stored in lowest terms with positive denominator (the
/// rational type normalizes on construction). Arithmetic between two exact
/// values stays exact; any operation touching a float64 value produces a
/// float64 result. Comparisons between two exact values are decided exactly,
/// never through a double conversion.
class Scalar {
 public:
  Scalar() : rat_(0), exact_(true) {}
  Scalar(int v) : rat_(v), exact_(true) {}
  Scalar(long v) : rat_(v), exact_(true) {}
  Scalar(long long v) : rat_(v), exact_(true) {}
  Scalar(unsigned long v) : rat_(static_cast<long long>(v)), exact_(true) {}
  Scalar(const Rational& v) : rat_(v), exact_(true) {}
  Scalar(Rational&& v) : rat_(std::move(v)), exact_(true) {}
  Scalar(const BigInt& v) : rat_(v), exact_(true) {}
  Scalar(double v) : dbl_(v), exact_(false) {}

  static Scalar exact_ratio(long long num, long long den) { return Scalar(Rational(num, den)); }

  bool is_exact() const { return exact_; }
  const char* backend_name() const { return exact_ ? "exact" : "float64"; }

  /// The exact value; throws std::logic_error on a float64 scalar.
  const Rational& rat() const;

  /// The value as a double (converting when exact).
  double dbl() const;

  bool is_zero() const;
  int sign() const;
  Scalar abs() const;

  /// True when the value is an exact rational with denominator 1.
  bool is_exact_integer() const { return exact_ && denominator(rat_) == 1; }

  /// Exact integer value; requires is_exact_integer and a value that fits in long long.
  long long as_int() const;

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

  Scalar pow_int(long long e) const;

  /// Three-way compare: exact when both operands are exact, double otherwise.
  int cmp(const Scalar& o) const;

  friend bool operator==(const Scalar& a, const Scalar& b) { return a.cmp(b) == 0; }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return a.cmp(b) != 0; }
  friend bool operator<(const Scalar& a, const Scalar& b) { return a.cmp(b) < 0; }
  friend bool operator<=(const Scalar& a, const Scalar& b) { return a.cmp(b) <= 0; }
  friend bool operator>(const Scalar& a, const Scalar& b) { return a.cmp(b) > 0; }
  friend bool operator>=(const Scalar& a, const Scalar& b) { return a.cmp(b) >= 0; }

  /// "p/q" for exact values, shortest-round-trip decimal for float64.
  std::string to_string() const;

  /// Parses the output of to_string. A '/' or bare integer yields an exact
  /// scalar, anything with '.', 'e', "inf" or "nan" a float64 one.
  static Scalar parse(const std::string& s);

 private:
  Rational rat_;
  double dbl_ = 0.0;
  bool exact_;
};

/// Shortest decimal string that round-trips through double.
std::string double_to_string(double v);

}  // namespace normlab
