#include "normlab/scalar.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace normlab {

Rational rat_pow_int(const Rational& base, long long e) {
  if (e == 0) return Rational(1);
  if (base == 0) {
    if (e < 0) throw std::domain_error("rat_pow_int: zero base with negative exponent");
    return Rational(0);
  }
  const unsigned long long k = static_cast<unsigned long long>(e < 0 ? -e : e);
  BigInt num = boost::multiprecision::pow(BigInt(numerator(base)), static_cast<unsigned>(k));
  BigInt den = boost::multiprecision::pow(BigInt(denominator(base)), static_cast<unsigned>(k));
  if (e < 0) std::swap(num, den);
  return Rational(num, den);
}

namespace {

std::optional<BigInt> int_root_exact(const BigInt& v, unsigned k) {
  if (v < 0) return std::nullopt;
  if (v == 0 || v == 1) return v;
  if (k == 1) return v;
  BigInt r;
  if (k == 2) {
    r = boost::multiprecision::sqrt(v);
  } else {
    // Newton iteration on integers, seeded from a double estimate.
    double est = std::pow(v.convert_to<double>(), 1.0 / k);
    r = BigInt(static_cast<long long>(est));
    if (r < 1) r = 1;
    for (int it = 0; it < 256; ++it) {
      BigInt rk1 = boost::multiprecision::pow(r, k - 1);
      if (rk1 == 0) { r = 1; continue; }
      BigInt next = ((k - 1) * r + v / rk1) / k;
      if (next >= r) break;
      r = next;
    }
    while (boost::multiprecision::pow(r, k) > v) --r;
    while (boost::multiprecision::pow(r + 1, k) <= v) ++r;
  }
  if (boost::multiprecision::pow(r, k) == v) return r;
  return std::nullopt;
}

}  // namespace

std::optional<Rational> rat_sqrt_exact(const Rational& v) { return rat_root_exact(v, 2); }

std::optional<Rational> rat_root_exact(const Rational& v, unsigned k) {
  if (v < 0) return std::nullopt;
  if (k == 0) throw std::invalid_argument("rat_root_exact: k must be positive");
  auto rn = int_root_exact(BigInt(numerator(v)), k);
  if (!rn) return std::nullopt;
  auto rd = int_root_exact(BigInt(denominator(v)), k);
  if (!rd) return std::nullopt;
  return Rational(*rn, *rd);
}

std::string rat_to_string(const Rational& v) {
  if (denominator(v) == 1) return BigInt(numerator(v)).str();
  return BigInt(numerator(v)).str() + "/" + BigInt(denominator(v)).str();
}

Rational rat_from_string(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("rat_from_string: empty string");
  const auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(BigInt(s));
    BigInt num(s.substr(0, slash));
    BigInt den(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("rat_from_string: zero denominator");
    return Rational(num, den);
  } catch (const std::runtime_error& e) {
    throw std::invalid_argument("rat_from_string: cannot parse '" + s + "'");
  }
}

const Rational& Scalar::rat() const {
  if (!exact_) throw std::logic_error("Scalar::rat on a float64 value");
  return rat_;
}

double Scalar::dbl() const { return exact_ ? rat_.convert_to<double>() : dbl_; }

bool Scalar::is_zero() const { return exact_ ? rat_.is_zero() : dbl_ == 0.0; }

int Scalar::sign() const {
  if (exact_) return rat_.sign();
  return dbl_ > 0 ? 1 : (dbl_ < 0 ? -1 : 0);
}

Scalar Scalar::abs() const {
  if (exact_) return Scalar(Rational(boost::multiprecision::abs(rat_)));
  return Scalar(std::fabs(dbl_));
}

long long Scalar::as_int() const {
  if (!is_exact_integer()) throw std::logic_error("Scalar::as_int on a non-integer value");
  return BigInt(numerator(rat_)).convert_to<long long>();
}

Scalar Scalar::operator-() const {
  if (exact_) return Scalar(Rational(-rat_));
  return Scalar(-dbl_);
}

Scalar& Scalar::operator+=(const Scalar& o) {
  if (exact_ && o.exact_) {
    rat_ += o.rat_;
  } else {
    dbl_ = dbl() + o.dbl();
    exact_ = false;
  }
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  if (exact_ && o.exact_) {
    rat_ -= o.rat_;
  } else {
    dbl_ = dbl() - o.dbl();
    exact_ = false;
  }
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  if (exact_ && o.exact_) {
    rat_ *= o.rat_;
  } else {
    dbl_ = dbl() * o.dbl();
    exact_ = false;
  }
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) {
  if (exact_ && o.exact_) {
    if (o.rat_.is_zero()) throw std::domain_error("Scalar: division by exact zero");
    rat_ /= o.rat_;
  } else {
    dbl_ = dbl() / o.dbl();
    exact_ = false;
  }
  return *this;
}

Scalar Scalar::pow_int(long long e) const {
  if (exact_) return Scalar(rat_pow_int(rat_, e));
  return Scalar(std::pow(dbl_, static_cast<double>(e)));
}

int Scalar::cmp(const Scalar& o) const {
  if (exact_ && o.exact_) return rat_.compare(o.rat_);
  const double a = dbl();
  const double b = o.dbl();
  return a < b ? -1 : (a > b ? 1 : 0);
}

std::string double_to_string(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  // Shortest representation that round-trips.
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  return buf;
}

std::string Scalar::to_string() const {
  if (exact_) return rat_to_string(rat_);
  return double_to_string(dbl_);
}

Scalar Scalar::parse(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("Scalar::parse: empty string");
  if (s.find_first_of(".eEnN") != std::string::npos || s == "inf" || s == "-inf") {
    return Scalar(std::strtod(s.c_str(), nullptr));
  }
  return Scalar(rat_from_string(s));
}

}  // namespace normlab
