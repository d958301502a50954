#include "normlab/khintchine.hpp"

#include "normlab/rng.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace normlab {

namespace {

constexpr unsigned kMaxLength = 24;

void check_length(std::size_t n) {
  if (n == 0) throw std::invalid_argument("khintchine: empty coefficient vector");
  if (n > kMaxLength) throw resource_error("khintchine: N exceeds the 2^N enumeration bound");
}

// Walks all 2^(N-1) sign patterns with the first sign pinned to +, flipping
// one sign per step; |s| and |-s| agree, so this covers the full average.
template <typename Value, typename Visit>
void enumerate_half_patterns(std::span<const Value> a, Visit&& visit) {
  const std::size_t n = a.size();
  Value s{};
  for (const auto& v : a) s += v;
  visit(s);
  if (n == 1) return;
  const std::uint64_t half = 1ULL << (n - 1);
  std::vector<int> sign(n, 1);
  for (std::uint64_t k = 1; k < half; ++k) {
    const unsigned bit = static_cast<unsigned>(std::countr_zero(k));
    const std::size_t idx = bit + 1;  // sign of a_1 stays +
    if (sign[idx] > 0) {
      s -= a[idx];
      s -= a[idx];
    } else {
      s += a[idx];
      s += a[idx];
    }
    sign[idx] = -sign[idx];
    visit(s);
  }
}

bool all_exact(std::span<const Scalar> a) {
  return std::all_of(a.begin(), a.end(), [](const Scalar& v) { return v.is_exact(); });
}

}  // namespace

Scalar khintchine_expectation_pth_power(std::span<const Scalar> a, const Scalar& p) {
  check_length(a.size());
  if (p < Scalar(1)) throw std::invalid_argument("khintchine: p must be at least 1");

  if (p.is_exact_integer() && all_exact(a)) {
    const long long k = p.as_int();
    std::vector<Rational> av;
    av.reserve(a.size());
    for (const auto& v : a) av.push_back(v.rat());
    Rational total(0);
    enumerate_half_patterns<Rational>(av, [&](const Rational& s) {
      if (s.is_zero()) return;
      if (k == 1)
        total += boost::multiprecision::abs(s);
      else if (k == 2)
        total += s * s;
      else
        total += rat_pow_int(Rational(boost::multiprecision::abs(s)), k);
    });
    const std::uint64_t half = 1ULL << (a.size() - 1);
    return Scalar(total / Rational(half));
  }

  const double pd = p.dbl();
  std::vector<double> av;
  av.reserve(a.size());
  for (const auto& v : a) av.push_back(v.dbl());
  double total = 0;
  enumerate_half_patterns<double>(av, [&](double s) { total += std::pow(std::fabs(s), pd); });
  return Scalar(total / static_cast<double>(1ULL << (a.size() - 1)));
}

Scalar khintchine_expectation(std::span<const Scalar> a, const Scalar& p) {
  Scalar power = khintchine_expectation_pth_power(a, p);
  if (power.is_exact()) {
    const long long k = p.as_int();
    if (k == 1) return power;
    if (auto root = rat_root_exact(power.rat(), static_cast<unsigned>(k)))
      return Scalar(std::move(*root));
    return Scalar(std::pow(power.dbl(), 1.0 / static_cast<double>(k)));
  }
  return Scalar(std::pow(power.dbl(), 1.0 / p.dbl()));
}

Rational khintchine_ratio_power(std::span<const Rational> a, long long p_int) {
  Rational sq(0);
  for (const auto& v : a) sq += v * v;
  if (sq.is_zero()) throw std::invalid_argument("khintchine_ratio_power: zero vector");
  std::vector<Scalar> as;
  as.reserve(a.size());
  for (const auto& v : a) as.emplace_back(v);
  const Rational e = khintchine_expectation_pth_power(as, Scalar(p_int)).rat();
  return e * e / rat_pow_int(sq, p_int);
}

namespace {

struct Candidate {
  std::vector<Rational> a;
  // Comparable key: exact (num, den) of ratio^(2p) for integer p, or a
  // double ratio otherwise.
  bool exact = false;
  Rational key;
  double approx = 0;
};

Candidate evaluate_candidate(std::vector<Rational> a, const Scalar& p) {
  Candidate c;
  c.a = std::move(a);
  if (p.is_exact_integer()) {
    c.exact = true;
    c.key = khintchine_ratio_power(c.a, p.as_int());
    c.approx = std::pow(c.key.convert_to<double>(), 1.0 / (2.0 * p.dbl()));
    return c;
  }
  std::vector<Scalar> as;
  as.reserve(c.a.size());
  for (const auto& v : c.a) as.emplace_back(v);
  double sq = 0;
  for (const auto& v : c.a) sq += v.convert_to<double>() * v.convert_to<double>();
  const double e = khintchine_expectation_pth_power(as, p).dbl();
  c.approx = std::pow(e, 1.0 / p.dbl()) / std::sqrt(sq);
  return c;
}

// ratio(a) < ratio(b)?
bool ratio_less(const Candidate& a, const Candidate& b) {
  if (a.exact && b.exact) return a.key < b.key;
  return a.approx < b.approx;
}

bool is_zero_vector(const std::vector<Rational>& a) {
  return std::all_of(a.begin(), a.end(), [](const Rational& v) { return v.is_zero(); });
}

}  // namespace

KhintchineReport khintchine_empirical_constants(unsigned N, const Scalar& p, unsigned budget,
                                                std::uint64_t seed) {
  check_length(N);
  KhintchineReport report;
  report.p = p;
  report.N = N;

  std::vector<std::vector<Rational>> pool;
  {
    std::vector<Rational> e1(N, Rational(0));
    e1[0] = 1;
    pool.push_back(std::move(e1));
  }
  pool.emplace_back(N, Rational(1));  // flat vector
  Rng rng(seed);
  const unsigned randoms = std::max(8u, budget / 4);
  for (unsigned r = 0; r < randoms; ++r) {
    std::vector<Rational> a(N);
    for (auto& v : a) v = rng.signed_rational(9, 4);
    if (!is_zero_vector(a)) pool.push_back(std::move(a));
  }

  Candidate best_min = evaluate_candidate(pool.front(), p);
  Candidate best_max = best_min;
  for (std::size_t i = 1; i < pool.size(); ++i) {
    Candidate c = evaluate_candidate(pool[i], p);
    if (ratio_less(c, best_min)) best_min = c;
    if (ratio_less(best_max, c)) best_max = c;
  }

  // Local coordinate descent/ascent with shrinking rational steps.
  auto refine = [&](Candidate start, bool maximize) {
    Candidate best = std::move(start);
    Rational step(1);
    unsigned used = 0;
    while (used < budget && step >= Rational(1, 64)) {
      bool improved = false;
      for (unsigned j = 0; j < N && used < budget; ++j) {
        for (int dir : {+1, -1}) {
          std::vector<Rational> a = best.a;
          a[j] += dir > 0 ? step : -step;
          ++used;
          if (is_zero_vector(a)) continue;
          Candidate c = evaluate_candidate(std::move(a), p);
          const bool better = maximize ? ratio_less(best, c) : ratio_less(c, best);
          if (better) {
            best = std::move(c);
            improved = true;
          }
        }
      }
      if (!improved) step /= 2;
    }
    return best;
  };
  best_min = refine(std::move(best_min), false);
  best_max = refine(std::move(best_max), true);

  auto to_scalar = [&](const Candidate& c) -> Scalar {
    if (c.exact) {
      if (auto root = rat_root_exact(c.key, static_cast<unsigned>(2 * p.as_int())))
        return Scalar(std::move(*root));
    }
    return Scalar(c.approx);
  };
  report.A_hat = to_scalar(best_min);
  report.B_hat = to_scalar(best_max);
  report.witness_min = best_min.a;
  report.witness_max = best_max.a;
  return report;
}

}  // namespace normlab
