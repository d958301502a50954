#include "normlab/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace normlab::linalg {

namespace {

constexpr std::uint64_t kPrime = 2305843009213693951ULL;  // 2^61 - 1

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b) {
  return static_cast<std::uint64_t>((__uint128_t)a * b % kPrime);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e) {
  std::uint64_t r = 1;
  while (e) {
    if (e & 1) r = mulmod(r, a);
    a = mulmod(a, a);
    e >>= 1;
  }
  return r;
}

std::uint64_t invmod(std::uint64_t a) { return powmod(a, kPrime - 2); }

std::optional<std::uint64_t> to_residue(const Rational& v) {
  const BigInt num = numerator(v) % BigInt(kPrime);
  const BigInt den = denominator(v) % BigInt(kPrime);
  if (den == 0) return std::nullopt;
  std::uint64_t n = BigInt(num < 0 ? num + BigInt(kPrime) : num).convert_to<std::uint64_t>();
  std::uint64_t d = den.convert_to<std::uint64_t>();
  return mulmod(n, invmod(d));
}

}  // namespace

std::size_t rank_exact(RatMat m) {
  if (m.empty()) return 0;
  const std::size_t rows = m.size(), cols = m[0].size();
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t pivot = rows;
    for (std::size_t r = rank; r < rows; ++r) {
      if (!m[r][col].is_zero()) {
        pivot = r;
        break;
      }
    }
    if (pivot == rows) continue;
    std::swap(m[rank], m[pivot]);
    const Rational inv = Rational(1) / m[rank][col];
    for (std::size_t c = col; c < cols; ++c) m[rank][c] *= inv;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank || m[r][col].is_zero()) continue;
      const Rational factor = m[r][col];
      for (std::size_t c = col; c < cols; ++c) m[r][c] -= factor * m[rank][c];
    }
    ++rank;
  }
  return rank;
}

std::optional<std::size_t> rank_mod_prime(const RatMat& m) {
  if (m.empty()) return 0;
  const std::size_t rows = m.size(), cols = m[0].size();
  std::vector<std::vector<std::uint64_t>> a(rows, std::vector<std::uint64_t>(cols));
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      auto res = to_residue(m[r][c]);
      if (!res) return std::nullopt;
      a[r][c] = *res;
    }
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t pivot = rows;
    for (std::size_t r = rank; r < rows; ++r)
      if (a[r][col] != 0) {
        pivot = r;
        break;
      }
    if (pivot == rows) continue;
    std::swap(a[rank], a[pivot]);
    const std::uint64_t inv = invmod(a[rank][col]);
    for (std::size_t c = col; c < cols; ++c) a[rank][c] = mulmod(a[rank][c], inv);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank || a[r][col] == 0) continue;
      const std::uint64_t f = a[r][col];
      for (std::size_t c = col; c < cols; ++c) {
        std::uint64_t sub = mulmod(f, a[rank][c]);
        a[r][c] = a[r][c] >= sub ? a[r][c] - sub : a[r][c] + kPrime - sub;
      }
    }
    ++rank;
  }
  return rank;
}

bool has_full_column_rank(const RatMat& m) {
  if (m.empty()) return false;
  const std::size_t cols = m[0].size();
  if (m.size() < cols) return false;
  if (auto r = rank_mod_prime(m)) {
    if (*r == cols) return true;  // certified over Q
  }
  return rank_exact(m) == cols;
}

std::optional<RatVec> nullspace_vector(const RatMat& m) {
  if (m.empty()) return std::nullopt;
  const std::size_t rows = m.size(), cols = m[0].size();
  RatMat a = m;
  std::vector<std::size_t> pivot_col;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t pivot = rows;
    for (std::size_t r = rank; r < rows; ++r)
      if (!a[r][col].is_zero()) {
        pivot = r;
        break;
      }
    if (pivot == rows) continue;
    std::swap(a[rank], a[pivot]);
    const Rational inv = Rational(1) / a[rank][col];
    for (std::size_t c = col; c < cols; ++c) a[rank][c] *= inv;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank || a[r][col].is_zero()) continue;
      const Rational factor = a[r][col];
      for (std::size_t c = col; c < cols; ++c) a[r][c] -= factor * a[rank][c];
    }
    pivot_col.push_back(col);
    ++rank;
  }
  if (rank == cols) return std::nullopt;
  // First free column: express it against the pivot columns.
  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivot_col) is_pivot[c] = true;
  std::size_t free_col = 0;
  while (is_pivot[free_col]) ++free_col;
  RatVec v(cols, Rational(0));
  v[free_col] = 1;
  for (std::size_t r = 0; r < rank; ++r) v[pivot_col[r]] = -a[r][free_col];
  return v;
}

std::optional<RatVec> solve(RatMat a, RatVec b) {
  const std::size_t n = a.size();
  if (n == 0 || a[0].size() != n || b.size() != n)
    throw std::invalid_argument("linalg::solve: shape mismatch");
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = n;
    for (std::size_t r = col; r < n; ++r)
      if (!a[r][col].is_zero()) {
        pivot = r;
        break;
      }
    if (pivot == n) return std::nullopt;
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    const Rational inv = Rational(1) / a[col][col];
    for (std::size_t c = col; c < n; ++c) a[col][c] *= inv;
    b[col] *= inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col].is_zero()) continue;
      const Rational factor = a[r][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= factor * a[col][c];
      b[r] -= factor * b[col];
    }
  }
  return b;
}

std::optional<RatMat> invert(const RatMat& a) {
  const std::size_t n = a.size();
  RatMat work = a;
  RatMat inv(n, RatVec(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = n;
    for (std::size_t r = col; r < n; ++r)
      if (!work[r][col].is_zero()) {
        pivot = r;
        break;
      }
    if (pivot == n) return std::nullopt;
    std::swap(work[col], work[pivot]);
    std::swap(inv[col], inv[pivot]);
    const Rational piv_inv = Rational(1) / work[col][col];
    for (std::size_t c = 0; c < n; ++c) {
      work[col][c] *= piv_inv;
      inv[col][c] *= piv_inv;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || work[r][col].is_zero()) continue;
      const Rational factor = work[r][col];
      for (std::size_t c = 0; c < n; ++c) {
        work[r][c] -= factor * work[col][c];
        inv[r][c] -= factor * inv[col][c];
      }
    }
  }
  return inv;
}

EigenResult jacobi_eigen(Mat a, double tol) {
  const std::size_t n = a.size();
  Mat v = identity(n);
  if (n == 0) return {{}, {}};

  double scale = 0;
  for (const auto& row : a)
    for (double x : row) scale += x * x;
  scale = std::sqrt(scale);
  const double target = tol * std::max(1.0, scale);

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += 2 * a[i][j] * a[i][j];
    if (std::sqrt(off) <= target) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a[p][q] == 0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2 * a[p][q]);
        double t = 1.0 / (std::fabs(theta) + std::sqrt(1 + theta * theta));
        if (theta < 0) t = -t;
        const double c = 1.0 / std::sqrt(1 + t * t);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return a[x][x] < a[y][y]; });

  EigenResult out;
  out.values.resize(n);
  out.vectors.assign(n, Vec(n));
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a[order[k]][order[k]];
    for (std::size_t i = 0; i < n; ++i) out.vectors[k][i] = v[i][order[k]];
  }
  return out;
}

std::optional<Mat> cholesky_lower(const Mat& a) {
  const std::size_t n = a.size();
  Mat l(n, Vec(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double sum = a[i][j];
      for (std::size_t k = 0; k < j; ++k) sum -= l[i][k] * l[j][k];
      if (i == j) {
        if (sum <= 0) return std::nullopt;
        l[i][i] = std::sqrt(sum);
      } else {
        l[i][j] = sum / l[j][j];
      }
    }
  }
  return l;
}

namespace {

// Solves L y = b (forward) or L^T y = b (backward) for lower-triangular L.
Vec forward_solve(const Mat& l, Vec b) {
  const std::size_t n = l.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < i; ++k) b[i] -= l[i][k] * b[k];
    b[i] /= l[i][i];
  }
  return b;
}

Vec backward_solve_t(const Mat& l, Vec b) {
  const std::size_t n = l.size();
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t k = i + 1; k < n; ++k) b[i] -= l[k][i] * b[k];
    b[i] /= l[i][i];
  }
  return b;
}

}  // namespace

std::optional<GeneralizedEigenResult> generalized_extreme_eigen(const Mat& h, const Mat& g) {
  const std::size_t n = g.size();
  auto chol = cholesky_lower(g);
  if (!chol) return std::nullopt;
  const Mat& l = *chol;
  // w = L^-1 h L^-T, built column by column.
  Mat w(n, Vec(n, 0.0));
  for (std::size_t j = 0; j < n; ++j) {
    Vec e(n, 0.0);
    e[j] = 1.0;
    Vec col = backward_solve_t(l, e);   // L^-T e_j
    Vec hcol = matvec(h, col);
    Vec wcol = forward_solve(l, hcol);  // L^-1 h L^-T e_j
    for (std::size_t i = 0; i < n; ++i) w[i][j] = wcol[i];
  }
  // Symmetrize away the round-off skew.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double m = 0.5 * (w[i][j] + w[j][i]);
      w[i][j] = w[j][i] = m;
    }
  auto eig = jacobi_eigen(std::move(w));
  GeneralizedEigenResult out;
  out.min_value = eig.values.front();
  out.max_value = eig.values.back();
  out.min_vector = backward_solve_t(l, eig.vectors.front());
  out.max_vector = backward_solve_t(l, eig.vectors.back());
  return out;
}

std::size_t rank_double(Mat m, double tol) {
  if (m.empty()) return 0;
  const std::size_t rows = m.size(), cols = m[0].size();
  double scale = 0;
  for (const auto& row : m)
    for (double x : row) scale = std::max(scale, std::fabs(x));
  if (scale == 0) return 0;
  const double threshold = tol * scale;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t pivot = rank;
    for (std::size_t r = rank + 1; r < rows; ++r)
      if (std::fabs(m[r][col]) > std::fabs(m[pivot][col])) pivot = r;
    if (std::fabs(m[pivot][col]) <= threshold) continue;
    std::swap(m[rank], m[pivot]);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      const double f = m[r][col] / m[rank][col];
      for (std::size_t c = col; c < cols; ++c) m[r][c] -= f * m[rank][c];
    }
    ++rank;
  }
  return rank;
}

Mat identity(std::size_t n) {
  Mat m(n, Vec(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1.0;
  return m;
}

Vec matvec(const Mat& a, const Vec& x) {
  Vec y(a.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) y[i] += a[i][j] * x[j];
  return y;
}

double dot(const Vec& a, const Vec& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

}  // namespace normlab::linalg
