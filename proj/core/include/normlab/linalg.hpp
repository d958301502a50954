#pragma once

#include "normlab/scalar.hpp"

#include <optional>
#include <vector>

namespace normlab::linalg {

using RatMat = std::vector<std::vector<Rational>>;
using RatVec = std::vector<Rational>;
using Mat = std::vector<std::vector<double>>;
using Vec = std::vector<double>;

/// Exact rank over Q by fraction-managed Gaussian elimination.
std::size_t rank_exact(RatMat m);

/// Rank over GF(p) for a fixed 61-bit prime. Always a lower bound on the
/// rank over Q, so a full-rank answer certifies full rank exactly; returns
/// nullopt when an entry's denominator vanishes mod p.
std::optional<std::size_t> rank_mod_prime(const RatMat& m);

/// Fast full-rank test: mod-p certificate first, exact elimination fallback.
bool has_full_column_rank(const RatMat& m);

/// A nonzero kernel vector of m (m v = 0), or nullopt when the columns are
/// independent.
std::optional<RatVec> nullspace_vector(const RatMat& m);

/// Solves the square system a x = b exactly; nullopt when singular.
std::optional<RatVec> solve(RatMat a, RatVec b);

/// Exact inverse of a square matrix; nullopt when singular.
std::optional<RatMat> invert(const RatMat& a);

/// Symmetric eigendecomposition by cyclic Jacobi rotations, iterated until
/// the off-diagonal Frobenius mass drops below tol relative to the matrix
/// scale. Eigenvalues ascend; vectors[i] is the eigenvector for values[i].
struct EigenResult {
  Vec values;
  Mat vectors;  // vectors[k] is the k-th eigenvector
};
EigenResult jacobi_eigen(Mat a, double tol = 1e-12);

/// Lower-triangular Cholesky factor of a symmetric positive definite matrix;
/// nullopt when a pivot is not strictly positive.
std::optional<Mat> cholesky_lower(const Mat& a);

/// Extreme generalized eigenpairs of the pencil (h, g) with g symmetric
/// positive definite: values/vectors of L^-1 h L^-T mapped back through L^-T.
struct GeneralizedEigenResult {
  double min_value = 0, max_value = 0;
  Vec min_vector, max_vector;
};
std::optional<GeneralizedEigenResult> generalized_extreme_eigen(const Mat& h, const Mat& g);

/// Rank of a double matrix with a relative pivot tolerance.
std::size_t rank_double(Mat m, double tol = 1e-9);

Mat identity(std::size_t n);
Vec matvec(const Mat& a, const Vec& x);
double dot(const Vec& a, const Vec& b);
double norm2(const Vec& a);

}  // namespace normlab::linalg
