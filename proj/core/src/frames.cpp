#include "normlab/frames.hpp"

#include "normlab/rng.hpp"

#include <algorithm>
#include <cmath>

namespace normlab {

namespace {

linalg::Mat weighted_frame_operator(const std::vector<std::vector<Scalar>>& vectors,
                                    const std::vector<Scalar>& weights, std::size_t dim) {
  linalg::Mat s(dim, linalg::Vec(dim, 0.0));
  for (std::size_t k = 0; k < vectors.size(); ++k) {
    const double w = weights[k].dbl();
    for (std::size_t i = 0; i < dim; ++i) {
      const double vi = vectors[k][i].dbl();
      if (vi == 0) continue;
      for (std::size_t j = 0; j < dim; ++j) s[i][j] += w * vi * vectors[k][j].dbl();
    }
  }
  return s;
}

double vector_norm(const std::vector<Scalar>& v) {
  double s = 0;
  for (const auto& x : v) s += x.dbl() * x.dbl();
  return std::sqrt(s);
}

}  // namespace

FiniteFrame FiniteFrame::of(std::size_t dim, std::vector<std::vector<Scalar>> vectors,
                            std::optional<Scalar> uniform_weight) {
  FiniteFrame f;
  f.dim = dim;
  for (const auto& v : vectors)
    if (v.size() != dim) throw std::invalid_argument("FiniteFrame: vector dimension mismatch");
  f.vectors = std::move(vectors);
  f.weights.assign(f.vectors.size(), uniform_weight.value_or(Scalar(1)));
  return f;
}

FrameBounds frame_bounds(const FiniteFrame& f) {
  auto eig = linalg::jacobi_eigen(weighted_frame_operator(f.vectors, f.weights, f.dim));
  FrameBounds out{Scalar(std::max(eig.values.front(), 0.0)), Scalar(eig.values.back()), false};
  out.is_frame = eig.values.front() > 1e-12 * std::max(1.0, eig.values.back());
  if (!out.is_frame) out.A = Scalar(0);
  return out;
}

std::vector<Scalar> analysis(const FiniteFrame& f, std::span<const Scalar> x) {
  if (x.size() != f.dim) throw std::invalid_argument("analysis: dimension mismatch");
  std::vector<Scalar> out;
  out.reserve(f.size());
  for (const auto& v : f.vectors) {
    Scalar dot(0);
    for (std::size_t i = 0; i < f.dim; ++i) dot += v[i] * x[i];
    out.push_back(std::move(dot));
  }
  return out;
}

namespace {

// S^-1/2 through the Jacobi eigendecomposition of the frame operator.
linalg::Mat inverse_sqrt_operator(const linalg::Mat& s) {
  auto eig = linalg::jacobi_eigen(s);
  if (eig.values.front() <= 0)
    throw std::invalid_argument("parseval_normalize: not a frame (singular operator)");
  const std::size_t n = s.size();
  linalg::Mat out(n, linalg::Vec(n, 0.0));
  for (std::size_t k = 0; k < n; ++k) {
    const double scale = 1.0 / std::sqrt(eig.values[k]);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        out[i][j] += scale * eig.vectors[k][i] * eig.vectors[k][j];
  }
  return out;
}

std::vector<std::vector<Scalar>> apply_to_vectors(const linalg::Mat& m,
                                                  const std::vector<std::vector<Scalar>>& vs) {
  std::vector<std::vector<Scalar>> out;
  out.reserve(vs.size());
  for (const auto& v : vs) {
    std::vector<Scalar> w(m.size(), Scalar(0));
    for (std::size_t i = 0; i < m.size(); ++i) {
      double acc = 0;
      for (std::size_t j = 0; j < m.size(); ++j) acc += m[i][j] * v[j].dbl();
      w[i] = Scalar(acc);
    }
    out.push_back(std::move(w));
  }
  return out;
}

}  // namespace

FiniteFrame parseval_normalize(const FiniteFrame& f) {
  const auto root = inverse_sqrt_operator(weighted_frame_operator(f.vectors, f.weights, f.dim));
  FiniteFrame out = f;
  out.vectors = apply_to_vectors(root, f.vectors);
  return out;
}

namespace {

std::size_t subset_rank(const FiniteFrame& f, std::uint32_t mask, bool complement) {
  linalg::Mat rows;
  for (std::size_t j = 0; j < f.size(); ++j) {
    const bool in = (mask >> j) & 1u;
    if (in == complement) continue;
    linalg::Vec row(f.dim);
    for (std::size_t i = 0; i < f.dim; ++i) row[i] = f.vectors[j][i].dbl();
    rows.push_back(std::move(row));
  }
  if (rows.empty()) return 0;
  return linalg::rank_double(std::move(rows));
}

}  // namespace

ComplementPropertyResult complement_property(const FiniteFrame& f) {
  if (f.size() > 22) throw resource_error("complement_property: M exceeds the 2^M scan bound");
  const std::uint32_t total = 1u << f.size();
  for (std::uint32_t mask = 0; mask < total; ++mask) {
    if (subset_rank(f, mask, false) == f.dim) continue;
    if (subset_rank(f, mask, true) == f.dim) continue;
    std::vector<std::size_t> subset;
    for (std::size_t j = 0; j < f.size(); ++j)
      if ((mask >> j) & 1u) subset.push_back(j);
    return {false, std::move(subset)};
  }
  return {true, std::nullopt};
}

PRStabilityBounds pr_stability_bounds(const FiniteFrame& f, unsigned budget,
                                      std::uint64_t seed) {
  if (f.size() > 22) throw resource_error("pr_stability_bounds: M exceeds the 2^M scan bound");
  PRStabilityBounds out{Scalar(0), Scalar(0), false, {}, {}, {}};

  auto cp = complement_property(f);
  out.does_pr = cp.holds;
  if (!out.does_pr) {
    out.C_upper = Scalar(std::numeric_limits<double>::infinity());
    out.C_lower = Scalar(std::numeric_limits<double>::infinity());
    if (cp.failing_subset) out.witness_subset = *cp.failing_subset;
    return out;
  }

  // C_upper: exhaustive subset scan; S and its complement give one value, so
  // half the masks suffice.
  const std::size_t n = f.dim;
  double best_sum = std::numeric_limits<double>::infinity();
  std::uint32_t best_mask = 0;
  const std::uint32_t total = 1u << (f.size() == 0 ? 0 : f.size() - 1);
  for (std::uint32_t mask = 0; mask < total; ++mask) {
    linalg::Mat phi_s(n, linalg::Vec(n, 0.0)), phi_c(n, linalg::Vec(n, 0.0));
    for (std::size_t k = 0; k < f.size(); ++k) {
      linalg::Mat& target = ((mask >> k) & 1u) ? phi_s : phi_c;
      const double w = f.weights[k].dbl();
      for (std::size_t i = 0; i < n; ++i) {
        const double vi = f.vectors[k][i].dbl();
        if (vi == 0) continue;
        for (std::size_t j = 0; j < n; ++j) target[i][j] += w * vi * f.vectors[k][j].dbl();
      }
    }
    const double lmin_s = f.size() ? linalg::jacobi_eigen(phi_s).values.front() : 0.0;
    const double lmin_c = linalg::jacobi_eigen(phi_c).values.front();
    const double sum = std::max(lmin_s, 0.0) + std::max(lmin_c, 0.0);
    if (sum < best_sum) {
      best_sum = sum;
      best_mask = mask;
    }
  }
  for (std::size_t j = 0; j < f.size(); ++j)
    if ((best_mask >> j) & 1u) out.witness_subset.push_back(j);
  if (best_sum <= 0) {
    out.C_upper = Scalar(std::numeric_limits<double>::infinity());
    out.C_lower = Scalar(std::numeric_limits<double>::infinity());
    return out;
  }
  out.C_upper = Scalar(1.0 / std::sqrt(best_sum));

  // C_lower: multi-start search over pairs on the sphere.
  auto modulus_gap = [&](const linalg::Vec& x, const linalg::Vec& y) {
    double s = 0;
    for (std::size_t k = 0; k < f.size(); ++k) {
      double dx = 0, dy = 0;
      for (std::size_t i = 0; i < n; ++i) {
        dx += f.vectors[k][i].dbl() * x[i];
        dy += f.vectors[k][i].dbl() * y[i];
      }
      const double d = std::fabs(dx) - std::fabs(dy);
      s += f.weights[k].dbl() * d * d;
    }
    return std::sqrt(s);
  };
  auto objective = [&](const linalg::Vec& x, const linalg::Vec& y) {
    linalg::Vec diff(n), sum(n);
    for (std::size_t i = 0; i < n; ++i) {
      diff[i] = x[i] - y[i];
      sum[i] = x[i] + y[i];
    }
    const double num = std::min(linalg::norm2(diff), linalg::norm2(sum));
    const double den = modulus_gap(x, y);
    if (den < 1e-13) return -1.0;  // x ~ +-y, ratio degenerates to 0/0
    return num / den;
  };

  Rng rng(seed);
  double best = 0;
  linalg::Vec bx(n, 0.0), by(n, 0.0);
  const unsigned starts = std::max(6u, budget / 40);
  for (unsigned s0 = 0; s0 < starts; ++s0) {
    linalg::Vec x(n), y(n);
    for (auto& v : x) v = rng.symmetric();
    for (auto& v : y) v = rng.symmetric();
    const double nx = linalg::norm2(x), ny = linalg::norm2(y);
    if (nx < 1e-9 || ny < 1e-9) continue;
    for (auto& v : x) v /= nx;
    for (auto& v : y) v /= ny;
    double cur = objective(x, y);
    double step = 0.3;
    for (unsigned it = 0; it < budget; ++it) {
      linalg::Vec x2 = x, y2 = y;
      for (std::size_t i = 0; i < n; ++i) {
        x2[i] += step * rng.symmetric();
        y2[i] += step * rng.symmetric();
      }
      const double n2x = linalg::norm2(x2), n2y = linalg::norm2(y2);
      if (n2x < 1e-9 || n2y < 1e-9) continue;
      for (auto& v : x2) v /= n2x;
      for (auto& v : y2) v /= n2y;
      const double cand = objective(x2, y2);
      if (cand > cur) {
        cur = cand;
        x = x2;
        y = y2;
      } else {
        step *= 0.95;
      }
    }
    if (cur > best) {
      best = cur;
      bx = x;
      by = y;
    }
  }
  out.C_lower = Scalar(best);
  out.witness_x.reserve(n);
  out.witness_y.reserve(n);
  for (double v : bx) out.witness_x.emplace_back(v);
  for (double v : by) out.witness_y.emplace_back(v);
  return out;
}

PartitionFrame::PartitionFrame(SpacePtr space, std::vector<std::vector<Scalar>> vectors)
    : space_(std::move(space)), vectors_(std::move(vectors)) {
  if (!space_) throw std::invalid_argument("PartitionFrame: null space");
  if (!space_->is_probability())
    throw std::invalid_argument("PartitionFrame: space must be a probability space");
  if (vectors_.size() != space_->cell_count())
    throw std::invalid_argument("PartitionFrame: one vector per cell required");
  dim_ = vectors_.front().size();
  for (const auto& v : vectors_)
    if (v.size() != dim_) throw std::invalid_argument("PartitionFrame: dimension mismatch");
}

StepFunction PartitionFrame::analysis(std::span<const Scalar> x) const {
  if (x.size() != dim_) throw std::invalid_argument("analysis: dimension mismatch");
  std::vector<Scalar> values;
  values.reserve(vectors_.size());
  for (const auto& v : vectors_) {
    Scalar dot(0);
    for (std::size_t i = 0; i < dim_; ++i) dot += v[i] * x[i];
    values.push_back(std::move(dot));
  }
  return StepFunction(space_, std::move(values));
}

linalg::Mat PartitionFrame::frame_operator_double() const {
  return weighted_frame_operator(vectors_, space_->weights(), dim_);
}

bool PartitionFrame::is_parseval(double tol) const {
  const auto s = frame_operator_double();
  double off = 0;
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) {
      const double target = i == j ? 1.0 : 0.0;
      off += (s[i][j] - target) * (s[i][j] - target);
    }
  return std::sqrt(off) <= tol;
}

double PartitionFrame::sup_vector_norm() const {
  double best = 0;
  for (const auto& v : vectors_) best = std::max(best, vector_norm(v));
  return best;
}

FiniteFrame PartitionFrame::as_weighted_finite_frame() const {
  FiniteFrame f;
  f.dim = dim_;
  f.vectors = vectors_;
  f.weights = space_->weights();
  return f;
}

FrameBounds frame_bounds(const PartitionFrame& f) {
  return frame_bounds(f.as_weighted_finite_frame());
}

PartitionFrame parseval_normalize(const PartitionFrame& f) {
  const auto root = inverse_sqrt_operator(f.frame_operator_double());
  std::vector<std::vector<Scalar>> vectors;
  vectors.reserve(f.cell_count());
  for (std::size_t c = 0; c < f.cell_count(); ++c) vectors.push_back(f.vector(c));
  return PartitionFrame(f.space(), apply_to_vectors(root, vectors));
}

PRStabilityBounds pr_stability_bounds(const PartitionFrame& f, unsigned budget,
                                      std::uint64_t seed) {
  return pr_stability_bounds(f.as_weighted_finite_frame(), budget, seed);
}

PartitionFrame subspace_to_frame(const Subspace& y) {
  const std::size_t n = y.dim();
  const auto gram = y.gram();
  linalg::Mat g(n, linalg::Vec(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g[i][j] = gram[i][j].dbl();
  auto chol = linalg::cholesky_lower(g);
  if (!chol) throw std::invalid_argument("subspace_to_frame: rank-deficient basis");

  // e_k = sum_j (L^-T)_{jk} b_j; the cell vectors are x_t = (e_k(t))_k.
  std::vector<std::vector<Scalar>> vectors;
  vectors.reserve(y.space()->cell_count());
  for (std::size_t c = 0; c < y.space()->cell_count(); ++c) {
    linalg::Vec psi(n);
    for (std::size_t j = 0; j < n; ++j) psi[j] = y.basis(j).value(c).dbl();
    // x_t[k] = (L^-1 psi)_k
    linalg::Vec v = psi;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < i; ++k) v[i] -= (*chol)[i][k] * v[k];
      v[i] /= (*chol)[i][i];
    }
    std::vector<Scalar> cell;
    cell.reserve(n);
    for (double x : v) cell.emplace_back(x);
    vectors.push_back(std::move(cell));
  }
  return PartitionFrame(y.space(), std::move(vectors));
}

Subspace frame_to_subspace(const PartitionFrame& f) {
  std::vector<StepFunction> basis;
  basis.reserve(f.dim());
  for (std::size_t k = 0; k < f.dim(); ++k) {
    std::vector<Scalar> values;
    values.reserve(f.cell_count());
    for (std::size_t c = 0; c < f.cell_count(); ++c) values.push_back(f.vector(c)[k]);
    basis.emplace_back(f.space(), std::move(values));
  }
  return Subspace(std::move(basis));
}

SamplingStrategy sampling_strategy_from_name(const std::string& name) {
  if (name == "uniform") return SamplingStrategy::Uniform;
  if (name == "random") return SamplingStrategy::Random;
  if (name == "greedy") return SamplingStrategy::Greedy;
  throw std::invalid_argument("unknown sampling strategy: " + name);
}

SampledFrame sample_partition_frame(const PartitionFrame& f, SamplingStrategy strategy,
                                    std::size_t M, std::uint64_t seed) {
  if (M == 0) throw std::invalid_argument("sample_partition_frame: M must be positive");
  const std::size_t cells = f.cell_count();
  std::vector<std::size_t> chosen;
  chosen.reserve(M);

  switch (strategy) {
    case SamplingStrategy::Uniform:
      for (std::size_t j = 0; j < M; ++j) chosen.push_back(j * cells / M);
      break;
    case SamplingStrategy::Random: {
      Rng rng(seed);
      for (std::size_t j = 0; j < M; ++j)
        chosen.push_back(static_cast<std::size_t>(rng.range(0, static_cast<long long>(cells) - 1)));
      break;
    }
    case SamplingStrategy::Greedy: {
      linalg::Mat running(f.dim(), linalg::Vec(f.dim(), 0.0));
      for (std::size_t step = 0; step < M; ++step) {
        double best = -1;
        std::size_t best_cell = 0;
        for (std::size_t c = 0; c < cells; ++c) {
          linalg::Mat trial = running;
          for (std::size_t i = 0; i < f.dim(); ++i)
            for (std::size_t j = 0; j < f.dim(); ++j)
              trial[i][j] += f.vector(c)[i].dbl() * f.vector(c)[j].dbl();
          const double lmin = linalg::jacobi_eigen(std::move(trial)).values.front();
          if (lmin > best + 1e-15) {
            best = lmin;
            best_cell = c;
          }
        }
        chosen.push_back(best_cell);
        for (std::size_t i = 0; i < f.dim(); ++i)
          for (std::size_t j = 0; j < f.dim(); ++j)
            running[i][j] += f.vector(best_cell)[i].dbl() * f.vector(best_cell)[j].dbl();
      }
      break;
    }
  }

  SampledFrame out;
  const auto& bp = f.space()->breakpoints();
  for (std::size_t c : chosen) {
    // cell midpoint, exact when the geometry is exact
    out.points.points.push_back((bp[c] + bp[c + 1]) / Scalar(2));
    out.frame.vectors.push_back(f.vector(c));
  }
  out.frame.dim = f.dim();
  out.frame.weights.assign(M, Scalar(Rational(1, static_cast<long long>(M))));
  const FrameBounds bounds = frame_bounds(out.frame);
  out.A = bounds.A;
  out.B = bounds.B;
  out.spanning = bounds.is_frame;
  const double sup = f.sup_vector_norm();
  out.beta_sq = sup * sup / static_cast<double>(f.dim());
  return out;
}

}  // namespace normlab
