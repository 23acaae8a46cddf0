#include "locc/caratheodory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "locc/error.hpp"
#include "locc/numerics/kernels.hpp"
#include "locc/numerics/real_linalg.hpp"

namespace locc {
namespace {

// Weights this small after an elimination step are treated as having hit zero
// together with the minimizing index.
constexpr double kTieEps = 1e-14;
constexpr double kNegativeClamp = 1e-12;

std::vector<std::size_t> support_of(std::span<const double> w) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i] > 0.0) idx.push_back(i);
  return idx;
}

void clean_weights(std::vector<double>& w) {
  double total = 0.0;
  for (double& x : w) {
    if (x < kTieEps) {
      if (x < -kNegativeClamp) {
        std::ostringstream msg;
        msg << "weight " << x << " went negative beyond the clamp window";
        throw Error(ErrorCode::NumericalDegeneracy, msg.str());
      }
      x = 0.0;
    }
    total += x;
  }
  if (total <= 0.0) throw Error(ErrorCode::NumericalDegeneracy, "all weights vanished");
  for (double& x : w) x /= total;
}

std::vector<double> weighted_mean(const WeightedPointSet& s, std::span<const double> w) {
  std::vector<double> b(s.dim, 0.0);
  for (std::size_t i = 0; i < s.points.size(); ++i)
    if (w[i] != 0.0) kernels::daxpy(w[i], s.points[i], b);
  return b;
}

}  // namespace

void WeightedPointSet::validate() const {
  if (points.size() != weights.size()) {
    throw Error(ErrorCode::InvalidInput, "point and weight counts differ");
  }
  if (points.empty()) throw Error(ErrorCode::InvalidInput, "empty point set");
  double total = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != dim) throw Error(ErrorCode::InvalidInput, "point of wrong dimension");
    if (!(weights[i] >= 0.0)) throw Error(ErrorCode::InvalidInput, "negative weight");
    total += weights[i];
  }
  if (std::abs(total - 1.0) > 1e-10) {
    std::ostringstream msg;
    msg << "weights sum to " << total;
    throw Error(ErrorCode::InvalidInput, msg.str());
  }
}

std::size_t WeightedPointSet::support_size() const {
  return static_cast<std::size_t>(std::count_if(weights.begin(), weights.end(), [](double w) { return w > 0.0; }));
}

std::vector<double> barycentre(const WeightedPointSet& s) {
  s.validate();
  return weighted_mean(s, s.weights);
}

WeightedPointSet reduce_support(const WeightedPointSet& s, const SupportReductionOptions& opts) {
  s.validate();
  WeightedPointSet out = s;
  std::vector<double>& q = out.weights;
  clean_weights(q);
  const std::vector<double> centre = weighted_mean(s, q);

  for (;;) {
    const std::vector<std::size_t> support = support_of(q);
    if (support.size() <= 1) break;
    // dim+2 points always carry an affine dependency; with fewer we are
    // testing whether the support is already affinely independent.
    const bool forced = support.size() > s.dim + 1;
    const std::size_t cols = forced ? s.dim + 2 : support.size();

    RealMatrix m(s.dim + 1, cols);
    for (std::size_t c = 0; c < cols; ++c) {
      const std::vector<double>& p = s.points[support[c]];
      for (std::size_t r = 0; r < s.dim; ++r) m(r, c) = p[r] - centre[r];
      m(s.dim, c) = 1.0;
    }
    std::optional<std::vector<double>> z = real_null_vector(m, opts.null_tol);
    if (!z) {
      if (forced) {
        throw Error(ErrorCode::NumericalDegeneracy,
                    "no affine dependency found among dim+2 support points");
      }
      break;
    }
    if (*std::max_element(z->begin(), z->end()) <= 0.0) {
      for (double& x : *z) x = -x;
    }

    double step = std::numeric_limits<double>::infinity();
    std::size_t hit = cols;
    for (std::size_t c = 0; c < cols; ++c) {
      if ((*z)[c] <= 1e-14) continue;
      const double ratio = q[support[c]] / (*z)[c];
      if (ratio < step) {
        step = ratio;
        hit = c;
      }
    }
    if (hit == cols) throw Error(ErrorCode::NumericalDegeneracy, "null vector has no positive entry");
    for (std::size_t c = 0; c < cols; ++c) q[support[c]] -= step * (*z)[c];
    q[support[hit]] = 0.0;
    clean_weights(q);
  }
  return out;
}

std::vector<PeeledComponent> peel_decompose(const WeightedPointSet& s,
                                            const SupportReductionOptions& opts) {
  s.validate();
  std::vector<PeeledComponent> out;
  WeightedPointSet residual = s;
  clean_weights(residual.weights);
  double mass = 1.0;

  for (;;) {
    WeightedPointSet piece = reduce_support(residual, opts);
    const std::vector<double>& r = piece.weights;
    const std::vector<double>& q = residual.weights;

    double t = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < r.size(); ++i)
      if (r[i] > 0.0) t = std::min(t, q[i] / r[i]);
    if (t >= 1.0 - 1e-12) {
      out.push_back({mass, std::move(piece)});
      break;
    }

    std::vector<double> next(q.size(), 0.0);
    for (std::size_t i = 0; i < q.size(); ++i) {
      if (q[i] <= 0.0) continue;
      // Indices attaining the minimum ratio leave the residual's support.
      if (r[i] > 0.0 && q[i] - t * r[i] <= kTieEps * q[i]) continue;
      next[i] = (q[i] - t * r[i]) / (1.0 - t);
    }
    out.push_back({mass * t, std::move(piece)});
    mass *= 1.0 - t;
    residual.weights = std::move(next);
    clean_weights(residual.weights);
  }
  return out;
}

std::vector<double> hermitian_to_vector(const ComplexMatrix& m, std::size_t d) {
  if (m.rows() != d || m.cols() != d) throw Error(ErrorCode::DimensionMismatch, "expected d×d matrix");
  if (!is_hermitian(m)) throw Error(ErrorCode::NotHermitian, "hermitian_to_vector needs a Hermitian matrix");
  std::vector<double> v;
  v.reserve(d * d);
  for (std::size_t i = 0; i < d; ++i) v.push_back(m(i, i).real());
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      v.push_back(std::numbers::sqrt2 * m(i, j).real());
      v.push_back(std::numbers::sqrt2 * m(i, j).imag());
    }
  return v;
}

ComplexMatrix vector_to_hermitian(std::span<const double> v, std::size_t d) {
  if (v.size() != d * d) throw Error(ErrorCode::DimensionMismatch, "expected a vector of length d²");
  ComplexMatrix m(d, d);
  std::size_t k = 0;
  for (std::size_t i = 0; i < d; ++i) m(i, i) = v[k++];
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      const cplx z(v[k] / std::numbers::sqrt2, v[k + 1] / std::numbers::sqrt2);
      k += 2;
      m(i, j) = z;
      m(j, i) = std::conj(z);
    }
  return m;
}

}  // namespace locc
