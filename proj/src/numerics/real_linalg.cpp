#include "locc/numerics/real_linalg.hpp"

#include <cmath>
#include <numeric>
#include <utility>

#include "locc/numerics/kernels.hpp"

namespace locc {

double RealMatrix::frobenius_norm() const { return std::sqrt(kernels::ddot(data_, data_)); }

std::vector<double> RealMatrix::apply(std::span<const double> x) const {
  std::vector<double> y(rows_);
  for (std::size_t r = 0; r < rows_; ++r) y[r] = kernels::ddot(row(r), x);
  return y;
}

std::optional<std::vector<double>> real_null_vector(const RealMatrix& a, double tol) {
  const std::size_t rows = a.rows();
  const std::size_t cols = a.cols();
  if (cols == 0) return std::nullopt;
  const double anorm = a.frobenius_norm();
  if (anorm == 0.0) {
    std::vector<double> z(cols, 0.0);
    z[0] = 1.0;
    return z;
  }

  // Column-major working copy so that column operations are contiguous.
  std::vector<std::vector<double>> w(cols, std::vector<double>(rows));
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) w[c][r] = a(r, c);
  std::vector<std::size_t> perm(cols);
  std::iota(perm.begin(), perm.end(), 0);

  const double cut = tol * anorm;
  const std::size_t steps = std::min(rows, cols);
  std::size_t rank = steps;
  std::vector<double> v(rows);
  for (std::size_t k = 0; k < steps; ++k) {
    std::size_t best = k;
    double best_norm = -1.0;
    for (std::size_t c = k; c < cols; ++c) {
      const std::span<const double> tail(w[c].data() + k, rows - k);
      const double nrm = kernels::ddot(tail, tail);
      if (nrm > best_norm) {
        best_norm = nrm;
        best = c;
      }
    }
    if (std::sqrt(best_norm) <= cut) {
      rank = k;
      break;
    }
    std::swap(w[k], w[best]);
    std::swap(perm[k], perm[best]);

    // Householder reflector mapping w[k][k:] onto a multiple of e_k.
    const double xnorm = std::sqrt(best_norm);
    const double alpha = w[k][k] > 0.0 ? -xnorm : xnorm;
    const std::span<double> vk(v.data() + k, rows - k);
    for (std::size_t r = k; r < rows; ++r) v[r] = w[k][r];
    v[k] -= alpha;
    const double vnorm2 = kernels::ddot(vk, vk);
    if (vnorm2 > 0.0) {
      for (std::size_t c = k + 1; c < cols; ++c) {
        const std::span<double> col(w[c].data() + k, rows - k);
        const double f = -2.0 * kernels::ddot(vk, col) / vnorm2;
        kernels::daxpy(f, vk, col);
      }
    }
    w[k][k] = alpha;
    for (std::size_t r = k + 1; r < rows; ++r) w[k][r] = 0.0;
  }
  if (rank == cols) return std::nullopt;

  // R11 y = −R12[:, first free column], back substitution.
  const std::size_t free_col = rank;
  std::vector<double> zp(cols, 0.0);
  zp[free_col] = 1.0;
  for (std::size_t i = rank; i-- > 0;) {
    double s = -w[free_col][i];
    for (std::size_t j = i + 1; j < rank; ++j) s -= w[j][i] * zp[j];
    zp[i] = s / w[i][i];
  }
  std::vector<double> z(cols, 0.0);
  for (std::size_t i = 0; i < cols; ++i) z[perm[i]] = zp[i];
  const double zn = std::sqrt(kernels::ddot(z, z));
  for (double& x : z) x /= zn;

  const std::vector<double> res = a.apply(z);
  if (std::sqrt(kernels::ddot(res, res)) > cut) return std::nullopt;
  return z;
}

}  // namespace locc
