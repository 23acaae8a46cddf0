#include "locc/numerics/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "locc/error.hpp"

namespace locc {
namespace {

double off_diagonal_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

// One complex Jacobi rotation annihilating a(p,q). The rotation is the phase
// fix diag(1, e^{-iφ}) followed by a real Givens rotation of angle θ.
void rotate(ComplexMatrix& a, ComplexMatrix& v, std::size_t p, std::size_t q) {
  const cplx g = a(p, q);
  const double ag = std::abs(g);
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();
  const cplx phase_conj = std::conj(g / ag);
  const double theta = 0.5 * std::atan2(2.0 * ag, aqq - app);
  const double c = std::cos(theta);
  const double s = std::sin(theta);

  const cplx gpp = c, gpq = s, gqp = -s * phase_conj, gqq = c * phase_conj;
  const std::size_t n = a.rows();

  for (std::size_t k = 0; k < n; ++k) {
    const cplx akp = a(k, p), akq = a(k, q);
    a(k, p) = akp * gpp + akq * gqp;
    a(k, q) = akp * gpq + akq * gqq;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const cplx apk = a(p, k), aqk = a(q, k);
    a(p, k) = std::conj(gpp) * apk + std::conj(gqp) * aqk;
    a(q, k) = std::conj(gpq) * apk + std::conj(gqq) * aqk;
  }
  a(p, q) = a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();

  for (std::size_t k = 0; k < n; ++k) {
    const cplx vkp = v(k, p), vkq = v(k, q);
    v(k, p) = vkp * gpp + vkq * gqp;
    v(k, q) = vkp * gpq + vkq * gqq;
  }
}

}  // namespace

HermitianEigen hermitian_eig(const ComplexMatrix& m, const EigenOptions& opts) {
  if (!m.is_square()) throw Error(ErrorCode::NotHermitian, "matrix is not square");
  if (!m.all_finite()) throw Error(ErrorCode::InvalidInput, "matrix has non-finite entries");
  const double norm = m.frobenius_norm();
  if (hermiticity_defect(m) > 1e-9 * std::max(1.0, norm)) {
    throw Error(ErrorCode::NotHermitian, "hermiticity defect exceeds 1e-9 relative");
  }

  const std::size_t n = m.rows();
  ComplexMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double target = opts.off_diagonal_tol * norm;
  bool converged = n <= 1 || norm == 0.0;
  for (int sweep = 0; !converged && sweep < opts.max_sweeps; ++sweep) {
    if (off_diagonal_norm(a) <= target) {
      converged = true;
      break;
    }
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const double ag = std::abs(a(p, q));
        if (ag == 0.0) continue;
        // Below the precision of both diagonal entries the rotation is the
        // identity to working precision; drop the entry instead.
        const double app = std::abs(a(p, p).real()), aqq = std::abs(a(q, q).real());
        if (sweep > 3 && app + 100.0 * ag == app && aqq + 100.0 * ag == aqq) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        rotate(a, v, p, q);
      }
  }
  if (!converged && off_diagonal_norm(a) > target) {
    std::ostringstream msg;
    msg << "Jacobi did not converge in " << opts.max_sweeps << " sweeps";
    throw Error(ErrorCode::NoConvergence, msg.str());
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

  HermitianEigen out{std::vector<double>(n), ComplexMatrix(n, n)};
  for (std::size_t j = 0; j < n; ++j) {
    out.eigenvalues[j] = a(order[j], order[j]).real();
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, j) = v(i, order[j]);
  }
  return out;
}

namespace {

HermitianEigen psd_eig(const ComplexMatrix& m) {
  HermitianEigen eig = hermitian_eig(m);
  const double top = eig.eigenvalues.empty() ? 0.0 : std::max(0.0, eig.eigenvalues.back());
  if (!eig.eigenvalues.empty() && eig.eigenvalues.front() < -kPsdClampWindow * std::max(1.0, top)) {
    std::ostringstream msg;
    msg << "eigenvalue " << eig.eigenvalues.front() << " below clamp window";
    throw Error(ErrorCode::NotPsd, msg.str());
  }
  for (double& l : eig.eigenvalues) l = std::max(l, 0.0);
  return eig;
}

}  // namespace

ComplexMatrix sqrt_psd(const ComplexMatrix& m) {
  const HermitianEigen eig = psd_eig(m);
  return spectral_apply(eig, [](double l) { return std::sqrt(l); });
}

SupportInverseSqrt inv_sqrt_on_support(const ComplexMatrix& m, double rank_tol) {
  const HermitianEigen eig = psd_eig(m);
  const std::size_t n = m.rows();
  const double top = n ? eig.eigenvalues.back() : 0.0;
  if (top <= 0.0) return {ComplexMatrix(n, n), ComplexMatrix::identity(n)};
  const double cut = rank_tol * top;
  return {spectral_apply(eig, [cut](double l) { return l > cut ? 1.0 / std::sqrt(l) : 0.0; }),
          spectral_apply(eig, [cut](double l) { return l > cut ? 0.0 : 1.0; })};
}

ComplexMatrix support_basis(const ComplexMatrix& m, double rank_tol) {
  const HermitianEigen eig = psd_eig(m);
  const std::size_t n = m.rows();
  const double top = n ? eig.eigenvalues.back() : 0.0;
  std::vector<std::size_t> keep;
  for (std::size_t j = 0; j < n; ++j)
    if (top > 0.0 && eig.eigenvalues[j] > rank_tol * top) keep.push_back(j);
  ComplexMatrix basis(n, keep.size());
  for (std::size_t c = 0; c < keep.size(); ++c)
    for (std::size_t i = 0; i < n; ++i) basis(i, c) = eig.eigenvectors(i, keep[c]);
  return basis;
}

double min_eigenvalue(const ComplexMatrix& m) {
  const HermitianEigen eig = hermitian_eig(m);
  return eig.eigenvalues.empty() ? 0.0 : eig.eigenvalues.front();
}

}  // namespace locc
