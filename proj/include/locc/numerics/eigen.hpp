#pragma once

#include <vector>

#include "locc/numerics/complex_matrix.hpp"

namespace locc {

struct HermitianEigen {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // column j pairs with eigenvalues[j]
};

struct EigenOptions {
  int max_sweeps = 100;
  /// Stop once the off-diagonal Frobenius norm drops below this times ‖M‖_F.
  double off_diagonal_tol = 1e-14;
};

/// Cyclic Jacobi diagonalization of a Hermitian matrix.
/// Throws NotHermitian if ‖M − M†‖_F > 1e-9·max(1, ‖M‖_F) and NoConvergence
/// if the sweep cap is hit.
HermitianEigen hermitian_eig(const ComplexMatrix& m, const EigenOptions& opts = {});

/// V · diag(f(λ)) · V†
template <class F>
ComplexMatrix spectral_apply(const HermitianEigen& eig, F&& f);

inline constexpr double kPsdClampWindow = 1e-9;
inline constexpr double kDefaultRankTol = 1e-10;

/// Principal square root of a PSD matrix. Eigenvalues in [−1e-9, 0) are
/// clamped to zero; anything more negative throws NotPsd.
ComplexMatrix sqrt_psd(const ComplexMatrix& m);

struct SupportInverseSqrt {
  ComplexMatrix pinv_sqrt;  // Σ_{λ > tol·λmax} λ^{-1/2} |v⟩⟨v|
  ComplexMatrix null_proj;  // projector onto the complement of that span
};

/// Inverse square root restricted to the numerical support of a PSD matrix.
/// `rank_tol` is relative to the largest eigenvalue.
SupportInverseSqrt inv_sqrt_on_support(const ComplexMatrix& m, double rank_tol = kDefaultRankTol);

/// Orthonormal basis (as columns) of the numerical support of a PSD matrix.
ComplexMatrix support_basis(const ComplexMatrix& m, double rank_tol = kDefaultRankTol);

/// Smallest eigenvalue of a Hermitian matrix.
double min_eigenvalue(const ComplexMatrix& m);

// ---------------------------------------------------------------------------

template <class F>
ComplexMatrix spectral_apply(const HermitianEigen& eig, F&& f) {
  const ComplexMatrix& v = eig.eigenvectors;
  const std::size_t n = v.rows();
  ComplexMatrix scaled(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const double fj = f(eig.eigenvalues[j]);
    if (fj == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) scaled(i, j) = v(i, j) * fj;
  }
  ComplexMatrix out(n, n);
  // scaled · V†
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      cplx acc{};
      for (std::size_t j = 0; j < n; ++j) acc += scaled(i, j) * std::conj(v(k, j));
      out(i, k) = acc;
    }
  return out;
}

}  // namespace locc
