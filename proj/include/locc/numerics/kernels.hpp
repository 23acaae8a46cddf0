#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

// Inner-loop kernels behind ComplexMatrix arithmetic and the real elimination
// steps. Every kernel has a portable scalar reference implementation; an
// AVX2/FMA variant is compiled when the toolchain supports it and selected at
// runtime from CPUID. Setting LOCC_SIMD=scalar in the environment forces the
// reference path.

namespace locc::kernels {

using cplx = std::complex<double>;

enum class Backend { Scalar, Avx2 };

struct KernelTable {
  // c[m×n] += op(a) · b[k×n]; op(a) is a[m×k] (adjoint_a = false) or the
  // adjoint of a[k×m] (adjoint_a = true). All row-major, contiguous.
  void (*cgemm_acc)(const cplx* a, const cplx* b, cplx* c, std::size_t m, std::size_t k,
                    std::size_t n, bool adjoint_a);
  // y += alpha * x
  void (*caxpy)(cplx alpha, const cplx* x, cplx* y, std::size_t n);
  // Σ |x_i|²
  double (*cnorm2)(const cplx* x, std::size_t n);
  // Σ x_i y_i
  double (*ddot)(const double* x, const double* y, std::size_t n);
  // y += alpha * x
  void (*daxpy)(double alpha, const double* x, double* y, std::size_t n);
};

const KernelTable& scalar_table() noexcept;
/// nullptr when the AVX2 variant was not compiled in or the CPU lacks AVX2/FMA.
const KernelTable* avx2_table() noexcept;

/// The table used by the library. Resolved once on first use.
const KernelTable& active() noexcept;
Backend active_backend() noexcept;
std::string_view backend_name(Backend b) noexcept;

/// Overrides the runtime choice (tests use this to run both paths). Returns
/// false if the requested backend is unavailable on this machine.
bool select_backend(Backend b) noexcept;

inline void cgemm_acc(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> c,
                      std::size_t m, std::size_t k, std::size_t n, bool adjoint_a = false) {
  active().cgemm_acc(a.data(), b.data(), c.data(), m, k, n, adjoint_a);
}
inline void caxpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y) {
  active().caxpy(alpha, x.data(), y.data(), x.size());
}
inline double cnorm2(std::span<const cplx> x) { return active().cnorm2(x.data(), x.size()); }
inline double ddot(std::span<const double> x, std::span<const double> y) {
  return active().ddot(x.data(), y.data(), x.size());
}
inline void daxpy(double alpha, std::span<const double> x, std::span<double> y) {
  active().daxpy(alpha, x.data(), y.data(), x.size());
}

}  // namespace locc::kernels
