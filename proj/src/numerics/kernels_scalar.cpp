#include "kernel_tables.hpp"

namespace locc::kernels::detail {
namespace {

void cgemm_acc_scalar(const cplx* a, const cplx* b, cplx* c, std::size_t m, std::size_t k,
                      std::size_t n, bool adjoint_a) {
  for (std::size_t i = 0; i < m; ++i) {
    cplx* crow = c + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const cplx aip = adjoint_a ? std::conj(a[p * m + i]) : a[i * k + p];
      if (aip == cplx{}) continue;
      const cplx* brow = b + p * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += aip * brow[j];
    }
  }
}

void caxpy_scalar(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double cnorm2_scalar(const cplx* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::norm(x[i]);
  return s;
}

double ddot_scalar(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

void daxpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace

const KernelTable kScalarTable{cgemm_acc_scalar, caxpy_scalar, cnorm2_scalar, ddot_scalar,
                               daxpy_scalar};

}  // namespace locc::kernels::detail
