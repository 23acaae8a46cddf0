// Compiled with -mavx2 -mfma; only reached after a CPUID check.
#include <immintrin.h>

#include "kernel_tables.hpp"

namespace locc::kernels::detail {
namespace {

// Complex doubles are stored interleaved (re, im); one __m256d holds two.

inline __m256d cmul_broadcast(__m256d are, __m256d aim, __m256d b) {
  // (are + i aim)(bre + i bim) per lane pair:
  //   even lane: are*bre - aim*bim, odd lane: are*bim + aim*bre
  const __m256d bswap = _mm256_permute_pd(b, 0b0101);
  return _mm256_fmaddsub_pd(are, b, _mm256_mul_pd(aim, bswap));
}

void cgemm_acc_avx2(const cplx* a, const cplx* b, cplx* c, std::size_t m, std::size_t k,
                    std::size_t n, bool adjoint_a) {
  const std::size_t n2 = n & ~std::size_t{1};
  for (std::size_t i = 0; i < m; ++i) {
    double* crow = reinterpret_cast<double*>(c + i * n);
    for (std::size_t p = 0; p < k; ++p) {
      const cplx aip = adjoint_a ? std::conj(a[p * m + i]) : a[i * k + p];
      if (aip == cplx{}) continue;
      const double* brow = reinterpret_cast<const double*>(b + p * n);
      const __m256d are = _mm256_set1_pd(aip.real());
      const __m256d aim = _mm256_set1_pd(aip.imag());
      std::size_t j = 0;
      for (; j < n2; j += 2) {
        const __m256d bv = _mm256_loadu_pd(brow + 2 * j);
        const __m256d cv = _mm256_loadu_pd(crow + 2 * j);
        _mm256_storeu_pd(crow + 2 * j, _mm256_add_pd(cv, cmul_broadcast(are, aim, bv)));
      }
      if (j < n) {
        c[i * n + j] += aip * b[p * n + j];
      }
    }
  }
}

void caxpy_avx2(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  const __m256d are = _mm256_set1_pd(alpha.real());
  const __m256d aim = _mm256_set1_pd(alpha.imag());
  const double* xd = reinterpret_cast<const double*>(x);
  double* yd = reinterpret_cast<double*>(y);
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * j);
    const __m256d yv = _mm256_loadu_pd(yd + 2 * j);
    _mm256_storeu_pd(yd + 2 * j, _mm256_add_pd(yv, cmul_broadcast(are, aim, xv)));
  }
  for (; j < n; ++j) y[j] += alpha * x[j];
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double ddot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

double cnorm2_avx2(const cplx* x, std::size_t n) {
  const double* xd = reinterpret_cast<const double*>(x);
  return ddot_avx2(xd, xd, 2 * n);
}

void daxpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d av = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace

const KernelTable kAvx2Table{cgemm_acc_avx2, caxpy_avx2, cnorm2_avx2, ddot_avx2, daxpy_avx2};

}  // namespace locc::kernels::detail
