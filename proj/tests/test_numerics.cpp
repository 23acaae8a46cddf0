#include <doctest.h>

#include <cmath>
#include <numbers>

#include "locc/caratheodory.hpp"
#include "locc/error.hpp"
#include "locc/numerics/eigen.hpp"
#include "locc/numerics/kernels.hpp"
#include "locc/numerics/real_linalg.hpp"
#include "support.hpp"

using namespace locc;

namespace {

ComplexMatrix random_hermitian(std::size_t n, Rng& rng) {
  const ComplexMatrix g = oracle::random_matrix(n, n, rng);
  return 0.5 * (g + g.adjoint());
}

}  // namespace

TEST_CASE("products agree with the triple loop") {
  Rng rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t m = rng.uniform_int(1, 7), k = rng.uniform_int(1, 7), n = rng.uniform_int(1, 7);
    const ComplexMatrix a = oracle::random_matrix(m, k, rng), b = oracle::random_matrix(k, n, rng);
    CHECK(oracle::max_abs_diff(a * b, oracle::matmul(a, b)) < 1e-12);
    const ComplexMatrix c = oracle::random_matrix(m, n, rng);
    CHECK(oracle::max_abs_diff(adjoint_times(a, c), oracle::matmul(oracle::dagger(a), c)) < 1e-12);
    CHECK(oracle::max_abs_diff(kron(a, b), oracle::tensor(a, b)) < 1e-15);
  }
}

TEST_CASE("literal construction and trace") {
  const ComplexMatrix m{{1, cplx(0, 2)}, {cplx(0, -2), 3}};
  CHECK(m.rows() == 2);
  CHECK(m.trace() == cplx(4, 0));
  CHECK(is_hermitian(m));
  CHECK(m.frobenius_norm() == doctest::Approx(std::sqrt(1.0 + 4 + 4 + 9)));
  CHECK(frobenius_distance(m, ComplexMatrix(3, 3)) == std::numeric_limits<double>::infinity());
}

TEST_CASE("AVX2 kernels match the scalar reference") {
  const kernels::KernelTable* fast = kernels::avx2_table();
  if (!fast) {
    MESSAGE("AVX2 path unavailable on this machine; equivalence not exercised");
    return;
  }
  const kernels::KernelTable& ref = kernels::scalar_table();
  Rng rng(5);
  for (std::size_t n : {1, 2, 3, 4, 5, 7, 8, 9, 16, 31, 64}) {
    std::vector<cplx> x(n), y(n);
    std::vector<double> u(n), w(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = rng.complex_normal();
      y[i] = rng.complex_normal();
      u[i] = rng.normal();
      w[i] = rng.normal();
    }
    CHECK(fast->cnorm2(x.data(), n) == doctest::Approx(ref.cnorm2(x.data(), n)).epsilon(1e-13));
    CHECK(fast->ddot(u.data(), w.data(), n) == doctest::Approx(ref.ddot(u.data(), w.data(), n)).epsilon(1e-12));

    std::vector<cplx> y1 = y, y2 = y;
    ref.caxpy({0.3, -1.1}, x.data(), y1.data(), n);
    fast->caxpy({0.3, -1.1}, x.data(), y2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(y1[i] - y2[i]) < 1e-14);

    std::vector<double> w1 = w, w2 = w;
    ref.daxpy(-0.7, u.data(), w1.data(), n);
    fast->daxpy(-0.7, u.data(), w2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(w1[i] - w2[i]) < 1e-14);
  }
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t m = rng.uniform_int(1, 9), k = rng.uniform_int(1, 9), n = rng.uniform_int(1, 9);
    for (bool adj : {false, true}) {
      const ComplexMatrix a = adj ? oracle::random_matrix(k, m, rng) : oracle::random_matrix(m, k, rng);
      const ComplexMatrix b = oracle::random_matrix(k, n, rng);
      ComplexMatrix c1 = oracle::random_matrix(m, n, rng), c2 = c1;
      ref.cgemm_acc(a.data().data(), b.data().data(), c1.data().data(), m, k, n, adj);
      fast->cgemm_acc(a.data().data(), b.data().data(), c2.data().data(), m, k, n, adj);
      CHECK(oracle::max_abs_diff(c1, c2) < 1e-12);
    }
  }
}

TEST_CASE("backend override round-trips") {
  const kernels::Backend before = kernels::active_backend();
  CHECK(kernels::select_backend(kernels::Backend::Scalar));
  CHECK(kernels::active_backend() == kernels::Backend::Scalar);
  CHECK(kernels::backend_name(kernels::Backend::Scalar) == "scalar");
  kernels::select_backend(before);
}

TEST_CASE("Jacobi eigensolver") {
  SUBCASE("hand examples") {
    const HermitianEigen e = hermitian_eig(ComplexMatrix{{2, 1}, {1, 2}});
    CHECK(e.eigenvalues[0] == doctest::Approx(1.0));
    CHECK(e.eigenvalues[1] == doctest::Approx(3.0));
    const HermitianEigen f = hermitian_eig(ComplexMatrix{{1, cplx(0, 1)}, {cplx(0, -1), 1}});
    CHECK(f.eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(f.eigenvalues[1] == doctest::Approx(2.0));
    const HermitianEigen z = hermitian_eig(ComplexMatrix(3, 3));
    for (double l : z.eigenvalues) CHECK(l == 0.0);
  }
  SUBCASE("random reconstruction") {
    Rng rng(3);
    for (std::size_t n = 1; n <= 12; ++n) {
      const ComplexMatrix m = random_hermitian(n, rng);
      const HermitianEigen e = hermitian_eig(m);
      const ComplexMatrix back = spectral_apply(e, [](double l) { return l; });
      CHECK(frobenius_distance(back, m) < 1e-11 * std::max(1.0, m.frobenius_norm()));
      const ComplexMatrix vv = oracle::matmul(oracle::dagger(e.eigenvectors), e.eigenvectors);
      CHECK(frobenius_distance(vv, ComplexMatrix::identity(n)) < 1e-12);
      for (std::size_t i = 1; i < n; ++i) CHECK(e.eigenvalues[i - 1] <= e.eigenvalues[i]);
    }
  }
  SUBCASE("rejects non-Hermitian input") {
    CHECK_THROWS_AS(hermitian_eig(ComplexMatrix{{0, 1}, {0, 0}}), Error);
  }
  SUBCASE("sweep cap") {
    EigenOptions opts;
    opts.max_sweeps = 0;
    try {
      hermitian_eig(ComplexMatrix{{0, 1}, {1, 0}}, opts);
      FAIL("expected NoConvergence");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NoConvergence);
    }
  }
}

TEST_CASE("PSD square root and support inverse") {
  Rng rng(8);
  for (std::size_t n = 1; n <= 6; ++n) {
    const ComplexMatrix g = oracle::random_matrix(n, n, rng);
    const ComplexMatrix psd = oracle::matmul(oracle::dagger(g), g);
    const ComplexMatrix r = sqrt_psd(psd);
    CHECK(frobenius_distance(oracle::matmul(r, r), psd) < 1e-10 * psd.frobenius_norm());
    CHECK(is_hermitian(r));
  }
  // rank one: |0⟩⟨0|·4
  const SupportInverseSqrt s = inv_sqrt_on_support(ComplexMatrix::diagonal({4.0, 0.0}));
  CHECK(std::abs(s.pinv_sqrt(0, 0) - 0.5) < 1e-15);
  CHECK(std::abs(s.pinv_sqrt(1, 1)) < 1e-15);
  CHECK(std::abs(s.null_proj(1, 1) - 1.0) < 1e-15);
  CHECK(support_basis(ComplexMatrix::diagonal({4.0, 0.0})).cols() == 1);
  CHECK(min_eigenvalue(ComplexMatrix::diagonal({-1.0, 2.0})) == doctest::Approx(-1.0));

  try {
    sqrt_psd(ComplexMatrix::diagonal({1.0, -1e-3}));
    FAIL("expected NotPsd");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotPsd);
  }
  // inside the clamp window
  CHECK(std::abs(sqrt_psd(ComplexMatrix::diagonal({1.0, -1e-12}))(1, 1)) == 0.0);
}

TEST_CASE("real null vectors") {
  RealMatrix a(2, 3);
  a(0, 0) = 1;
  a(0, 1) = 2;
  a(0, 2) = 3;
  a(1, 0) = 4;
  a(1, 1) = 5;
  a(1, 2) = 6;
  const auto z = real_null_vector(a);
  REQUIRE(z);
  const std::vector<double> az = a.apply(*z);
  CHECK(std::hypot(az[0], az[1]) < 1e-12);
  double norm = 0.0;
  for (double x : *z) norm += x * x;
  CHECK(norm == doctest::Approx(1.0));
  // (1, −2, 1) up to sign
  CHECK(std::abs(std::abs((*z)[0]) - 1.0 / std::sqrt(6.0)) < 1e-12);

  RealMatrix full(3, 2);
  full(0, 0) = 1;
  full(1, 1) = 1;
  full(2, 0) = 1;
  CHECK_FALSE(real_null_vector(full));

  Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t rows = rng.uniform_int(1, 8), cols = rows + rng.uniform_int(1, 3);
    RealMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.normal();
    const auto v = real_null_vector(m);
    REQUIRE(v);
    double res = 0.0;
    for (double x : m.apply(*v)) res += x * x;
    CHECK(std::sqrt(res) < 1e-10 * m.frobenius_norm());
  }
}

TEST_CASE("Hermitian coordinates are isometric") {
  Rng rng(4);
  for (std::size_t d = 1; d <= 6; ++d) {
    const ComplexMatrix m = random_hermitian(d, rng);
    const std::vector<double> v = hermitian_to_vector(m, d);
    REQUIRE(v.size() == d * d);
    double n2 = 0.0;
    for (double x : v) n2 += x * x;
    CHECK(std::abs(std::sqrt(n2) - m.frobenius_norm()) < 1e-12);
    CHECK(frobenius_distance(vector_to_hermitian(v, d), m) < 1e-13);
  }
  const std::vector<double> v = hermitian_to_vector(ComplexMatrix{{1, cplx(1, 2)}, {cplx(1, -2), 3}}, 2);
  CHECK(v[0] == 1.0);
  CHECK(v[1] == 3.0);
  CHECK(v[2] == doctest::Approx(std::numbers::sqrt2));
  CHECK(v[3] == doctest::Approx(2 * std::numbers::sqrt2));
}
