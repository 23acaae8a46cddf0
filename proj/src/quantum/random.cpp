#include "locc/quantum/random.hpp"

#include <cmath>
#include <numbers>

#include "locc/error.hpp"

namespace locc {

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::size_t Rng::uniform_int(std::size_t lo, std::size_t hi) {
  const std::size_t span = hi - lo + 1;
  return lo + std::min(static_cast<std::size_t>(uniform() * static_cast<double>(span)), span - 1);
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double phi = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(phi);
  has_spare_ = true;
  return r * std::cos(phi);
}

cplx Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

ComplexMatrix ginibre(std::size_t rows, std::size_t cols, Rng& rng) {
  ComplexMatrix g(rows, cols);
  for (cplx& z : g.data()) z = rng.complex_normal();
  return g;
}

ComplexMatrix haar_unitary(std::size_t n, Rng& rng) {
  ComplexMatrix u = ginibre(n, n, rng);
  // Modified Gram–Schmidt on columns; positive diagonal of R makes the
  // result Haar distributed.
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      cplx dot{};
      for (std::size_t r = 0; r < n; ++r) dot += std::conj(u(r, i)) * u(r, j);
      for (std::size_t r = 0; r < n; ++r) u(r, j) -= dot * u(r, i);
    }
    double nrm = 0.0;
    for (std::size_t r = 0; r < n; ++r) nrm += std::norm(u(r, j));
    nrm = std::sqrt(nrm);
    for (std::size_t r = 0; r < n; ++r) u(r, j) /= nrm;
  }
  return u;
}

ComplexMatrix random_density(std::size_t dim, Rng& rng, std::size_t rank) {
  const ComplexMatrix g = ginibre(dim, rank ? rank : dim, rng);
  ComplexMatrix rho = g * g.adjoint();
  rho *= 1.0 / rho.trace().real();
  return rho;
}

std::vector<ComplexMatrix> random_measurement(std::size_t d_in, std::size_t outcomes, Rng& rng,
                                              std::size_t d_out) {
  if (d_out == 0) d_out = d_in;
  const std::size_t n = outcomes * d_out;
  if (n < d_in) throw Error(ErrorCode::InvalidInput, "dilation too small for the input dimension");
  const ComplexMatrix u = haar_unitary(n, rng);
  std::vector<ComplexMatrix> kraus;
  kraus.reserve(outcomes);
  for (std::size_t o = 0; o < outcomes; ++o) {
    ComplexMatrix k(d_out, d_in);
    for (std::size_t r = 0; r < d_out; ++r)
      for (std::size_t c = 0; c < d_in; ++c) k(r, c) = u(o * d_out + r, c);
    kraus.push_back(std::move(k));
  }
  return kraus;
}

std::vector<double> random_simplex(std::size_t n, Rng& rng) {
  std::vector<double> w(n);
  double total = 0.0;
  for (double& x : w) {
    double u = rng.uniform();
    while (u <= 0.0) u = rng.uniform();
    x = -std::log(u);
    total += x;
  }
  for (double& x : w) x /= total;
  return w;
}

}  // namespace locc
