#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "locc/numerics/complex_matrix.hpp"

namespace locc {

/// Seeded PRNG stream used by every generator in the toolkit. The algorithm
/// is pinned so that a seed reproduces the same data on any platform:
/// mt19937_64, uniforms from the top 53 bits, normals by Box–Muller with the
/// second variate cached.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform();  // [0, 1)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Integer in [lo, hi] inclusive.
  std::size_t uniform_int(std::size_t lo, std::size_t hi);
  double normal();
  cplx complex_normal();  // E|z|² = 1

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

ComplexMatrix ginibre(std::size_t rows, std::size_t cols, Rng& rng);
/// Haar-distributed unitary (Gram–Schmidt of a Ginibre matrix).
ComplexMatrix haar_unitary(std::size_t n, Rng& rng);
/// Random density matrix G G† / tr(G G†) with G of shape dim × rank.
ComplexMatrix random_density(std::size_t dim, Rng& rng, std::size_t rank = 0);
/// Kraus operators K_i (d_out × d_in) cut from the first d_in columns of a
/// Haar unitary of size outcomes·d_out, so Σ K_i†K_i = I exactly up to
/// roundoff. Requires outcomes·d_out ≥ d_in.
std::vector<ComplexMatrix> random_measurement(std::size_t d_in, std::size_t outcomes, Rng& rng,
                                              std::size_t d_out = 0);
/// Random probability vector (normalized exponentials).
std::vector<double> random_simplex(std::size_t n, Rng& rng);

}  // namespace locc
