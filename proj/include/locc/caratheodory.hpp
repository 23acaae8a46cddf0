#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "locc/numerics/complex_matrix.hpp"

namespace locc {

/// A probability distribution over a finite list of points in ℝ^dim.
struct WeightedPointSet {
  std::size_t dim = 0;
  std::vector<std::vector<double>> points;
  std::vector<double> weights;

  /// Throws InvalidInput unless weights are nonnegative, sum to 1 within
  /// 1e-10, and every point has length `dim`.
  void validate() const;
  std::size_t support_size() const;
};

std::vector<double> barycentre(const WeightedPointSet& s);

struct SupportReductionOptions {
  /// Relative tolerance handed to the null-vector search.
  double null_tol = 1e-11;
};

/// Moves weight along affine dependencies of the support until the support is
/// affinely independent (hence at most dim+1 points). The point list is kept;
/// only weights change, and the new support is a subset of the old one.
WeightedPointSet reduce_support(const WeightedPointSet& s, const SupportReductionOptions& opts = {});

struct PeeledComponent {
  double coefficient;
  WeightedPointSet sub;
};

/// Writes `s` as a convex combination of distributions with the same
/// barycentre and affinely independent support:
///   s.weights = Σ_j coefficient_j · sub_j.weights.
/// Each round peels the largest feasible multiple of reduce_support(residual).
std::vector<PeeledComponent> peel_decompose(const WeightedPointSet& s,
                                            const SupportReductionOptions& opts = {});

/// Isometric real coordinates of a d×d Hermitian matrix: the d diagonal
/// entries, then √2·Re m_ij and √2·Im m_ij for i < j in row-major order.
std::vector<double> hermitian_to_vector(const ComplexMatrix& m, std::size_t d);
ComplexMatrix vector_to_hermitian(std::span<const double> v, std::size_t d);

}  // namespace locc
