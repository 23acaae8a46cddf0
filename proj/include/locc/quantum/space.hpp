#pragma once

#include <cstddef>
#include <vector>

#include "locc/numerics/complex_matrix.hpp"

namespace locc {

/// X = X_1 ⊗ … ⊗ X_m, party 0 is the most significant tensor factor.
struct MultipartiteSpace {
  std::vector<std::size_t> party_dims;

  std::size_t parties() const noexcept { return party_dims.size(); }
  std::size_t total_dim() const noexcept;
  /// The space after replacing party `party`'s dimension.
  MultipartiteSpace with_dim(std::size_t party, std::size_t dim) const;

  friend bool operator==(const MultipartiteSpace&, const MultipartiteSpace&) = default;
};

/// I ⊗ … ⊗ K ⊗ … ⊗ I with K in slot `party`. K must take party_dims[party]
/// to any output dimension; the result maps space.total_dim() to the total
/// dimension of space.with_dim(party, K.rows()).
ComplexMatrix embed_local(const ComplexMatrix& k, std::size_t party, const MultipartiteSpace& space);

}  // namespace locc
