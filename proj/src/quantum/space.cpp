#include "locc/quantum/space.hpp"

#include <functional>
#include <numeric>
#include <sstream>

#include "locc/error.hpp"

namespace locc {

std::size_t MultipartiteSpace::total_dim() const noexcept {
  return std::accumulate(party_dims.begin(), party_dims.end(), std::size_t{1}, std::multiplies<>());
}

MultipartiteSpace MultipartiteSpace::with_dim(std::size_t party, std::size_t dim) const {
  MultipartiteSpace out = *this;
  out.party_dims.at(party) = dim;
  return out;
}

ComplexMatrix embed_local(const ComplexMatrix& k, std::size_t party, const MultipartiteSpace& space) {
  if (party >= space.parties()) {
    throw Error(ErrorCode::DimensionMismatch, "party index out of range");
  }
  if (k.cols() != space.party_dims[party]) {
    std::ostringstream msg;
    msg << "local operator has input dim " << k.cols() << " but party " << party << " holds dim "
        << space.party_dims[party];
    throw Error(ErrorCode::DimensionMismatch, msg.str());
  }
  std::size_t before = 1, after = 1;
  for (std::size_t i = 0; i < party; ++i) before *= space.party_dims[i];
  for (std::size_t i = party + 1; i < space.parties(); ++i) after *= space.party_dims[i];

  // out[(b, r, a), (b, c, a)] = K[r, c]
  const std::size_t rows_k = k.rows(), cols_k = k.cols();
  ComplexMatrix out(before * rows_k * after, before * cols_k * after);
  for (std::size_t b = 0; b < before; ++b)
    for (std::size_t r = 0; r < rows_k; ++r)
      for (std::size_t c = 0; c < cols_k; ++c) {
        const cplx v = k(r, c);
        if (v == cplx{}) continue;
        const std::size_t row0 = (b * rows_k + r) * after;
        const std::size_t col0 = (b * cols_k + c) * after;
        for (std::size_t a = 0; a < after; ++a) out(row0 + a, col0 + a) = v;
      }
  return out;
}

}  // namespace locc
