#pragma once

// Reference computations used as oracles. They deliberately avoid the
// library's kernels, embedding and tree walker so that agreement means
// something.

#include <cmath>
#include <complex>
#include <vector>

#include "locc/numerics/complex_matrix.hpp"
#include "locc/quantum/ensemble.hpp"
#include "locc/quantum/random.hpp"
#include "locc/tree/protocol_tree.hpp"

namespace oracle {

using locc::ComplexMatrix;
using locc::cplx;

inline ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      cplx acc{};
      for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
      c(i, j) = acc;
    }
  return c;
}

inline ComplexMatrix dagger(const ComplexMatrix& a) {
  ComplexMatrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = std::conj(a(i, j));
  return out;
}

inline ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

inline ComplexMatrix eye(std::size_t d) {
  ComplexMatrix m(d, d);
  for (std::size_t i = 0; i < d; ++i) m(i, i) = 1.0;
  return m;
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
  return worst;
}

// I ⊗ … ⊗ K ⊗ … ⊗ I by repeated Kronecker products.
inline ComplexMatrix lift(const ComplexMatrix& k, std::size_t party, const std::vector<std::size_t>& dims) {
  ComplexMatrix out = eye(1);
  for (std::size_t p = 0; p < dims.size(); ++p) out = tensor(out, p == party ? k : eye(dims[p]));
  return out;
}

// Every leaf's cumulative Kraus list is expanded explicitly, then
// Σ_leaves p_f tr(K ρ_f K†) is summed directly.
inline double success_by_leaves(const locc::ProtocolTree& t, const locc::Ensemble& s) {
  double total = 0.0;
  for (locc::VertexId leaf : t.leaves()) {
    std::vector<ComplexMatrix> acc{eye(t.space().total_dim())};
    for (locc::VertexId v : t.path_to(leaf)) {
      const locc::Vertex& parent = t.vertex(*t.vertex(v).parent);
      std::vector<ComplexMatrix> next;
      for (const ComplexMatrix& k : t.vertex(v).edge.kraus) {
        const ComplexMatrix big = lift(k, *parent.party, parent.dims);
        for (const ComplexMatrix& a : acc) next.push_back(matmul(big, a));
      }
      acc = std::move(next);
    }
    const locc::EnsembleMember& m = s.members.at(static_cast<std::size_t>(*t.vertex(leaf).label));
    for (const ComplexMatrix& k : acc) {
      const ComplexMatrix out = matmul(matmul(k, m.state), dagger(k));
      for (std::size_t i = 0; i < out.rows(); ++i) total += m.weight * out(i, i).real();
    }
  }
  return total;
}

inline ComplexMatrix random_matrix(std::size_t r, std::size_t c, locc::Rng& rng) {
  ComplexMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = rng.complex_normal();
  return m;
}

}  // namespace oracle
