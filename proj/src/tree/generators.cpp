#include "locc/tree/generators.hpp"

#include <cmath>

#include "locc/error.hpp"

namespace locc {
namespace {

ComplexMatrix ket_projector(std::span<const cplx> amplitudes) {
  const std::size_t n = amplitudes.size();
  ComplexMatrix p(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) p(i, j) = amplitudes[i] * std::conj(amplitudes[j]);
  return p;
}

CpMap projector_edge(std::size_t d, std::size_t k) {
  ComplexMatrix p(d, d);
  p(k, k) = 1.0;
  return CpMap::single(std::move(p));
}

// A measures Z, then B measures Z; label(a, b) chosen by the caller.
template <class Label>
ProtocolTree two_round_z(Label&& label) {
  ProtocolTree t(MultipartiteSpace{{2, 2}});
  t.set_party(ProtocolTree::root(), 0);
  for (std::size_t a = 0; a < 2; ++a) {
    const VertexId va = t.add_child(ProtocolTree::root(), projector_edge(2, a));
    t.set_party(va, 1);
    for (std::size_t b = 0; b < 2; ++b) t.set_label(t.add_child(va, projector_edge(2, b)), label(a, b));
  }
  return t;
}

}  // namespace

DemoInstance bell_demo() {
  const double h = 1.0 / std::sqrt(2.0);
  const cplx phi_plus[] = {h, 0.0, 0.0, h};
  const cplx psi_plus[] = {0.0, h, h, 0.0};
  Ensemble s = Ensemble::make(MultipartiteSpace{{2, 2}},
                              {{0.5, ket_projector(phi_plus)}, {0.5, ket_projector(psi_plus)}});
  return {two_round_z([](std::size_t a, std::size_t b) { return static_cast<int>(a ^ b); }), std::move(s)};
}

DemoInstance product_basis_demo() {
  std::vector<EnsembleMember> members;
  for (std::size_t k = 0; k < 4; ++k) {
    ComplexMatrix p(4, 4);
    p(k, k) = 1.0;
    members.push_back({0.25, std::move(p)});
  }
  return {two_round_z([](std::size_t a, std::size_t b) { return static_cast<int>(2 * a + b); }),
          Ensemble::make(MultipartiteSpace{{2, 2}}, std::move(members))};
}

ProtocolTree random_protocol(const RandomProtocolSpec& spec, Rng& rng) {
  if (spec.party_dims.empty() || spec.labels == 0) throw Error(ErrorCode::InvalidInput, "empty protocol spec");
  ProtocolTree t(MultipartiteSpace{spec.party_dims});
  std::vector<VertexId> frontier{ProtocolTree::root()};
  for (std::size_t round = 0; round < spec.rounds; ++round) {
    const std::size_t party = round % spec.party_dims.size();
    const std::size_t lo = round == 0 ? spec.root_min : spec.inner_min;
    const std::size_t hi = round == 0 ? spec.root_max : spec.inner_max;
    std::vector<VertexId> next;
    for (VertexId v : frontier) {
      t.set_party(v, party);
      const std::size_t d = t.local_dim(v);
      const std::size_t outcomes = rng.uniform_int(lo, hi);
      for (ComplexMatrix& k : random_measurement(d, outcomes, rng)) {
        next.push_back(t.add_child(v, CpMap::single(std::move(k))));
      }
    }
    frontier = std::move(next);
  }
  for (VertexId v : frontier) t.set_label(v, static_cast<int>(rng.uniform_int(0, spec.labels - 1)));
  return t;
}

Ensemble random_ensemble(const MultipartiteSpace& space, std::size_t count, Rng& rng) {
  const std::vector<double> w = random_simplex(count, rng);
  std::vector<EnsembleMember> members;
  members.reserve(count);
  for (std::size_t k = 0; k < count; ++k) members.push_back({w[k], random_density(space.total_dim(), rng)});
  return Ensemble::make(space, std::move(members));
}

}  // namespace locc
