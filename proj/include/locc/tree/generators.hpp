#pragma once

#include <cstddef>
#include <vector>

#include "locc/quantum/ensemble.hpp"
#include "locc/quantum/random.hpp"
#include "locc/tree/protocol_tree.hpp"

namespace locc {

struct DemoInstance {
  ProtocolTree tree;
  Ensemble ensemble;
};

/// {½ Φ⁺, ½ Ψ⁺} on 2×2; A measures Z and broadcasts, then B measures Z.
/// Leaves are labeled by the parity (0 ↔ Φ⁺, 1 ↔ Ψ⁺).
DemoInstance bell_demo();

/// Uniform ensemble of |00⟩, |01⟩, |10⟩, |11⟩ with two rounds of local Z
/// measurements; leaf (a, b) carries label 2a + b.
DemoInstance product_basis_demo();

struct RandomProtocolSpec {
  std::vector<std::size_t> party_dims{2, 2};
  std::size_t rounds = 2;
  /// Outcome count at the root is drawn from [root_min, root_max]; later
  /// rounds from [inner_min, inner_max].
  std::size_t root_min = 2, root_max = 4;
  std::size_t inner_min = 2, inner_max = 4;
  /// Leaves get labels drawn uniformly from [0, labels).
  std::size_t labels = 2;
};

/// Random fine-grained protocol. Round r is played by party r mod m; each
/// vertex's measurement is sliced from a Haar unitary dilation, so every
/// vertex is complete by construction.
ProtocolTree random_protocol(const RandomProtocolSpec& spec, Rng& rng);

/// `count` random full-rank mixed states with random prior weights.
Ensemble random_ensemble(const MultipartiteSpace& space, std::size_t count, Rng& rng);

}  // namespace locc
