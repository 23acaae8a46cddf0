#pragma once

#include <string>
#include <vector>

#include "locc/numerics/complex_matrix.hpp"
#include "locc/quantum/space.hpp"

namespace locc {

struct EnsembleMember {
  double weight = 0.0;
  ComplexMatrix state;
};

/// S = {p_1 ρ_1, …, p_n ρ_n}. Post-measurement ensembles are unnormalized
/// (Σ p_k < 1 or tr ρ_k ≠ 1); those carry normalized = false rather than
/// being rescaled behind the caller's back.
struct Ensemble {
  MultipartiteSpace space;
  std::vector<EnsembleMember> members;
  bool normalized = false;

  /// Builds an ensemble and sets the flag from the data.
  static Ensemble make(MultipartiteSpace space, std::vector<EnsembleMember> members);

  std::size_t size() const noexcept { return members.size(); }
  /// Σ_k p_k tr ρ_k
  double probability() const;
};

/// Structural and numerical problems; empty iff the ensemble is well-formed
/// (Hermitian PSD states of the right size, nonnegative weights, and the
/// normalization conditions if the flag claims them).
std::vector<std::string> validate_ensemble(const Ensemble& s);

struct NormalizedEnsemble {
  double probability = 0.0;  // q = Σ p_k tr ρ_k
  Ensemble ensemble;         // {p_k tr ρ_k / q, ρ_k / tr ρ_k}
};

/// Splits S into its probability and the normalized ensemble S/q. Members of
/// zero trace keep their index with weight 0 and the maximally mixed state.
/// Throws InvalidInput if q is not positive.
NormalizedEnsemble normalize(const Ensemble& s);

}  // namespace locc
