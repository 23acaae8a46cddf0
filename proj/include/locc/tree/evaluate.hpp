#pragma once

#include <map>
#include <vector>

#include "locc/quantum/channels.hpp"
#include "locc/quantum/ensemble.hpp"
#include "locc/tree/protocol_tree.hpp"

namespace locc {

/// 𝒩_v as a Kraus list on the global space: composition of the embedded edge
/// maps along the root path. The root's map is the identity.
CpMap cumulative_map(const ProtocolTree& t, VertexId v);

/// Embeds the edge map (parent(v), v) into the global space at the parent.
CpMap embedded_edge(const ProtocolTree& t, VertexId v);

struct SuccessResult {
  double probability = 0.0;
  /// Leaf → ensemble index used to score it (the argmax when relabeling).
  std::map<VertexId, int> labels;
};

/// Σ_leaves p_f(v) · tr 𝒩_v(ρ_f(v)). With `relabel`, each leaf is scored by
/// its best state index (lowest index wins ties) instead of its label.
/// Throws LabelOutOfRange when a used label does not index the ensemble.
SuccessResult evaluate_success(const ProtocolTree& t, const Ensemble& s, bool relabel = false);

/// The same quantity for the subtree rooted at v, fed with an ensemble living
/// on the space at v (normalized or not; the result scales with it).
SuccessResult evaluate_subtree(const ProtocolTree& t, VertexId v, const Ensemble& s_at_v,
                               bool relabel = false);

/// The ensemble {p_k ℒ_e(ρ_k)} after traversing edge e = (parent(v), v),
/// where `s_at_parent` lives on the parent's space.
Ensemble propagate(const ProtocolTree& t, VertexId v, const Ensemble& s_at_parent);

/// ℐ_o = Σ_{f(v)=o} 𝒩_v, one branch per distinct label in ascending order.
Instrument extract_instrument(const ProtocolTree& t);

/// Largest per-outcome Choi distance between two instruments; outcomes
/// missing from one side count as the zero map.
double instrument_distance(const Instrument& a, const Instrument& b);

}  // namespace locc
