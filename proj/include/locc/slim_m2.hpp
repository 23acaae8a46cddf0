#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "locc/caratheodory.hpp"
#include "locc/quantum/channels.hpp"
#include "locc/quantum/ensemble.hpp"
#include "locc/tree/protocol_tree.hpp"

// Convex decomposition of a fine-grained protocol into slim protocols: every
// measurement is split into sub-measurements with at most d_loc² nonzero
// outcomes, and a slim protocol picks one sub-measurement per vertex.

namespace locc {

/// One piece of a POVM split: the sub-measurement {scalars[i]·E_i} is
/// complete, and Σ_j lambda_j·scalars_j[i] = 1 for every element i.
struct PovmComponent {
  double lambda = 0.0;
  std::vector<double> scalars;

  std::size_t nonzero() const;
};

/// Zero elements get scalar 1 in every component.
std::vector<PovmComponent> decompose_povm_slim(const Povm& p, const SupportReductionOptions& opts = {});

/// Digit per internal vertex (in vertex-id order) choosing its component.
using ComponentChoice = std::vector<std::size_t>;

struct SlimComponent {
  double lambda = 0.0;
  ComponentChoice choice;
  ProtocolTree tree;
};

/// The product decomposition of a fine-grained tree. Components are indexed
/// in mixed radix with the first internal vertex as the fastest digit; any
/// prefix of that order is a fixed set, so enumerating more never drops one.
class SlimDecomposition {
 public:
  /// Throws InvalidInput unless `t` is fine-grained.
  explicit SlimDecomposition(const ProtocolTree& t, const SupportReductionOptions& opts = {});

  const ProtocolTree& source() const noexcept { return source_; }
  const std::vector<VertexId>& internal_vertices() const noexcept { return internal_; }
  /// Components of the measurement at the i-th internal vertex.
  const std::vector<PovmComponent>& vertex_components(std::size_t i) const { return per_vertex_[i]; }

  /// Π over vertices of the component counts; nullopt past 2⁶⁴.
  std::optional<std::uint64_t> count() const noexcept { return count_; }

  ComponentChoice choice_at(std::uint64_t index) const;
  double lambda(const ComponentChoice& c) const;
  /// Scalar multiplying the edge into vertex v (1 at the root).
  double edge_scalar(const ComponentChoice& c, VertexId v) const;
  /// Same structure as the source; edge (p, v) carries edge_scalar·ℒ_e.
  ProtocolTree build(const ComponentChoice& c) const;

  /// Calls `fn` for the first min(count, limit) components in index order.
  void for_each(std::uint64_t limit, const std::function<void(std::uint64_t, const ComponentChoice&)>& fn) const;
  /// All components; throws CapExceeded if there are more than `cap`.
  std::vector<SlimComponent> materialize(std::uint64_t cap = 100000) const;

 private:
  ProtocolTree source_;
  std::vector<VertexId> internal_;
  std::vector<std::size_t> slot_;          // vertex → index into internal_ (or npos)
  std::vector<std::size_t> child_index_;   // vertex → position among its siblings
  std::vector<std::vector<PovmComponent>> per_vertex_;
  std::optional<std::uint64_t> count_;
};

/// Success of one component without building its tree: Σ over leaves of the
/// original leaf contribution times the product of edge scalars on its path.
class ComponentScorer {
 public:
  ComponentScorer(const SlimDecomposition& dec, const Ensemble& s);
  double operator()(const ComponentChoice& c) const;
  double original() const noexcept { return original_; }

 private:
  const SlimDecomposition& dec_;
  std::vector<VertexId> leaves_;
  std::vector<double> contribution_;
  double original_ = 0.0;
};

enum class BestSlimMode {
  Exact,      // bottom-up maximization over per-vertex choices
  Enumerate,  // scores components in index order up to the cap
};

struct BestSlimOptions {
  BestSlimMode mode = BestSlimMode::Exact;
  std::uint64_t cap = 10000;
  /// Worker threads for enumeration; 0 reads LOCC_SLIM_THREADS, else hardware.
  unsigned threads = 0;
};

struct BestSlim {
  double lambda = 0.0;
  ComponentChoice choice;
  ProtocolTree tree;
  double success = 0.0;           // t*
  double original_success = 0.0;  // t
  bool exhaustive = false;
  std::uint64_t evaluated = 0;
};

/// The component with the largest success on `s`; ties keep the lowest index.
/// Exact mode is always exhaustive. Enumerate mode past the cap reports the
/// best of the first `cap` components with exhaustive = false.
BestSlim best_slim(const SlimDecomposition& dec, const Ensemble& s, const BestSlimOptions& opts = {});

struct WeightedInstrument {
  double weight = 0.0;
  Instrument instrument;
};

struct SharedRandomnessResult {
  std::vector<WeightedInstrument> components;  // retained inputs, reweighted
  std::vector<std::size_t> kept;               // their input positions
  std::size_t bound = 0;                       // R
  bool within_bound = false;
  double choi_residual = 0.0;  // max per-outcome Frobenius distance of the mixtures
};

/// R = Σ_i D₀²D_i² − D₀² + 1.
std::size_t randomness_bound(std::size_t d0, const std::vector<std::size_t>& outcome_dims);

/// Σ_i w_i·Choi(ℐ^(i)_o) for every label o in `labels`; missing branches are zero.
std::vector<ComplexMatrix> mixture_choi(const std::vector<WeightedInstrument>& mix, const std::vector<int>& labels,
                                        std::size_t d0, const std::vector<std::size_t>& outcome_dims);

/// Keeps a subset of the instruments whose reweighted mixture equals the
/// input mixture. `outcome_dims` lists D_i for the labels in ascending order.
SharedRandomnessResult reduce_shared_randomness(const std::vector<WeightedInstrument>& components,
                                                std::size_t d0, const std::vector<std::size_t>& outcome_dims,
                                                const SupportReductionOptions& opts = {});

}  // namespace locc
