#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "locc/caratheodory.hpp"
#include "locc/numerics/complex_matrix.hpp"
#include "locc/numerics/eigen.hpp"
#include "locc/quantum/ensemble.hpp"
#include "locc/tree/protocol_tree.hpp"

// Width compression that keeps the success probability of a protocol fixed
// and bounds every measurement by 2·d_loc² outcomes, where d_loc is the
// dimension of the system being measured.
//
// For one measurement with Kraus operators A_i, let q_i be the probability of
// outcome i and t_i the conditional success of the subtree behind it, so the
// vertex's success is t = Σ q_i t_i.
//
//  1. Equalize: repeatedly merge an outcome with t_a > t and one with t_b < t
//     into B = √(c_a A_a†A_a + c_b A_b†A_b) whose conditional success is
//     exactly t, followed by the binary split (C, D) of matrix_sum_split.
//  2. Reduce: {B_i†B_i / tr} with weights tr/d has barycentre I/d, so at most
//     d² of the B_i survive a support reduction, each rescaled positively.
//  3. Recompose: every surviving B_i followed by its split is one local
//     measurement whose outcomes are positive multiples of original A_j,
//     so the subtrees behind them are reused unchanged (and compressed
//     recursively with their own conditional ensembles).

namespace locc {

struct SplitPair {
  ComplexMatrix c;
  ComplexMatrix d;
};

/// C, D with C·√S = X, D·√S = Y and C†C + D†D = I, where S = X†X + Y†Y.
/// On the null space of S the missing isometry is placed in C's block when
/// C has room (always the case for square X), otherwise spread into D.
/// Throws DimensionMismatch if the column counts differ or the two blocks
/// together are too short to complete the isometry.
SplitPair matrix_sum_split(const ComplexMatrix& x, const ComplexMatrix& y, double rank_tol = kDefaultRankTol);

struct ConditionalSuccess {
  double probability = 0.0;  // q: probability of taking this edge
  double success = 0.0;      // t: success of the subtree on the normalized S_i/q
  bool defined = false;      // false when q is below the cutoff
};

/// q and t for the edge into `child`; `s_at_parent` is the normalized ensemble
/// on arrival at the child's parent.
ConditionalSuccess conditional_success(const ProtocolTree& t, VertexId child, const Ensemble& s_at_parent,
                                       double prob_cutoff = 1e-12);

/// One outcome of a measurement before equalization.
struct MeasurementOutcome {
  ComplexMatrix kraus;  // A_i: out × d
  double probability;   // q_i
  double success;       // t_i
};

/// Contribution c·A_j†A_j of original outcome j to an equalized outcome.
struct StageEntry {
  std::size_t outcome;
  double scale;
};

struct EqualizedOutcome {
  ComplexMatrix kraus;  // B: d × d, B†B = Σ scale·A†A over second_stage
  double probability = 0.0;
  double success = 0.0;
  std::vector<StageEntry> second_stage;  // at most two entries
  bool zero_probability = false;         // carried only to keep Σ B†B = I
};

struct EqualizeOptions {
  double equal_tol = 1e-8;
};

struct EqualizeStats {
  std::size_t merges = 0;
  double telescoping_drift = 0.0;  // max |Σ q t − t_target| seen after any merge
};

/// Merges outcomes until every one has conditional success `target` (within
/// equal_tol). Partners: largest t above target with smallest t below, ties
/// to the lowest index. Throws ConvergenceFailure if unequal outcomes remain
/// after as many merges as there are inputs.
std::vector<EqualizedOutcome> equalize(std::span<const MeasurementOutcome> outcomes, double target,
                                       const EqualizeOptions& opts = {}, EqualizeStats* stats = nullptr);

/// Keeps at most d² outcomes, rescaled so that Σ B†B is unchanged. Inputs
/// with at most d² outcomes are returned as is.
std::vector<EqualizedOutcome> caratheodory_stage(std::vector<EqualizedOutcome> equalized, std::size_t d_loc,
                                                 const SupportReductionOptions& opts = {});

struct M1Options {
  EqualizeOptions equalize;
  SupportReductionOptions reduction;
  double prob_cutoff = 1e-12;
  /// Rebuild every vertex, including those already within 2·d_loc².
  bool compress_all = false;
};

struct M1Report {
  std::size_t vertices_compressed = 0;
  std::size_t merges = 0;
  double max_telescoping_drift = 0.0;
  /// max ‖C·B − √c₁A₁‖, ‖D·B − √c₂A₂‖ over all second stages
  double max_second_stage_residual = 0.0;
};

/// Rebuilds `t` so that every vertex has at most 2·d_loc² outgoing edges
/// while the success probability on `s` (fixed leaf labels) is unchanged.
/// Depth is preserved. The input is fine-grained first if needed.
ProtocolTree compress_protocol_m1(const ProtocolTree& t, const Ensemble& s, const M1Options& opts = {},
                                  M1Report* report = nullptr);

}  // namespace locc
