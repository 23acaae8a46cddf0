#include "locc/compress_m1.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>

#include "locc/error.hpp"
#include "locc/tree/evaluate.hpp"

namespace locc {
namespace {

using Vec = std::vector<cplx>;

// Unmerged probability mass times its success deviation that may be left
// unpaired once one side of the target runs out.
constexpr double kLeftoverMass = 1e-10;

double norm(const Vec& v) {
  double s = 0.0;
  for (const cplx& z : v) s += std::norm(z);
  return std::sqrt(s);
}

// Orthogonalizes v against an orthonormal list (two passes of MGS).
void orthogonalize(Vec& v, const std::vector<Vec>& basis) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const Vec& b : basis) {
      cplx dot{};
      for (std::size_t i = 0; i < v.size(); ++i) dot += std::conj(b[i]) * v[i];
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= dot * b[i];
    }
  }
}

}  // namespace

SplitPair matrix_sum_split(const ComplexMatrix& x, const ComplexMatrix& y, double rank_tol) {
  if (x.cols() != y.cols()) throw Error(ErrorCode::DimensionMismatch, "X and Y must have the same width");
  const std::size_t d = x.cols(), ox = x.rows(), oy = y.rows();
  const ComplexMatrix s = adjoint_times(x, x) + adjoint_times(y, y);
  const HermitianEigen eig = hermitian_eig(s);
  const double top = d ? std::max(0.0, eig.eigenvalues.back()) : 0.0;
  if (d && eig.eigenvalues.front() < -kPsdClampWindow * std::max(1.0, top)) {
    throw Error(ErrorCode::NotPsd, "X†X + Y†Y is not PSD");
  }
  const double cut = rank_tol * top;

  std::vector<std::size_t> support, null;
  for (std::size_t j = 0; j < d; ++j) (top > 0.0 && eig.eigenvalues[j] > cut ? support : null).push_back(j);

  const ComplexMatrix pinv = spectral_apply(eig, [cut, top](double l) {
    return top > 0.0 && l > cut ? 1.0 / std::sqrt(l) : 0.0;
  });
  SplitPair out{x * pinv, y * pinv};
  if (null.empty()) return out;

  // Orthonormal basis of range([X; Y]·pinv) in C^{ox+oy}.
  const std::size_t stacked = ox + oy;
  std::vector<Vec> basis;
  for (std::size_t j : support) {
    Vec w(stacked);
    const double inv = 1.0 / std::sqrt(eig.eigenvalues[j]);
    for (std::size_t r = 0; r < ox; ++r)
      for (std::size_t c = 0; c < d; ++c) w[r] += x(r, c) * eig.eigenvectors(c, j) * inv;
    for (std::size_t r = 0; r < oy; ++r)
      for (std::size_t c = 0; c < d; ++c) w[ox + r] += y(r, c) * eig.eigenvectors(c, j) * inv;
    orthogonalize(w, basis);
    const double n = norm(w);
    for (cplx& z : w) z /= n;
    basis.push_back(std::move(w));
  }

  // Complete the isometry on the null space with unit vectors orthogonal to
  // that range, drawn from C's block first.
  std::vector<Vec> completion;
  for (std::size_t e = 0; e < stacked && completion.size() < null.size(); ++e) {
    Vec w(stacked);
    w[e] = 1.0;
    orthogonalize(w, basis);
    const double n = norm(w);
    if (n < 1e-6) continue;
    for (cplx& z : w) z /= n;
    basis.push_back(w);
    completion.push_back(std::move(w));
  }
  if (completion.size() < null.size()) {
    throw Error(ErrorCode::DimensionMismatch, "X and Y are too short to complete C†C + D†D = I");
  }
  for (std::size_t m = 0; m < null.size(); ++m) {
    const Vec& j = completion[m];
    for (std::size_t c = 0; c < d; ++c) {
      const cplx nc = std::conj(eig.eigenvectors(c, null[m]));
      for (std::size_t r = 0; r < ox; ++r) out.c(r, c) += j[r] * nc;
      for (std::size_t r = 0; r < oy; ++r) out.d(r, c) += j[ox + r] * nc;
    }
  }
  return out;
}

ConditionalSuccess conditional_success(const ProtocolTree& t, VertexId child, const Ensemble& s_at_parent,
                                       double prob_cutoff) {
  const Ensemble after = propagate(t, child, s_at_parent);
  ConditionalSuccess out;
  out.probability = after.probability();
  if (out.probability <= prob_cutoff) return out;
  out.success = evaluate_subtree(t, child, normalize(after).ensemble).probability;
  out.defined = true;
  return out;
}

std::vector<EqualizedOutcome> equalize(std::span<const MeasurementOutcome> outcomes, double target,
                                       const EqualizeOptions& opts, EqualizeStats* stats) {
  const std::size_t n = outcomes.size();
  std::vector<double> scale(n, 1.0);  // remaining multiple of A_i†A_i
  std::vector<EqualizedOutcome> merged;
  EqualizeStats local;

  auto total = [&] {
    double acc = 0.0;
    for (const EqualizedOutcome& m : merged) acc += m.probability * m.success;
    for (std::size_t i = 0; i < n; ++i) acc += scale[i] * outcomes[i].probability * outcomes[i].success;
    return acc;
  };
  const double initial_total = total();

  auto pick = [&](bool above, double margin) -> std::optional<std::size_t> {
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < n; ++i) {
      if (scale[i] <= 0.0) continue;
      const double ti = outcomes[i].success;
      const bool ok = above ? ti > target + margin : ti < target - margin;
      if (!ok) continue;
      if (!best || (above ? ti > outcomes[*best].success : ti < outcomes[*best].success)) best = i;
    }
    return best;
  };

  // Σ q_i·|t_i − target| over what is still unmerged.
  auto unbalanced_mass = [&] {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      acc += scale[i] * outcomes[i].probability * std::abs(outcomes[i].success - target);
    return acc;
  };

  for (;;) {
    std::optional<std::size_t> hi = pick(true, opts.equal_tol);
    std::optional<std::size_t> lo = pick(false, opts.equal_tol);
    if (!hi && !lo) break;
    // One side may sit entirely inside the tolerance band.
    if (!hi) hi = pick(true, 0.0);
    if (!lo) lo = pick(false, 0.0);
    if ((!hi || !lo) && unbalanced_mass() <= kLeftoverMass) break;  // roundoff slivers
    if (!hi || !lo || local.merges >= n) {
      std::ostringstream msg;
      msg << "outcomes with conditional success away from " << target << " remain after " << local.merges
          << " merges";
      throw Error(ErrorCode::ConvergenceFailure, msg.str());
    }
    const std::size_t a = *hi, b = *lo;
    const double ta = outcomes[a].success, tb = outcomes[b].success;
    const double qa = scale[a] * outcomes[a].probability, qb = scale[b] * outcomes[b].probability;
    // target = (1 − λ) t_a + λ t_b and s·q_b / (q_a + s·q_b) = λ
    const double lambda = (ta - target) / (ta - tb);
    double s = lambda * qa / ((1.0 - lambda) * qb);
    if (std::abs(s - 1.0) < 1e-12) s = 1.0;

    EqualizedOutcome m;
    if (s <= 1.0) {
      m.second_stage = {{a, scale[a]}, {b, s * scale[b]}};
      m.probability = qa + s * qb;
      m.success = (qa * ta + s * qb * tb) / m.probability;
      scale[a] = 0.0;
      scale[b] *= 1.0 - s;
      if (scale[b] < 1e-15) scale[b] = 0.0;
    } else {
      m.second_stage = {{a, scale[a] / s}, {b, scale[b]}};
      m.probability = qa / s + qb;
      m.success = (qa / s * ta + qb * tb) / m.probability;
      scale[b] = 0.0;
      scale[a] *= 1.0 - 1.0 / s;
      if (scale[a] < 1e-15) scale[a] = 0.0;
    }
    ComplexMatrix effect(outcomes[a].kraus.cols(), outcomes[a].kraus.cols());
    for (const StageEntry& e : m.second_stage) {
      effect.add_scaled(e.scale, adjoint_times(outcomes[e.outcome].kraus, outcomes[e.outcome].kraus));
    }
    m.kraus = sqrt_psd(effect);
    merged.push_back(std::move(m));
    ++local.merges;
    local.telescoping_drift = std::max(local.telescoping_drift, std::abs(total() - initial_total));
  }

  // A leftover sliver off the target goes back into a merged outcome that
  // already uses it; left alone, the reduction stage could inflate it.
  for (std::size_t i = 0; i < n; ++i) {
    if (scale[i] <= 0.0 || std::abs(outcomes[i].success - target) <= opts.equal_tol) continue;
    for (EqualizedOutcome& m : merged) {
      auto it = std::find_if(m.second_stage.begin(), m.second_stage.end(),
                             [i](const StageEntry& e) { return e.outcome == i; });
      if (it == m.second_stage.end()) continue;
      const double q = scale[i] * outcomes[i].probability;
      m.success = (m.probability * m.success + q * outcomes[i].success) / (m.probability + q);
      m.probability += q;
      it->scale += scale[i];
      ComplexMatrix effect(outcomes[i].kraus.cols(), outcomes[i].kraus.cols());
      for (const StageEntry& e : m.second_stage)
        effect.add_scaled(e.scale, adjoint_times(outcomes[e.outcome].kraus, outcomes[e.outcome].kraus));
      m.kraus = sqrt_psd(effect);
      scale[i] = 0.0;
      break;
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (scale[i] <= 0.0) continue;
    const ComplexMatrix& k = outcomes[i].kraus;
    EqualizedOutcome single;
    single.kraus = sqrt_psd(scale[i] * adjoint_times(k, k));
    single.probability = scale[i] * outcomes[i].probability;
    single.success = outcomes[i].success;
    single.second_stage = {{i, scale[i]}};
    merged.push_back(std::move(single));
  }
  if (stats) *stats = local;
  return merged;
}

std::vector<EqualizedOutcome> caratheodory_stage(std::vector<EqualizedOutcome> equalized, std::size_t d_loc,
                                                 const SupportReductionOptions& opts) {
  if (equalized.size() <= d_loc * d_loc) return equalized;

  std::vector<EqualizedOutcome> nonzero;
  std::vector<double> traces;
  for (EqualizedOutcome& o : equalized) {
    const double tr = real_trace_product(o.kraus.adjoint(), o.kraus);
    if (tr <= 0.0) continue;
    traces.push_back(tr);
    nonzero.push_back(std::move(o));
  }
  if (nonzero.size() <= d_loc * d_loc) return nonzero;

  // Points B†B / tr on the trace-one slice, weights tr / Σtr.
  double total = 0.0;
  for (double tr : traces) total += tr;
  WeightedPointSet set;
  set.dim = d_loc * d_loc;
  for (std::size_t i = 0; i < nonzero.size(); ++i) {
    const ComplexMatrix& b = nonzero[i].kraus;
    set.points.push_back(hermitian_to_vector((1.0 / traces[i]) * adjoint_times(b, b), d_loc));
    set.weights.push_back(traces[i] / total);
  }
  const WeightedPointSet reduced = reduce_support(set, opts);

  std::vector<EqualizedOutcome> kept;
  for (std::size_t i = 0; i < nonzero.size(); ++i) {
    if (reduced.weights[i] <= 0.0) continue;
    const double f = reduced.weights[i] / set.weights[i];
    EqualizedOutcome o = std::move(nonzero[i]);
    o.kraus *= std::sqrt(f);
    o.probability *= f;
    for (StageEntry& e : o.second_stage) e.scale *= f;
    kept.push_back(std::move(o));
  }
  return kept;
}

namespace {

class M1Compressor {
 public:
  M1Compressor(const ProtocolTree& src, const M1Options& opts, M1Report& report)
      : src_(src), opts_(opts), report_(report) {}

  // Compressed copy of the subtree at v, as a tree rooted at v's space.
  // `s` is the normalized ensemble on arrival at v, or a stand-in when v is
  // reached with probability zero.
  ProtocolTree run(VertexId v, const Ensemble& s) {
    const Vertex& x = src_.vertex(v);
    ProtocolTree out(src_.space_at(v));
    if (x.label) out.set_label(ProtocolTree::root(), *x.label);
    if (x.is_leaf()) return out;
    out.set_party(ProtocolTree::root(), *x.party);

    const std::size_t d = src_.local_dim(v);
    if (!opts_.compress_all && x.children.size() <= 2 * d * d) {
      for (VertexId c : x.children) out.graft(ProtocolTree::root(), src_.vertex(c).edge, child_tree(c, s), 0);
      return out;
    }

    ++report_.vertices_compressed;
    std::vector<MeasurementOutcome> positive;
    std::vector<std::size_t> positive_child;
    std::vector<EqualizedOutcome> zero;
    for (std::size_t i = 0; i < x.children.size(); ++i) {
      const VertexId c = x.children[i];
      const ConditionalSuccess cs = conditional_success(src_, c, s, opts_.prob_cutoff);
      const ComplexMatrix& a = src_.vertex(c).edge.kraus.front();
      if (cs.defined) {
        positive.push_back({a, cs.probability, cs.success});
        positive_child.push_back(i);
      } else {
        EqualizedOutcome z;
        z.kraus = sqrt_psd(adjoint_times(a, a));
        z.second_stage = {{i, 1.0}};
        z.zero_probability = true;
        zero.push_back(std::move(z));
      }
    }
    double target = 0.0;
    for (const MeasurementOutcome& o : positive) target += o.probability * o.success;

    EqualizeStats stats;
    std::vector<EqualizedOutcome> stage = equalize(positive, target, opts_.equalize, &stats);
    report_.merges += stats.merges;
    report_.max_telescoping_drift = std::max(report_.max_telescoping_drift, stats.telescoping_drift);
    // Re-index second stages from positive-outcome numbering to child numbering.
    for (EqualizedOutcome& o : stage)
      for (StageEntry& e : o.second_stage) e.outcome = positive_child[e.outcome];
    for (EqualizedOutcome& z : zero) z.success = target;
    stage.insert(stage.end(), std::make_move_iterator(zero.begin()), std::make_move_iterator(zero.end()));

    stage = caratheodory_stage(std::move(stage), d, opts_.reduction);

    std::map<std::size_t, ProtocolTree> memo;
    for (const EqualizedOutcome& o : stage) {
      check_second_stage(x, o);
      for (const StageEntry& e : o.second_stage) {
        const VertexId c = x.children[e.outcome];
        auto it = memo.find(e.outcome);
        if (it == memo.end()) it = memo.emplace(e.outcome, child_tree(c, s)).first;
        out.graft(ProtocolTree::root(), scaled(src_.vertex(c).edge, e.scale), it->second, 0);
      }
    }
    return out;
  }

 private:
  ProtocolTree child_tree(VertexId c, const Ensemble& s_at_parent) {
    const Ensemble after = propagate(src_, c, s_at_parent);
    if (after.probability() > opts_.prob_cutoff) return run(c, normalize(after).ensemble);

    // Unreachable branch: success there is irrelevant, but the width bound
    // still applies, so compress against the image of the maximally mixed state.
    const std::size_t dim = src_.space_at(*src_.vertex(c).parent).total_dim();
    const ComplexMatrix mixed = (1.0 / static_cast<double>(dim)) * ComplexMatrix::identity(dim);
    const Ensemble probe = propagate(src_, c, Ensemble{s_at_parent.space, {{1.0, mixed}}, false});
    if (probe.probability() > 0.0) {
      const ComplexMatrix sigma = normalize(probe).ensemble.members.front().state;
      std::vector<EnsembleMember> members;
      for (const EnsembleMember& m : s_at_parent.members) members.push_back({m.weight, sigma});
      return run(c, Ensemble{src_.space_at(c), std::move(members), true});
    }
    // Zero edge map: nothing ever reaches this subtree.
    ProtocolTree leaf(src_.space_at(c));
    leaf.set_label(ProtocolTree::root(), first_label(c));
    return leaf;
  }

  int first_label(VertexId v) const {
    for (;;) {
      const Vertex& x = src_.vertex(v);
      if (x.is_leaf()) return x.label.value_or(0);
      v = x.children.front();
    }
  }

  void check_second_stage(const Vertex& x, const EqualizedOutcome& o) {
    const ComplexMatrix& a1 = src_.vertex(x.children[o.second_stage[0].outcome]).edge.kraus.front();
    const ComplexMatrix xm = std::sqrt(o.second_stage[0].scale) * a1;
    ComplexMatrix ym(a1.rows(), a1.cols());
    if (o.second_stage.size() > 1) {
      ym = std::sqrt(o.second_stage[1].scale) *
           src_.vertex(x.children[o.second_stage[1].outcome]).edge.kraus.front();
    }
    const SplitPair cd = matrix_sum_split(xm, ym);
    const double r = std::max(frobenius_distance(cd.c * o.kraus, xm), frobenius_distance(cd.d * o.kraus, ym));
    report_.max_second_stage_residual = std::max(report_.max_second_stage_residual, r);
  }

  const ProtocolTree& src_;
  const M1Options& opts_;
  M1Report& report_;
};

}  // namespace

ProtocolTree compress_protocol_m1(const ProtocolTree& t, const Ensemble& s, const M1Options& opts,
                                  M1Report* report) {
  if (!s.normalized) throw Error(ErrorCode::InvalidInput, "compression needs a normalized ensemble");
  if (s.space.total_dim() != t.space().total_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "ensemble and protocol live on different spaces");
  }
  const ProtocolTree fine = is_fine_grained(t) ? t : fine_grain(t);
  M1Report local;
  M1Compressor c(fine, opts, local);
  ProtocolTree out = c.run(ProtocolTree::root(), s);
  if (report) *report = local;
  return out;
}

}  // namespace locc
