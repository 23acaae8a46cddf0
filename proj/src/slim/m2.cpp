#include "locc/slim_m2.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <thread>

#include "locc/error.hpp"
#include "locc/tree/evaluate.hpp"

namespace locc {

std::size_t PovmComponent::nonzero() const {
  return static_cast<std::size_t>(std::count_if(scalars.begin(), scalars.end(), [](double s) { return s > 0.0; }));
}

std::vector<PovmComponent> decompose_povm_slim(const Povm& p, const SupportReductionOptions& opts) {
  const std::size_t d = p.dim, n = p.elements.size();
  std::vector<double> traces(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    traces[i] = std::max(0.0, p.elements[i].trace().real());
    total += traces[i];
  }
  if (total <= 0.0) throw Error(ErrorCode::InvalidInput, "POVM has no nonzero element");

  std::vector<std::size_t> live;
  for (std::size_t i = 0; i < n; ++i)
    if (traces[i] > 1e-15 * total) live.push_back(i);
  if (live.size() <= d * d) return {{1.0, std::vector<double>(n, 1.0)}};

  // E_i / tr E_i with weights tr E_i / d average to I/d.
  WeightedPointSet set;
  set.dim = d * d;
  for (std::size_t i : live) {
    set.points.push_back(hermitian_to_vector((1.0 / traces[i]) * p.elements[i], d));
    set.weights.push_back(traces[i] / total);
  }
  std::vector<PovmComponent> out;
  for (const PeeledComponent& piece : peel_decompose(set, opts)) {
    PovmComponent c{piece.coefficient, std::vector<double>(n, 1.0)};
    for (std::size_t k = 0; k < live.size(); ++k) c.scalars[live[k]] = piece.sub.weights[k] / set.weights[k];
    out.push_back(std::move(c));
  }
  return out;
}

SlimDecomposition::SlimDecomposition(const ProtocolTree& t, const SupportReductionOptions& opts)
    : source_(t),
      slot_(t.size(), std::numeric_limits<std::size_t>::max()),
      child_index_(t.size(), 0) {
  if (!is_fine_grained(t)) throw Error(ErrorCode::InvalidInput, "slim decomposition needs a fine-grained tree");
  std::uint64_t count = 1;
  bool overflow = false;
  for (VertexId v = 0; v < t.size(); ++v) {
    const Vertex& x = t.vertex(v);
    for (std::size_t i = 0; i < x.children.size(); ++i) child_index_[x.children[i]] = i;
    if (x.is_leaf()) continue;
    Povm p{t.local_dim(v), {}};
    for (VertexId c : x.children) p.elements.push_back(t.vertex(c).edge.effect());
    slot_[v] = internal_.size();
    internal_.push_back(v);
    per_vertex_.push_back(decompose_povm_slim(p, opts));
    const std::uint64_t k = per_vertex_.back().size();
    if (count > std::numeric_limits<std::uint64_t>::max() / k) overflow = true;
    count *= k;
  }
  if (!overflow) count_ = count;
}

ComponentChoice SlimDecomposition::choice_at(std::uint64_t index) const {
  ComponentChoice c(internal_.size(), 0);
  for (std::size_t i = 0; i < internal_.size(); ++i) {
    const std::uint64_t radix = per_vertex_[i].size();
    c[i] = static_cast<std::size_t>(index % radix);
    index /= radix;
  }
  if (index != 0) throw Error(ErrorCode::InvalidInput, "component index out of range");
  return c;
}

double SlimDecomposition::lambda(const ComponentChoice& c) const {
  double l = 1.0;
  for (std::size_t i = 0; i < internal_.size(); ++i) l *= per_vertex_[i].at(c.at(i)).lambda;
  return l;
}

double SlimDecomposition::edge_scalar(const ComponentChoice& c, VertexId v) const {
  const Vertex& x = source_.vertex(v);
  if (!x.parent) return 1.0;
  const std::size_t i = slot_[*x.parent];
  return per_vertex_[i].at(c.at(i)).scalars[child_index_[v]];
}

ProtocolTree SlimDecomposition::build(const ComponentChoice& c) const {
  ProtocolTree out = source_;
  for (VertexId v = 1; v < source_.size(); ++v) {
    const double s = edge_scalar(c, v);
    if (s != 1.0) out.replace_edge(v, scaled(source_.vertex(v).edge, s));
  }
  return out;
}

void SlimDecomposition::for_each(std::uint64_t limit,
                                 const std::function<void(std::uint64_t, const ComponentChoice&)>& fn) const {
  if (count_) limit = std::min(limit, *count_);
  ComponentChoice c(internal_.size(), 0);
  for (std::uint64_t index = 0; index < limit; ++index) {
    fn(index, c);
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (++c[i] < per_vertex_[i].size()) break;
      c[i] = 0;
    }
  }
}

std::vector<SlimComponent> SlimDecomposition::materialize(std::uint64_t cap) const {
  if (!count_ || *count_ > cap) {
    std::ostringstream msg;
    msg << "the decomposition has " << (count_ ? std::to_string(*count_) : std::string("more than 2^64"))
        << " components, above the cap of " << cap;
    throw Error(ErrorCode::CapExceeded, msg.str());
  }
  std::vector<SlimComponent> out;
  out.reserve(*count_);
  for_each(*count_, [&](std::uint64_t, const ComponentChoice& c) { out.push_back({lambda(c), c, build(c)}); });
  return out;
}

namespace {

// Per-leaf p_f·tr 𝒩_v(ρ_f), by the same walk as the evaluator.
void leaf_contributions(const ProtocolTree& t, VertexId v, const std::vector<ComplexMatrix>& weighted,
                        std::vector<double>& out) {
  const Vertex& x = t.vertex(v);
  if (x.is_leaf()) {
    if (!x.label) throw Error(ErrorCode::InvalidInput, "leaf " + std::to_string(v) + " has no label");
    const int label = *x.label;
    if (label < 0 || static_cast<std::size_t>(label) >= weighted.size()) {
      throw Error(ErrorCode::LabelOutOfRange, "leaf label " + std::to_string(label) + " outside the ensemble");
    }
    out[v] = weighted[static_cast<std::size_t>(label)].trace().real();
    return;
  }
  for (VertexId c : x.children) {
    const CpMap e = embedded_edge(t, c);
    std::vector<ComplexMatrix> next;
    next.reserve(weighted.size());
    for (const ComplexMatrix& rho : weighted) next.push_back(e.apply(rho));
    leaf_contributions(t, c, next, out);
  }
}

std::vector<double> all_leaf_contributions(const ProtocolTree& t, const Ensemble& s) {
  if (s.space.total_dim() != t.space().total_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "ensemble and protocol live on different spaces");
  }
  std::vector<ComplexMatrix> weighted;
  for (const EnsembleMember& m : s.members) weighted.push_back(m.weight * m.state);
  std::vector<double> out(t.size(), 0.0);
  leaf_contributions(t, ProtocolTree::root(), weighted, out);
  return out;
}

unsigned thread_count(unsigned requested) {
  if (requested) return requested;
  if (const char* env = std::getenv("LOCC_SLIM_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

ComponentScorer::ComponentScorer(const SlimDecomposition& dec, const Ensemble& s) : dec_(dec) {
  const std::vector<double> all = all_leaf_contributions(dec.source(), s);
  leaves_ = dec.source().leaves();
  for (VertexId v : leaves_) {
    contribution_.push_back(all[v]);
    original_ += all[v];
  }
}

double ComponentScorer::operator()(const ComponentChoice& c) const {
  const ProtocolTree& t = dec_.source();
  double total = 0.0;
  for (std::size_t k = 0; k < leaves_.size(); ++k) {
    if (contribution_[k] == 0.0) continue;
    double w = contribution_[k];
    for (VertexId v = leaves_[k]; t.vertex(v).parent && w != 0.0; v = *t.vertex(v).parent) w *= dec_.edge_scalar(c, v);
    total += w;
  }
  return total;
}

BestSlim best_slim(const SlimDecomposition& dec, const Ensemble& s, const BestSlimOptions& opts) {
  const ProtocolTree& t = dec.source();
  BestSlim out;

  if (opts.mode == BestSlimMode::Exact) {
    // A vertex's choice only rescales the branches below it, so the best
    // choice at v maximizes Σ_c scalar(c)·best(c) independently of the rest.
    std::vector<double> best = all_leaf_contributions(t, s);
    for (VertexId v : t.leaves()) out.original_success += best[v];
    out.choice.assign(dec.internal_vertices().size(), 0);
    for (std::size_t i = dec.internal_vertices().size(); i-- > 0;) {
      const VertexId v = dec.internal_vertices()[i];
      const std::vector<VertexId>& kids = t.vertex(v).children;
      double top = -std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < dec.vertex_components(i).size(); ++j) {
        const std::vector<double>& sc = dec.vertex_components(i)[j].scalars;
        double value = 0.0;
        for (std::size_t k = 0; k < kids.size(); ++k) value += sc[k] * best[kids[k]];
        if (value > top) {
          top = value;
          out.choice[i] = j;
        }
      }
      best[v] = top;
    }
    out.success = best[ProtocolTree::root()];
    out.exhaustive = true;
    out.evaluated = dec.count().value_or(std::numeric_limits<std::uint64_t>::max());
  } else {
    const ComponentScorer score(dec, s);
    out.original_success = score.original();
    const std::uint64_t limit = dec.count() ? std::min(opts.cap, *dec.count()) : opts.cap;
    const unsigned workers =
        static_cast<unsigned>(std::min<std::uint64_t>(thread_count(opts.threads), limit / 256 + 1));

    struct Best {
      double value = -std::numeric_limits<double>::infinity();
      std::uint64_t index = 0;
    };
    std::vector<Best> partial(workers);
    auto run = [&](unsigned w) {
      const std::uint64_t lo = limit * w / workers, hi = limit * (w + 1) / workers;
      Best b;
      ComponentChoice c = dec.choice_at(lo);
      for (std::uint64_t index = lo; index < hi; ++index) {
        const double value = score(c);
        if (value > b.value) b = {value, index};
        for (std::size_t i = 0; i < c.size(); ++i) {
          if (++c[i] < dec.vertex_components(i).size()) break;
          c[i] = 0;
        }
      }
      partial[w] = b;
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(run, w);
    run(0);
    for (std::thread& th : pool) th.join();

    Best b;
    for (const Best& p : partial)
      if (p.value > b.value) b = p;  // chunks are in index order, so ties keep the lowest
    out.choice = dec.choice_at(b.index);
    out.success = b.value;
    out.evaluated = limit;
    out.exhaustive = dec.count() && *dec.count() <= opts.cap;
  }
  out.lambda = dec.lambda(out.choice);
  out.tree = dec.build(out.choice);
  return out;
}

std::size_t randomness_bound(std::size_t d0, const std::vector<std::size_t>& outcome_dims) {
  std::size_t r = 0;
  for (std::size_t di : outcome_dims) r += d0 * d0 * di * di;
  return r - d0 * d0 + 1;
}

namespace {

std::vector<int> label_union(const std::vector<WeightedInstrument>& mix) {
  std::set<int> labels;
  for (const WeightedInstrument& w : mix)
    for (const InstrumentBranch& b : w.instrument.branches) labels.insert(b.label);
  return {labels.begin(), labels.end()};
}

// Choi matrix of one branch, or zero if the instrument lacks the label.
ComplexMatrix branch_choi(const Instrument& ins, int label, std::size_t d0, std::size_t di) {
  const InstrumentBranch* b = ins.find(label);
  if (!b) return ComplexMatrix(d0 * di, d0 * di);
  if (b->map.in_dim != d0 || b->map.out_dim != di) {
    throw Error(ErrorCode::DimensionMismatch, "branch " + std::to_string(label) + " has unexpected dimensions");
  }
  return choi_of(b->map).matrix;
}

}  // namespace

std::vector<ComplexMatrix> mixture_choi(const std::vector<WeightedInstrument>& mix, const std::vector<int>& labels,
                                        std::size_t d0, const std::vector<std::size_t>& outcome_dims) {
  std::vector<ComplexMatrix> out;
  for (std::size_t k = 0; k < labels.size(); ++k) {
    ComplexMatrix acc(d0 * outcome_dims[k], d0 * outcome_dims[k]);
    for (const WeightedInstrument& w : mix)
      acc.add_scaled(w.weight, branch_choi(w.instrument, labels[k], d0, outcome_dims[k]));
    out.push_back(std::move(acc));
  }
  return out;
}

SharedRandomnessResult reduce_shared_randomness(const std::vector<WeightedInstrument>& components,
                                                std::size_t d0, const std::vector<std::size_t>& outcome_dims,
                                                const SupportReductionOptions& opts) {
  if (components.empty()) throw Error(ErrorCode::InvalidInput, "no components to reduce");
  const std::vector<int> labels = label_union(components);
  if (labels.size() != outcome_dims.size()) {
    throw Error(ErrorCode::DimensionMismatch, "need one outcome dimension per label");
  }
  for (const WeightedInstrument& w : components)
    if (w.instrument.in_dim != d0) throw Error(ErrorCode::DimensionMismatch, "instrument input dim differs from D0");

  double total = 0.0;
  for (const WeightedInstrument& w : components) {
    if (!(w.weight >= 0.0)) throw Error(ErrorCode::InvalidInput, "negative mixture weight");
    total += w.weight;
  }
  if (total <= 0.0) throw Error(ErrorCode::InvalidInput, "mixture weights sum to zero");

  WeightedPointSet set;
  for (std::size_t k = 0; k < labels.size(); ++k) set.dim += d0 * d0 * outcome_dims[k] * outcome_dims[k];
  for (const WeightedInstrument& w : components) {
    std::vector<double> point;
    point.reserve(set.dim);
    for (std::size_t k = 0; k < labels.size(); ++k) {
      const std::size_t n = d0 * outcome_dims[k];
      const std::vector<double> part = hermitian_to_vector(branch_choi(w.instrument, labels[k], d0, outcome_dims[k]), n);
      point.insert(point.end(), part.begin(), part.end());
    }
    set.points.push_back(std::move(point));
    set.weights.push_back(w.weight / total);
  }

  const WeightedPointSet reduced = components.size() == 1 ? set : reduce_support(set, opts);
  SharedRandomnessResult out;
  out.bound = randomness_bound(d0, outcome_dims);
  for (std::size_t i = 0; i < components.size(); ++i) {
    if (reduced.weights[i] <= 0.0) continue;
    out.kept.push_back(i);
    out.components.push_back({reduced.weights[i] * total, components[i].instrument});
  }
  out.within_bound = out.components.size() <= out.bound;

  const std::vector<ComplexMatrix> before = mixture_choi(components, labels, d0, outcome_dims);
  const std::vector<ComplexMatrix> after = mixture_choi(out.components, labels, d0, outcome_dims);
  for (std::size_t k = 0; k < labels.size(); ++k)
    out.choi_residual = std::max(out.choi_residual, frobenius_distance(before[k], after[k]));
  return out;
}

}  // namespace locc
