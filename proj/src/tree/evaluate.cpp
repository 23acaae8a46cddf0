#include "locc/tree/evaluate.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "locc/error.hpp"

namespace locc {

CpMap embedded_edge(const ProtocolTree& t, VertexId v) {
  const Vertex& x = t.vertex(v);
  if (!x.parent) return CpMap::identity(t.space().total_dim());
  const VertexId p = *x.parent;
  const MultipartiteSpace at_parent = t.space_at(p);
  const std::size_t party = *t.vertex(p).party;
  CpMap out{at_parent.total_dim(), t.space_at(v).total_dim(), {}};
  out.kraus.reserve(x.edge.kraus.size());
  for (const ComplexMatrix& k : x.edge.kraus) out.kraus.push_back(embed_local(k, party, at_parent));
  return out;
}

CpMap cumulative_map(const ProtocolTree& t, VertexId v) {
  CpMap acc = CpMap::identity(t.space().total_dim());
  for (VertexId step : t.path_to(v)) acc = compose(embedded_edge(t, step), acc);
  return acc;
}

Ensemble propagate(const ProtocolTree& t, VertexId v, const Ensemble& s_at_parent) {
  const CpMap e = embedded_edge(t, v);
  std::vector<EnsembleMember> members;
  members.reserve(s_at_parent.members.size());
  for (const EnsembleMember& m : s_at_parent.members) members.push_back({m.weight, e.apply(m.state)});
  return Ensemble::make(t.space_at(v), std::move(members));
}

namespace {

struct Walker {
  const ProtocolTree& tree;
  bool relabel;
  SuccessResult result;

  void visit(VertexId v, const std::vector<ComplexMatrix>& weighted) {
    const Vertex& x = tree.vertex(v);
    if (x.is_leaf()) {
      score_leaf(v, x, weighted);
      return;
    }
    for (VertexId c : x.children) {
      const CpMap e = embedded_edge(tree, c);
      std::vector<ComplexMatrix> next;
      next.reserve(weighted.size());
      for (const ComplexMatrix& rho : weighted) next.push_back(e.apply(rho));
      visit(c, next);
    }
  }

  void score_leaf(VertexId v, const Vertex& x, const std::vector<ComplexMatrix>& weighted) {
    if (relabel) {
      int best = 0;
      double best_value = -std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < weighted.size(); ++k) {
        const double value = weighted[k].trace().real();
        if (value > best_value) {
          best_value = value;
          best = static_cast<int>(k);
        }
      }
      if (!weighted.empty()) result.probability += best_value;
      result.labels[v] = best;
      return;
    }
    if (!x.label) throw Error(ErrorCode::InvalidInput, "leaf " + std::to_string(v) + " has no label");
    const int label = *x.label;
    if (label < 0 || static_cast<std::size_t>(label) >= weighted.size()) {
      std::ostringstream msg;
      msg << "leaf " << v << " has label " << label << " but the ensemble has " << weighted.size() << " members";
      throw Error(ErrorCode::LabelOutOfRange, msg.str());
    }
    result.probability += weighted[static_cast<std::size_t>(label)].trace().real();
    result.labels[v] = label;
  }
};

}  // namespace

SuccessResult evaluate_subtree(const ProtocolTree& t, VertexId v, const Ensemble& s_at_v, bool relabel) {
  if (s_at_v.space.total_dim() != t.space_at(v).total_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "ensemble does not live on the vertex's space");
  }
  std::vector<ComplexMatrix> weighted;
  weighted.reserve(s_at_v.members.size());
  for (const EnsembleMember& m : s_at_v.members) weighted.push_back(m.weight * m.state);
  Walker w{t, relabel, {}};
  w.visit(v, weighted);
  return std::move(w.result);
}

SuccessResult evaluate_success(const ProtocolTree& t, const Ensemble& s, bool relabel) {
  return evaluate_subtree(t, ProtocolTree::root(), s, relabel);
}

Instrument extract_instrument(const ProtocolTree& t) {
  std::map<int, CpMap> branches;
  for (VertexId v : t.leaves()) {
    const Vertex& x = t.vertex(v);
    if (!x.label) throw Error(ErrorCode::InvalidInput, "leaf " + std::to_string(v) + " has no label");
    CpMap n = cumulative_map(t, v);
    auto [it, inserted] = branches.try_emplace(*x.label, n);
    if (!inserted) {
      if (it->second.out_dim != n.out_dim) {
        throw Error(ErrorCode::DimensionMismatch,
                    "leaves sharing label " + std::to_string(*x.label) + " have different output dimensions");
      }
      it->second = kraus_union(it->second, n);
    }
  }
  Instrument ins{t.space().total_dim(), {}};
  for (auto& [label, map] : branches) ins.branches.push_back({label, std::move(map)});
  return ins;
}

double instrument_distance(const Instrument& a, const Instrument& b) {
  std::set<int> labels;
  for (const InstrumentBranch& x : a.branches) labels.insert(x.label);
  for (const InstrumentBranch& x : b.branches) labels.insert(x.label);
  double worst = 0.0;
  for (int label : labels) {
    const InstrumentBranch* x = a.find(label);
    const InstrumentBranch* y = b.find(label);
    if (x && y) {
      worst = std::max(worst, frobenius_distance(choi_of(x->map).matrix, choi_of(y->map).matrix));
    } else {
      const InstrumentBranch* present = x ? x : y;
      worst = std::max(worst, choi_of(present->map).matrix.frobenius_norm());
    }
  }
  return worst;
}

}  // namespace locc
