#include "locc/tree/protocol_tree.hpp"

#include <algorithm>
#include <sstream>

#include "locc/error.hpp"

namespace locc {

ProtocolTree::ProtocolTree(MultipartiteSpace space) : space_(std::move(space)) {
  if (space_.party_dims.empty()) throw Error(ErrorCode::InvalidInput, "a protocol needs at least one party");
  for (std::size_t d : space_.party_dims)
    if (d == 0) throw Error(ErrorCode::InvalidInput, "party dimensions must be positive");
  Vertex r;
  r.dims = space_.party_dims;
  vertices_.push_back(std::move(r));
}

std::size_t ProtocolTree::local_dim(VertexId v) const {
  const Vertex& x = vertex(v);
  if (!x.party) throw Error(ErrorCode::InvalidInput, "vertex has no acting party");
  return x.dims.at(*x.party);
}

void ProtocolTree::set_party(VertexId v, std::size_t party) {
  if (party >= space_.parties()) throw Error(ErrorCode::InvalidInput, "party index out of range");
  Vertex& x = vertices_.at(v);
  if (!x.children.empty() && x.party != party) {
    throw Error(ErrorCode::InvalidInput, "cannot change the party of a vertex with edges");
  }
  x.party = party;
}

VertexId ProtocolTree::add_child(VertexId parent, CpMap edge) {
  const Vertex& p = vertices_.at(parent);
  if (!p.party) throw Error(ErrorCode::InvalidInput, "set the acting party before adding edges");
  edge.check_shapes();
  const std::size_t party = *p.party;
  if (edge.in_dim != p.dims[party]) {
    std::ostringstream msg;
    msg << "edge map input dim " << edge.in_dim << " but party " << party << " holds dim " << p.dims[party];
    throw Error(ErrorCode::DimensionMismatch, msg.str());
  }
  if (edge.out_dim == 0) throw Error(ErrorCode::DimensionMismatch, "edge output dimension must be positive");
  Vertex c;
  c.parent = parent;
  c.dims = p.dims;
  c.dims[party] = edge.out_dim;
  c.edge = std::move(edge);
  const VertexId id = vertices_.size();
  vertices_.push_back(std::move(c));
  vertices_[parent].children.push_back(id);
  return id;
}

void ProtocolTree::set_label(VertexId v, int label) { vertices_.at(v).label = label; }

VertexId ProtocolTree::graft(VertexId parent, CpMap edge, const ProtocolTree& src, VertexId src_vertex) {
  const VertexId top = add_child(parent, std::move(edge));
  // (source vertex, destination vertex) pairs still to copy
  std::vector<std::pair<VertexId, VertexId>> stack{{src_vertex, top}};
  while (!stack.empty()) {
    const auto [s, d] = stack.back();
    stack.pop_back();
    const Vertex& sv = src.vertex(s);
    if (vertices_[d].dims != sv.dims) {
      throw Error(ErrorCode::DimensionMismatch, "grafted subtree expects different local dimensions");
    }
    vertices_[d].label = sv.label;
    if (sv.party) set_party(d, *sv.party);
    for (VertexId c : sv.children) {
      const VertexId nc = add_child(d, src.vertex(c).edge);
      stack.emplace_back(c, nc);
    }
  }
  return top;
}

void ProtocolTree::replace_edge(VertexId v, CpMap edge) {
  Vertex& x = vertices_.at(v);
  if (!x.parent) throw Error(ErrorCode::InvalidInput, "the root has no incoming edge");
  edge.check_shapes();
  if (edge.in_dim != x.edge.in_dim || edge.out_dim != x.edge.out_dim) {
    throw Error(ErrorCode::DimensionMismatch, "replacement edge map changes dimensions");
  }
  x.edge = std::move(edge);
}

std::vector<VertexId> ProtocolTree::leaves() const {
  std::vector<VertexId> out;
  for (VertexId v = 0; v < vertices_.size(); ++v)
    if (vertices_[v].is_leaf()) out.push_back(v);
  return out;
}

std::vector<VertexId> ProtocolTree::path_to(VertexId v) const {
  std::vector<VertexId> path;
  for (std::optional<VertexId> cur = v; cur && *cur != root(); cur = vertex(*cur).parent) path.push_back(*cur);
  std::reverse(path.begin(), path.end());
  return path;
}

std::size_t ProtocolTree::depth(VertexId v) const { return path_to(v).size(); }

std::size_t ProtocolTree::height() const {
  std::vector<std::size_t> d(vertices_.size(), 0);
  std::size_t h = 0;
  // Children always have larger ids than their parent.
  for (VertexId v = 1; v < vertices_.size(); ++v) {
    d[v] = d[*vertices_[v].parent] + 1;
    h = std::max(h, d[v]);
  }
  return h;
}

std::vector<TreeDiagnostic> validate_tree(const ProtocolTree& t, const TreeTolerances& tol) {
  std::vector<TreeDiagnostic> diags;
  auto report = [&](VertexId v, std::string msg) { diags.push_back({v, std::move(msg)}); };

  for (VertexId v = 0; v < t.size(); ++v) {
    const Vertex& x = t.vertex(v);
    if (x.dims.size() != t.space().parties()) report(v, "per-party dimension list has wrong length");
    if (x.parent) {
      const Vertex& p = t.vertex(*x.parent);
      if (!p.party) {
        report(v, "parent has no acting party");
      } else {
        const std::size_t party = *p.party;
        if (x.edge.in_dim != p.dims[party]) report(v, "edge map input dim differs from the party's dim");
        std::vector<std::size_t> expect = p.dims;
        expect[party] = x.edge.out_dim;
        if (x.dims != expect) report(v, "dims inconsistent with the incoming edge map");
      }
      for (const ComplexMatrix& k : x.edge.kraus) {
        if (k.rows() != x.edge.out_dim || k.cols() != x.edge.in_dim) report(v, "Kraus operator has wrong shape");
        if (!k.all_finite()) report(v, "Kraus operator has non-finite entries");
      }
    }
    if (x.is_leaf()) {
      if (!x.label) report(v, "leaf has no outcome label");
      continue;
    }
    if (!x.party) {
      report(v, "internal vertex has no acting party");
      continue;
    }
    if (*x.party >= t.space().parties()) {
      report(v, "acting party out of range");
      continue;
    }
    const std::size_t d = x.dims[*x.party];
    ComplexMatrix sum(d, d);
    bool shapes_ok = true;
    for (VertexId c : x.children) {
      const CpMap& e = t.vertex(c).edge;
      if (e.in_dim != d) {
        shapes_ok = false;
        break;
      }
      for (const ComplexMatrix& k : e.kraus)
        if (k.cols() == d) sum += adjoint_times(k, k);
    }
    if (!shapes_ok) continue;
    const double residual = frobenius_distance(sum, ComplexMatrix::identity(d));
    if (!(residual <= tol.completeness)) {
      std::ostringstream msg;
      msg << "outgoing edges are not trace preserving: ‖Σ K†K − I‖_F = " << residual;
      report(v, msg.str());
    }
  }
  return diags;
}

ProtocolTree fine_grain(const ProtocolTree& t) {
  ProtocolTree out(t.space());
  std::vector<std::pair<VertexId, VertexId>> stack{{ProtocolTree::root(), ProtocolTree::root()}};
  while (!stack.empty()) {
    const auto [s, d] = stack.back();
    stack.pop_back();
    const Vertex& sv = t.vertex(s);
    if (sv.label) out.set_label(d, *sv.label);
    if (sv.party) out.set_party(d, *sv.party);
    for (VertexId c : sv.children) {
      const CpMap& e = t.vertex(c).edge;
      if (e.kraus.empty()) {
        stack.emplace_back(c, out.add_child(d, CpMap{e.in_dim, e.out_dim, {ComplexMatrix(e.out_dim, e.in_dim)}}));
        continue;
      }
      for (const ComplexMatrix& k : e.kraus) {
        stack.emplace_back(c, out.add_child(d, CpMap{e.in_dim, e.out_dim, {k}}));
      }
    }
  }
  return out;
}

bool is_fine_grained(const ProtocolTree& t) {
  for (VertexId v = 1; v < t.size(); ++v)
    if (t.vertex(v).edge.kraus.size() != 1) return false;
  return true;
}

bool edge_is_nonzero(const ProtocolTree& t, VertexId v) {
  for (const ComplexMatrix& k : t.vertex(v).edge.kraus)
    for (const cplx& z : k.data())
      if (z != cplx{}) return true;
  return false;
}

WidthReport width_report(const ProtocolTree& t, bool nonzero_only) {
  WidthReport r;
  r.outdegree.assign(t.size(), 0);
  std::vector<std::size_t> depth(t.size(), 0);
  for (VertexId v = 1; v < t.size(); ++v) depth[v] = depth[*t.vertex(v).parent] + 1;
  r.height = t.height();
  r.depth_max.assign(r.height + 1, 0);
  for (VertexId v = 0; v < t.size(); ++v) {
    const Vertex& x = t.vertex(v);
    if (x.is_leaf()) {
      ++r.leaf_count;
      continue;
    }
    std::size_t deg = 0;
    for (VertexId c : x.children)
      if (!nonzero_only || edge_is_nonzero(t, c)) ++deg;
    r.outdegree[v] = deg;
    r.max_outdegree = std::max(r.max_outdegree, deg);
    r.depth_max[depth[v]] = std::max(r.depth_max[depth[v]], deg);
  }
  return r;
}

}  // namespace locc
