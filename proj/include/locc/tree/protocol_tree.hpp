#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "locc/quantum/channels.hpp"
#include "locc/quantum/space.hpp"

namespace locc {

using VertexId = std::size_t;

/// One vertex of an LOCC protocol tree. The CP map of the edge (parent, v) is
/// stored on v. Internal vertices name the party that measures there; leaves
/// carry the coarse-grained outcome label.
struct Vertex {
  std::optional<VertexId> parent;
  CpMap edge;                      // unused at the root
  std::vector<std::size_t> dims;   // per-party dimensions on arrival at this vertex
  std::optional<std::size_t> party;
  std::vector<VertexId> children;
  std::optional<int> label;

  bool is_leaf() const noexcept { return children.empty(); }
};

/// Finite rooted tree of local instruments. Vertices live in an arena indexed
/// by VertexId; the root is vertex 0. The classical transcript is the path
/// itself, so broadcasts are not modelled separately.
class ProtocolTree {
 public:
  ProtocolTree() : ProtocolTree(MultipartiteSpace{{1}}) {}
  explicit ProtocolTree(MultipartiteSpace space);

  static constexpr VertexId root() noexcept { return 0; }
  const MultipartiteSpace& space() const noexcept { return space_; }
  std::size_t size() const noexcept { return vertices_.size(); }
  const Vertex& vertex(VertexId v) const { return vertices_.at(v); }
  const std::vector<Vertex>& vertices() const noexcept { return vertices_; }

  /// Local space (all parties) on arrival at v.
  MultipartiteSpace space_at(VertexId v) const { return {vertex(v).dims}; }
  /// Dimension of the acting party's system at an internal vertex.
  std::size_t local_dim(VertexId v) const;

  void set_party(VertexId v, std::size_t party);
  /// Appends an outgoing edge at `parent` (whose party must be set). The
  /// map's in_dim must equal the acting party's current dimension; the
  /// child's dims replace that party's entry by the map's out_dim.
  VertexId add_child(VertexId parent, CpMap edge);
  void set_label(VertexId v, int label);
  /// Copies the subtree of `src` rooted at `src_vertex` below `parent` with
  /// the given edge map, returning the new child's id.
  VertexId graft(VertexId parent, CpMap edge, const ProtocolTree& src, VertexId src_vertex);
  /// Replaces the map on edge (parent(v), v). Shapes must match the old map.
  void replace_edge(VertexId v, CpMap edge);

  std::vector<VertexId> leaves() const;
  /// Edges from the root to v, as the list of child vertex ids along the path.
  std::vector<VertexId> path_to(VertexId v) const;
  std::size_t depth(VertexId v) const;
  std::size_t height() const;

 private:
  MultipartiteSpace space_;
  std::vector<Vertex> vertices_;
};

struct TreeDiagnostic {
  VertexId vertex;
  std::string message;
};

struct TreeTolerances {
  double completeness = 1e-8;
};

/// Every violated structural or completeness invariant, tagged with the
/// vertex; empty iff the tree is a valid finite LOCC protocol.
std::vector<TreeDiagnostic> validate_tree(const ProtocolTree& t, const TreeTolerances& tol = {});

/// Splits every edge with k > 1 Kraus operators into k rank-one edges, each
/// followed by its own copy of the original subtree. Leaf labels are copied,
/// so the implemented instrument is unchanged.
ProtocolTree fine_grain(const ProtocolTree& t);
bool is_fine_grained(const ProtocolTree& t);

struct WidthReport {
  std::size_t max_outdegree = 0;
  std::vector<std::size_t> outdegree;     // per vertex (0 for leaves)
  std::vector<std::size_t> depth_max;     // max outdegree among vertices at each depth
  std::size_t leaf_count = 0;
  std::size_t height = 0;
};

/// Outdegree statistics. With `nonzero_only`, edges whose map is zero are not
/// counted (the width of a slim component).
WidthReport width_report(const ProtocolTree& t, bool nonzero_only = false);

/// True iff the edge map at v has a nonzero Kraus operator.
bool edge_is_nonzero(const ProtocolTree& t, VertexId v);

}  // namespace locc
