#include "locc/tree/tree_json.hpp"

#include "locc/error.hpp"
#include "locc/quantum/json_io.hpp"

namespace locc {
namespace {

using nlohmann::json;

json node_to_json(const ProtocolTree& t, VertexId v) {
  const Vertex& x = t.vertex(v);
  json node = json::object();
  if (x.label) node["label"] = *x.label;
  if (x.is_leaf()) return node;
  node["party"] = *x.party;
  json edges = json::array();
  for (VertexId c : x.children) {
    const CpMap& e = t.vertex(c).edge;
    edges.push_back({{"out_dim", e.out_dim}, {"kraus", e.kraus}, {"child", node_to_json(t, c)}});
  }
  node["edges"] = std::move(edges);
  return node;
}

void node_from_json(const json& node, ProtocolTree& t, VertexId v) {
  if (!node.is_object()) throw Error(ErrorCode::InvalidInput, "tree node must be an object");
  if (node.contains("label")) {
    if (!node["label"].is_number_integer()) throw Error(ErrorCode::InvalidInput, "label must be an integer");
    t.set_label(v, node["label"].get<int>());
  }
  if (!node.contains("edges")) {
    if (!node.contains("label")) throw Error(ErrorCode::InvalidInput, "leaf node without a label");
    return;
  }
  if (!node.contains("party") || !node["party"].is_number_unsigned()) {
    throw Error(ErrorCode::InvalidInput, "internal node needs a nonnegative integer \"party\"");
  }
  t.set_party(v, node["party"].get<std::size_t>());
  const std::size_t in_dim = t.local_dim(v);
  for (const json& edge : node["edges"]) {
    if (!edge.is_object() || !edge.contains("kraus") || !edge.contains("child")) {
      throw Error(ErrorCode::InvalidInput, "edge needs \"kraus\" and \"child\"");
    }
    std::vector<ComplexMatrix> kraus;
    try {
      kraus = edge["kraus"].get<std::vector<ComplexMatrix>>();
    } catch (const json::exception& e) {
      throw Error(ErrorCode::InvalidInput, std::string("bad kraus list: ") + e.what());
    }
    std::size_t out_dim = 0;
    if (edge.contains("out_dim")) {
      out_dim = edge["out_dim"].get<std::size_t>();
    } else if (!kraus.empty()) {
      out_dim = kraus.front().rows();
    } else {
      throw Error(ErrorCode::InvalidInput, "edge with no Kraus operators needs \"out_dim\"");
    }
    const VertexId c = t.add_child(v, CpMap{in_dim, out_dim, std::move(kraus)});
    node_from_json(edge["child"], t, c);
  }
}

}  // namespace

json tree_to_json(const ProtocolTree& t) {
  return json{{"version", kTreeSchemaVersion},
              {"party_dims", t.space().party_dims},
              {"root", node_to_json(t, ProtocolTree::root())}};
}

ProtocolTree tree_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidInput, "tree document must be an object");
  if (!j.contains("version") || j["version"] != kTreeSchemaVersion) {
    throw Error(ErrorCode::InvalidInput, "unsupported or missing tree version (expected locc-tree/1)");
  }
  if (!j.contains("party_dims") || !j.contains("root")) {
    throw Error(ErrorCode::InvalidInput, "tree document needs \"party_dims\" and \"root\"");
  }
  ProtocolTree t(MultipartiteSpace{j["party_dims"].get<std::vector<std::size_t>>()});
  node_from_json(j["root"], t, ProtocolTree::root());
  return t;
}

}  // namespace locc
