#pragma once

#include <string_view>

#include <json.hpp>

#include "locc/tree/protocol_tree.hpp"

// Tree files:
//   {"version": "locc-tree/1", "party_dims": [d_1, …, d_m], "root": NODE}
//   NODE = {"label": o}                                          (leaf)
//        | {"party": p, "edges": [{"kraus": [M, …], "child": NODE}, …]}
// An edge may carry "out_dim" explicitly; it is required when "kraus" is empty.

namespace locc {

inline constexpr std::string_view kTreeSchemaVersion = "locc-tree/1";

nlohmann::json tree_to_json(const ProtocolTree& t);
/// Throws InvalidInput on schema violations and DimensionMismatch on
/// inconsistent edge shapes.
ProtocolTree tree_from_json(const nlohmann::json& j);

}  // namespace locc
