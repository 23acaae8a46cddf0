#pragma once

#include <json.hpp>

#include "locc/numerics/complex_matrix.hpp"
#include "locc/quantum/channels.hpp"
#include "locc/quantum/ensemble.hpp"

// JSON encodings. A matrix is {"rows", "cols", "data": [[re, im], …]} in
// row-major order. Ensembles, POVMs and instruments wrap lists of matrices:
//
//   ensemble:   {"party_dims": [...], "members": [{"weight": p, "state": M}, …]}
//   povm:       {"dim": d, "elements": [M, …]}
//   instrument: {"in_dim": d, "branches": [{"label": o, "out_dim": d',
//                                           "kraus": [M, …]}, …]}
//
// Decoding failures throw locc::Error(InvalidInput).

namespace locc {

void to_json(nlohmann::json& j, const ComplexMatrix& m);
void from_json(const nlohmann::json& j, ComplexMatrix& m);

void to_json(nlohmann::json& j, const Ensemble& s);
void from_json(const nlohmann::json& j, Ensemble& s);

void to_json(nlohmann::json& j, const Povm& p);
void from_json(const nlohmann::json& j, Povm& p);

void to_json(nlohmann::json& j, const CpMap& m);
void from_json(const nlohmann::json& j, CpMap& m);

void to_json(nlohmann::json& j, const Instrument& ins);
void from_json(const nlohmann::json& j, Instrument& ins);

}  // namespace locc
