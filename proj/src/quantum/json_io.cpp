#include "locc/quantum/json_io.hpp"

#include "locc/error.hpp"

namespace locc {
namespace {

using nlohmann::json;

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorCode::InvalidInput, std::string("missing field \"") + key + "\"");
  }
  return j.at(key);
}

template <class T>
T get_as(const json& j, const char* key) {
  try {
    return field(j, key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("field \"") + key + "\": " + e.what());
  }
}

}  // namespace

void to_json(json& j, const ComplexMatrix& m) {
  json data = json::array();
  for (const cplx& z : m.data()) data.push_back({z.real(), z.imag()});
  j = json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

void from_json(const json& j, ComplexMatrix& m) {
  const auto rows = get_as<std::size_t>(j, "rows");
  const auto cols = get_as<std::size_t>(j, "cols");
  const json& data = field(j, "data");
  if (!data.is_array() || data.size() != rows * cols) {
    throw Error(ErrorCode::InvalidInput, "matrix data length does not match rows*cols");
  }
  std::vector<cplx> entries;
  entries.reserve(data.size());
  for (const json& z : data) {
    if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number()) {
      throw Error(ErrorCode::InvalidInput, "matrix entries must be [re, im] pairs");
    }
    entries.emplace_back(z[0].get<double>(), z[1].get<double>());
  }
  m = ComplexMatrix(rows, cols, std::move(entries));
  if (!m.all_finite()) throw Error(ErrorCode::InvalidInput, "matrix has non-finite entries");
}

void to_json(json& j, const Ensemble& s) {
  json members = json::array();
  for (const EnsembleMember& m : s.members) members.push_back({{"weight", m.weight}, {"state", m.state}});
  j = json{{"party_dims", s.space.party_dims}, {"members", std::move(members)}};
}

void from_json(const json& j, Ensemble& s) {
  MultipartiteSpace space{get_as<std::vector<std::size_t>>(j, "party_dims")};
  std::vector<EnsembleMember> members;
  for (const json& m : field(j, "members")) {
    members.push_back({get_as<double>(m, "weight"), get_as<ComplexMatrix>(m, "state")});
  }
  s = Ensemble::make(std::move(space), std::move(members));
}

void to_json(json& j, const Povm& p) { j = json{{"dim", p.dim}, {"elements", p.elements}}; }

void from_json(const json& j, Povm& p) {
  p.dim = get_as<std::size_t>(j, "dim");
  p.elements = get_as<std::vector<ComplexMatrix>>(j, "elements");
}

void to_json(json& j, const CpMap& m) {
  j = json{{"in_dim", m.in_dim}, {"out_dim", m.out_dim}, {"kraus", m.kraus}};
}

void from_json(const json& j, CpMap& m) {
  m.in_dim = get_as<std::size_t>(j, "in_dim");
  m.out_dim = get_as<std::size_t>(j, "out_dim");
  m.kraus = get_as<std::vector<ComplexMatrix>>(j, "kraus");
  m.check_shapes();
}

void to_json(json& j, const Instrument& ins) {
  json branches = json::array();
  for (const InstrumentBranch& b : ins.branches) {
    branches.push_back({{"label", b.label}, {"out_dim", b.map.out_dim}, {"kraus", b.map.kraus}});
  }
  j = json{{"in_dim", ins.in_dim}, {"branches", std::move(branches)}};
}

void from_json(const json& j, Instrument& ins) {
  ins.in_dim = get_as<std::size_t>(j, "in_dim");
  ins.branches.clear();
  for (const json& b : field(j, "branches")) {
    CpMap map{ins.in_dim, get_as<std::size_t>(b, "out_dim"), get_as<std::vector<ComplexMatrix>>(b, "kraus")};
    map.check_shapes();
    ins.branches.push_back({get_as<int>(b, "label"), std::move(map)});
  }
}

}  // namespace locc
