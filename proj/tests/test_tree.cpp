#include <doctest.h>

#include <cmath>

#include "locc/error.hpp"
#include "locc/tree/evaluate.hpp"
#include "locc/tree/generators.hpp"
#include "locc/tree/tree_json.hpp"
#include "support.hpp"

using namespace locc;

namespace {

// Edges with several Kraus operators, so the walker sees more than the
// generator's rank-one instruments.
void grow(ProtocolTree& t, VertexId v, std::size_t round, std::size_t rounds, std::size_t labels, Rng& rng) {
  if (round == rounds) {
    t.set_label(v, static_cast<int>(rng.uniform_int(0, labels - 1)));
    return;
  }
  const std::size_t party = round % t.space().parties();
  t.set_party(v, party);
  const std::size_t d = t.vertex(v).dims[party];
  const std::size_t outcomes = rng.uniform_int(1, 3), per = rng.uniform_int(1, 2);
  const std::size_t dout = d;
  const std::vector<ComplexMatrix> ks = random_measurement(d, outcomes * per, rng);
  for (std::size_t o = 0; o < outcomes; ++o) {
    CpMap e{d, dout, {}};
    for (std::size_t j = 0; j < per; ++j) e.kraus.push_back(ks[o * per + j]);
    grow(t, t.add_child(v, e), round + 1, rounds, labels, rng);
  }
}

ProtocolTree coarse_tree(const std::vector<std::size_t>& dims, std::size_t rounds, std::size_t labels, Rng& rng) {
  ProtocolTree t(MultipartiteSpace{dims});
  grow(t, ProtocolTree::root(), 0, rounds, labels, rng);
  return t;
}

}  // namespace

TEST_CASE("hand-built tree") {
  ProtocolTree t(MultipartiteSpace{{2, 2}});
  t.set_party(0, 0);
  const VertexId a = t.add_child(0, CpMap::single(ComplexMatrix{{1, 0}, {0, 0}}));
  const VertexId b = t.add_child(0, CpMap::single(ComplexMatrix{{0, 0}, {0, 1}}));
  t.set_label(a, 0);
  CHECK(t.vertex(a).dims == std::vector<std::size_t>{2, 2});
  CHECK(t.depth(b) == 1);
  CHECK(t.path_to(b) == std::vector<VertexId>{b});

  std::vector<TreeDiagnostic> d = validate_tree(t);
  REQUIRE(d.size() == 1);
  CHECK(d[0].vertex == b);
  t.set_label(b, 1);
  CHECK(validate_tree(t).empty());

  CHECK_THROWS_AS(t.add_child(a, CpMap::identity(2)), Error);  // a has no party
  t.set_party(a, 1);
  CHECK_THROWS_AS(t.add_child(a, CpMap::identity(3)), Error);
  const VertexId c = t.add_child(a, CpMap::single(ComplexMatrix{{1, 0}}));
  CHECK(t.vertex(c).dims == std::vector<std::size_t>{2, 1});
  CHECK_FALSE(validate_tree(t).empty());  // a incomplete, c unlabeled

  const WidthReport w = width_report(t);
  CHECK(w.max_outdegree == 2);
  CHECK(w.height == 2);
  CHECK(w.leaf_count == 2);
}

TEST_CASE("recursive evaluation matches leaf enumeration") {
  Rng rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const std::vector<std::size_t> dims = trial % 2 ? std::vector<std::size_t>{2, 2} : std::vector<std::size_t>{2, 3};
    const ProtocolTree t = coarse_tree(dims, rng.uniform_int(1, 3), 3, rng);
    REQUIRE(validate_tree(t).empty());
    const Ensemble s = random_ensemble(t.space(), 3, rng);
    const double fast = evaluate_success(t, s).probability;
    CHECK(std::abs(fast - oracle::success_by_leaves(t, s)) < 1e-10);

    const SuccessResult best = evaluate_success(t, s, true);
    CHECK(best.probability >= fast - 1e-12);

    const ProtocolTree f = fine_grain(t);
    CHECK(is_fine_grained(f));
    CHECK(validate_tree(f).empty());
    CHECK(std::abs(evaluate_success(f, s).probability - fast) < 1e-12);
    CHECK(instrument_distance(extract_instrument(f), extract_instrument(t)) < 1e-10);
    CHECK(extract_instrument(t).completeness_residual() < 1e-10);
  }
}

TEST_CASE("label range is checked") {
  DemoInstance d = bell_demo();
  Ensemble one = d.ensemble;
  one.members.pop_back();
  try {
    evaluate_success(d.tree, one);
    FAIL("expected LabelOutOfRange");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::LabelOutOfRange);
  }
}

TEST_CASE("demos discriminate perfectly") {
  const DemoInstance bell = bell_demo();
  CHECK(validate_tree(bell.tree).empty());
  CHECK(std::abs(evaluate_success(bell.tree, bell.ensemble).probability - 1.0) < 1e-10);
  CHECK(std::abs(oracle::success_by_leaves(bell.tree, bell.ensemble) - 1.0) < 1e-10);
  const DemoInstance pb = product_basis_demo();
  CHECK(validate_tree(pb.tree).empty());
  CHECK(std::abs(evaluate_success(pb.tree, pb.ensemble).probability - 1.0) < 1e-10);
}

TEST_CASE("cumulative maps and propagation") {
  Rng rng(23);
  const ProtocolTree t = coarse_tree({2, 2}, 2, 2, rng);
  const Ensemble s = random_ensemble(t.space(), 2, rng);
  for (VertexId v : t.leaves()) {
    const CpMap n = cumulative_map(t, v);
    Ensemble at = s;
    for (VertexId step : t.path_to(v)) at = propagate(t, step, at);
    for (std::size_t k = 0; k < s.size(); ++k)
      CHECK(frobenius_distance(n.apply(s.members[k].state), at.members[k].state) < 1e-12);
  }
}

TEST_CASE("tree JSON round trip") {
  Rng rng(29);
  const ProtocolTree t = coarse_tree({2, 3}, 3, 2, rng);
  const ProtocolTree back = tree_from_json(nlohmann::json::parse(tree_to_json(t).dump()));
  REQUIRE(back.size() == t.size());
  for (VertexId v = 0; v < t.size(); ++v) {
    CHECK(back.vertex(v).dims == t.vertex(v).dims);
    CHECK(back.vertex(v).label == t.vertex(v).label);
  }
  CHECK(instrument_distance(extract_instrument(back), extract_instrument(t)) == 0.0);
  CHECK(tree_to_json(t)["version"] == std::string(kTreeSchemaVersion));

  CHECK_THROWS_AS(tree_from_json(nlohmann::json::parse(R"({"version": "nope"})")), Error);
  CHECK_THROWS_AS(tree_from_json(nlohmann::json::parse(
                      R"({"version": "locc-tree/1", "party_dims": [2], "root": {"party": 5, "edges": []}})")),
                  Error);
}

TEST_CASE("graft copies a subtree") {
  const DemoInstance bell = bell_demo();
  ProtocolTree t(bell.tree.space());
  t.set_party(0, 0);
  t.graft(0, CpMap::identity(2), bell.tree, 0);
  CHECK(t.size() == bell.tree.size() + 1);
  CHECK(std::abs(evaluate_success(t, bell.ensemble).probability - 1.0) < 1e-12);
}

TEST_CASE("random generator produces valid fine-grained protocols") {
  Rng rng(31);
  RandomProtocolSpec spec;
  spec.party_dims = {2, 3};
  spec.rounds = 3;
  const ProtocolTree t = random_protocol(spec, rng);
  CHECK(validate_tree(t).empty());
  CHECK(is_fine_grained(t));
  CHECK(t.height() == 3);
  Rng again(31);
  CHECK(tree_to_json(random_protocol(spec, again)) == tree_to_json(t));
}
