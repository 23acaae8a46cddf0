#include <doctest.h>

#include <cmath>

#include "locc/compress_m1.hpp"
#include "locc/error.hpp"
#include "locc/tree/evaluate.hpp"
#include "locc/tree/generators.hpp"
#include "locc/tree/tree_json.hpp"
#include "support.hpp"

using namespace locc;

namespace {

void check_split(const ComplexMatrix& x, const ComplexMatrix& y, double tol = 1e-9) {
  const SplitPair cd = matrix_sum_split(x, y);
  const ComplexMatrix root = sqrt_psd(adjoint_times(x, x) + adjoint_times(y, y));
  CHECK(frobenius_distance(oracle::matmul(cd.c, root), x) < tol);
  CHECK(frobenius_distance(oracle::matmul(cd.d, root), y) < tol);
  const ComplexMatrix g = oracle::matmul(oracle::dagger(cd.c), cd.c) + oracle::matmul(oracle::dagger(cd.d), cd.d);
  CHECK(frobenius_distance(g, ComplexMatrix::identity(x.cols())) < tol);
}

}  // namespace

TEST_CASE("matrix sum split") {
  SUBCASE("full rank") {
    Rng rng(1);
    for (int trial = 0; trial < 30; ++trial) {
      const std::size_t d = rng.uniform_int(1, 5);
      check_split(oracle::random_matrix(rng.uniform_int(1, 5), d, rng), oracle::random_matrix(d, d, rng));
    }
  }
  SUBCASE("rank deficient") {
    Rng rng(2);
    for (int trial = 0; trial < 30; ++trial) {
      const std::size_t d = rng.uniform_int(2, 5);
      ComplexMatrix x = oracle::random_matrix(d, d, rng), y = oracle::random_matrix(d, d, rng);
      const std::size_t zero = rng.uniform_int(0, d - 1);
      for (std::size_t r = 0; r < d; ++r) x(r, zero) = y(r, zero) = 0.0;
      check_split(x, y);
    }
  }
  SUBCASE("nilpotent X with Y = 0") {
    check_split(ComplexMatrix{{0, 1}, {0, 0}}, ComplexMatrix(2, 2));
  }
  SUBCASE("projector X with Y = 0") {
    const SplitPair cd = matrix_sum_split(ComplexMatrix::diagonal({1.0, 0.0}), ComplexMatrix(2, 2));
    CHECK(frobenius_distance(cd.c, ComplexMatrix::identity(2)) < 1e-12);
    CHECK(cd.d.frobenius_norm() < 1e-12);
  }
  SUBCASE("both zero") {
    check_split(ComplexMatrix(2, 2), ComplexMatrix(2, 2));
  }
  SUBCASE("shape errors") {
    CHECK_THROWS_AS(matrix_sum_split(ComplexMatrix(2, 2), ComplexMatrix(2, 3)), Error);
    // a 1×2 pair cannot hold a 2-dimensional isometry when both vanish
    CHECK_THROWS_AS(matrix_sum_split(ComplexMatrix(1, 2), ComplexMatrix(0, 2)), Error);
  }
}

TEST_CASE("equalization of two outcomes") {
  // t = 1 and t = 0 with equal weight: one merge gives a single outcome at 1/2.
  const std::vector<MeasurementOutcome> outs{{ComplexMatrix::diagonal({1.0, 0.0}), 0.5, 1.0},
                                             {ComplexMatrix::diagonal({0.0, 1.0}), 0.5, 0.0}};
  EqualizeStats st;
  const std::vector<EqualizedOutcome> eq = equalize(outs, 0.5, {}, &st);
  REQUIRE(eq.size() == 1);
  CHECK(st.merges == 1);
  CHECK(eq[0].success == doctest::Approx(0.5));
  CHECK(eq[0].probability == doctest::Approx(1.0));
  CHECK(frobenius_distance(eq[0].kraus, ComplexMatrix::identity(2)) < 1e-12);
}

TEST_CASE("equalization of random outcomes") {
  Rng rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = rng.uniform_int(2, 12);
    const std::vector<ComplexMatrix> ks = random_measurement(2, n, rng);
    const std::vector<double> q = random_simplex(n, rng);
    std::vector<MeasurementOutcome> outs;
    double target = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      outs.push_back({ks[i], q[i], rng.uniform()});
      target += q[i] * outs.back().success;
    }
    EqualizeStats st;
    const std::vector<EqualizedOutcome> eq = equalize(outs, target, {}, &st);
    CHECK(st.merges <= n);
    CHECK(st.telescoping_drift < 1e-12);
    ComplexMatrix sum_b(2, 2), sum_a(2, 2);
    double total = 0.0;
    for (const EqualizedOutcome& o : eq) {
      CHECK(std::abs(o.success - target) <= 1e-8);
      CHECK(o.second_stage.size() <= 2);
      sum_b += adjoint_times(o.kraus, o.kraus);
      total += o.probability * o.success;
    }
    for (const ComplexMatrix& k : ks) sum_a += adjoint_times(k, k);
    CHECK(frobenius_distance(sum_a, sum_b) < 1e-10);
    CHECK(std::abs(total - target) < 1e-12);

    const std::vector<EqualizedOutcome> red = caratheodory_stage(eq, 2);
    CHECK(red.size() <= 4);
    ComplexMatrix sum_r(2, 2);
    for (const EqualizedOutcome& o : red) sum_r += adjoint_times(o.kraus, o.kraus);
    CHECK(frobenius_distance(sum_r, ComplexMatrix::identity(2)) < 1e-9);
  }
}

TEST_CASE("compression of random protocols") {
  Rng rng(4);
  for (int trial = 0; trial < 12; ++trial) {
    RandomProtocolSpec spec;
    spec.party_dims = trial % 2 ? std::vector<std::size_t>{2, 2} : std::vector<std::size_t>{2, 3};
    spec.root_min = 10;
    spec.root_max = 16;
    spec.labels = 3;
    const ProtocolTree t = random_protocol(spec, rng);
    const Ensemble s = random_ensemble(t.space(), 3, rng);
    M1Report rep;
    const ProtocolTree c = compress_protocol_m1(t, s, {}, &rep);
    CHECK(validate_tree(c).empty());
    CHECK(std::abs(evaluate_success(c, s).probability - evaluate_success(t, s).probability) < 1e-7);
    CHECK(c.height() == t.height());
    CHECK(rep.vertices_compressed >= 1);
    CHECK(rep.max_second_stage_residual < 1e-8);
    for (VertexId v = 0; v < c.size(); ++v) {
      if (c.vertex(v).is_leaf()) continue;
      const std::size_t d = c.local_dim(v);
      CHECK(c.vertex(v).children.size() <= 2 * d * d);
    }
    if (spec.party_dims[1] == 2) CHECK(c.leaves().size() <= 64);
  }
}

TEST_CASE("slim trees pass through unchanged") {
  const DemoInstance bell = bell_demo();
  const ProtocolTree c = compress_protocol_m1(bell.tree, bell.ensemble);
  CHECK(tree_to_json(c) == tree_to_json(bell.tree));

  M1Options all;
  all.compress_all = true;
  const ProtocolTree forced = compress_protocol_m1(bell.tree, bell.ensemble, all);
  CHECK(validate_tree(forced).empty());
  CHECK(std::abs(evaluate_success(forced, bell.ensemble).probability - 1.0) < 1e-9);
}

TEST_CASE("outcomes that never occur") {
  // Ten outcomes on party 0; those on |1⟩ never fire for |00⟩.
  ProtocolTree t(MultipartiteSpace{{2, 2}});
  t.set_party(0, 0);
  for (int i = 0; i < 10; ++i) {
    ComplexMatrix k(2, 2);
    k(i % 2, i % 2) = std::sqrt(0.2);
    t.set_label(t.add_child(0, CpMap::single(k)), i % 2);
  }
  ComplexMatrix rho(4, 4);
  rho(0, 0) = 1.0;
  const Ensemble s = Ensemble::make(t.space(), {{0.6, rho}, {0.4, rho}});
  REQUIRE(validate_tree(t).empty());
  const ProtocolTree c = compress_protocol_m1(t, s);
  CHECK(validate_tree(c).empty());
  CHECK(c.vertex(0).children.size() <= 8);
  CHECK(std::abs(evaluate_success(c, s).probability - 0.6) < 1e-9);
}

TEST_CASE("compression rejects unnormalized input") {
  const DemoInstance bell = bell_demo();
  Ensemble s = bell.ensemble;
  s.normalized = false;
  CHECK_THROWS_AS(compress_protocol_m1(bell.tree, s), Error);
}
