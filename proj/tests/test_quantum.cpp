#include <doctest.h>

#include <cmath>

#include "locc/error.hpp"
#include "locc/numerics/eigen.hpp"
#include "locc/quantum/channels.hpp"
#include "locc/quantum/ensemble.hpp"
#include "locc/quantum/json_io.hpp"
#include "locc/quantum/random.hpp"
#include "locc/quantum/space.hpp"
#include "support.hpp"

using namespace locc;

TEST_CASE("local embedding matches explicit Kronecker products") {
  Rng rng(1);
  const MultipartiteSpace space{{2, 3, 2}};
  CHECK(space.total_dim() == 12);
  for (std::size_t party = 0; party < 3; ++party) {
    const std::size_t din = space.party_dims[party];
    for (std::size_t dout : {std::size_t{1}, din, din + 1}) {
      const ComplexMatrix k = oracle::random_matrix(dout, din, rng);
      const ComplexMatrix e = embed_local(k, party, space);
      CHECK(e.rows() == space.with_dim(party, dout).total_dim());
      CHECK(oracle::max_abs_diff(e, oracle::lift(k, party, space.party_dims)) < 1e-15);
    }
  }
  CHECK_THROWS_AS(embed_local(ComplexMatrix(2, 3), 0, space), Error);
}

TEST_CASE("CP maps") {
  Rng rng(2);
  const std::vector<ComplexMatrix> ks = random_measurement(2, 3, rng);
  CpMap m{2, 2, ks};
  CHECK(frobenius_distance(m.effect(), ComplexMatrix::identity(2)) < 1e-12);
  const ComplexMatrix rho = random_density(2, rng);
  CHECK(m.apply(rho).trace().real() == doctest::Approx(1.0));

  const CpMap half = scaled(m, 0.25);
  CHECK(half.apply(rho).trace().real() == doctest::Approx(0.25));
  const CpMap both = kraus_union(m, half);
  CHECK(both.kraus.size() == 6);
  CHECK(both.apply(rho).trace().real() == doctest::Approx(1.25));

  const CpMap after = CpMap::single(ComplexMatrix{{0, 1}, {1, 0}});
  const CpMap c = compose(after, m);
  CHECK(frobenius_distance(c.apply(rho), after.apply(m.apply(rho))) < 1e-14);
  CHECK_THROWS_AS((CpMap{2, 3, {ComplexMatrix(2, 2)}}.check_shapes()), Error);
}

TEST_CASE("Choi matrices") {
  SUBCASE("identity channel") {
    const ChoiMatrix c = choi_of(CpMap::identity(2));
    // |Φ⟩⟨Φ| with |Φ⟩ = |00⟩ + |11⟩, input index most significant
    CHECK(c.matrix(0, 0) == cplx(1));
    CHECK(c.matrix(0, 3) == cplx(1));
    CHECK(c.matrix(3, 0) == cplx(1));
    CHECK(c.matrix(1, 1) == cplx(0));
    CHECK(c.matrix.trace().real() == doctest::Approx(2.0));
  }
  SUBCASE("rectangular Kraus round trip") {
    Rng rng(3);
    for (int trial = 0; trial < 10; ++trial) {
      const std::size_t din = rng.uniform_int(1, 3), dout = rng.uniform_int(1, 3);
      CpMap m{din, dout, {}};
      for (std::size_t k = 0, n = rng.uniform_int(1, 3); k < n; ++k)
        m.kraus.push_back(oracle::random_matrix(dout, din, rng));
      const ChoiMatrix c = choi_of(m);
      CHECK(min_eigenvalue(c.matrix) > -1e-12);
      const CpMap back = map_of_choi(c);
      CHECK(frobenius_distance(choi_of(back).matrix, c.matrix) < 1e-9);
      CHECK(back.kraus.size() <= din * dout);
    }
  }
  SUBCASE("non-PSD input") {
    ChoiMatrix c{1, 2, ComplexMatrix::diagonal({1.0, -1.0})};
    CHECK_THROWS_AS(map_of_choi(c), Error);
  }
}

TEST_CASE("polar form of a Kraus operator") {
  Rng rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    ComplexMatrix a = oracle::random_matrix(3, 2, rng);
    if (trial % 3 == 0) {
      for (std::size_t r = 0; r < 3; ++r) a(r, 1) = 2.0 * a(r, 0);  // rank one
    }
    const KrausPolar p = canonicalize_kraus(a);
    CHECK(frobenius_distance(p.isometry * p.positive, a) < 1e-9);
    CHECK(frobenius_distance(p.positive * p.positive, adjoint_times(a, a)) < 1e-9);
  }
}

TEST_CASE("POVM validation") {
  const Povm z{2, {ComplexMatrix::diagonal({1.0, 0.0}), ComplexMatrix::diagonal({0.0, 1.0})}};
  CHECK(validate_povm(z).ok);
  const Povm short_{2, {ComplexMatrix::diagonal({1.0, 0.0})}};
  const PovmCheck c = validate_povm(short_);
  CHECK_FALSE(c.ok);
  CHECK(c.completeness_residual == doctest::Approx(1.0));
  const Povm neg{2, {ComplexMatrix::diagonal({1.5, 0.5}), ComplexMatrix::diagonal({-0.5, 0.5})}};
  CHECK_FALSE(validate_povm(neg).ok);
}

TEST_CASE("ensemble normalization") {
  const MultipartiteSpace sp{{2}};
  Ensemble s = Ensemble::make(sp, {{0.5, ComplexMatrix::diagonal({0.5, 0.0})}, {0.5, ComplexMatrix(2, 2)}});
  CHECK_FALSE(s.normalized);
  CHECK(s.probability() == doctest::Approx(0.25));
  const NormalizedEnsemble n = normalize(s);
  CHECK(n.probability == doctest::Approx(0.25));
  CHECK(n.ensemble.normalized);
  CHECK(n.ensemble.members[0].weight == doctest::Approx(1.0));
  CHECK(n.ensemble.members[1].weight == 0.0);
  CHECK(n.ensemble.members[1].state(0, 0).real() == doctest::Approx(0.5));
  CHECK(validate_ensemble(n.ensemble).empty());
  CHECK_THROWS_AS(normalize(Ensemble::make(sp, {{1.0, ComplexMatrix(2, 2)}})), Error);

  const Ensemble bad = Ensemble::make(sp, {{-0.1, ComplexMatrix::diagonal({1.0, 0.0})}});
  CHECK_FALSE(validate_ensemble(bad).empty());
}

TEST_CASE("pinned random stream") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.normal() == b.normal());
  Rng c(9);
  for (int i = 0; i < 1000; ++i) {
    const double u = c.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const std::size_t k = c.uniform_int(3, 5);
    CHECK(k >= 3);
    CHECK(k <= 5);
  }
  const ComplexMatrix u = haar_unitary(5, c);
  CHECK(frobenius_distance(adjoint_times(u, u), ComplexMatrix::identity(5)) < 1e-12);
  const ComplexMatrix rho = random_density(4, c, 2);
  CHECK(rho.trace().real() == doctest::Approx(1.0));
  CHECK(support_basis(rho).cols() == 2);
  const std::vector<double> p = random_simplex(6, c);
  double total = 0.0;
  for (double x : p) total += x;
  CHECK(total == doctest::Approx(1.0));
  const std::vector<ComplexMatrix> ks = random_measurement(3, 4, c, 2);
  ComplexMatrix sum(3, 3);
  for (const ComplexMatrix& k : ks) {
    CHECK(k.rows() == 2);
    sum += adjoint_times(k, k);
  }
  CHECK(frobenius_distance(sum, ComplexMatrix::identity(3)) < 1e-12);
}

TEST_CASE("JSON encodings round-trip") {
  Rng rng(6);
  const ComplexMatrix m = oracle::random_matrix(2, 3, rng);
  CHECK(nlohmann::json(m).get<ComplexMatrix>() == m);

  const Ensemble s = Ensemble::make(MultipartiteSpace{{2, 2}}, {{0.3, random_density(4, rng)}, {0.7, random_density(4, rng)}});
  const Ensemble s2 = nlohmann::json::parse(nlohmann::json(s).dump()).get<Ensemble>();
  CHECK(s2.space == s.space);
  CHECK(s2.members[1].state == s.members[1].state);
  CHECK(s2.normalized);

  const Instrument ins{2, {{0, CpMap{2, 1, {ComplexMatrix{{1, 0}}}}}, {3, CpMap{2, 1, {ComplexMatrix{{0, 1}}}}}}};
  const Instrument ins2 = nlohmann::json(ins).get<Instrument>();
  REQUIRE(ins2.branches.size() == 2);
  CHECK(ins2.branches[1].label == 3);
  CHECK(ins2.completeness_residual() < 1e-15);

  CHECK_THROWS_AS(nlohmann::json::parse(R"({"rows": 2, "cols": 2, "data": [[1,0]]})").get<ComplexMatrix>(), Error);
}
