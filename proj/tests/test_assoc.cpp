#include <doctest.h>

#include "test_support.hpp"
#include "uea/assoc_algebra.hpp"
#include "uea/catalog.hpp"
#include "uea/lie_io.hpp"

using namespace uea;

namespace {

template <class S>
AssocAlgebra<S> envelope_of(const char* name, const Field<S>& F, int t,
                            std::optional<S> param = std::nullopt) {
  return envelope_to_assoc(Envelope<S>(catalog_build<S>(name, F, param), t));
}

}  // namespace

TEST_CASE("centers of the family (1) quotients have dims 30, 29, 28") {
  Field<Rat> Q;
  CHECK(center(envelope_of<Rat>("K6.3", Q, 4)).dim() == 30);
  CHECK(center(envelope_of<Rat>("K6.5", Q, 4)).dim() == 29);
  CHECK(center(envelope_of<Rat>("K6.10", Q, 4)).dim() == 28);
}

TEST_CASE("center of a commutative algebra is everything") {
  Field<Rat> Q;
  auto ab = parse_lie<Rat>("field Q\ndim 2\n", Q);
  ab.set_weights({1, 1});
  auto A = envelope_to_assoc(Envelope<Rat>(ab, 4));
  CHECK(center(A).dim() == A.dim);
}

TEST_CASE("center via generators equals the brute-force definition") {
  Field<Zp> F5(FieldSpec::prime_field(5));
  for (const char* name : {"K6.9", "K6.23", "L5.6"}) {
    auto A = envelope_of<Zp>(name, F5, 4);
    auto Z = center(A);
    AssocAlgebra<Zp> B = A;
    B.generators.clear();
    for (Index i = 0; i < B.dim; ++i) B.generators.push_back(i);
    CHECK(Z == center(B));
  }
}

TEST_CASE("power ideal dims equal weight layer counts for envelope algebras") {
  Field<Rat> Q;
  auto A = envelope_of<Rat>("K6.3", Q, 4);
  auto p = power_ideals(A);
  REQUIRE(p.size() == 3);
  CHECK(p[0].dim() == 40);
  CHECK(p[1].dim() == 36);
  CHECK(p[2].dim() == 25);

  auto B = envelope_of<Rat>("K6.6", Q, 5);
  auto pb = power_ideals(B);
  REQUIRE(pb.size() == 4);
  CHECK(pb[0].dim() == 50);
  CHECK(pb[1].dim() == 47);
  CHECK(pb[2].dim() == 40);
  CHECK(pb[3].dim() == 26);

  auto ab = parse_lie<Rat>("field Q\ndim 1\n", Q);
  ab.set_weights({1});
  auto C = envelope_to_assoc(Envelope<Rat>(ab, 3));
  auto pc = power_ideals(C);
  REQUIRE(pc.size() == 2);
  CHECK(pc[0].dim() == 2);
  CHECK(pc[1].dim() == 1);

  // general agreement: power dims match basis weight layers
  for (const char* name : {"L5.7", "K6.24"}) {
    Field<Zp> F3(FieldSpec::prime_field(3));
    auto L = catalog_build<Zp>(name, F3,
                               name == std::string("K6.24")
                                   ? std::optional<Zp>(F3.from_long(1))
                                   : std::nullopt);
    Envelope<Zp> E(L, 5);
    auto P = power_ideals(envelope_to_assoc(E));
    for (std::size_t i = 0; i < P.size(); ++i) {
      Index expect = 0;
      for (int w = static_cast<int>(i) + 1; w < E.truncation(); ++w)
        expect += E.layer_dim(w);
      CHECK(P[i].dim() == expect);
    }
  }
}

TEST_CASE("non-nilpotent tables are rejected by power_ideals") {
  Field<Rat> Q;
  AssocAlgebra<Rat> unital;
  unital.F = Q;
  unital.dim = 1;
  Vec<Rat> e = unit_vector<Rat>(1, 0, Q);
  unital.table = {e};
  unital.generators = {0};
  CHECK(associativity_defect(unital) == std::nullopt);
  CHECK_THROWS_AS(power_ideals(unital), NotNilpotentError);
}

TEST_CASE("quotients: by zero, by the square, and escape checks") {
  Field<Rat> Q;
  auto A = envelope_of<Rat>("L5.3", Q, 4);
  auto q0 = quotient_algebra(A, Subspace<Rat>::zero(A.dim));
  CHECK(q0.algebra.dim == A.dim);
  for (Index i = 0; i < A.dim; ++i)
    for (Index j = 0; j < A.dim; ++j)
      CHECK(q0.algebra.product(i, j) == A.product(i, j));

  auto sq = power_ideals(A)[1];
  auto q1 = quotient_algebra(A, sq);
  CHECK(q1.algebra.dim == 3);
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 3; ++j)
      CHECK(is_zero_vec(q1.algebra.product(i, j)));

  // the span of a single degree-1 generator is no two-sided ideal here
  Mat<Rat> one_row = Mat<Rat>(unit_vector<Rat>(A.dim, 0, Q).transpose());
  CHECK_THROWS_AS(quotient_algebra(A, Subspace<Rat>::from_rows(one_row)),
                  NotAnIdealError);
}

TEST_CASE("fingerprints separate the dim-5 pair and the family (6) pair") {
  Field<Rat> Q;
  auto f3 = fingerprint(envelope_of<Rat>("L5.3", Q, 4));
  auto f5 = fingerprint(envelope_of<Rat>("L5.5", Q, 4));
  CHECK(!(f3 == f5));
  CHECK(f3.center_mod_powers[0] >= 1);   // x3 is central and outside the square
  CHECK(f5.center_mod_powers[0] == 0);   // the center sits inside the square
  CHECK(!Fingerprint::first_difference(f3, f5).empty());

  auto f9 = fingerprint(envelope_of<Rat>("K6.9", Q, 4));
  auto f24 = fingerprint(envelope_of<Rat>("K6.24", Q, 4, std::optional<Rat>(Q.from_long(1))));
  CHECK(!(f9 == f24));
  CHECK(f9.center_mod_powers[0] > 0);
  CHECK(f24.center_mod_powers[0] == 0);
}

TEST_CASE("fingerprints alone do not separate K6.6 from K6.7") {
  Field<Rat> Q;
  auto f6 = fingerprint(envelope_of<Rat>("K6.6", Q, 5));
  auto f7 = fingerprint(envelope_of<Rat>("K6.7", Q, 5));
  CHECK(f6.center_dim == 29);
  CHECK(f7.center_dim == 29);
  CHECK(f6 == f7);
}

TEST_CASE("fingerprint invariance under random changes of basis") {
  for (std::int64_t p : {2, 3, 5}) {
    Field<Zp> F(FieldSpec::prime_field(p));
    std::vector<AssocAlgebra<Zp>> pool;
    if (p != 2) {
      pool.push_back(envelope_of<Zp>("K6.9", F, 4));
      pool.push_back(envelope_of<Zp>("K6.24", F, 3, std::optional<Zp>(F.from_long(1))));
    }
    pool.push_back(envelope_of<Zp>("L5.3", F, 4));
    pool.push_back(envelope_of<Zp>("L4.3", F, 4));
    for (auto& A : pool) {
      if (A.dim > 20) continue;
      auto fp = fingerprint(A);
      for (int k = 0; k < 6; ++k) {
        Mat<Zp> P = testing::random_invertible<Zp>(A.dim, F);
        auto B = assoc_change_basis(A, P);
        CHECK(fingerprint(B) == fp);
      }
    }
  }
}

TEST_CASE("assoc file format round trip and associativity gate") {
  Field<Zp> F3(FieldSpec::prime_field(3));
  auto A = envelope_of<Zp>("L4.3", F3, 4);
  auto text = format_assoc(A);
  auto B = parse_assoc<Zp>(text, F3);
  REQUIRE(B.dim == A.dim);
  for (Index i = 0; i < A.dim; ++i)
    for (Index j = 0; j < A.dim; ++j)
      CHECK(B.product(i, j) == A.product(i, j));

  CHECK_THROWS_AS(parse_assoc<Zp>("assoc\nfield GF(3)\ndim 2\n"
                                  "e.1 * e.1 = 1*e.2\n"
                                  "e.1 * e.2 = 1*e.1\n",
                                  F3),
                  std::invalid_argument);
}

TEST_CASE("family (2) center dims over GF(7), with the computed K6.13 value pinned") {
  Field<Zp> F7(FieldSpec::prime_field(7));
  CHECK(center(envelope_of<Zp>("K6.6", F7, 5)).dim() == 29);
  CHECK(center(envelope_of<Zp>("K6.7", F7, 5)).dim() == 29);
  CHECK(center(envelope_of<Zp>("K6.11", F7, 5)).dim() == 28);
  CHECK(center(envelope_of<Zp>("K6.12", F7, 5)).dim() == 28);
  // regression pin: computed once, separates K6.13 from the rest of the family
  CHECK(center(envelope_of<Zp>("K6.13", F7, 5)).dim() == 27);
  Field<Rat> Q;
  CHECK(center(envelope_of<Rat>("K6.13", Q, 5)).dim() == 27);
}
