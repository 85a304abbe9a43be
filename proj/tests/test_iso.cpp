#include <doctest.h>

#include "test_support.hpp"
#include "uea/catalog.hpp"
#include "uea/iso.hpp"
#include "uea/screen.hpp"

using namespace uea;

namespace {

/// x_a -> x_a + x_1^power for one source index, identity elsewhere.
template <class S>
GeneratorMap<S> power_certificate(const LieAlgebra<S>& L, const Envelope<S>& target,
                                  Index a, int power) {
  GeneratorMap<S> m = GeneratorMap<S>::identity(L, target);
  std::vector<Index> word(static_cast<std::size_t>(power), 0);
  Vec<S> shift = target.straighten(word);
  for (Index b = 0; b < target.dim(); ++b)
    m.images[static_cast<std::size_t>(a)](b) =
        m.images[static_cast<std::size_t>(a)](b) + shift(b);
  return m;
}

}  // namespace

TEST_CASE("characteristic-2 certificate: x3 -> x3 + x1^2 from L5.3 into L5.5") {
  Field<Zp> F2(FieldSpec::prime_field(2));
  auto L = catalog_build<Zp>("L5.3", F2);
  auto K = catalog_build<Zp>("L5.5", F2);
  for (int t : {4, 5, 6}) {
    Envelope<Zp> target(K, t);
    auto m = power_certificate(L, target, 2, 2);
    CHECK(!check_lie_hom(L, target, m).has_value());
    auto v = verify_certificate(L, K, t, m);
    CHECK(v.status == CertStatus::Isomorphic);
    CHECK(v.promoted);
    if (t == 4) CHECK(v.rank == 24);
  }
}

TEST_CASE("the same map fails over GF(3) and GF(5), first at pair (2,3)") {
  for (std::int64_t p : {3, 5}) {
    Field<Zp> F(FieldSpec::prime_field(p));
    auto L = catalog_build<Zp>("L5.3", F);
    auto K = catalog_build<Zp>("L5.5", F);
    Envelope<Zp> target(K, 4);
    auto m = power_certificate(L, target, 2, 2);
    auto bad = check_lie_hom(L, target, m);
    REQUIRE(bad.has_value());
    CHECK(bad->i == 1);
    CHECK(bad->j == 2);
    // residual of [x2, x3 + x1^2] is -2*x1*x4 + 2*x5
    Vec<Zp> want = zero_vector(target.dim(), F);
    want(target.index_of({0, 3})) = F.from_long(-2);
    want(target.index_of({4})) = F.from_long(2);
    CHECK(bad->residual == want);
    auto v = verify_certificate(L, K, 4, m);
    CHECK(v.status == CertStatus::RelationViolation);  // never a non-iso proof
  }
}

TEST_CASE("characteristic-2 certificate: x2 -> x2 + x1^2 from L5.7 into L5.6") {
  Field<Zp> F2(FieldSpec::prime_field(2));
  auto L = catalog_build<Zp>("L5.7", F2);
  auto K = catalog_build<Zp>("L5.6", F2);
  for (int t : {4, 5, 6}) {
    auto v = verify_certificate(L, K, t, power_certificate(L, Envelope<Zp>(K, t), 1, 2));
    CHECK(v.status == CertStatus::Isomorphic);
  }
}

TEST_CASE("characteristic-3 certificates with cube corrections") {
  Field<Zp> F3(FieldSpec::prime_field(3));
  auto check_pair = [&](const char* from, const char* to, Index gen, int t) {
    auto L = catalog_build<Zp>(from, F3);
    auto K = catalog_build<Zp>(to, F3);
    auto v = verify_certificate(L, K, t, power_certificate(L, Envelope<Zp>(K, t), gen, 3));
    CAPTURE(from);
    CAPTURE(to);
    CAPTURE(t);
    CHECK(v.status == CertStatus::Isomorphic);
    CHECK(v.promoted);
  };
  check_pair("K6.6", "K6.11", 2, 5);
  check_pair("K6.6", "K6.11", 2, 6);
  check_pair("K6.7", "K6.12", 2, 5);
  check_pair("K6.7", "K6.12", 2, 6);
  check_pair("K6.17", "K6.18", 1, 6);

  Field<Zp> F5(FieldSpec::prime_field(5));
  auto L = catalog_build<Zp>("K6.6", F5);
  auto K = catalog_build<Zp>("K6.11", F5);
  auto v = verify_certificate(L, K, 5, power_certificate(L, Envelope<Zp>(K, 5), 2, 3));
  CHECK(v.status == CertStatus::RelationViolation);
  auto L2 = catalog_build<Zp>("K6.17", F5);
  auto K2 = catalog_build<Zp>("K6.18", F5);
  auto v2 = verify_certificate(L2, K2, 6, power_certificate(L2, Envelope<Zp>(K2, 6), 1, 3));
  CHECK(v2.status == CertStatus::RelationViolation);
}

TEST_CASE("identity certificate and zero map") {
  Field<Zp> F5(FieldSpec::prime_field(5));
  auto L = catalog_build<Zp>("K6.23", F5);
  Envelope<Zp> E(L, 4);
  auto id = GeneratorMap<Zp>::identity(L, E);
  CHECK(verify_certificate(L, L, 4, id).status == CertStatus::Isomorphic);

  GeneratorMap<Zp> zero;
  for (Index i = 0; i < L.dim(); ++i)
    zero.images.push_back(zero_vector(E.dim(), F5));
  Envelope<Zp> src(L, 4);
  CHECK(!check_lie_hom(L, E, zero).has_value());  // the zero map is a Lie hom
  CHECK(rank(induced_matrix(src, E, zero)) == 0);
  CHECK(verify_certificate(L, L, 4, zero).status == CertStatus::NotBijective);
}

TEST_CASE("map files parse, default to identity, and round trip") {
  Field<Zp> F2(FieldSpec::prime_field(2));
  auto L = catalog_build<Zp>("L5.3", F2);
  auto K = catalog_build<Zp>("L5.5", F2);
  Envelope<Zp> target(K, 5);
  auto m = parse_map_file<Zp>("# certificate\ne.3 -> 1*e.3 + 1*e.1^2\n", L, target);
  CHECK(verify_certificate(L, K, 5, m).status == CertStatus::Isomorphic);
  auto m2 = parse_map_file<Zp>(format_map(m, target), L, target);
  for (std::size_t i = 0; i < m.images.size(); ++i) CHECK(m.images[i] == m2.images[i]);
  // unsorted words straighten on input: e.2*e.1 = e.1*e.2 - e.4 in L5.5
  auto m3 = parse_map_file<Zp>("e.3 -> e.2*e.1\n", L, target);
  Vec<Zp> expect = target.straighten({1, 0});
  CHECK(m3.images[2] == expect);
  CHECK_THROWS_AS(parse_map_file<Zp>("e.9 -> e.1\n", L, target), ParseError);
}

TEST_CASE("graded search: family (6) members and a dimension mismatch") {
  Field<Zp> F3(FieldSpec::prime_field(3));
  auto g24 = graded_algebra(catalog_build<Zp>("K6.24", F3, F3.from_long(1)));
  auto g9 = graded_algebra(catalog_build<Zp>("K6.9", F3));
  auto found = graded_iso_search(g24, g9);
  REQUIRE(found.has_value());

  auto g3 = graded_algebra(catalog_build<Zp>("L5.3", F3));
  auto g6 = graded_algebra(catalog_build<Zp>("L5.6", F3));
  CHECK(!graded_iso_search(g3, g6).has_value());

  auto self = graded_iso_search(g9, g9);
  REQUIRE(self.has_value());
}

TEST_CASE("filtered search: self-isomorphism lands immediately") {
  Field<Zp> F2(FieldSpec::prime_field(2));
  auto L = catalog_build<Zp>("L5.3", F2);
  auto v = filtered_iso_search(L, L, 4);
  CHECK(v.status == IsoStatus::Isomorphic);
  CHECK(v.evidence == "certificate");
}

TEST_CASE("filtered search finds the characteristic-3 coincidence K6.17/K6.18") {
  Field<Zp> F3(FieldSpec::prime_field(3));
  auto L = catalog_build<Zp>("K6.17", F3);
  auto K = catalog_build<Zp>("K6.18", F3);
  auto v = filtered_iso_search(L, K, 6);
  REQUIRE(v.status == IsoStatus::Isomorphic);
  CHECK(v.promoted);
  REQUIRE(v.certificate.has_value());
  // replay independently
  CHECK(verify_certificate(L, K, 6, *v.certificate).status == CertStatus::Isomorphic);
  // a graded isomorphism must also exist (the graded algebras coincide)
  auto gl = graded_algebra(L), gk = graded_algebra(K);
  CHECK(graded_iso_search(gl, gk).has_value());
}

TEST_CASE("filtered search refutes K6.9 vs K6.24(1) at t=4 over GF(5)") {
  Field<Zp> F5(FieldSpec::prime_field(5));
  auto L = catalog_build<Zp>("K6.9", F5);
  auto K = catalog_build<Zp>("K6.24", F5, F5.from_long(1));
  auto v = filtered_iso_search(L, K, 4);
  CHECK(v.status == IsoStatus::NotIsomorphic);
  CHECK(v.evidence == "exhausted-search");
}

TEST_CASE("found certificates respect the filtration images of the series terms") {
  Field<Zp> F3(FieldSpec::prime_field(3));
  auto L = catalog_build<Zp>("K6.17", F3);
  auto K = catalog_build<Zp>("K6.18", F3);
  int t = 6;
  auto v = filtered_iso_search(L, K, t);
  REQUIRE(v.status == IsoStatus::Isomorphic);
  Envelope<Zp> src(L, t), dst(K, t);
  Mat<Zp> phi = induced_matrix(src, dst, *v.certificate);
  auto lcs_l = lower_central_series(L);
  auto lcs_k = lower_central_series(K);
  for (std::size_t i = 1; i < lcs_l.terms.size(); ++i) {
    // subspace (L^i + higher-weight span) inside the truncated envelope
    auto embed = [&](const Envelope<Zp>& E, const Subspace<Zp>& lie_sub) {
      Mat<Zp> rows(lie_sub.dim() + (E.dim() - E.layer_begin(static_cast<int>(i) + 1)),
                   E.dim());
      Index r = 0;
      for (Index b = 0; b < lie_sub.dim(); ++b)
        rows.row(r++) = E.lie_element(lie_sub.basis().row(b).transpose()).transpose();
      for (Index b = E.layer_begin(static_cast<int>(i) + 1); b < E.dim(); ++b)
        rows.row(r++) = unit_vector(E.dim(), b, F3).transpose();
      return Subspace<Zp>::from_rows(rows);
    };
    auto src_sub = embed(src, lcs_l.terms[i]);
    auto dst_sub = embed(dst, lcs_k.terms[i]);
    Mat<Zp> mapped(src_sub.dim(), dst.dim());
    for (Index b = 0; b < src_sub.dim(); ++b)
      mapped.row(b) = Vec<Zp>(phi * src_sub.basis().row(b).transpose()).transpose();
    CHECK(Subspace<Zp>::from_rows(mapped) == dst_sub);
  }
}

TEST_CASE("corrections of top weight never disturb a certificate") {
  Field<Zp> F3(FieldSpec::prime_field(3));
  auto L = catalog_build<Zp>("K6.7", F3);
  Envelope<Zp> E(L, 5);
  auto m = GeneratorMap<Zp>::identity(L, E);
  std::uniform_int_distribution<Index> pick(E.layer_begin(4), E.dim() - 1);
  for (int k = 0; k < 30; ++k) {
    auto m2 = m;
    m2.images[0](pick(testing::rng())) += F3.from_long(1 + k % 2);
    m2.images[1](pick(testing::rng())) += F3.from_long(2);
    CHECK(!check_lie_hom(L, E, m2).has_value());
    CHECK(verify_certificate(L, L, 5, m2).status == CertStatus::Isomorphic);
  }
}

TEST_CASE("central corrections to generator images never disturb residuals") {
  Field<Zp> F5(FieldSpec::prime_field(5));
  auto L = catalog_build<Zp>("K6.7", F5);
  Envelope<Zp> E(L, 5);
  // x3 is central in K6.7, so x3^2 (weight 2) is a central correction
  auto m = GeneratorMap<Zp>::identity(L, E);
  m.images[1](E.index_of({2, 2})) += F5.one();
  CHECK(!check_lie_hom(L, E, m).has_value());
  CHECK(verify_certificate(L, L, 5, m).status == CertStatus::Isomorphic);
}

TEST_CASE("Lie-level search: the K6.24 parameter square law over GF(5)") {
  Field<Zp> F5(FieldSpec::prime_field(5));
  auto k1 = catalog_build<Zp>("K6.24", F5, F5.from_long(1));
  auto k4 = catalog_build<Zp>("K6.24", F5, F5.from_long(4));
  auto k2 = catalog_build<Zp>("K6.24", F5, F5.from_long(2));
  CHECK(lie_iso_search(k1, k4).has_value());   // 4 = 2^2 is a square
  CHECK(!lie_iso_search(k1, k2).has_value());  // 2 is not a square mod 5
  CHECK(lie_iso_search(k1, k1).has_value());
}

TEST_CASE("search agrees with invariant separations on families (1), (6), and the dim-5 pair") {
  Field<Zp> F5(FieldSpec::prime_field(5));
  auto refute = [&](const char* a, const char* b, int t) {
    auto v = filtered_iso_search(catalog_build<Zp>(a, F5), catalog_build<Zp>(b, F5), t);
    CAPTURE(a);
    CAPTURE(b);
    CHECK(v.status == IsoStatus::NotIsomorphic);
    CHECK(v.evidence == "exhausted-search");
  };
  refute("K6.3", "K6.5", 4);
  refute("K6.3", "K6.10", 4);
  refute("K6.5", "K6.10", 4);
  refute("L5.3", "L5.5", 4);
}

TEST_CASE("parameter zero belongs to its own equivalence class") {
  Field<Zp> F5(FieldSpec::prime_field(5));
  auto k0 = catalog_build<Zp>("K6.24", F5, F5.from_long(0));
  auto k1 = catalog_build<Zp>("K6.24", F5, F5.from_long(1));
  CHECK(!lie_iso_search(k0, k1).has_value());
  CHECK(lie_iso_search(k0, k0).has_value());
}

TEST_CASE("filtered search agrees with a random change of basis of the same algebra") {
  Field<Zp> F3(FieldSpec::prime_field(3));
  auto L = catalog_build<Zp>("L5.6", F3);
  Mat<Zp> P = testing::random_invertible<Zp>(5, F3);
  auto Lp = homogeneous_basis(change_basis(L, P)).algebra;
  auto v = filtered_iso_search(L, Lp, 5);
  CHECK(v.status == IsoStatus::Isomorphic);
}

TEST_CASE("K6.24 square law holds in full over GF(3)") {
  Field<Zp> F3(FieldSpec::prime_field(3));
  // squares mod 3: {1}; so eps pairs are equivalent iff their ratio is 1
  for (long e1 = 1; e1 <= 2; ++e1)
    for (long e2 = 1; e2 <= 2; ++e2) {
      auto a = catalog_build<Zp>("K6.24", F3, F3.from_long(e1));
      auto b = catalog_build<Zp>("K6.24", F3, F3.from_long(e2));
      bool expect = (e1 == e2);  // 2/1 = 2 is not a square mod 3
      CAPTURE(e1);
      CAPTURE(e2);
      CHECK(lie_iso_search(a, b).has_value() == expect);
    }
}

TEST_CASE("dim-5 verdict tables over GF(2) and GF(5)") {
  Field<Zp> F2(FieldSpec::prime_field(2));
  auto t2 = enveloping_iso_table<Zp>(5, F2);
  REQUIRE(t2.exceptional.size() == 2);
  CHECK(t2.exceptional[0] == "L5.3 ~ L5.5 (t=4)");
  CHECK(t2.exceptional[1] == "L5.6 ~ L5.7 (t=5)");
  CHECK(t2.flags.empty());

  Field<Zp> F5(FieldSpec::prime_field(5));
  auto t5 = enveloping_iso_table<Zp>(5, F5);
  CHECK(t5.exceptional.empty());
  CHECK(t5.flags.empty());
}

TEST_CASE("assoc-target search round trips an envelope and refutes a mismatch") {
  Field<Zp> F3(FieldSpec::prime_field(3));
  auto L = catalog_build<Zp>("L5.3", F3);
  auto A = envelope_to_assoc(Envelope<Zp>(L, 4));
  auto v = filtered_iso_search_assoc(L, A);
  CHECK(v.status == IsoStatus::Isomorphic);

  auto wrong = filtered_iso_search_assoc(catalog_build<Zp>("L5.5", F3), A);
  CHECK(wrong.status == IsoStatus::NotIsomorphic);

  // and against a scrambled presentation of the same algebra
  Mat<Zp> P = testing::random_invertible<Zp>(A.dim, F3);
  auto v2 = filtered_iso_search_assoc(L, assoc_change_basis(A, P));
  CHECK(v2.status == IsoStatus::Isomorphic);
}

TEST_CASE("Lie-level search transports certificates through odd input bases") {
  Field<Zp> F5(FieldSpec::prime_field(5));
  auto K = catalog_build<Zp>("K6.23", F5);
  Mat<Zp> P = testing::random_invertible<Zp>(6, F5);
  auto Kp = change_basis(K, P);
  Kp.set_weights({});  // forget the homogeneous structure entirely
  auto found = lie_iso_search(K, Kp);
  REQUIRE(found.has_value());  // replay happens inside; a bad transport throws
  auto none = lie_iso_search(catalog_build<Zp>("K6.25", F5), Kp);
  CHECK(!none.has_value());
}

TEST_CASE("searches at levels beyond class+1 still decide correctly") {
  Field<Zp> F2(FieldSpec::prime_field(2));
  auto v = filtered_iso_search(catalog_build<Zp>("L5.3", F2),
                               catalog_build<Zp>("L5.5", F2), 6);
  REQUIRE(v.status == IsoStatus::Isomorphic);
  CHECK(verify_certificate(catalog_build<Zp>("L5.3", F2),
                           catalog_build<Zp>("L5.5", F2), 6, *v.certificate)
            .status == CertStatus::Isomorphic);
}

TEST_CASE("worker count never changes the verdict or the certificate") {
  Field<Zp> F5(FieldSpec::prime_field(5));
  Field<Zp> F3(FieldSpec::prime_field(3));
  LiftOptions par;
  par.jobs = 4;
  {
    auto k1 = catalog_build<Zp>("K6.24", F5, F5.from_long(1));
    auto k4 = catalog_build<Zp>("K6.24", F5, F5.from_long(4));
    auto a = filtered_iso_search(k1, k4, 4);
    auto b = filtered_iso_search(k1, k4, 4, par);
    REQUIRE(a.status == IsoStatus::Isomorphic);
    REQUIRE(b.status == IsoStatus::Isomorphic);
    for (std::size_t i = 0; i < a.certificate->images.size(); ++i)
      CHECK(a.certificate->images[i] == b.certificate->images[i]);
  }
  {
    auto x = catalog_build<Zp>("K6.23", F3);
    auto y = catalog_build<Zp>("K6.25", F3);
    auto a = filtered_iso_search(x, y, 4);
    auto b = filtered_iso_search(x, y, 4, par);
    CHECK(a.status == b.status);
    CHECK(a.nodes == b.nodes);
  }
}

TEST_CASE("an exhausted budget yields Inconclusive, never a verdict") {
  Field<Zp> F5(FieldSpec::prime_field(5));
  LiftOptions tiny;
  tiny.node_budget = 10;
  auto v = filtered_iso_search(catalog_build<Zp>("K6.6", F5),
                               catalog_build<Zp>("K6.7", F5), 5, tiny);
  CHECK(v.status == IsoStatus::Inconclusive);
  CHECK(v.evidence == "budget");
}
