#include <doctest.h>

#include "test_support.hpp"
#include "uea/linalg.hpp"

using namespace uea;

namespace {

template <class S>
Mat<S> from_ints(const Field<S>& F, std::initializer_list<std::initializer_list<int>> rows) {
  Mat<S> m(static_cast<Index>(rows.size()),
           static_cast<Index>(rows.begin()->size()));
  Index i = 0;
  for (auto& row : rows) {
    Index j = 0;
    for (int v : row) m(i, j++) = F.from_long(v);
    ++i;
  }
  return m;
}

}  // namespace

TEST_CASE("rref basics") {
  Field<Rat> Q;
  auto id = identity_matrix<Rat>(3, Q);
  auto rr = rref(id);
  CHECK(rr.rank == 3);
  CHECK(rr.reduced == id);

  auto z = zero_matrix<Rat>(2, 4, Q);
  CHECK(rref(z).rank == 0);
}

TEST_CASE("rref over GF(2): dependent rows detected") {
  Field<Zp> F2(FieldSpec::prime_field(2));
  auto m = from_ints(F2, {{1, 1, 0}, {0, 1, 1}, {1, 0, 1}});
  auto rr = rref(m);
  CHECK(rr.rank == 2);  // row3 = row1 + row2

  // brute-force span oracle: all 4 combinations of the first two rows
  Subspace<Zp> sp = Subspace<Zp>::from_rows(m);
  int members = 0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      Vec<Zp> v(3);
      for (Index j = 0; j < 3; ++j)
        v(j) = F2.from_long(a) * m(0, j) + F2.from_long(b) * m(1, j);
      if (sp.contains(v)) ++members;
    }
  CHECK(members == 4);
}

TEST_CASE("row space of rref reduces to zero against itself; rank = rank of transpose") {
  Field<Zp> F5(FieldSpec::prime_field(5));
  for (int k = 0; k < 40; ++k) {
    Mat<Zp> m = testing::random_matrix<Zp>(6, 6, F5);
    auto rr = rref(m);
    Subspace<Zp> sp(6, rr.reduced.topRows(rr.rank));
    for (Index i = 0; i < m.rows(); ++i)
      CHECK(sp.contains(Vec<Zp>(m.row(i).transpose())));
    Mat<Zp> mt = m.transpose();
    CHECK(rr.rank == rref(mt).rank);
  }
}

TEST_CASE("solve_affine: direct cases") {
  Field<Rat> Q;
  auto id = identity_matrix<Rat>(3, Q);
  Vec<Rat> b(3);
  b << Rat(4), Rat(-1), Rat(BigInt(1), BigInt(2));
  auto sol = solve_affine(id, b, Q);
  REQUIRE(sol.has_value());
  CHECK(sol->particular == b);
  CHECK(sol->kernel.dim() == 0);

  auto z = zero_matrix<Rat>(2, 3, Q);
  auto sol2 = solve_affine(z, zero_vector<Rat>(2, Q), Q);
  REQUIRE(sol2.has_value());
  CHECK(sol2->kernel.dim() == 3);

  Vec<Rat> b3(2);
  b3 << Rat(1), Rat(0);
  CHECK(!solve_affine(z, b3, Q).has_value());
}

TEST_CASE("solve_affine over GF(3) matches the enumeration oracle") {
  Field<Zp> F3(FieldSpec::prime_field(3));
  // x + y = 1, x + 2y = 0 has the unique solution (2, 2)
  auto A = from_ints(F3, {{1, 1}, {1, 2}});
  Vec<Zp> b(2);
  b << F3.from_long(1), F3.from_long(0);
  auto sol = solve_affine(A, b, F3);
  REQUIRE(sol.has_value());
  CHECK(sol->particular(0) == F3.from_long(2));
  CHECK(sol->particular(1) == F3.from_long(2));
  CHECK(sol->kernel.dim() == 0);
  int oracle_count = 0;
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y)
      if ((x + y) % 3 == 1 && (x + 2 * y) % 3 == 0) ++oracle_count;
  CHECK(oracle_count == 1);
}

TEST_CASE("solve_affine feasibility agrees with brute force on random small systems") {
  for (std::int64_t p : {2, 3}) {
    Field<Zp> F(FieldSpec::prime_field(p));
    for (int trial = 0; trial < 60; ++trial) {
      Index unknowns = 1 + static_cast<Index>(trial % 4);
      Index eqs = 1 + static_cast<Index>((trial / 4) % 4);
      Mat<Zp> A = testing::random_matrix<Zp>(eqs, unknowns, F);
      Vec<Zp> b(eqs);
      for (Index i = 0; i < eqs; ++i) b(i) = testing::random_scalar<Zp>(F);
      auto sol = solve_affine(A, b, F);

      long long total = 1;
      for (Index i = 0; i < unknowns; ++i) total *= p;
      long long solutions = 0;
      for (long long code = 0; code < total; ++code) {
        long long c = code;
        Vec<Zp> x(unknowns);
        for (Index i = 0; i < unknowns; ++i) {
          x(i) = F.from_long(c % p);
          c /= p;
        }
        Vec<Zp> Ax = A * x;
        bool ok = true;
        for (Index i = 0; i < eqs; ++i)
          if (Ax(i) != b(i)) ok = false;
        if (ok) ++solutions;
      }
      CHECK(sol.has_value() == (solutions > 0));
      if (sol) {
        long long kernel_size = 1;
        for (Index i = 0; i < sol->kernel.dim(); ++i) kernel_size *= p;
        CHECK(solutions == kernel_size);
        CHECK(is_zero_vec(Vec<Zp>(A * sol->particular - b)));
      }
    }
  }
}

TEST_CASE("subspace sum, intersection, complement") {
  Field<Zp> F5(FieldSpec::prime_field(5));
  auto u = Subspace<Zp>::from_rows(from_ints(F5, {{1, 0, 0, 1}, {0, 1, 0, 0}}));
  auto w = Subspace<Zp>::from_rows(from_ints(F5, {{1, 0, 0, 1}, {0, 0, 1, 2}}));
  auto s = span_sum(u, w);
  auto i = span_intersect(u, w, F5);
  CHECK(s.dim() == 3);
  CHECK(i.dim() == 1);
  CHECK(i.contains(Vec<Zp>(from_ints(F5, {{1, 0, 0, 1}}).row(0).transpose())));
  CHECK(s.dim() + i.dim() == u.dim() + w.dim());

  auto comp = echelon_complement(u, s);
  CHECK(comp.rows() == 1);
  Mat<Zp> joined(u.dim() + comp.rows(), 4);
  joined.topRows(u.dim()) = u.basis();
  joined.bottomRows(comp.rows()) = comp;
  CHECK(Subspace<Zp>::from_rows(joined) == s);
}

TEST_CASE("inverse_matrix round trip") {
  Field<Rat> Q;
  for (int k = 0; k < 10; ++k) {
    Mat<Rat> m = testing::random_invertible<Rat>(4, Q);
    auto inv = inverse_matrix(m, Q);
    REQUIRE(inv.has_value());
    CHECK(Mat<Rat>(m * *inv) == identity_matrix<Rat>(4, Q));
  }
  CHECK(!inverse_matrix(zero_matrix<Rat>(2, 2, Q), Q).has_value());
}
