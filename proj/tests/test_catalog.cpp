#include <doctest.h>

#include <map>

#include "test_support.hpp"
#include "uea/catalog.hpp"
#include "uea/lie_io.hpp"

using namespace uea;

TEST_CASE("every bundled table validates and matches its declared class") {
  Field<Rat> Q;
  for (const auto& e : catalog_entries()) {
    if (!e.has_table) continue;
    for (auto param : {0L, 1L, 3L}) {
      if (!e.parametric && param != 0) continue;
      auto L = catalog_build<Rat>(
          e.name, Q,
          e.parametric ? std::optional<Rat>(Q.from_long(param)) : std::nullopt);
      CAPTURE(e.name);
      CHECK(validate(L).empty());
      auto lcs = lower_central_series(L);
      CHECK(lcs.clazz == e.clazz);
      CHECK(lcs.dims() == e.lcs_dims);
      if (!e.parametric) break;
    }
  }
}

TEST_CASE("declared sequence metadata for table-less dim-5 entries") {
  CHECK(catalog_info("L5.1").lcs_dims == std::vector<Index>{5});
  CHECK(catalog_info("L5.2").lcs_dims == std::vector<Index>{5, 1});
  CHECK(catalog_info("L5.4").lcs_dims == std::vector<Index>{5, 1});
  CHECK(catalog_info("L5.8").lcs_dims == std::vector<Index>{5, 2});
  CHECK(catalog_info("L5.9").lcs_dims == std::vector<Index>{5, 3, 2});
  for (const char* n : {"L5.1", "L5.2", "L5.4", "L5.8", "L5.9"}) {
    CHECK(!catalog_info(n).has_table);
    Field<Rat> Q;
    CHECK_THROWS_AS(catalog_build<Rat>(n, Q), CatalogError);
  }
}

TEST_CASE("catalog shape: counts per dimension") {
  std::map<int, int> by_dim;
  for (const auto& e : catalog_entries()) by_dim[e.dim]++;
  CHECK(by_dim[1] == 1);
  CHECK(by_dim[2] == 1);
  CHECK(by_dim[3] == 2);
  CHECK(by_dim[4] == 3);
  CHECK(by_dim[5] == 9);
  CHECK(by_dim[6] == 17);
}

TEST_CASE("K6.13 has the documented brackets") {
  Field<Rat> Q;
  auto L = catalog_build<Rat>("K6.13", Q);
  CHECK(L.bracket_basis(1, 2)(4) == Q.one());    // [x2,x3] = x5
  CHECK(L.bracket_basis(3, 2)(5) == Q.one());    // [x4,x3] = x6
}

TEST_CASE("parameter and characteristic guards") {
  Field<Rat> Q;
  Field<Zp> F2(FieldSpec::prime_field(2));
  Field<Zp> F5(FieldSpec::prime_field(5));
  CHECK_THROWS_AS(catalog_build<Rat>("K6.24", Q), CatalogError);           // missing param
  CHECK_THROWS_AS(catalog_build<Rat>("K6.3", Q, Q.from_long(1)), CatalogError);  // extra param
  CHECK_THROWS_AS(catalog_build<Zp>("K6.3", F2), CatalogError);            // char 2, dim 6
  CHECK_THROWS_AS(catalog_build<Rat>("K6.26", Q), CatalogError);           // unknown
  CHECK(validate(catalog_build<Zp>("K6.24", F5, F5.from_long(0))).empty());
  CHECK(validate(catalog_build<Zp>("L5.3", F2)).empty());  // dim 5 fine over GF(2)
}

TEST_CASE("catalog emission re-parses to the same algebra") {
  Field<Zp> F3(FieldSpec::prime_field(3));
  auto L = catalog_build<Zp>("K6.24", F3, F3.from_long(2));
  auto text = format_lie(L);
  auto L2 = parse_lie<Zp>(text, F3);
  CHECK(same_structure_constants(L, L2));
}
