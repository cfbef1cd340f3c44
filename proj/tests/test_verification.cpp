#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include <json.hpp>

#include "optigon/ccp.hpp"
#include "optigon/verification.hpp"

using namespace optigon;

TEST_CASE("expected unit pairs") {
  const auto p6 = expected_unit_pairs(6);
  const std::set<std::pair<int, int>> want6 = {{0, 2}, {0, 4}, {1, 4}, {1, 5}, {2, 5}};
  CHECK(std::set<std::pair<int, int>>(p6.begin(), p6.end()) == want6);
  for (int n = 6; n <= 40; n += 2) {
    const auto p = expected_unit_pairs(n);
    CHECK(p.size() == static_cast<size_t>(n - 1));
    // Adding the pendant edge {0, n/2} gives the hub 0 degree 3 and n/2 degree 1.
    std::vector<int> deg(static_cast<size_t>(n), 0);
    for (const auto& [a, b] : p) {
      ++deg[static_cast<size_t>(a)];
      ++deg[static_cast<size_t>(b)];
    }
    ++deg[0];
    ++deg[static_cast<size_t>(n / 2)];
    for (int v = 0; v < n; ++v) CHECK(deg[static_cast<size_t>(v)] == (v == 0 ? 3 : v == n / 2 ? 1 : 2));
  }
  CHECK(expected_unit_pairs(7).empty());
}

TEST_CASE("pendant polygon has the optimal structure") {
  for (int n = 6; n <= 32; n += 2) {
    CAPTURE(n);
    const StructureReport r = verify_structure(build_pendant_polygon(n), 1e-9);
    CHECK(r.has_pendant_cycle);
    CHECK(r.cycle_length == n - 1);
    REQUIRE(r.pendant_vertex.has_value());
    CHECK(*r.pendant_vertex == n / 2);
    CHECK(r.symmetric);
    CHECK(r.unit_equalities);
    CHECK(r.passed());
  }
}

TEST_CASE("regular even polygons fail") {
  for (int n : {6, 8}) {
    CAPTURE(n);
    const StructureReport r = verify_structure(build_regular_polygon(n), 1e-6);
    CHECK_FALSE(r.has_pendant_cycle);
    CHECK(r.edge_count == n / 2);
    CHECK_FALSE(r.unit_equalities);
    CHECK_FALSE(r.passed());
  }
}

TEST_CASE("symmetry defect is measured") {
  Points2<double> v = build_pendant_polygon(8).vertices();
  v(0, 2) += 3e-5;
  StructureReport r;
  check_symmetry(Polygond(v), 1e-6, r);
  CHECK(std::abs(r.symmetry_defect - 3e-5) < 1e-12);
  CHECK_FALSE(r.symmetric);
  check_symmetry(Polygond(v), 1e-4, r);
  CHECK(r.symmetric);
}

TEST_CASE("U8 from four-decimal coordinates") {
  Points2<double> v(2, 8);
  v << 0, 0.4091, 0.5000, 0.2621, 0, -0.2621, -0.5000, -0.4091,  //
      0, 0.2238, 0.6404, 0.9650, 1, 0.9650, 0.6404, 0.2238;
  const Polygond u8(v);
  StructureReport r;
  check_unit_equalities(u8, 1e-4, r);
  CHECK(r.unit_equalities);
  check_symmetry(u8, 1e-4, r);
  CHECK(r.symmetric);
  // Rounding to four decimals leaves defects above 5e-5.
  check_unit_equalities(u8, 5e-5, r);
  CHECK_FALSE(r.unit_equalities);
}

TEST_CASE("computed optima pass at the final tolerance") {
  for (int n : {6, 8}) {
    CAPTURE(n);
    const CcpResult res = maximize_area(n);
    REQUIRE(res.status == CcpStatus::Converged);
    const StructureReport r = verify_structure(res.polygon, kFinalVerifyTol);
    CHECK(r.passed());
    CHECK(r.max_defect < kFinalVerifyTol);
  }
}

TEST_CASE("oversized polygon throws") {
  const Polygond big(1.01 * build_pendant_polygon(6).vertices());
  try {
    verify_structure(big, 1e-6);
    FAIL("expected DiameterExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DiameterExceeded);
  }
}

TEST_CASE("json report") {
  const StructureReport r = verify_structure(build_pendant_polygon(6), 1e-9);
  const auto j = nlohmann::json::parse(to_json(r));
  CHECK(j["passed"] == true);
  CHECK(j["n"] == 6);
  CHECK(j["pendant_vertex"] == 3);
  CHECK(j["unit_edge_defects"].size() == 5);
  const StructureReport bad = verify_structure(build_regular_polygon(6), 1e-6);
  CHECK(nlohmann::json::parse(to_json(bad))["pendant_vertex"].is_null());
}
