#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "optigon/polygon_io.hpp"
#include "optigon/reporting.hpp"
#include "reference_table.hpp"

using namespace optigon;
namespace fs = std::filesystem;

namespace {

int count(const std::string& text, const std::string& needle) {
  int c = 0;
  for (size_t pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++c;
  return c;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  for (std::string cell; std::getline(ss, cell, sep);) out.push_back(cell);
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("optigon_test_" + name);
  fs::remove_all(d);
  return d;
}

const CcpResult& six() {
  static const CcpResult r = maximize_area(6);
  return r;
}

}  // namespace

TEST_CASE("literature bounds match the published table") {
  const auto lit = literature_bounds();
  CHECK(lit.size() == 38);
  for (const auto& row : kReferenceTable) {
    CAPTURE(row.n);
    const auto b = literature_lower_bound(row.n);
    if (row.lower_bound == 0.0) {
      CHECK_FALSE(b.has_value());
    } else {
      REQUIRE(b.has_value());
      CHECK(*b == row.lower_bound);
    }
  }
  CHECK_FALSE(literature_lower_bound(7).has_value());
}

TEST_CASE("svg draws boundary and chords") {
  const Polygond p = build_pendant_polygon(8);
  const std::string svg = render_svg(p, SvgOptions{.labels = true, .tol_diam = 1e-9});
  CHECK(count(svg, "class=\"boundary\"") == 8);
  CHECK(count(svg, "class=\"chord\"") == 8);
  CHECK(count(svg, "class=\"label\"") == 8);
  CHECK(count(svg, "stroke-dasharray") == 8);
  CHECK(svg.find("-0.000000") == std::string::npos);
  // apex (0, 1) is drawn at y = -1
  CHECK(svg.find("y2=\"-1.000000\"") != std::string::npos);
  CHECK(svg.rfind("<?xml", 0) == 0);

  const std::string plain = render_svg(build_regular_polygon(6));
  CHECK(count(plain, "class=\"chord\"") == 3);
  CHECK(count(plain, "class=\"label\"") == 0);
  CHECK(render_svg(p) == render_svg(p));
}

TEST_CASE("table csv round trips to ten decimals") {
  const SweepRow row = make_row(six());
  CHECK(row.structure_pass);
  CHECK(row.literature_lower_bound.has_value());
  const std::string csv = render_table_csv(std::vector<SweepRow>{row});
  std::stringstream ss(csv);
  std::string header, line;
  std::getline(ss, header);
  std::getline(ss, line);
  CHECK(header == "n,area_pendant,literature_lower_bound,upper_bound,area_computed,k,structure");
  const auto cells = split(line, ',');
  REQUIRE(cells.size() == 7);
  CHECK(std::stoi(cells[0]) == 6);
  CHECK(std::abs(std::stod(cells[1]) - row.area_pendant) <= 5e-11);
  CHECK(std::abs(std::stod(cells[2]) - *row.literature_lower_bound) <= 5e-11);
  CHECK(std::abs(std::stod(cells[3]) - row.upper_bound) <= 5e-11);
  CHECK(std::abs(std::stod(cells[4]) - row.area_computed) <= 5e-11);
  CHECK(std::stoi(cells[5]) == row.outer_iterations);
  CHECK(cells[6] == "pass");
  CHECK(cells[1] == "0.6722882584");
  CHECK(cells[3] == "0.6961524227");
}

TEST_CASE("text table") {
  SweepRow a = make_row(six());
  SweepRow b = a;
  b.n = 90;
  b.literature_lower_bound.reset();
  const std::string text = render_table_text(std::vector<SweepRow>{a, b});
  CHECK(text.find("A(R+_{n-1})") != std::string::npos);
  CHECK(text.find("0.6722882584") != std::string::npos);
  CHECK(text.find("0.6749814429") != std::string::npos);
  CHECK(text.find(" -- ") != std::string::npos);
  CHECK(count(text, "\n") == 4);
}

TEST_CASE("trace csv") {
  const std::string csv = trace_to_csv(*six().trace);
  CHECK(csv.rfind("k,area,rel_step,solver_iterations,max_residual\n", 0) == 0);
  CHECK(count(csv, "\n") == six().iterations + 2);
}

TEST_CASE("content hash") {
  CHECK(content_hash("") == "cbf29ce484222325");
  CHECK(content_hash("a") == "af63dc4c8601ec8c");
  CHECK(content_hash("foobar") == "85944171f73967e8");
}

TEST_CASE("export writes four deterministic files") {
  const fs::path d1 = fresh_dir("export1"), d2 = fresh_dir("export2");
  const ExportedFiles f1 = export_run(six(), d1);
  const ExportedFiles f2 = export_run(six(), d2);
  for (const fs::path* p : {&f1.polygon, &f1.trace, &f1.structure, &f1.svg}) CHECK(fs::exists(*p));
  CHECK(std::distance(fs::directory_iterator(d1), fs::directory_iterator{}) == 4);
  CHECK(f1.polygon.filename() == f2.polygon.filename());
  CHECK(f1.polygon.filename().string().rfind("ngon6-", 0) == 0);
  CHECK(slurp(f1.polygon) == slurp(f2.polygon));
  CHECK(slurp(f1.svg) == slurp(f2.svg));
  CHECK(slurp(f1.trace) == slurp(f2.trace));
  CHECK(slurp(f1.structure) == slurp(f2.structure));
  CHECK(read_polygon(f1.polygon) == six().polygon);
  CHECK(slurp(f1.structure).find("\"passed\": true") != std::string::npos);
  fs::remove_all(d1);
  fs::remove_all(d2);
}

TEST_CASE("sweep export") {
  const fs::path d = fresh_dir("sweep");
  const auto entries = run_sweep({6, 8}, {});
  const auto files = export_sweep(entries, d);
  CHECK(files.size() == 2);
  int n_files = 0;
  for (const auto& e : fs::recursive_directory_iterator(d)) n_files += e.is_regular_file();
  CHECK(n_files == 8);
  CHECK(fs::is_directory(d / "n6"));
  CHECK(fs::is_directory(d / "n8"));
  fs::remove_all(d);
}
