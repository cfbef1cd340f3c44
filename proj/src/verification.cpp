#include "optigon/verification.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace optigon {

std::vector<std::pair<int, int>> expected_unit_pairs(int n) {
  std::vector<std::pair<int, int>> pairs;
  if (n < 6 || n % 2 != 0) return pairs;
  const int h = n / 2;
  pairs.emplace_back(0, h - 1);
  pairs.emplace_back(0, h + 1);
  for (int i = 1; i <= h - 2; ++i) {
    pairs.emplace_back(i, i + h);
    pairs.emplace_back(i, i + h + 1);
  }
  pairs.emplace_back(h - 1, n - 1);
  return pairs;
}

void check_theorem2(const Polygond& p, double tol, StructureReport& report) {
  const DiameterGraph g = diameter_graph(p, tol);
  report.n = p.n();
  report.tol = tol;
  report.edge_count = static_cast<int>(g.edges.size());
  report.has_pendant_cycle = false;
  report.cycle_length = 0;
  report.pendant_vertex.reset();

  const int n = p.n();
  if (static_cast<int>(g.edges.size()) != n) return;
  const std::vector<int> deg = g.degrees();
  int pendant = -1, hub = -1;
  for (int v = 0; v < n; ++v) {
    const int d = deg[static_cast<size_t>(v)];
    if (d == 1) {
      if (pendant >= 0) return;
      pendant = v;
    } else if (d == 3) {
      if (hub >= 0) return;
      hub = v;
    } else if (d != 2) {
      return;
    }
  }
  if (pendant < 0 || hub < 0 || !g.has_edge(pendant, hub)) return;

  std::vector<std::vector<int>> adj(static_cast<size_t>(n));
  for (const auto& [a, b] : g.edges) {
    if (a == pendant || b == pendant) continue;
    adj[static_cast<size_t>(a)].push_back(b);
    adj[static_cast<size_t>(b)].push_back(a);
  }
  // Walk the cycle through the hub; every remaining vertex now has degree 2.
  int prev = hub, cur = adj[static_cast<size_t>(hub)].front(), length = 1;
  while (cur != hub && length <= n) {
    const auto& nb = adj[static_cast<size_t>(cur)];
    const int next = nb[0] == prev ? nb[1] : nb[0];
    prev = cur;
    cur = next;
    ++length;
  }
  if (cur != hub) return;
  report.cycle_length = length;
  report.pendant_vertex = pendant;
  report.has_pendant_cycle = length == n - 1;
}

void check_symmetry(const Polygond& p, double tol, StructureReport& report) {
  const int n = p.n();
  report.n = n;
  report.tol = tol;
  double defect = 0.0;
  for (int i = 1; i < n - i; ++i) {
    defect = std::max({defect, std::abs(p.x(n - i) + p.x(i)), std::abs(p.y(n - i) - p.y(i))});
  }
  report.symmetry_defect = defect;
  report.apex_defect = n % 2 == 0 ? std::max(std::abs(p.x(n / 2)), std::abs(p.y(n / 2) - 1.0)) : 0.0;
  report.symmetric = n % 2 == 0 && report.symmetry_defect <= tol && report.apex_defect <= tol;
  report.max_defect = std::max({report.max_defect, report.symmetry_defect, report.apex_defect});
}

void check_unit_equalities(const Polygond& p, double tol, StructureReport& report) {
  report.n = p.n();
  report.tol = tol;
  report.unit_edge_defects.clear();
  const auto pairs = expected_unit_pairs(p.n());
  bool ok = !pairs.empty();
  for (const auto& pr : pairs) {
    const double d = std::abs((p.vertex(pr.first) - p.vertex(pr.second)).norm() - 1.0);
    report.unit_edge_defects.push_back({pr, d});
    report.max_defect = std::max(report.max_defect, d);
    if (d > tol) ok = false;
  }
  report.unit_equalities = ok;
}

StructureReport verify_structure(const Polygond& p, double tol) {
  StructureReport r;
  check_theorem2(p, tol, r);
  check_symmetry(p, tol, r);
  check_unit_equalities(p, tol, r);
  return r;
}

std::string to_json(const StructureReport& r) {
  nlohmann::ordered_json j;
  j["n"] = r.n;
  j["tol"] = r.tol;
  j["passed"] = r.passed();
  j["has_pendant_cycle"] = r.has_pendant_cycle;
  j["cycle_length"] = r.cycle_length;
  j["pendant_vertex"] = r.pendant_vertex ? nlohmann::ordered_json(*r.pendant_vertex) : nlohmann::ordered_json();
  j["edge_count"] = r.edge_count;
  j["symmetric"] = r.symmetric;
  j["symmetry_defect"] = r.symmetry_defect;
  j["apex_defect"] = r.apex_defect;
  j["unit_equalities"] = r.unit_equalities;
  auto& defects = j["unit_edge_defects"] = nlohmann::ordered_json::array();
  for (const auto& d : r.unit_edge_defects) {
    defects.push_back({{"pair", {d.pair.first, d.pair.second}}, {"defect", d.defect}});
  }
  j["max_defect"] = r.max_defect;
  return j.dump(2) + "\n";
}

}  // namespace optigon
