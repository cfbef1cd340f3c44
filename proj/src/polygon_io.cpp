#include "optigon/polygon_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace optigon {

namespace {

std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

// Hand-rolled so the digit count is pinned; nlohmann picks the shortest
// round-trip representation instead.
std::string polygon_to_json(const Polygond& p) {
  std::string out = "{\"n\": " + std::to_string(p.n()) + ", \"vertices\": [";
  for (int i = 0; i < p.n(); ++i) {
    if (i) out += ", ";
    out += "[" + format17(p.x(i)) + ", " + format17(p.y(i)) + "]";
  }
  out += "]}\n";
  return out;
}

Polygond polygon_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  if (!j.is_object() || !j.contains("vertices") || !j["vertices"].is_array()) {
    throw Error(ErrorCode::ParseError, "expected an object with a \"vertices\" array");
  }
  const auto& verts = j["vertices"];
  Points2<double> v(2, static_cast<Eigen::Index>(verts.size()));
  for (size_t i = 0; i < verts.size(); ++i) {
    const auto& pt = verts[i];
    if (!pt.is_array() || pt.size() != 2 || !pt[0].is_number() || !pt[1].is_number()) {
      throw Error(ErrorCode::ParseError, "vertex " + std::to_string(i) + " is not an [x, y] pair");
    }
    v(0, static_cast<Eigen::Index>(i)) = pt[0].get<double>();
    v(1, static_cast<Eigen::Index>(i)) = pt[1].get<double>();
  }
  if (j.contains("n")) {
    if (!j["n"].is_number_integer() || j["n"].get<long>() != static_cast<long>(verts.size())) {
      throw Error(ErrorCode::DimensionMismatch, "\"n\" does not match the vertex count");
    }
  }
  return Polygond(std::move(v));
}

void write_polygon(const std::filesystem::path& path, const Polygond& p) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  out << polygon_to_json(p);
  if (!out) throw Error(ErrorCode::Io, "write failed: " + path.string());
}

Polygond read_polygon(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return polygon_from_json(ss.str());
}

}  // namespace optigon
