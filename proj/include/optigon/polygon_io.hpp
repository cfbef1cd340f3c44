#pragma once

#include <filesystem>
#include <string>

#include "optigon/geometry.hpp"

namespace optigon {

// {"n": int, "vertices": [[x, y], ...]} with 17 significant digits.
std::string polygon_to_json(const Polygond& p);
Polygond polygon_from_json(const std::string& text);

void write_polygon(const std::filesystem::path& path, const Polygond& p);
Polygond read_polygon(const std::filesystem::path& path);

}  // namespace optigon
