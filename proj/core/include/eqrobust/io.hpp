#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "eqrobust/geom2d.hpp"
#include "eqrobust/geom3d.hpp"
#include "eqrobust/robust2d.hpp"

namespace eqrobust::io {

/// {"vertices": [[x, y], ...]}. Throws ParseError on malformed text and the
/// polygon validation errors otherwise.
geom2d::ConvexPolygon2 parse_polygon_json(std::string_view text);
geom2d::ConvexPolygon2 read_polygon_json(const std::filesystem::path& path);
std::string polygon_to_json(const geom2d::ConvexPolygon2& poly);

/// OFF reader. The file's vertices are re-hulled and the result must use
/// every vertex and enclose the volume the listed faces describe (within
/// the geometric tolerance); otherwise NonConvexInput.
geom3d::ConvexPolyhedron3 parse_off(std::string_view text);
geom3d::ConvexPolyhedron3 read_off(const std::filesystem::path& path);
/// Coordinates with 17 significant digits.
std::string to_off(const geom3d::ConvexPolyhedron3& poly);

/// One row per classified piece.
std::string sweep_samples_csv(const robust2d::SweepResult& sweep);
/// Per bin: bounds, fraction of each observed ΔS value, degenerate fraction.
std::string sweep_summary_csv(const robust2d::SweepResult& sweep);
/// Stacked-area chart of the binned fractions (800 x 600).
std::string sweep_svg(const robust2d::SweepResult& sweep);

/// Reads a whole file; throws std::runtime_error when it cannot be opened.
std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace eqrobust::io
