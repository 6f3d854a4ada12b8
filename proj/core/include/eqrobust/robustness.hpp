#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <variant>

namespace eqrobust {

enum class RobustnessKind { internal, external, full_line_bound, partial_s, partial_u, partial_any };
enum class Method { exact, sampled, search };

std::string to_string(RobustnessKind kind);
std::string to_string(Method method);

/// Perpendicular to `edge` through `vertex` (2D internal robustness).
struct CausticWitness {
  std::size_t vertex = 0;
  std::size_t edge = 0;
  bool ray_only = false;
};

/// Sector between consecutive stable points (2D external robustness).
struct SectorWitness {
  std::size_t sector = 0;
  double radius = 0.0;
  bool wide = false;  // stable points subtend an angle of at least π
};

/// Cutting line {x : <(cos θ, sin θ), x> = offset}; side +1 keeps <= offset.
struct CutLineWitness {
  double theta = 0.0;
  double offset = 0.0;
  int side = 1;
  int piece_S = 0;
};

/// Wall through edge `edge` of face `face`, perpendicular to the face.
struct WallWitness {
  std::size_t face = 0;
  std::size_t edge = 0;
  bool ray_only = false;
};

/// Cutting plane {x : <normal, x> = offset}; side +1 keeps <= offset.
struct PlaneWitness {
  std::array<double, 3> normal{};
  double offset = 0.0;
  int side = 1;
  int piece_S = 0;
  int piece_U = 0;
};

/// Sampling direction that achieved the minimum.
struct DirectionWitness {
  std::array<double, 3> direction{};
};

using Witness = std::variant<std::monostate, CausticWitness, SectorWitness, CutLineWitness,
                             WallWitness, PlaneWitness, DirectionWitness>;

struct SearchProvenance {
  int grid_primary = 0;    // directions (θ values or plane normals)
  int grid_secondary = 0;  // offsets per direction
  double refine_tol = 0.0;
  std::size_t evaluated = 0;  // pieces classified
};

struct RobustnessReport {
  RobustnessKind kind = RobustnessKind::internal;
  /// Dimensionless; meaningless when `reduction_found` is false.
  double value = 0.0;
  Method method = Method::exact;
  Witness witness;
  /// Searches over restricted truncation families only bound the true value
  /// from above.
  bool upper_bound = false;
  bool reduction_found = true;
  std::optional<SearchProvenance> provenance;
};

using RobustnessReport2 = RobustnessReport;
using RobustnessReport3 = RobustnessReport;

}  // namespace eqrobust
