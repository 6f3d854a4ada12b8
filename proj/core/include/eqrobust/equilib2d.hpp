#pragma once

#include <cstddef>
#include <vector>

#include "eqrobust/geom2d.hpp"

namespace eqrobust::equilib2d {

using geom2d::ConvexPolygon2;
using geom2d::Point2;

enum class Kind { stable, unstable };

struct EquilibriumPoint2 {
  Kind kind = Kind::stable;
  Point2 location;
  /// Edge index for stable points, vertex index for unstable points.
  std::size_t carrier = 0;
  bool degenerate = false;
  /// Position along the boundary: vertex i sits at i, edge i spans (i, i+1).
  double boundary_param = 0.0;
};

struct EquilibriumSet2 {
  std::vector<EquilibriumPoint2> points;  // boundary order
  int S = 0;
  int U = 0;
  Point2 reference;

  bool any_degenerate() const;
};

/// One stable point per edge whose orthogonal foot from p lies in the
/// relative interior of the edge. Feet within tolerance of an endpoint are
/// kept and flagged degenerate. Throws ReferenceOutside unless p is strictly
/// inside.
std::vector<EquilibriumPoint2> stable_points(const ConvexPolygon2& poly, Point2 p);

/// One unstable point per vertex at which p - v makes acute angles with both
/// incident edges. Right angles within tolerance are flagged degenerate.
std::vector<EquilibriumPoint2> unstable_points(const ConvexPolygon2& poly, Point2 p);

/// Both kinds merged in boundary order. When nothing is degenerate the kinds
/// must alternate; a violation throws DegenerateConfiguration.
EquilibriumSet2 equilibria(const ConvexPolygon2& poly, Point2 p);

}  // namespace eqrobust::equilib2d
