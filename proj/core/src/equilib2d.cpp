#include "eqrobust/equilib2d.hpp"

#include <algorithm>
#include <cmath>

#include "eqrobust/common.hpp"

namespace eqrobust::equilib2d {

using geom2d::cross;
using geom2d::dot;
using geom2d::norm;

namespace {

void require_interior(const ConvexPolygon2& poly, Point2 p) {
  if (!geom2d::contains_strictly(poly, p)) {
    throw GeometryError(ErrorCode::ReferenceOutside, "reference point is not interior");
  }
}

}  // namespace

bool EquilibriumSet2::any_degenerate() const {
  return std::any_of(points.begin(), points.end(), [](const auto& e) { return e.degenerate; });
}

std::vector<EquilibriumPoint2> stable_points(const ConvexPolygon2& poly, Point2 p) {
  require_interior(poly, p);
  const double tol = poly.eps();
  std::vector<EquilibriumPoint2> out;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point2 a = poly.vertex(i);
    const Point2 e = poly.edge_vector(i);
    const double len = norm(e);
    const double s = dot(p - a, e) / len;  // foot position along the edge
    if (s < -tol || s > len + tol) continue;
    const bool degenerate = s <= tol || s >= len - tol;
    out.push_back({Kind::stable, a + (s / len) * e, i, degenerate,
                   static_cast<double>(i) + std::clamp(s / len, 0.0, 1.0)});
  }
  return out;
}

std::vector<EquilibriumPoint2> unstable_points(const ConvexPolygon2& poly, Point2 p) {
  require_interior(poly, p);
  const double tol = poly.eps();
  const std::size_t n = poly.size();
  std::vector<EquilibriumPoint2> out;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 v = poly.vertex(i);
    const Point2 to_next = poly.edge_vector(i);
    const Point2 to_prev = poly.vertex(i + n - 1) - v;
    // Component of p - v along each outgoing edge direction; acute iff positive.
    const double c_next = dot(p - v, to_next) / norm(to_next);
    const double c_prev = dot(p - v, to_prev) / norm(to_prev);
    if (c_next < -tol || c_prev < -tol) continue;
    const bool degenerate = c_next <= tol || c_prev <= tol;
    out.push_back({Kind::unstable, v, i, degenerate, static_cast<double>(i)});
  }
  return out;
}

EquilibriumSet2 equilibria(const ConvexPolygon2& poly, Point2 p) {
  EquilibriumSet2 set;
  set.reference = p;
  set.points = stable_points(poly, p);
  auto unstable = unstable_points(poly, p);
  set.points.insert(set.points.end(), unstable.begin(), unstable.end());
  std::stable_sort(set.points.begin(), set.points.end(), [](const auto& a, const auto& b) {
    return a.boundary_param < b.boundary_param;
  });
  for (const auto& e : set.points) (e.kind == Kind::stable ? set.S : set.U) += 1;

  if (!set.any_degenerate()) {
    const std::size_t m = set.points.size();
    for (std::size_t i = 0; i < m; ++i) {
      if (set.points[i].kind == set.points[(i + 1) % m].kind) {
        throw GeometryError(ErrorCode::DegenerateConfiguration,
                            "stable and unstable points do not alternate");
      }
    }
  }
  return set;
}

}  // namespace eqrobust::equilib2d
