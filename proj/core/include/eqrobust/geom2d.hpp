#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace eqrobust::geom2d {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
  friend constexpr Point2 operator*(Point2 a, double s) { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Point2, Point2) = default;
};

constexpr double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }
/// Counterclockwise quarter turn.
constexpr Point2 perp(Point2 a) { return {-a.y, a.x}; }

/// Oriented line through `origin` with unit `direction`. The left side
/// (cross(direction, x - origin) > 0) is the "+1" side for clipping.
struct Line2 {
  Point2 origin;
  Point2 direction;

  static Line2 through(Point2 a, Point2 b);
  /// The line {x : <(cos θ, sin θ), x> = offset}. Its +1 side is
  /// <(cos θ, sin θ), x> <= offset.
  static Line2 from_normal(double theta, double offset);
};

struct Ray2 {
  Point2 origin;
  Point2 direction;
};

double dist_point_to_line(Point2 p, const Line2& line);
double dist_point_to_ray(Point2 p, const Ray2& ray);

/// Strictly convex polygon with counterclockwise vertices, starting at the
/// lowest (then leftmost) vertex. Construction rejects anything else.
class ConvexPolygon2 {
 public:
  /// Validates and canonicalizes. Clockwise input is reversed; repeated
  /// points and vertices that are collinear with their neighbours (within
  /// the geometric tolerance) are dropped.
  static ConvexPolygon2 from_points(std::span<const Point2> points);

  std::span<const Point2> vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  /// Cyclic access.
  Point2 vertex(std::size_t i) const { return vertices_[i % vertices_.size()]; }
  Point2 edge_vector(std::size_t i) const { return vertex(i + 1) - vertex(i); }

  /// Diagonal of the axis-aligned bounding box.
  double scale() const { return scale_; }
  /// Absolute on-boundary tolerance for this polygon.
  double eps() const;

 private:
  explicit ConvexPolygon2(std::vector<Point2> v);

  std::vector<Point2> vertices_;
  double scale_ = 0.0;
};

inline ConvexPolygon2 polygon_new(std::span<const Point2> points) {
  return ConvexPolygon2::from_points(points);
}

double area(const ConvexPolygon2& poly);
double perimeter(const ConvexPolygon2& poly);
/// Centroid of the uniform lamina.
Point2 centroid(const ConvexPolygon2& poly);

/// Signed distance from q to the boundary, positive inside.
double inner_distance(const ConvexPolygon2& poly, Point2 q);
/// True when q is inside by more than the polygon's tolerance.
bool contains_strictly(const ConvexPolygon2& poly, Point2 q);

/// min and max of <direction, v> over the vertices.
std::pair<double, double> support_interval(const ConvexPolygon2& poly, Point2 direction);

enum class NgonScale { unit_perimeter, circumradius };

/// Regular S-gon with vertices at angles 2πk/S about `center`. With
/// `circumradius` the `size` argument is the circumradius; with
/// `unit_perimeter` it is ignored.
ConvexPolygon2 regular_ngon(int sides, NgonScale scale, double size = 1.0, Point2 center = {});

/// Intersection with the closed half-plane on `keep_side` (+1 left, -1 right)
/// of the line. Zero-area results collapse to nullopt.
std::optional<ConvexPolygon2> clip_halfplane(const ConvexPolygon2& poly, const Line2& line,
                                             int keep_side);

/// Exact area of the polygon inside the disk of radius r about `center`.
double area_inside_disk(const ConvexPolygon2& poly, Point2 center, double r);
/// Exact area of {z in poly : |z - center| > r}.
double area_outside_disk(const ConvexPolygon2& poly, Point2 center, double r);

/// Largest radius of a disk about q that fits between some pair of parallel
/// lines through a and b respectively.
double segment_strip_radius(Point2 a, Point2 b, Point2 q);
/// Whether q + rho*B admits a strip cover by the sides of the polygon.
bool strip_cover_admits(const ConvexPolygon2& poly, Point2 q, double rho);

/// Counterclockwise hull (Andrew's monotone chain); collinear points dropped.
std::vector<Point2> convex_hull(std::vector<Point2> points);

/// Hausdorff distance between two convex polygons (as solid bodies).
double hausdorff_distance(const ConvexPolygon2& a, const ConvexPolygon2& b);

/// Hausdorff distance from `poly` to the closest regular S-gon centred at
/// `center` (circumradius and phase fitted to the vertices). Infinite when
/// the vertex count differs from `sides`.
double distance_to_regular(const ConvexPolygon2& poly, Point2 center, int sides);

/// Random convex polygon with exactly `n` vertices: sorted random angles on
/// the unit circle followed by a random affine stretch.
ConvexPolygon2 random_convex_polygon(std::mt19937_64& rng, int n);

}  // namespace eqrobust::geom2d
