#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace eqrobust::geom3d {

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend constexpr Point3 operator+(Point3 a, Point3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend constexpr Point3 operator-(Point3 a, Point3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend constexpr Point3 operator*(double s, Point3 a) { return {s * a.x, s * a.y, s * a.z}; }
  friend constexpr Point3 operator*(Point3 a, double s) { return {s * a.x, s * a.y, s * a.z}; }
  friend constexpr bool operator==(Point3, Point3) = default;
};

constexpr double dot(Point3 a, Point3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Point3 cross(Point3 a, Point3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(Point3 a) { return std::sqrt(dot(a, a)); }
inline double distance(Point3 a, Point3 b) { return norm(a - b); }
inline Point3 normalized(Point3 a) { return (1.0 / norm(a)) * a; }

/// Plane {x : <normal, x> = offset} with unit normal. Side +1 is
/// <normal, x> <= offset.
struct Plane3 {
  Point3 normal;
  double offset = 0.0;

  double signed_distance(Point3 p) const { return dot(normal, p) - offset; }
};

struct Edge {
  std::size_t v0 = 0, v1 = 0;
  /// Face containing the directed edge v0 -> v1, and the one containing v1 -> v0.
  std::size_t left_face = 0, right_face = 0;
};

/// Convex polyhedron as a vertex list and counterclockwise (seen from
/// outside) face cycles. Faces are maximal: coplanar neighbours are merged
/// and no vertex lies in the relative interior of an edge.
class ConvexPolyhedron3 {
 public:
  /// Validates a vertex/face description (polyhedron_new). Faces listed
  /// clockwise are reversed.
  static ConvexPolyhedron3 from_faces(std::vector<Point3> vertices,
                                      std::vector<std::vector<std::size_t>> faces);

  std::span<const Point3> vertices() const { return vertices_; }
  const std::vector<std::vector<std::size_t>>& faces() const { return faces_; }
  std::span<const Edge> edges() const { return edges_; }
  std::span<const Plane3> face_planes() const { return planes_; }
  /// Neighbouring vertices of each vertex.
  const std::vector<std::vector<std::size_t>>& vertex_neighbors() const { return neighbors_; }
  /// Edge indices bounding each face, in face-cycle order: the k-th entry is
  /// the edge from faces()[f][k] to faces()[f][k+1].
  const std::vector<std::vector<std::size_t>>& face_edges() const { return face_edges_; }

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  std::size_t num_faces() const { return faces_.size(); }

  double scale() const { return scale_; }
  double eps() const;

 private:
  ConvexPolyhedron3() = default;

  std::vector<Point3> vertices_;
  std::vector<std::vector<std::size_t>> faces_;
  std::vector<Edge> edges_;
  std::vector<Plane3> planes_;
  std::vector<std::vector<std::size_t>> neighbors_;
  std::vector<std::vector<std::size_t>> face_edges_;
  double scale_ = 0.0;
};

inline ConvexPolyhedron3 polyhedron_new(std::vector<Point3> vertices,
                                        std::vector<std::vector<std::size_t>> faces) {
  return ConvexPolyhedron3::from_faces(std::move(vertices), std::move(faces));
}

/// Convex hull with coplanar facets merged into single faces. Points within
/// tolerance of the hull are discarded. Throws DegenerateInput for fewer than
/// four non-coplanar points.
ConvexPolyhedron3 hull3(std::span<const Point3> points);

double volume(const ConvexPolyhedron3& poly);
/// Centroid of the uniform solid.
Point3 centroid3(const ConvexPolyhedron3& poly);
double surface_area(const ConvexPolyhedron3& poly);
double face_area(const ConvexPolyhedron3& poly, std::size_t face);

/// Signed distance from q to the boundary, positive inside.
double inner_distance(const ConvexPolyhedron3& poly, Point3 q);
bool contains_strictly(const ConvexPolyhedron3& poly, Point3 q);
std::pair<double, double> support_interval(const ConvexPolyhedron3& poly, Point3 direction);

/// Orthonormal frame; axes are the rows.
using Frame = std::array<Point3, 3>;
Frame identity_frame();

/// Circumscribed brick. `axes` and `half_extents` are sorted so that the
/// edge lengths a <= b <= c.
struct BoundingBox {
  Frame axes{};
  Point3 center;
  std::array<double, 3> half_extents{};

  double a() const { return 2.0 * half_extents[0]; }
  double b() const { return 2.0 * half_extents[1]; }
  double c() const { return 2.0 * half_extents[2]; }
};

BoundingBox bounding_box(const ConvexPolyhedron3& poly, const Frame& frame);
BoundingBox aabb(const ConvexPolyhedron3& poly);

/// Intersection with the closed half-space on `keep_side` of the plane
/// (+1: <normal, x> <= offset). Slivers collapse to nullopt.
std::optional<ConvexPolyhedron3> clip_halfspace3(const ConvexPolyhedron3& poly,
                                                 const Plane3& plane, int keep_side = 1);

enum class PlatonicSolid { tetra, cube, octa, dodeca, icosa };
/// Parses "tetra", "cube", "octa", "dodeca", "icosa".
std::optional<PlatonicSolid> parse_platonic(std::string_view name);

enum class PlatonicScale { unit_surface, edge };

/// Regular polyhedron centred at the origin.
ConvexPolyhedron3 platonic(PlatonicSolid solid, PlatonicScale scale = PlatonicScale::unit_surface,
                           double edge = 1.0);

/// Cylinder of radius r along z whose two ends are cut by planes tilted at
/// 45 degrees, each end adding 2r of length; the bounding box is
/// 2r x 2r x (d + 4r). `facets` is the number of sides of the polygonal
/// cross-section.
ConvexPolyhedron3 truncated_cylinder(double r, double d, int facets = 32);
/// Right prism over a regular n-gon of unit circumradius.
ConvexPolyhedron3 prism(int ngon, double height);
/// Polyhedral ellipsoid with at least `facets` triangles (latitude/longitude
/// grid, vertices on the surface).
ConvexPolyhedron3 ellipsoid_mesh(double a, double b, double c, int facets = 2000);

/// Roughly uniform unit directions (golden-angle spiral).
std::vector<Point3> fibonacci_sphere(int count);

/// Uniform point on the unit sphere.
Point3 random_unit_vector(std::mt19937_64& rng);
/// Random proper rotation; rows of the returned frame.
Frame random_rotation(std::mt19937_64& rng);
Point3 apply(const Frame& rotation, Point3 p);

/// Applies x -> rotation * x * s + t to every vertex.
ConvexPolyhedron3 transformed(const ConvexPolyhedron3& poly, const Frame& rotation, double s,
                              Point3 t);

}  // namespace eqrobust::geom3d
