#include "eqrobust/geom3d.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numbers>

#include "eqrobust/common.hpp"

namespace eqrobust::geom3d {

namespace {

double bbox_diagonal(std::span<const Point3> pts) {
  Point3 lo = pts[0], hi = pts[0];
  for (const auto& p : pts) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
  }
  return norm(hi - lo);
}

// Newell's method; length is twice the polygon area.
Point3 newell_normal(std::span<const Point3> vertices, const std::vector<std::size_t>& face) {
  Point3 n{};
  for (std::size_t i = 0; i < face.size(); ++i) {
    n = n + cross(vertices[face[i]], vertices[face[(i + 1) % face.size()]]);
  }
  return n;
}

Point3 face_center(std::span<const Point3> vertices, const std::vector<std::size_t>& face) {
  Point3 c{};
  for (auto i : face) c = c + vertices[i];
  return (1.0 / static_cast<double>(face.size())) * c;
}

}  // namespace

double ConvexPolyhedron3::eps() const { return geometric_epsilon() * scale_; }

ConvexPolyhedron3 ConvexPolyhedron3::from_faces(std::vector<Point3> vertices,
                                                std::vector<std::vector<std::size_t>> faces) {
  if (vertices.size() < 4 || faces.size() < 4) {
    throw GeometryError(ErrorCode::DegenerateInput, "need at least 4 vertices and 4 faces");
  }
  for (const auto& v : vertices) {
    if (!std::isfinite(v.x) || !std::isfinite(v.y) || !std::isfinite(v.z)) {
      throw GeometryError(ErrorCode::DegenerateInput, "non-finite coordinate");
    }
  }
  ConvexPolyhedron3 poly;
  poly.scale_ = bbox_diagonal(vertices);
  const double tol = geometric_epsilon() * poly.scale_;

  std::vector<int> used(vertices.size(), 0);
  for (auto& face : faces) {
    if (face.size() < 3) throw GeometryError(ErrorCode::DegenerateInput, "face with fewer than 3 vertices");
    for (auto i : face) {
      if (i >= vertices.size()) throw GeometryError(ErrorCode::InvalidArgument, "face index out of range");
      used[i] = 1;
    }
    Point3 n = newell_normal(vertices, face);
    const double len = norm(n);
    if (!(len > tol * tol)) throw GeometryError(ErrorCode::DegenerateInput, "face has zero area");
    n = (1.0 / len) * n;
    double d = dot(n, face_center(vertices, face));
    for (auto i : face) {
      if (std::abs(dot(n, vertices[i]) - d) > tol) {
        throw GeometryError(ErrorCode::NonConvexInput, "face is not planar");
      }
    }
    double above = -std::numeric_limits<double>::infinity();
    double below = std::numeric_limits<double>::infinity();
    for (const auto& v : vertices) {
      above = std::max(above, dot(n, v) - d);
      below = std::min(below, dot(n, v) - d);
    }
    if (above > tol) {
      if (below < -tol) throw GeometryError(ErrorCode::NonConvexInput, "vertices on both sides of a face");
      std::reverse(face.begin(), face.end());
      n = -1.0 * n;
      d = -d;
    }
    // Strictly convex cycle within the face plane.
    for (std::size_t k = 0; k < face.size(); ++k) {
      const Point3 a = vertices[face[k]];
      const Point3 b = vertices[face[(k + 1) % face.size()]];
      const Point3 c = vertices[face[(k + 2) % face.size()]];
      const Point3 chord = c - a;
      const double h = dot(cross(b - a, chord), n) / norm(chord);
      if (h <= tol) throw GeometryError(ErrorCode::NonConvexInput, "face is not strictly convex");
    }
    poly.planes_.push_back({n, d});
  }
  if (std::find(used.begin(), used.end(), 0) != used.end()) {
    throw GeometryError(ErrorCode::DegenerateInput, "vertex not referenced by any face");
  }

  std::map<std::pair<std::size_t, std::size_t>, std::size_t> directed;
  for (std::size_t f = 0; f < faces.size(); ++f) {
    for (std::size_t k = 0; k < faces[f].size(); ++k) {
      const auto key = std::make_pair(faces[f][k], faces[f][(k + 1) % faces[f].size()]);
      if (!directed.emplace(key, f).second) {
        throw GeometryError(ErrorCode::NonConvexInput, "edge used twice in the same direction");
      }
    }
  }
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> edge_index;
  for (const auto& [key, f] : directed) {
    const auto twin = directed.find({key.second, key.first});
    if (twin == directed.end()) throw GeometryError(ErrorCode::NonConvexInput, "surface is not closed");
    if (key.first < key.second) {
      edge_index[key] = poly.edges_.size();
      poly.edges_.push_back({key.first, key.second, f, twin->second});
      const Point3 n0 = poly.planes_[f].normal, n1 = poly.planes_[twin->second].normal;
      if (norm(cross(n0, n1)) < 1e-7 && dot(n0, n1) > 0.0) {
        throw GeometryError(ErrorCode::DegenerateInput, "adjacent faces are coplanar");
      }
    }
  }
  const long euler = static_cast<long>(vertices.size()) - static_cast<long>(poly.edges_.size()) +
                     static_cast<long>(faces.size());
  if (euler != 2) throw GeometryError(ErrorCode::NonConvexInput, "Euler characteristic is not 2");

  poly.neighbors_.assign(vertices.size(), {});
  for (const auto& e : poly.edges_) {
    poly.neighbors_[e.v0].push_back(e.v1);
    poly.neighbors_[e.v1].push_back(e.v0);
  }
  poly.face_edges_.resize(faces.size());
  for (std::size_t f = 0; f < faces.size(); ++f) {
    for (std::size_t k = 0; k < faces[f].size(); ++k) {
      const std::size_t a = faces[f][k], b = faces[f][(k + 1) % faces[f].size()];
      poly.face_edges_[f].push_back(edge_index.at({std::min(a, b), std::max(a, b)}));
    }
  }
  poly.vertices_ = std::move(vertices);
  poly.faces_ = std::move(faces);

  if (!(volume(poly) > 1e-12 * std::pow(poly.scale_, 3))) {
    throw GeometryError(ErrorCode::DegenerateInput, "volume is zero within tolerance");
  }
  return poly;
}

double volume(const ConvexPolyhedron3& poly) {
  const auto v = poly.vertices();
  const Point3 r = v[0];
  double six = 0.0;
  for (const auto& f : poly.faces()) {
    for (std::size_t k = 1; k + 1 < f.size(); ++k) {
      six += dot(v[f[0]] - r, cross(v[f[k]] - r, v[f[k + 1]] - r));
    }
  }
  return six / 6.0;
}

Point3 centroid3(const ConvexPolyhedron3& poly) {
  const auto v = poly.vertices();
  const Point3 r = v[0];
  double six = 0.0;
  Point3 acc{};
  for (const auto& f : poly.faces()) {
    for (std::size_t k = 1; k + 1 < f.size(); ++k) {
      const Point3 a = v[f[0]] - r, b = v[f[k]] - r, c = v[f[k + 1]] - r;
      const double w = dot(a, cross(b, c));
      six += w;
      acc = acc + w * (a + b + c);
    }
  }
  return r + (1.0 / (4.0 * six)) * acc;
}

double face_area(const ConvexPolyhedron3& poly, std::size_t face) {
  return 0.5 * norm(newell_normal(poly.vertices(), poly.faces()[face]));
}

double surface_area(const ConvexPolyhedron3& poly) {
  double s = 0.0;
  for (std::size_t f = 0; f < poly.num_faces(); ++f) s += face_area(poly, f);
  return s;
}

double inner_distance(const ConvexPolyhedron3& poly, Point3 q) {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& pl : poly.face_planes()) d = std::min(d, -pl.signed_distance(q));
  return d;
}

bool contains_strictly(const ConvexPolyhedron3& poly, Point3 q) {
  return inner_distance(poly, q) > poly.eps();
}

std::pair<double, double> support_interval(const ConvexPolyhedron3& poly, Point3 direction) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& v : poly.vertices()) {
    const double s = dot(direction, v);
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  return {lo, hi};
}

Frame identity_frame() { return {Point3{1, 0, 0}, Point3{0, 1, 0}, Point3{0, 0, 1}}; }

BoundingBox bounding_box(const ConvexPolyhedron3& poly, const Frame& frame) {
  std::array<std::pair<double, double>, 3> span;
  for (int k = 0; k < 3; ++k) span[k] = support_interval(poly, frame[k]);
  std::array<int, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
    return span[i].second - span[i].first < span[j].second - span[j].first;
  });
  BoundingBox box;
  for (int k = 0; k < 3; ++k) {
    const int i = order[k];
    box.axes[k] = frame[i];
    box.half_extents[k] = 0.5 * (span[i].second - span[i].first);
    box.center = box.center + (0.5 * (span[i].first + span[i].second)) * frame[i];
  }
  return box;
}

BoundingBox aabb(const ConvexPolyhedron3& poly) { return bounding_box(poly, identity_frame()); }

std::optional<ConvexPolyhedron3> clip_halfspace3(const ConvexPolyhedron3& poly, const Plane3& plane,
                                                 int keep_side) {
  const double tol = poly.eps();
  const double sign = keep_side >= 0 ? 1.0 : -1.0;
  const auto v = poly.vertices();
  std::vector<double> s(v.size());
  bool any_out = false, any_in = false;
  for (std::size_t i = 0; i < v.size(); ++i) {
    double d = -sign * plane.signed_distance(v[i]);  // positive on the kept side
    if (std::abs(d) <= tol) d = 0.0;
    s[i] = d;
    any_out |= d < 0.0;
    any_in |= d > 0.0;
  }
  if (!any_out) return poly;
  if (!any_in) return std::nullopt;

  std::vector<Point3> pts;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (s[i] >= 0.0) pts.push_back(v[i]);
  }
  for (const auto& e : poly.edges()) {
    const double a = s[e.v0], b = s[e.v1];
    if ((a > 0.0 && b < 0.0) || (a < 0.0 && b > 0.0)) {
      const double t = a / (a - b);
      pts.push_back(v[e.v0] + t * (v[e.v1] - v[e.v0]));
    }
  }
  try {
    auto piece = hull3(pts);
    if (volume(piece) < geometric_epsilon() * volume(poly)) return std::nullopt;
    return piece;
  } catch (const GeometryError& e) {
    if (e.code() == ErrorCode::DegenerateInput) return std::nullopt;
    throw;
  }
}

std::optional<PlatonicSolid> parse_platonic(std::string_view name) {
  if (name == "tetra") return PlatonicSolid::tetra;
  if (name == "cube") return PlatonicSolid::cube;
  if (name == "octa") return PlatonicSolid::octa;
  if (name == "dodeca") return PlatonicSolid::dodeca;
  if (name == "icosa") return PlatonicSolid::icosa;
  return std::nullopt;
}

ConvexPolyhedron3 platonic(PlatonicSolid solid, PlatonicScale scale, double edge) {
  const double phi = std::numbers::phi;
  std::vector<Point3> pts;
  double edge0 = 0.0;
  switch (solid) {
    case PlatonicSolid::tetra:
      pts = {{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
      edge0 = 2.0 * std::numbers::sqrt2;
      break;
    case PlatonicSolid::cube:
      for (int i = 0; i < 8; ++i) pts.push_back({i & 1 ? 1.0 : -1.0, i & 2 ? 1.0 : -1.0, i & 4 ? 1.0 : -1.0});
      edge0 = 2.0;
      break;
    case PlatonicSolid::octa:
      pts = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
      edge0 = std::numbers::sqrt2;
      break;
    case PlatonicSolid::dodeca:
      for (int i = 0; i < 8; ++i) pts.push_back({i & 1 ? 1.0 : -1.0, i & 2 ? 1.0 : -1.0, i & 4 ? 1.0 : -1.0});
      for (double a : {-1.0, 1.0}) {
        for (double b : {-1.0, 1.0}) {
          pts.push_back({0.0, a / phi, b * phi});
          pts.push_back({a / phi, b * phi, 0.0});
          pts.push_back({a * phi, 0.0, b / phi});
        }
      }
      edge0 = 2.0 / phi;
      break;
    case PlatonicSolid::icosa:
      for (double a : {-1.0, 1.0}) {
        for (double b : {-1.0, 1.0}) {
          pts.push_back({0.0, a, b * phi});
          pts.push_back({a, b * phi, 0.0});
          pts.push_back({a * phi, 0.0, b});
        }
      }
      edge0 = 2.0;
      break;
  }
  double factor = 1.0;
  if (scale == PlatonicScale::edge) {
    if (!(edge > 0.0)) throw GeometryError(ErrorCode::InvalidArgument, "edge length must be positive");
    factor = edge / edge0;
  } else {
    factor = 1.0 / std::sqrt(surface_area(hull3(pts)));
  }
  for (auto& p : pts) p = factor * p;
  return hull3(pts);
}

ConvexPolyhedron3 truncated_cylinder(double r, double d, int facets) {
  if (!(r > 0.0) || !(d > 0.0) || facets < 4 || facets % 4 != 0) {
    throw GeometryError(ErrorCode::InvalidArgument,
                        "truncated cylinder needs r > 0, d > 0 and a multiple of 4 facets");
  }
  std::vector<Point3> pts;
  const double top = 0.5 * d + r;
  for (int k = 0; k < facets; ++k) {
    const double a = 2.0 * std::numbers::pi * k / facets;
    const double x = r * std::cos(a), y = r * std::sin(a);
    // Caps z = top + x and z = x - top are point symmetric about the origin.
    pts.push_back({x, y, top + x});
    pts.push_back({x, y, x - top});
  }
  return hull3(pts);
}

ConvexPolyhedron3 prism(int ngon, double height) {
  if (ngon < 3 || !(height > 0.0)) throw GeometryError(ErrorCode::InvalidArgument, "prism needs ngon >= 3, height > 0");
  std::vector<Point3> pts;
  for (int k = 0; k < ngon; ++k) {
    const double a = 2.0 * std::numbers::pi * k / ngon;
    pts.push_back({std::cos(a), std::sin(a), 0.5 * height});
    pts.push_back({std::cos(a), std::sin(a), -0.5 * height});
  }
  return hull3(pts);
}

ConvexPolyhedron3 ellipsoid_mesh(double a, double b, double c, int facets) {
  if (!(a > 0.0) || !(b > 0.0) || !(c > 0.0) || facets < 32) {
    throw GeometryError(ErrorCode::InvalidArgument, "ellipsoid mesh needs positive axes and facets >= 32");
  }
  int stacks = 3;
  while (4 * stacks * (stacks - 1) < facets) ++stacks;
  const int slices = 2 * stacks;
  std::vector<Point3> pts{{0, 0, c}, {0, 0, -c}};
  for (int i = 1; i < stacks; ++i) {
    const double polar = std::numbers::pi * i / stacks;
    // Staggered rings keep the grid cells from being planar quads.
    const double shift = (i % 2) * std::numbers::pi / slices;
    for (int j = 0; j < slices; ++j) {
      const double az = 2.0 * std::numbers::pi * j / slices + shift;
      pts.push_back({a * std::sin(polar) * std::cos(az), b * std::sin(polar) * std::sin(az),
                     c * std::cos(polar)});
    }
  }
  return hull3(pts);
}

std::vector<Point3> fibonacci_sphere(int count) {
  std::vector<Point3> dirs;
  dirs.reserve(static_cast<std::size_t>(std::max(count, 0)));
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < count; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / count;
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double a = golden * i;
    dirs.push_back({rho * std::cos(a), rho * std::sin(a), z});
  }
  return dirs;
}

Point3 random_unit_vector(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  for (;;) {
    const Point3 p{g(rng), g(rng), g(rng)};
    const double n = norm(p);
    if (n > 1e-12) return (1.0 / n) * p;
  }
}

Frame random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  double w, x, y, z, n;
  do {
    w = g(rng), x = g(rng), y = g(rng), z = g(rng);
    n = std::sqrt(w * w + x * x + y * y + z * z);
  } while (n < 1e-12);
  w /= n, x /= n, y /= n, z /= n;
  return {Point3{1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)},
          Point3{2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)},
          Point3{2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)}};
}

Point3 apply(const Frame& rotation, Point3 p) {
  return {dot(rotation[0], p), dot(rotation[1], p), dot(rotation[2], p)};
}

ConvexPolyhedron3 transformed(const ConvexPolyhedron3& poly, const Frame& rotation, double s,
                              Point3 t) {
  std::vector<Point3> v;
  for (const auto& p : poly.vertices()) v.push_back(s * apply(rotation, p) + t);
  return ConvexPolyhedron3::from_faces(std::move(v), poly.faces());
}

}  // namespace eqrobust::geom3d
