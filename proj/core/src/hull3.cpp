// Incremental 3D convex hull followed by coplanar facet merging.

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "eqrobust/common.hpp"
#include "eqrobust/geom3d.hpp"

namespace eqrobust::geom3d {

namespace {

constexpr double kMergeAngle = 1e-7;

struct Tri {
  std::array<std::size_t, 3> v;
  Point3 normal;
  double offset = 0.0;
  bool alive = true;
};

Tri make_tri(std::span<const Point3> pts, std::size_t a, std::size_t b, std::size_t c) {
  Tri t{{a, b, c}, cross(pts[b] - pts[a], pts[c] - pts[a]), 0.0, true};
  const double len = norm(t.normal);
  if (len > 0.0) t.normal = (1.0 / len) * t.normal;
  t.offset = dot(t.normal, pts[a]);
  return t;
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

std::vector<Tri> triangulated_hull(std::span<const Point3> pts, double tol) {
  const std::size_t n = pts.size();
  // Initial simplex from extreme points.
  std::size_t i0 = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (pts[i].x < pts[i0].x) i0 = i;
  }
  std::size_t i1 = i0;
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (const double d = distance(pts[i], pts[i0]); d > best) best = d, i1 = i;
  }
  if (best <= tol) throw GeometryError(ErrorCode::DegenerateInput, "points coincide");
  std::size_t i2 = i0;
  best = 0.0;
  const Point3 axis = normalized(pts[i1] - pts[i0]);
  for (std::size_t i = 0; i < n; ++i) {
    if (const double d = norm(cross(pts[i] - pts[i0], axis)); d > best) best = d, i2 = i;
  }
  if (best <= tol) throw GeometryError(ErrorCode::DegenerateInput, "points are collinear");
  const Tri base = make_tri(pts, i0, i1, i2);
  std::size_t i3 = i0;
  best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (const double d = std::abs(dot(base.normal, pts[i]) - base.offset); d > best) best = d, i3 = i;
  }
  if (best <= tol) throw GeometryError(ErrorCode::DegenerateInput, "points are coplanar");

  std::vector<Tri> tris;
  if (dot(base.normal, pts[i3]) - base.offset > 0.0) {
    tris = {make_tri(pts, i0, i2, i1), make_tri(pts, i0, i1, i3), make_tri(pts, i1, i2, i3),
            make_tri(pts, i2, i0, i3)};
  } else {
    tris = {make_tri(pts, i0, i1, i2), make_tri(pts, i0, i3, i1), make_tri(pts, i1, i3, i2),
            make_tri(pts, i2, i3, i0)};
  }

  // Farthest points first, so points on edges and faces of the final hull
  // arrive after the corners that make them redundant.
  const Point3 c = 0.25 * (pts[i0] + pts[i1] + pts[i2] + pts[i3]);
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < n; ++i) {
    if (i != i0 && i != i1 && i != i2 && i != i3) order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return distance(pts[a], c) > distance(pts[b], c);
  });

  std::set<std::pair<std::size_t, std::size_t>> visible_edges;
  for (const std::size_t p : order) {
    visible_edges.clear();
    bool any = false;
    for (auto& t : tris) {
      if (!t.alive || dot(t.normal, pts[p]) - t.offset <= tol) continue;
      any = true;
      t.alive = false;
      for (int k = 0; k < 3; ++k) visible_edges.insert({t.v[k], t.v[(k + 1) % 3]});
    }
    if (!any) continue;
    for (const auto& [a, b] : visible_edges) {
      if (!visible_edges.count({b, a})) tris.push_back(make_tri(pts, a, b, p));
    }
    if (tris.size() > 64 && tris.size() > 4 * n) {
      std::erase_if(tris, [](const Tri& t) { return !t.alive; });
    }
  }
  std::erase_if(tris, [](const Tri& t) { return !t.alive; });
  return tris;
}

}  // namespace

ConvexPolyhedron3 hull3(std::span<const Point3> points) {
  if (points.size() < 4) throw GeometryError(ErrorCode::DegenerateInput, "hull needs at least 4 points");
  Point3 lo = points[0], hi = points[0];
  for (const auto& p : points) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z)) {
      throw GeometryError(ErrorCode::DegenerateInput, "non-finite coordinate");
    }
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
  }
  const double tol = geometric_epsilon() * norm(hi - lo);
  const std::vector<Tri> tris = triangulated_hull(points, tol);

  // Group coplanar neighbours.
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> owner;
  for (std::size_t t = 0; t < tris.size(); ++t) {
    for (int k = 0; k < 3; ++k) owner[{tris[t].v[k], tris[t].v[(k + 1) % 3]}] = t;
  }
  auto coplanar = [&](const Tri& a, const Tri& b) {
    if (norm(cross(a.normal, b.normal)) < kMergeAngle && dot(a.normal, b.normal) > 0.0) return true;
    for (auto i : b.v) {
      if (std::abs(dot(a.normal, points[i]) - a.offset) > tol) return false;
    }
    for (auto i : a.v) {
      if (std::abs(dot(b.normal, points[i]) - b.offset) > tol) return false;
    }
    return true;
  };
  UnionFind groups(tris.size());
  for (std::size_t t = 0; t < tris.size(); ++t) {
    for (int k = 0; k < 3; ++k) {
      const auto it = owner.find({tris[t].v[(k + 1) % 3], tris[t].v[k]});
      if (it == owner.end()) throw GeometryError(ErrorCode::DegenerateInput, "hull surface is not closed");
      if (coplanar(tris[t], tris[it->second])) groups.unite(t, it->second);
    }
  }

  // Boundary loop of each group.
  std::map<std::size_t, std::map<std::size_t, std::size_t>> next_in_group;
  for (std::size_t t = 0; t < tris.size(); ++t) {
    const std::size_t g = groups.find(t);
    for (int k = 0; k < 3; ++k) {
      const std::size_t a = tris[t].v[k], b = tris[t].v[(k + 1) % 3];
      if (groups.find(owner.at({b, a})) == g) continue;
      if (!next_in_group[g].emplace(a, b).second) {
        throw GeometryError(ErrorCode::DegenerateInput, "merged hull face is pinched");
      }
    }
  }
  std::vector<std::vector<std::size_t>> loops;
  for (const auto& [g, next] : next_in_group) {
    std::vector<std::size_t> loop;
    std::size_t cur = next.begin()->first;
    do {
      loop.push_back(cur);
      const auto it = next.find(cur);
      if (it == next.end() || loop.size() > next.size()) {
        throw GeometryError(ErrorCode::DegenerateInput, "merged hull face boundary is broken");
      }
      cur = it->second;
    } while (cur != loop.front());
    if (loop.size() != next.size()) {
      throw GeometryError(ErrorCode::DegenerateInput, "merged hull face has holes");
    }
    loops.push_back(std::move(loop));
  }

  // A vertex on fewer than three faces lies inside an edge or a face.
  std::vector<int> face_count(points.size(), 0);
  for (const auto& loop : loops) {
    for (auto i : loop) ++face_count[i];
  }
  std::vector<std::size_t> remap(points.size(), SIZE_MAX);
  std::vector<Point3> vertices;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (face_count[i] >= 3) {
      remap[i] = vertices.size();
      vertices.push_back(points[i]);
    }
  }
  std::vector<std::vector<std::size_t>> faces;
  for (const auto& loop : loops) {
    std::vector<std::size_t> face;
    for (auto i : loop) {
      if (remap[i] != SIZE_MAX) face.push_back(remap[i]);
    }
    faces.push_back(std::move(face));
  }
  return ConvexPolyhedron3::from_faces(std::move(vertices), std::move(faces));
}

}  // namespace eqrobust::geom3d
