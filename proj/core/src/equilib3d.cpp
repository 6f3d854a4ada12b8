#include "eqrobust/equilib3d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "eqrobust/common.hpp"
#include "parallel.hpp"

namespace eqrobust::equilib3d {

using geom3d::cross;
using geom3d::dot;
using geom3d::norm;
using geom3d::normalized;
using geom3d::Plane3;

namespace {

// Inward unit direction within face f, perpendicular to its k-th edge.
Point3 inward_edge_normal(const ConvexPolyhedron3& poly, std::size_t f, std::size_t k) {
  const auto& face = poly.faces()[f];
  const Point3 a = poly.vertices()[face[k]];
  const Point3 b = poly.vertices()[face[(k + 1) % face.size()]];
  return normalized(cross(poly.face_planes()[f].normal, b - a));
}

// Smallest signed in-face distance from x (assumed on the face plane) to the
// edge lines of face f; positive inside.
double face_margin(const ConvexPolyhedron3& poly, std::size_t f, Point3 x) {
  const auto& face = poly.faces()[f];
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < face.size(); ++k) {
    m = std::min(m, dot(x - poly.vertices()[face[k]], inward_edge_normal(poly, f, k)));
  }
  return m;
}

Point3 plane_foot(const Plane3& plane, Point3 q) { return q - plane.signed_distance(q) * plane.normal; }

// Position of edge e within face f's cycle.
std::size_t edge_slot(const ConvexPolyhedron3& poly, std::size_t f, std::size_t e) {
  const auto& fe = poly.face_edges()[f];
  return static_cast<std::size_t>(std::find(fe.begin(), fe.end(), e) - fe.begin());
}

EquilibriumSet3 nondegenerate_set(const ConvexPolyhedron3& poly, Point3 p) {
  auto set = classify3(poly, p);
  if (set.any_degenerate()) {
    throw GeometryError(ErrorCode::DegenerateConfiguration,
                        "reference point lies on an equilibrium boundary");
  }
  return set;
}

}  // namespace

bool EquilibriumSet3::any_degenerate() const {
  auto flagged = [](const std::vector<EquilibriumPoint3>& v) {
    return std::any_of(v.begin(), v.end(), [](const auto& e) { return e.degenerate; });
  };
  return flagged(stable) || flagged(saddle) || flagged(unstable);
}

EquilibriumSet3 classify3(const ConvexPolyhedron3& poly, Point3 p) {
  if (!geom3d::contains_strictly(poly, p)) {
    throw GeometryError(ErrorCode::ReferenceOutside, "reference point is not strictly inside");
  }
  const double eps = poly.eps();
  const auto verts = poly.vertices();
  EquilibriumSet3 set;
  set.reference = p;

  for (std::size_t f = 0; f < poly.num_faces(); ++f) {
    const Point3 foot = plane_foot(poly.face_planes()[f], p);
    const double m = face_margin(poly, f, foot);
    if (m >= -eps) set.stable.push_back({Kind3::stable, f, foot, m <= eps});
  }

  for (std::size_t e = 0; e < poly.num_edges(); ++e) {
    const auto& edge = poly.edges()[e];
    const Point3 a = verts[edge.v0];
    const Point3 d = verts[edge.v1] - a;
    const double len = norm(d);
    const double s = dot(p - a, d) / len;
    if (s < -eps || s > len + eps) continue;
    const Point3 foot = a + (s / len) * d;
    const Point3 w = foot - p;
    const double c1 = -dot(w, inward_edge_normal(poly, edge.left_face, edge_slot(poly, edge.left_face, e)));
    const double c2 = -dot(w, inward_edge_normal(poly, edge.right_face, edge_slot(poly, edge.right_face, e)));
    const double m = std::min({s, len - s, c1, c2});
    if (m >= -eps) set.saddle.push_back({Kind3::saddle, e, foot, m <= eps});
  }

  for (std::size_t v = 0; v < verts.size(); ++v) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto w : poly.vertex_neighbors()[v]) {
      m = std::min(m, -dot(verts[v] - p, normalized(verts[w] - verts[v])));
    }
    if (m >= -eps) set.unstable.push_back({Kind3::unstable, v, verts[v], m <= eps});
  }

  set.S = static_cast<int>(set.stable.size());
  set.H = static_cast<int>(set.saddle.size());
  set.U = static_cast<int>(set.unstable.size());
  return set;
}

bool poincare_hopf_check(const EquilibriumSet3& set) {
  if (set.any_degenerate()) {
    throw GeometryError(ErrorCode::DegeneratePresent, "classification has degenerate items");
  }
  return set.S - set.H + set.U == 2;
}

std::string to_string(PredicateResult result) {
  switch (result) {
    case PredicateResult::checked_true: return "checked_true";
    case PredicateResult::checked_false: return "checked_false";
    case PredicateResult::nonapplicable: return "nonapplicable";
  }
  return "unknown";
}

LemmaPredicates bounding_box_predicates(const ConvexPolyhedron3& poly, const BoundingBox& box) {
  LemmaPredicates out;
  const bool elongated = 6.0 * box.b() <= box.c();
  const bool flat = 3.0 * box.a() < box.b();
  if (!elongated && !flat) return out;
  const auto set = classify3(poly, geom3d::centroid3(poly));
  out.S = set.S;
  out.U = set.U;
  auto verdict = [](bool ok) { return ok ? PredicateResult::checked_true : PredicateResult::checked_false; };
  if (elongated) out.elongation_implies_two_unstable = verdict(set.U >= 2);
  if (flat) out.flatness_implies_two_stable = verdict(set.S >= 2);
  return out;
}

bool centroid_quarter_width_check(const ConvexPolyhedron3& poly, const BoundingBox& box) {
  const Point3 c = geom3d::centroid3(poly);
  for (int k = 0; k < 3; ++k) {
    const double width = 2.0 * box.half_extents[k];
    const double s = dot(c - box.center, box.axes[k]);
    const double near = box.half_extents[k] - std::abs(s);
    if (near < width / 4.0 - 1e-9) return false;
  }
  return true;
}

std::vector<WallDistance> wall_distances(const ConvexPolyhedron3& poly, Point3 p, WallMode mode) {
  std::vector<WallDistance> out;
  const auto verts = poly.vertices();
  for (std::size_t f = 0; f < poly.num_faces(); ++f) {
    const auto& plane = poly.face_planes()[f];
    const double h = plane.signed_distance(p);
    const Point3 foot = p - h * plane.normal;
    // The ray-only wall stops at the face; points outside see it from its rim.
    const double off = (mode == WallMode::rays_only && h > 0.0) ? h : 0.0;
    const auto& face = poly.faces()[f];
    for (std::size_t k = 0; k < face.size(); ++k) {
      const Point3 a = verts[face[k]];
      const Point3 d = verts[face[(k + 1) % face.size()]] - a;
      const double t = std::clamp(dot(foot - a, d) / dot(d, d), 0.0, 1.0);
      const double inplane = norm(foot - (a + t * d));
      out.push_back({f, poly.face_edges()[f][k], std::hypot(inplane, off)});
    }
  }
  return out;
}

RobustnessReport3 rho_in_exact_3d(const ConvexPolyhedron3& poly, Point3 p, WallMode mode) {
  nondegenerate_set(poly, p);
  const auto walls = wall_distances(poly, p, mode);
  const auto best = std::min_element(walls.begin(), walls.end(),
                                     [](const auto& x, const auto& y) { return x.distance < y.distance; });
  RobustnessReport3 r;
  r.kind = RobustnessKind::internal;
  r.value = best->distance / std::sqrt(geom3d::surface_area(poly));
  r.method = Method::exact;
  r.witness = WallWitness{best->face, best->edge, mode == WallMode::rays_only};
  return r;
}

int count_stable_faces(const ConvexPolyhedron3& poly, Point3 q) {
  int count = 0;
  for (std::size_t f = 0; f < poly.num_faces(); ++f) {
    if (face_margin(poly, f, plane_foot(poly.face_planes()[f], q)) > 0.0) ++count;
  }
  return count;
}

RobustnessReport3 rho_in_sampled_3d(const ConvexPolyhedron3& poly, Point3 p, int directions,
                                    double tol) {
  if (directions < 1 || !(tol > 0.0)) {
    throw GeometryError(ErrorCode::InvalidArgument, "need directions >= 1 and tol > 0");
  }
  const double unit = std::sqrt(geom3d::surface_area(poly));
  const int base = count_stable_faces(poly, p);
  const double step = 1e-3 * unit;
  const double reach = 2.0 * poly.scale();
  const auto dirs = geom3d::fibonacci_sphere(directions);

  std::vector<double> first_change(dirs.size(), std::numeric_limits<double>::infinity());
  detail::parallel_for(dirs.size(), [&](std::size_t k) {
    auto changed = [&](double t) { return count_stable_faces(poly, p + t * dirs[k]) != base; };
    double lo = 0.0, hi = step;
    while (hi <= reach && !changed(hi)) {
      lo = hi;
      hi += step;
    }
    if (hi > reach) return;
    while (hi - lo > tol * unit) {
      const double mid = 0.5 * (lo + hi);
      (changed(mid) ? hi : lo) = mid;
    }
    first_change[k] = 0.5 * (lo + hi);
  });

  const auto it = std::min_element(first_change.begin(), first_change.end());
  const Point3 u = dirs[static_cast<std::size_t>(it - first_change.begin())];
  RobustnessReport3 r;
  r.kind = RobustnessKind::internal;
  r.value = *it / unit;
  r.method = Method::sampled;
  r.witness = DirectionWitness{{u.x, u.y, u.z}};
  return r;
}

namespace {

// Tilt of the tetrahedron cut: the cap normal is the vertex axis rotated this
// far towards the outward normal of one adjacent face. A cut perpendicular to
// the axis would leave a cap face holding a new stable point.
constexpr double kTetraCutBlend = 0.8;
constexpr double kTetraCutHeight = 0.1;

// Does the plane meet the incircle of face f?
bool cuts_incircle(const ConvexPolyhedron3& poly, std::size_t f, const Plane3& plane) {
  const auto& face = poly.faces()[f];
  Point3 c;
  for (auto i : face) c = c + poly.vertices()[i];
  c = (1.0 / static_cast<double>(face.size())) * c;
  const double r = face_margin(poly, f, c);
  const Point3 n = poly.face_planes()[f].normal;
  const Point3 tangential = plane.normal - dot(plane.normal, n) * n;
  return std::abs(plane.signed_distance(c)) <= r * norm(tangential);
}

}  // namespace

TruncatedTetraFixture example_truncated_tetra_fixture() {
  const auto P = geom3d::platonic(geom3d::PlatonicSolid::tetra);
  const Point3 o = geom3d::centroid3(P);

  // Apex: vertex with the largest z; its opposite face is the one not using it.
  std::size_t apex = 0;
  for (std::size_t i = 1; i < P.num_vertices(); ++i) {
    if (P.vertices()[i].z > P.vertices()[apex].z) apex = i;
  }
  std::size_t opposite = 0, adjacent = 0;
  bool have_adjacent = false;
  for (std::size_t f = 0; f < P.num_faces(); ++f) {
    const auto& face = P.faces()[f];
    if (std::find(face.begin(), face.end(), apex) == face.end()) {
      opposite = f;
    } else if (!have_adjacent) {
      adjacent = f;
      have_adjacent = true;
    }
  }
  const Point3 v = P.vertices()[apex];
  const Plane3& base = P.face_planes()[opposite];
  const double height = -base.signed_distance(v);
  const Point3 axis = normalized(v - plane_foot(base, v));
  const Point3 through = v - (kTetraCutHeight * height) * axis;
  const Point3 n = normalized((1.0 - kTetraCutBlend) * axis + kTetraCutBlend * P.face_planes()[adjacent].normal);
  const Plane3 cut{n, dot(n, through)};

  auto Pp = geom3d::clip_halfspace3(P, cut, 1);
  if (!Pp) throw GeometryError(ErrorCode::DegenerateInput, "tetrahedron cut removed everything");

  TruncatedTetraFixture fx{P, *Pp, o, cut, classify3(P, o), classify3(*Pp, o),
                           {}, {}, geom3d::surface_area(*Pp), {}};
  auto fail = [&](std::string msg) { fx.failures.push_back(std::move(msg)); };

  if (fx.truncated.num_faces() != 5) fail("cut does not add exactly one face");
  for (std::size_t f = 0; f < P.num_faces(); ++f) {
    if (cuts_incircle(P, f, cut)) fail("cut meets the incircle of face " + std::to_string(f));
  }
  const auto& a = fx.original_set;
  const auto& b = fx.truncated_set;
  if (a.any_degenerate() || b.any_degenerate()) fail("classification about the centre is degenerate");
  if (a.S != b.S || a.H != b.H || a.U != b.U) fail("equilibrium counts differ about the centre");
  if (!(fx.truncated_surface < geom3d::surface_area(P))) fail("surface area did not shrink");

  if (fx.failures.empty()) {
    fx.original_report = rho_in_exact_3d(P, o);
    fx.truncated_report = rho_in_exact_3d(*Pp, o);
    // Stable counts agree throughout the robustness ball of P.
    const double radius = fx.original_report.value * std::sqrt(geom3d::surface_area(P));
    for (const auto& u : geom3d::fibonacci_sphere(256)) {
      for (const double f : {0.25, 0.5, 0.75, 0.99}) {
        const Point3 q = o + (f * radius) * u;
        if (count_stable_faces(P, q) != count_stable_faces(*Pp, q)) {
          fail("stable counts differ inside the robustness ball");
          break;
        }
      }
      if (!fx.failures.empty()) break;
    }
    if (!(fx.truncated_report.value > fx.original_report.value)) {
      fail("internal robustness did not increase");
    }
  }
  return fx;
}

EquilibriumClass ellipsoid_class(double a, double b, double c) {
  if (!(a > 0.0) || !(b > 0.0) || !(c > 0.0)) {
    throw GeometryError(ErrorCode::InvalidArgument, "semi-axes must be positive");
  }
  if (a == b || b == c || a == c) {
    throw GeometryError(ErrorCode::DegenerateConfiguration,
                        "ellipsoid with repeated semi-axes has a continuum of equilibria");
  }
  // Ends of the short axis are stable, of the middle axis saddles, of the long
  // axis unstable.
  return {2, 2};
}

namespace {

struct PieceEval {
  bool valid = false;
  double removed = 0.0;
  int S = 0;
  int U = 0;
};

PieceEval evaluate_piece(const ConvexPolyhedron3& poly, double vol, const Plane3& plane, int side) {
  PieceEval out;
  try {
    auto piece = geom3d::clip_halfspace3(poly, plane, side);
    if (!piece) return out;
    const double removed = 1.0 - geom3d::volume(*piece) / vol;
    if (removed <= 0.0) return out;
    const auto set = classify3(*piece, geom3d::centroid3(*piece));
    if (set.any_degenerate()) return out;
    out = {true, removed, set.S, set.U};
  } catch (const GeometryError&) {
  }
  return out;
}

struct Candidate {
  double removed = std::numeric_limits<double>::infinity();
  std::size_t normal = 0;
  int side = 1;
  double offset = 0.0;
  double other = 0.0;  // adjacent grid offset that did not reduce, if any
  bool bracket = false;
  int S = 0, U = 0;
};

RobustnessReport3 single_target_search(const ConvexPolyhedron3& poly, bool reduce_s,
                                       const PlaneSearchOptions& opt) {
  if (opt.normals < 1 || opt.offsets < 2 || !(opt.refine_tol > 0.0)) {
    throw GeometryError(ErrorCode::InvalidArgument, "need normals >= 1, offsets >= 2, refine_tol > 0");
  }
  const auto base = nondegenerate_set(poly, geom3d::centroid3(poly));
  const double vol = geom3d::volume(poly);
  std::mt19937_64 rng(opt.seed);
  const auto rot = geom3d::random_rotation(rng);
  std::vector<Point3> normals;
  for (const auto& u : geom3d::fibonacci_sphere(opt.normals)) normals.push_back(geom3d::apply(rot, u));

  auto reduces = [&](const PieceEval& e) {
    return e.valid && (reduce_s ? e.S < base.S : e.U < base.U);
  };

  // Best reducing grid offset per (normal, side).
  std::vector<Candidate> per(2 * normals.size());
  std::vector<std::size_t> evaluated(normals.size(), 0);
  detail::parallel_for(normals.size(), [&](std::size_t i) {
    const Point3 n = normals[i];
    const auto [lo, hi] = geom3d::support_interval(poly, n);
    std::vector<double> offs;
    for (int j = 1; j < opt.offsets; ++j) offs.push_back(lo + (hi - lo) * j / opt.offsets);
    for (int s = 0; s < 2; ++s) {
      const int side = s == 0 ? 1 : -1;
      std::vector<PieceEval> evals;
      for (const double d : offs) evals.push_back(evaluate_piece(poly, vol, {n, d}, side));
      evaluated[i] += evals.size();
      Candidate& c = per[2 * i + s];
      for (std::size_t j = 0; j < evals.size(); ++j) {
        if (!reduces(evals[j]) || !(evals[j].removed < c.removed)) continue;
        c = {evals[j].removed, i, side, offs[j], 0.0, false, evals[j].S, evals[j].U};
        // Neighbour in the direction of less removal.
        const std::ptrdiff_t k = static_cast<std::ptrdiff_t>(j) + (side == 1 ? 1 : -1);
        if (k >= 0 && k < static_cast<std::ptrdiff_t>(offs.size())) {
          if (!reduces(evals[static_cast<std::size_t>(k)])) {
            c.other = offs[static_cast<std::size_t>(k)];
            c.bracket = true;
          }
        } else {
          c.other = side == 1 ? hi : lo;
          c.bracket = true;
        }
      }
    }
  });

  std::vector<std::size_t> order(per.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return per[a].removed < per[b].removed; });

  std::size_t total = 0;
  for (auto e : evaluated) total += e;

  if (opt.refine && std::isfinite(per[order[0]].removed)) {
    const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(std::max(opt.refine_candidates, 1)), order.size());
    std::vector<std::size_t> extra(k, 0);
    detail::parallel_for(k, [&](std::size_t r) {
      Candidate& c = per[order[r]];
      if (!std::isfinite(c.removed) || !c.bracket) return;
      const Point3 n = normals[c.normal];
      double good = c.offset, bad = c.other;
      const auto [lo, hi] = geom3d::support_interval(poly, n);
      while (std::abs(bad - good) > opt.refine_tol * (hi - lo)) {
        const double mid = 0.5 * (good + bad);
        const auto e = evaluate_piece(poly, vol, {n, mid}, c.side);
        ++extra[r];
        if (reduces(e)) {
          good = mid;
          if (e.removed < c.removed) {
            c.removed = e.removed;
            c.offset = mid;
            c.S = e.S;
            c.U = e.U;
          }
        } else {
          bad = mid;
        }
      }
    });
    for (auto e : extra) total += e;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return per[a].removed < per[b].removed; });
  }

  const Candidate& best = per[order[0]];
  RobustnessReport3 r;
  r.kind = reduce_s ? RobustnessKind::partial_s : RobustnessKind::partial_u;
  r.method = Method::search;
  r.upper_bound = true;
  r.provenance = SearchProvenance{opt.normals, opt.offsets, opt.refine_tol, total};
  if (!std::isfinite(best.removed)) {
    r.reduction_found = false;
    r.value = std::numeric_limits<double>::quiet_NaN();
    return r;
  }
  const Point3 n = normals[best.normal];
  r.value = best.removed;
  r.witness = PlaneWitness{{n.x, n.y, n.z}, best.offset, best.side, best.S, best.U};
  return r;
}

}  // namespace

RobustnessReport3 plane_truncation_search(const ConvexPolyhedron3& poly, TruncationTarget target,
                                          const PlaneSearchOptions& options) {
  if (target == TruncationTarget::reduce_S) return single_target_search(poly, true, options);
  if (target == TruncationTarget::reduce_U) return single_target_search(poly, false, options);
  auto s = single_target_search(poly, true, options);
  auto u = single_target_search(poly, false, options);
  auto better = [](const RobustnessReport3& x, const RobustnessReport3& y) {
    if (!x.reduction_found) return false;
    return !y.reduction_found || x.value <= y.value;
  };
  RobustnessReport3 r = better(s, u) ? s : u;
  r.kind = RobustnessKind::partial_any;
  if (s.provenance && u.provenance) r.provenance->evaluated = s.provenance->evaluated + u.provenance->evaluated;
  return r;
}

}  // namespace eqrobust::equilib3d
