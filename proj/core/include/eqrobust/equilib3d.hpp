#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "eqrobust/geom3d.hpp"
#include "eqrobust/robustness.hpp"

namespace eqrobust::equilib3d {

using geom3d::BoundingBox;
using geom3d::ConvexPolyhedron3;
using geom3d::Point3;

enum class Kind3 { stable, saddle, unstable };

struct EquilibriumPoint3 {
  Kind3 kind = Kind3::stable;
  /// Face, edge or vertex index, depending on the kind.
  std::size_t carrier = 0;
  /// Orthogonal foot of the reference point (the vertex itself when unstable).
  Point3 location;
  bool degenerate = false;
};

struct EquilibriumSet3 {
  std::vector<EquilibriumPoint3> stable;
  std::vector<EquilibriumPoint3> saddle;
  std::vector<EquilibriumPoint3> unstable;
  int S = 0;
  int H = 0;
  int U = 0;
  Point3 reference;

  bool any_degenerate() const;
};

struct EquilibriumClass {
  int S = 0;
  int U = 0;
  int H() const { return S + U - 2; }
  friend bool operator==(const EquilibriumClass&, const EquilibriumClass&) = default;
};

/// Face, edge and vertex equilibria of a polyhedron with respect to an
/// interior point. Boundary cases within tolerance are kept and flagged.
EquilibriumSet3 classify3(const ConvexPolyhedron3& poly, Point3 p);

/// S - H + U = 2. Throws DegeneratePresent if any item is flagged.
bool poincare_hopf_check(const EquilibriumSet3& set);

enum class PredicateResult { checked_true, checked_false, nonapplicable };
std::string to_string(PredicateResult result);

struct LemmaPredicates {
  /// 6b <= c  implies  U >= 2.
  PredicateResult elongation_implies_two_unstable = PredicateResult::nonapplicable;
  /// 3a < b  implies  S >= 2.
  PredicateResult flatness_implies_two_stable = PredicateResult::nonapplicable;
  int S = 0;
  int U = 0;
};

/// Evaluates both brick predicates using the classification with respect to
/// the centroid.
LemmaPredicates bounding_box_predicates(const ConvexPolyhedron3& poly, const BoundingBox& box);

/// True if along each box axis the centroid is at least a quarter of the
/// width (minus 1e-9) away from both box faces.
bool centroid_quarter_width_check(const ConvexPolyhedron3& poly, const BoundingBox& box);

enum class WallMode {
  full_strips,  // {x + t n_F : x in e, t real}
  rays_only,    // t <= 0 only: the half strip behind the face
};

struct WallDistance {
  std::size_t face = 0;
  std::size_t edge = 0;
  double distance = 0.0;
};

/// Distance from p to every wall (face, edge of that face).
std::vector<WallDistance> wall_distances(const ConvexPolyhedron3& poly, Point3 p,
                                         WallMode mode = WallMode::full_strips);

/// Nearest wall distance divided by sqrt(surface area). Throws
/// DegenerateConfiguration when the classification at p is degenerate.
RobustnessReport3 rho_in_exact_3d(const ConvexPolyhedron3& poly, Point3 p,
                                  WallMode mode = WallMode::full_strips);

/// Number of faces whose plane foot from q lies strictly inside the face.
/// Meaningful for any q, inside the body or not.
int count_stable_faces(const ConvexPolyhedron3& poly, Point3 q);

/// Per direction, the first displacement of the reference that changes
/// count_stable_faces, bracketed by marching and bisected to `tol` (in units
/// of sqrt(surface area)).
RobustnessReport3 rho_in_sampled_3d(const ConvexPolyhedron3& poly, Point3 p, int directions = 1024,
                                    double tol = 1e-6);

struct TruncatedTetraFixture {
  ConvexPolyhedron3 original;
  ConvexPolyhedron3 truncated;
  Point3 center;
  geom3d::Plane3 cut;
  EquilibriumSet3 original_set;
  EquilibriumSet3 truncated_set;
  RobustnessReport3 original_report;
  RobustnessReport3 truncated_report;
  double truncated_surface = 0.0;
  std::vector<std::string> failures;

  bool passed() const { return failures.empty(); }
};

/// Unit-surface regular tetrahedron and a small oblique cut near one vertex.
/// All checks are recorded in `failures`.
TruncatedTetraFixture example_truncated_tetra_fixture();

/// Equilibrium class of a solid ellipsoid about its centre. Throws
/// DegenerateConfiguration if two semi-axes coincide.
EquilibriumClass ellipsoid_class(double a, double b, double c);

enum class TruncationTarget { reduce_S, reduce_U, reduce_any };

struct PlaneSearchOptions {
  int normals = 256;
  int offsets = 32;
  double refine_tol = 1e-8;
  std::uint64_t seed = 1;
  bool refine = true;
  /// Best grid candidates that get refined by bisection.
  int refine_candidates = 8;
};

/// Smallest relative volume cut off by one plane such that the retained piece,
/// classified about its own centroid, has fewer stable (or unstable) points.
/// An upper bound on the corresponding partial robustness. `reduce_any`
/// returns the smaller of the two other searches.
RobustnessReport3 plane_truncation_search(const ConvexPolyhedron3& poly, TruncationTarget target,
                                          const PlaneSearchOptions& options = {});

}  // namespace eqrobust::equilib3d
