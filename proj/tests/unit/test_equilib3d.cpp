#include <doctest.h>

#include <cmath>
#include <random>

#include "eqrobust/common.hpp"
#include "eqrobust/equilib3d.hpp"
#include "eqrobust/geom3d.hpp"
#include "oracles.hpp"

using namespace eqrobust;
using namespace eqrobust::geom3d;
using namespace eqrobust::equilib3d;

namespace {

ConvexPolyhedron3 brick(double a, double b, double c) {
  std::vector<Point3> v;
  for (int i = 0; i < 8; ++i) v.push_back({a * (i & 1), b * ((i >> 1) & 1), c * ((i >> 2) & 1)});
  return hull3(v);
}

// Point-to-segment distance in 3D.
double seg_dist(Point3 q, Point3 a, Point3 b) {
  const Point3 d = b - a;
  double t = dot(q - a, d) / dot(d, d);
  t = std::clamp(t, 0.0, 1.0);
  return distance(q, a + t * d);
}

// Independent wall distance: project p onto the face plane and measure the
// distance to the edge segment inside that plane.
double wall_oracle(const ConvexPolyhedron3& poly, Point3 p) {
  double best = 1e300;
  const auto& faces = poly.faces();
  for (std::size_t f = 0; f < faces.size(); ++f) {
    const auto pl = poly.face_planes()[f];
    const Point3 foot = p - pl.signed_distance(p) * pl.normal;
    for (std::size_t j = 0; j < faces[f].size(); ++j) {
      const Point3 a = poly.vertices()[faces[f][j]], b = poly.vertices()[faces[f][(j + 1) % faces[f].size()]];
      best = std::min(best, seg_dist(foot, a, b));
    }
  }
  return best / std::sqrt(surface_area(poly));
}

}  // namespace

TEST_CASE("cube about its centre") {
  const auto cube = brick(1, 1, 1);
  const auto set = classify3(cube, {0.5, 0.5, 0.5});
  CHECK(set.S == 6);
  CHECK(set.H == 12);
  CHECK(set.U == 8);
  CHECK(poincare_hopf_check(set));
  CHECK_FALSE(set.any_degenerate());
}

TEST_CASE("platonic solids classify as their face, edge and vertex counts") {
  for (const auto s : {PlatonicSolid::tetra, PlatonicSolid::cube, PlatonicSolid::octa, PlatonicSolid::dodeca,
                       PlatonicSolid::icosa}) {
    const auto p = platonic(s);
    const auto set = classify3(p, centroid3(p));
    CHECK(static_cast<std::size_t>(set.S) == p.num_faces());
    CHECK(static_cast<std::size_t>(set.H) == p.num_edges());
    CHECK(static_cast<std::size_t>(set.U) == p.num_vertices());
  }
}

TEST_CASE("Poincare-Hopf on random hulls and reference points") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> W(0.0, 1.0);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Point3> pts;
    for (int i = 0; i < 12 + trial % 20; ++i) pts.push_back(random_unit_vector(rng));
    const auto h = hull3(pts);
    Point3 p = centroid3(h);
    if (trial % 2) {
      const auto& v = h.vertices();
      p = 0.7 * p + 0.3 * v[static_cast<std::size_t>(W(rng) * static_cast<double>(v.size())) % v.size()];
    }
    const auto set = classify3(h, p);
    if (set.any_degenerate()) {
      CHECK_THROWS_AS(poincare_hopf_check(set), GeometryError);
      continue;
    }
    ++checked;
    CHECK(set.S - set.H + set.U == 2);
    CHECK(set.S >= 1);
    CHECK(set.U >= 1);
  }
  CHECK(checked > 150);
}

TEST_CASE("classification is invariant under rigid motions and scaling") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Point3> pts;
    for (int i = 0; i < 20; ++i) pts.push_back(random_unit_vector(rng));
    const auto h = hull3(pts);
    const auto base = classify3(h, centroid3(h));
    if (base.any_degenerate()) continue;
    const auto moved = transformed(h, random_rotation(rng), 3.5, {2, 0, -1});
    const auto set = classify3(moved, centroid3(moved));
    CHECK(set.S == base.S);
    CHECK(set.H == base.H);
    CHECK(set.U == base.U);
  }
}

TEST_CASE("reference outside is rejected") {
  try {
    classify3(brick(1, 1, 1), {2, 0.5, 0.5});
    FAIL("expected ReferenceOutside");
  } catch (const GeometryError& e) {
    CHECK(e.code() == ErrorCode::ReferenceOutside);
  }
}

TEST_CASE("bounding box predicates") {
  SUBCASE("elongated brick") {
    const auto b = brick(1, 1, 7);
    const auto r = bounding_box_predicates(b, aabb(b));
    CHECK(r.elongation_implies_two_unstable == PredicateResult::checked_true);
    CHECK(r.flatness_implies_two_stable == PredicateResult::nonapplicable);
  }
  SUBCASE("flat brick") {
    const auto b = brick(1, 4, 4);
    const auto r = bounding_box_predicates(b, aabb(b));
    CHECK(r.flatness_implies_two_stable == PredicateResult::checked_true);
    CHECK(r.elongation_implies_two_unstable == PredicateResult::nonapplicable);
  }
  SUBCASE("truncated cylinder") {
    const auto cyl = truncated_cylinder(1.0, 20.0, 32);
    const auto r = bounding_box_predicates(cyl, aabb(cyl));
    CHECK(r.elongation_implies_two_unstable == PredicateResult::checked_true);
    CHECK(r.U >= 2);
  }
  SUBCASE("cube triggers neither") {
    const auto b = brick(1, 1, 1);
    const auto r = bounding_box_predicates(b, aabb(b));
    CHECK(r.flatness_implies_two_stable == PredicateResult::nonapplicable);
    CHECK(r.elongation_implies_two_unstable == PredicateResult::nonapplicable);
    CHECK(to_string(r.flatness_implies_two_stable) == "nonapplicable");
  }
  SUBCASE("random elongated and flat hulls never give checked_false") {
    std::mt19937_64 rng(77);
    int applied = 0;
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<Point3> pts;
      const double sx = trial % 2 ? 1.0 : 0.2, sz = trial % 2 ? 8.0 : 1.0;
      for (int i = 0; i < 30; ++i) {
        const Point3 u = random_unit_vector(rng);
        pts.push_back({sx * u.x, u.y, sz * u.z});
      }
      const auto h = hull3(pts);
      const auto set = classify3(h, centroid3(h));
      if (set.any_degenerate()) continue;
      const auto r = bounding_box_predicates(h, aabb(h));
      CHECK(r.elongation_implies_two_unstable != PredicateResult::checked_false);
      CHECK(r.flatness_implies_two_stable != PredicateResult::checked_false);
      applied += r.elongation_implies_two_unstable == PredicateResult::checked_true;
      applied += r.flatness_implies_two_stable == PredicateResult::checked_true;
    }
    CHECK(applied > 50);
  }
}

TEST_CASE("centroid stays a quarter width inside the box") {
  // Corner tetrahedron: centroid at exactly a quarter.
  const auto tet = hull3(std::vector<Point3>{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  CHECK(centroid_quarter_width_check(tet, aabb(tet)));
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Point3> pts;
    for (int i = 0; i < 8; ++i) pts.push_back(random_unit_vector(rng));
    const auto h = hull3(pts);
    CHECK(centroid_quarter_width_check(h, aabb(h)));
    CHECK(centroid_quarter_width_check(h, bounding_box(h, random_rotation(rng))));
  }
}

TEST_CASE("internal robustness of platonic solids") {
  const double tet = rho_in_exact_3d(platonic(PlatonicSolid::tetra), {}).value;
  const double cube = rho_in_exact_3d(platonic(PlatonicSolid::cube), {}).value;
  CHECK(cube == doctest::Approx(1.0 / (2.0 * std::sqrt(6.0))).epsilon(1e-12));
  CHECK(tet == doctest::Approx(0.219345668825).epsilon(1e-10));
  // The nearest wall of the dodecahedron is at the face inradius.
  CHECK(rho_in_exact_3d(platonic(PlatonicSolid::dodeca), {}).value == doctest::Approx(0.151458570819).epsilon(1e-10));
  for (const auto s : {PlatonicSolid::tetra, PlatonicSolid::cube, PlatonicSolid::octa, PlatonicSolid::dodeca,
                       PlatonicSolid::icosa}) {
    const auto p = platonic(s);
    const auto ex = rho_in_exact_3d(p, {});
    CHECK(ex.value == doctest::Approx(wall_oracle(p, {})).epsilon(1e-12));
    CHECK(std::holds_alternative<WallWitness>(ex.witness));
  }
}

TEST_CASE("exact walls agree with the independent oracle off-centre") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Point3> pts;
    for (int i = 0; i < 16; ++i) pts.push_back(random_unit_vector(rng));
    const auto h = hull3(pts);
    const Point3 c = centroid3(h);
    const auto set = classify3(h, c);
    if (set.any_degenerate()) continue;
    const double want = wall_oracle(h, c);
    CHECK(rho_in_exact_3d(h, c).value == doctest::Approx(want).epsilon(1e-12));
    // Rays only can only be farther.
    CHECK(rho_in_exact_3d(h, c, WallMode::rays_only).value >= want - 1e-15);
  }
}

TEST_CASE("sampled internal robustness tracks the exact value") {
  for (const auto s : {PlatonicSolid::tetra, PlatonicSolid::cube, PlatonicSolid::dodeca}) {
    const auto p = platonic(s);
    const double ex = rho_in_exact_3d(p, {}).value;
    const double sm = rho_in_sampled_3d(p, {}, 1024).value;
    CHECK(sm >= ex - 1e-6);
    CHECK(std::abs(sm - ex) <= 5e-3 * ex);
  }
}

TEST_CASE("perturbed cubes are less robust than the cube") {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> N(0.0, 0.02);
  const double cube = 1.0 / (2.0 * std::sqrt(6.0));
  int tested = 0;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Point3> pts;
    for (int i = 0; i < 8; ++i) pts.push_back({(i & 1) + N(rng), ((i >> 1) & 1) + N(rng), ((i >> 2) & 1) + N(rng)});
    const auto h = hull3(pts);
    if (h.num_vertices() != 8) continue;
    const Point3 c = centroid3(h);
    if (classify3(h, c).any_degenerate()) continue;
    CHECK(rho_in_exact_3d(h, c).value < cube);
    ++tested;
  }
  CHECK(tested > 30);
}

TEST_CASE("count_stable_faces") {
  const auto cube = brick(1, 1, 1);
  CHECK(count_stable_faces(cube, {0.5, 0.5, 0.5}) == 6);
  // Outside across one face: its foot is still inside that face, the opposite
  // face too, and the four side faces lose theirs.
  CHECK(count_stable_faces(cube, {0.5, 0.5, 3.0}) == 2);
}

TEST_CASE("truncated tetrahedron fixture") {
  const auto fx = example_truncated_tetra_fixture();
  for (const auto& f : fx.failures) INFO(f);
  CHECK(fx.passed());
  CHECK(fx.truncated.num_faces() == 5);
  CHECK(fx.truncated_set.S == fx.original_set.S);
  CHECK(fx.truncated_set.U == fx.original_set.U);
  CHECK(fx.truncated_surface < 1.0);
  CHECK(fx.truncated_report.value > fx.original_report.value);
}

TEST_CASE("ellipsoid classes") {
  CHECK(ellipsoid_class(1, 2, 3) == EquilibriumClass{2, 2});
  CHECK(ellipsoid_class(3, 1, 2).H() == 2);
  for (const auto& abc : {std::array<double, 3>{1, 1, 2}, {2, 1, 2}, {1, 1, 1}}) {
    try {
      ellipsoid_class(abc[0], abc[1], abc[2]);
      FAIL("expected DegenerateConfiguration");
    } catch (const GeometryError& e) {
      CHECK(e.code() == ErrorCode::DegenerateConfiguration);
    }
  }
  // A fine mesh of a generic ellipsoid agrees on the unstable count.
  const auto mesh = ellipsoid_mesh(1.0, 1.7, 2.9, 4000);
  const auto set = classify3(mesh, centroid3(mesh));
  CHECK(set.U >= 2);
}

TEST_CASE("plane truncation search") {
  const auto cube = platonic(PlatonicSolid::cube);
  PlaneSearchOptions coarse;
  coarse.normals = 64;
  coarse.offsets = 16;
  const auto s = plane_truncation_search(cube, TruncationTarget::reduce_S, coarse);
  REQUIRE(s.reduction_found);
  CHECK(s.upper_bound);
  CHECK(s.method == Method::search);
  CHECK(s.value > 0.0);
  CHECK(s.value < 0.5);

  SUBCASE("witness reproduces the cut") {
    const auto& w = std::get<PlaneWitness>(s.witness);
    const Plane3 pl{{w.normal[0], w.normal[1], w.normal[2]}, w.offset};
    const auto piece = clip_halfspace3(cube, pl, w.side);
    REQUIRE(piece);
    CHECK(1.0 - volume(*piece) / volume(cube) == doctest::Approx(s.value).epsilon(1e-9));
    const auto set = classify3(*piece, centroid3(*piece));
    CHECK(set.S < 6);
    CHECK(set.S == w.piece_S);
  }

  SUBCASE("finer grids agree") {
    PlaneSearchOptions fine = coarse;
    fine.normals = 256;
    fine.offsets = 32;
    const auto f = plane_truncation_search(cube, TruncationTarget::reduce_S, fine);
    CHECK(std::abs(f.value - s.value) <= 1e-2);
  }

  SUBCASE("reduce_any is the smaller of the two") {
    const auto u = plane_truncation_search(cube, TruncationTarget::reduce_U, coarse);
    const auto a = plane_truncation_search(cube, TruncationTarget::reduce_any, coarse);
    double want = s.value;
    if (u.reduction_found) want = std::min(want, u.value);
    CHECK(a.value == want);
    REQUIRE(a.provenance);
    REQUIRE(s.provenance);
    CHECK(a.provenance->evaluated >= s.provenance->evaluated);
  }

  SUBCASE("deterministic for a fixed seed") {
    const auto again = plane_truncation_search(cube, TruncationTarget::reduce_S, coarse);
    CHECK(again.value == s.value);
  }
}
