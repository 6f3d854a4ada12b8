#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "eqrobust/common.hpp"
#include "eqrobust/geom2d.hpp"
#include "oracles.hpp"

using namespace eqrobust;
using namespace eqrobust::geom2d;

namespace {

ConvexPolygon2 make(std::vector<Point2> pts) { return ConvexPolygon2::from_points(pts); }

ConvexPolygon2 unit_square() { return make({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

std::vector<Point2> verts(const ConvexPolygon2& p) { return {p.vertices().begin(), p.vertices().end()}; }

}  // namespace

TEST_CASE("polygon_new canonicalizes and validates") {
  const auto sq = unit_square();
  CHECK(sq.size() == 4);
  CHECK(sq.vertex(0) == Point2{0, 0});

  SUBCASE("clockwise input is reversed, start moved to lowest-leftmost") {
    const auto p = make({{1, 1}, {1, 0}, {0, 0}, {0, 1}});
    CHECK(p.vertex(0) == Point2{0, 0});
    CHECK(p.vertex(1) == Point2{1, 0});
  }
  SUBCASE("crossing cycle") {
    CHECK_THROWS_AS(make({{0, 0}, {1, 1}, {1, 0}, {0, 1}}), GeometryError);
    try {
      make({{0, 0}, {1, 1}, {1, 0}, {0, 1}});
    } catch (const GeometryError& e) {
      CHECK(e.code() == ErrorCode::NonConvexInput);
    }
  }
  SUBCASE("collinear points") {
    try {
      make({{0, 0}, {1, 0}, {2, 0}});
      FAIL("expected DegenerateInput");
    } catch (const GeometryError& e) {
      CHECK(e.code() == ErrorCode::DegenerateInput);
    }
  }
  SUBCASE("collinear middle vertex is dropped") {
    const auto p = make({{0, 0}, {0.5, 0}, {1, 0}, {1, 1}, {0, 1}});
    CHECK(p.size() == 4);
  }
  SUBCASE("reflex vertex") {
    CHECK_THROWS_AS(make({{0, 0}, {2, 0}, {1, 0.5}, {2, 2}, {0, 2}}), GeometryError);
  }
}

TEST_CASE("mass properties") {
  const auto sq = unit_square();
  CHECK(area(sq) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(perimeter(sq) == doctest::Approx(4.0));
  CHECK(centroid(sq).x == doctest::Approx(0.5));
  CHECK(centroid(sq).y == doctest::Approx(0.5));

  const auto tri = make({{0, 0}, {4, 0}, {0, 3}});
  CHECK(area(tri) == doctest::Approx(6.0));
  CHECK(centroid(tri).x == doctest::Approx(4.0 / 3.0));
  CHECK(centroid(tri).y == doctest::Approx(1.0));

  const auto hex = regular_ngon(6, NgonScale::circumradius, 1.0);
  CHECK(area(hex) == doctest::Approx(3.0 * std::sqrt(3.0) / 2.0).epsilon(1e-14));
  CHECK(area(hex) == doctest::Approx(2.598076211353316).epsilon(1e-14));

  // Lamina centroid differs from the vertex average for this quadrilateral.
  const auto q = make({{0, 0}, {4, 0}, {4, 1}, {0, 3}});
  const auto c = oracle::lamina_centroid(verts(q));
  CHECK(centroid(q).x == doctest::Approx(c.x).epsilon(1e-14));
  CHECK(centroid(q).y == doctest::Approx(c.y).epsilon(1e-14));
  CHECK(centroid(q).y != doctest::Approx(1.0));
}

TEST_CASE("regular_ngon") {
  const auto sq = regular_ngon(4, NgonScale::unit_perimeter);
  CHECK(norm(sq.edge_vector(0)) == doctest::Approx(0.25));
  CHECK(inner_distance(sq, {0, 0}) == doctest::Approx(0.125));

  const auto tri = regular_ngon(3, NgonScale::circumradius, 1.0);
  CHECK(norm(tri.edge_vector(0)) == doctest::Approx(std::sqrt(3.0)));

  const auto hex = regular_ngon(6, NgonScale::unit_perimeter);
  const double apothem = (1.0 / 12.0) / std::tan(std::numbers::pi / 6.0);
  CHECK(inner_distance(hex, {0, 0}) == doctest::Approx(apothem).epsilon(1e-13));
  CHECK(apothem == doctest::Approx(0.14433756729740643));

  for (int s = 3; s <= 64; ++s) {
    CHECK(perimeter(regular_ngon(s, NgonScale::unit_perimeter)) == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(regular_ngon(2, NgonScale::unit_perimeter), GeometryError);
}

TEST_CASE("clip_halfplane") {
  const auto sq = unit_square();
  // x = 0.5: normal angle 0, keep x <= 0.5.
  const auto left = clip_halfplane(sq, Line2::from_normal(0.0, 0.5), +1);
  REQUIRE(left);
  CHECK(area(*left) == doctest::Approx(0.5));

  const auto same = clip_halfplane(sq, Line2::from_normal(0.0, 3.0), +1);
  REQUIRE(same);
  CHECK(area(*same) == doctest::Approx(1.0));
  CHECK_FALSE(clip_halfplane(sq, Line2::from_normal(0.0, -1.0), +1).has_value());

  const double s = std::sqrt(0.5);
  const auto corner = clip_halfplane(sq, Line2::from_normal(std::numbers::pi / 4, 0.5 * s), +1);
  REQUIRE(corner);
  CHECK(corner->size() == 3);
  CHECK(area(*corner) == doctest::Approx(0.125));
}

TEST_CASE("clip additivity on random polygons and lines") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const auto poly = random_convex_polygon(rng, 3 + trial % 10);
    const double th = std::numbers::pi * U(rng);
    const auto [lo, hi] = support_interval(poly, {std::cos(th), std::sin(th)});
    const double off = lo + (hi - lo) * (0.05 + 0.9 * U(rng));
    const auto line = Line2::from_normal(th, off);
    const auto a = clip_halfplane(poly, line, +1);
    const auto b = clip_halfplane(poly, line, -1);
    const double A = area(poly);
    const double aa = a ? area(*a) : 0.0, ab = b ? area(*b) : 0.0;
    CHECK(std::abs(aa + ab - A) <= 1e-10 * A);
    if (a && b) {
      const Point2 ca = centroid(*a), cb = centroid(*b), c = centroid(poly);
      CHECK(std::abs(ca.x * aa + cb.x * ab - c.x * A) <= 1e-10 * poly.scale() * A);
      CHECK(std::abs(ca.y * aa + cb.y * ab - c.y * A) <= 1e-10 * poly.scale() * A);
    }
  }
}

TEST_CASE("area_outside_disk") {
  const auto sq = unit_square();
  CHECK(area_outside_disk(sq, {0.5, 0.5}, 0.0) == doctest::Approx(1.0));
  CHECK(area_outside_disk(sq, {0.5, 0.5}, 0.5) == doctest::Approx(1.0 - std::numbers::pi / 4).epsilon(1e-13));
  CHECK(area_outside_disk(sq, {0.5, 0.5}, 0.5) == doctest::Approx(0.2146018).epsilon(1e-6));
  CHECK(area_outside_disk(sq, {0.5, 0.5}, std::sqrt(0.5)) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(area_outside_disk(sq, {0.5, 0.5}, 3.0) == 0.0);

  SUBCASE("matches polar integration and is monotone") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
      const auto poly = random_convex_polygon(rng, 6);
      const Point2 c = centroid(poly);
      double prev = area(poly);
      for (double r = 0.0; r < poly.scale(); r += 0.05 * poly.scale()) {
        const double exact = area_outside_disk(poly, c, r);
        CHECK(exact <= prev + 1e-14);
        prev = exact;
        const double polar = oracle::area_outside_disk_polar(verts(poly), c, r, 200000);
        CHECK(exact == doctest::Approx(polar).epsilon(1e-6).scale(area(poly)));
      }
    }
  }
}

TEST_CASE("strip cover predicate") {
  const auto sq = regular_ngon(4, NgonScale::unit_perimeter);
  CHECK(strip_cover_admits(sq, {0, 0}, 1.0 / 8.0));
  CHECK_FALSE(strip_cover_admits(sq, {0, 0}, 0.13));
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto poly = random_convex_polygon(rng, 7);
    const Point2 c = centroid(poly);
    CHECK(strip_cover_admits(poly, c, 0.0));
    // Monotone: find the largest admitted radius on a grid; everything below admits too.
    bool seen_false = false;
    for (int k = 0; k <= 40; ++k) {
      const double rho = poly.scale() * k / 80.0;
      const bool ok = strip_cover_admits(poly, c, rho);
      if (!ok) seen_false = true;
      if (seen_false) CHECK_FALSE(ok);
    }
  }
}

TEST_CASE("segment strip radius equals half the segment at its midpoint") {
  CHECK(segment_strip_radius({0, 0}, {1, 0}, {0.5, 0}) == doctest::Approx(0.5));
  CHECK(segment_strip_radius({0, 0}, {1, 0}, {0.5, 0.3}) == doctest::Approx(0.5));
}

TEST_CASE("distances to lines and rays") {
  CHECK(dist_point_to_line({1, 1}, Line2::through({0, 0}, {1, 0})) == doctest::Approx(1.0));
  const Ray2 ray{{0, 0}, {1, 0}};
  CHECK(dist_point_to_ray({-1, 1}, ray) == doctest::Approx(std::sqrt(2.0)));
  CHECK(dist_point_to_ray({2, 1}, ray) == doctest::Approx(1.0));
}

TEST_CASE("hull and Hausdorff helpers") {
  const auto h = convex_hull({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}, {0.5, 0}});
  CHECK(h.size() == 4);
  const auto a = unit_square();
  const auto b = make({{0, 0}, {1.1, 0}, {1.1, 1}, {0, 1}});
  CHECK(hausdorff_distance(a, b) == doctest::Approx(0.1));
  CHECK(hausdorff_distance(a, a) == doctest::Approx(0.0));
  const auto reg = regular_ngon(5, NgonScale::circumradius, 2.0, {1, 1});
  CHECK(distance_to_regular(reg, {1, 1}, 5) < 1e-12);
  CHECK(distance_to_regular(a, centroid(a), 4) < 1e-12);
  CHECK(std::isinf(distance_to_regular(a, centroid(a), 5)));
}

TEST_CASE("random polygons have the requested vertex count") {
  std::mt19937_64 rng(1);
  for (int n = 3; n <= 12; ++n) CHECK(random_convex_polygon(rng, n).size() == static_cast<std::size_t>(n));
}
