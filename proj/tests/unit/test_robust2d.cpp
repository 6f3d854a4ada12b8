#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "eqrobust/common.hpp"
#include "eqrobust/equilib2d.hpp"
#include "eqrobust/robust2d.hpp"
#include "oracles.hpp"

using namespace eqrobust;
using namespace eqrobust::geom2d;
using namespace eqrobust::robust2d;

namespace {

ConvexPolygon2 make(std::vector<Point2> pts) { return ConvexPolygon2::from_points(pts); }
ConvexPolygon2 unit_square() { return make({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }
std::vector<Point2> verts(const ConvexPolygon2& p) { return {p.vertices().begin(), p.vertices().end()}; }

}  // namespace

TEST_CASE("closed forms") {
  CHECK(rho_regular_closed(3, RobustnessKind::internal) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(rho_regular_closed(12, RobustnessKind::internal) == doctest::Approx(1.0 / 24.0).epsilon(1e-15));
  CHECK(rho_regular_closed(4, RobustnessKind::external) ==
        doctest::Approx((1.0 - std::numbers::pi / 4.0) / 4.0).epsilon(1e-15));
  CHECK(rho_regular_closed(4, RobustnessKind::external) == doctest::Approx(0.05365045915063791).epsilon(1e-14));
  CHECK(rho_regular_closed(6, RobustnessKind::external) == doctest::Approx(0.01551671964714852).epsilon(1e-14));
  CHECK(rho_regular_closed(3, RobustnessKind::external) == doctest::Approx(0.13180007064064242).epsilon(1e-14));
  CHECK_THROWS_AS(rho_regular_closed(2, RobustnessKind::internal), GeometryError);
}

TEST_CASE("internal robustness, exact") {
  for (int s = 3; s <= 12; ++s) {
    const auto r = rho_in_exact(regular_ngon(s, NgonScale::unit_perimeter), {0, 0});
    CHECK(r.value == doctest::Approx(1.0 / (2.0 * s)).epsilon(1e-12));
    CHECK(r.method == Method::exact);
    CHECK(std::holds_alternative<CausticWitness>(r.witness));
  }
  const auto rect = make({{0, 0}, {3, 0}, {3, 1}, {0, 1}});
  CHECK(rho_in_exact(rect, {1.5, 0.5}).value == doctest::Approx(0.0625));
  CHECK(rho_in_exact(unit_square(), {0.6, 0.5}).value == doctest::Approx(0.1));
  // Both modes agree when the nearest perpendicular is hit on its inner part.
  CHECK(rho_in_exact(unit_square(), {0.6, 0.5}, CausticMode::rays_only).value == doctest::Approx(0.1));
}

TEST_CASE("internal robustness, sampled oracle") {
  const auto pent = regular_ngon(5, NgonScale::unit_perimeter);
  CHECK(rho_in_sampled(pent, {0, 0}).value == doctest::Approx(0.1).epsilon(2e-3));
  CHECK(rho_in_sampled(unit_square(), {0.5, 0.5}).value == doctest::Approx(0.125).epsilon(2e-3));

  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const auto poly = random_convex_polygon(rng, 4 + trial % 8);
    const Point2 c = centroid(poly);
    RobustnessReport ex;
    try {
      ex = rho_in_exact(poly, c);
    } catch (const GeometryError&) {
      continue;
    }
    const auto sm = rho_in_sampled(poly, c, 720, 1e-6);
    CHECK(sm.value >= ex.value - 1e-6);
    CHECK(std::abs(sm.value - ex.value) <= std::max(2e-6, 5e-3 * ex.value));
  }
}

TEST_CASE("boundary local minima agree with the equilibrium count inside") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const auto poly = random_convex_polygon(rng, 6);
    const auto c = centroid(poly);
    CHECK(boundary_local_minima(poly, c) == equilib2d::equilibria(poly, c).S);
  }
  // Far outside: the near edge and the far edge each hold a local minimum.
  CHECK(boundary_local_minima(unit_square(), {10.0, 0.5}) == 2);
  CHECK(boundary_local_minima(unit_square(), {10.0, 10.0}) == 1);
}

TEST_CASE("external robustness") {
  for (int s = 3; s <= 12; ++s) {
    const auto r = rho_ex_exact(regular_ngon(s, NgonScale::unit_perimeter), {0, 0});
    CHECK(std::abs(r.value - oracle::rho_ex_regular(s)) <= 1e-9);
  }
  // Corner sector minus a quarter disk of radius 1/2.
  CHECK(rho_ex_exact(unit_square(), {0.5, 0.5}).value ==
        doctest::Approx(0.25 - std::numbers::pi / 16.0).epsilon(1e-12));

  SUBCASE("sectors partition the polygon; non-regular bodies fall below the closed form") {
    std::mt19937_64 rng(8);
    int tested = 0;
    for (int trial = 0; trial < 200; ++trial) {
      const auto poly = random_convex_polygon(rng, 5 + trial % 8);
      const auto c = centroid(poly);
      const auto set = equilib2d::equilibria(poly, c);
      if (set.any_degenerate() || set.S < 3) continue;
      double sum = 0.0;
      for (const auto& s : external_sectors(poly, c)) sum += s.area;
      CHECK(std::abs(sum - area(poly)) <= 1e-10 * area(poly));
      CHECK(rho_ex_exact(poly, c).value < rho_regular_closed(set.S, RobustnessKind::external));
      ++tested;
    }
    CHECK(tested > 50);
  }

  SUBCASE("value is the smallest sector outside area") {
    std::mt19937_64 rng(9);
    const auto poly = random_convex_polygon(rng, 9);
    const auto c = centroid(poly);
    const auto sectors = external_sectors(poly, c);
    const auto r = rho_ex_exact(poly, c);
    double best = 1e300;
    for (const auto& s : sectors) best = std::min(best, s.outside_area);
    CHECK(r.value == doctest::Approx(best / area(poly)).epsilon(1e-14));
  }

  SUBCASE("too few stable points") {
    const auto tri = make({{0, 0}, {1, 0}, {0.9, 0.1}});
    try {
      rho_ex_exact(tri, centroid(tri));
      FAIL("expected TooFewStable");
    } catch (const GeometryError& e) {
      CHECK(e.code() == ErrorCode::TooFewStable);
    }
  }
}

TEST_CASE("strip cover of the internal robustness disk") {
  std::mt19937_64 rng(12);
  int tested = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto poly = random_convex_polygon(rng, 4 + trial % 9);
    const auto c = centroid(poly);
    const auto set = equilib2d::equilibria(poly, c);
    if (set.any_degenerate() || set.U < 3) continue;
    std::vector<Point2> tips;
    for (const auto& e : set.points) {
      if (e.kind == equilib2d::Kind::unstable) tips.push_back(e.location);
    }
    const auto hull = ConvexPolygon2::from_points(tips);
    const double radius = rho_in_exact(poly, c).value * perimeter(poly);
    CHECK(strip_cover_admits(hull, c, radius));
    ++tested;
  }
  CHECK(tested > 30);
}

TEST_CASE("full robustness line bound") {
  const auto sq = unit_square();
  const auto r = full_robustness_line_bound(sq);
  REQUIRE(r.reduction_found);
  CHECK(r.upper_bound);
  CHECK(r.method == Method::search);
  CHECK(r.provenance.has_value());
  const double grid = oracle::line_bound_grid(verts(sq), 900, 1000);
  CHECK(std::abs(r.value - grid) <= 1e-3 * grid);

  SUBCASE("witness reproduces the value") {
    const auto& w = std::get<CutLineWitness>(r.witness);
    const auto piece = clip_halfplane(sq, Line2::from_normal(w.theta, w.offset), w.side);
    REQUIRE(piece);
    CHECK(1.0 - area(*piece) == doctest::Approx(r.value).epsilon(1e-12));
    CHECK(w.piece_S < 4);
  }
  SUBCASE("regular triangle has a finite bound") {
    const auto t = full_robustness_line_bound(regular_ngon(3, NgonScale::unit_perimeter));
    CHECK(t.reduction_found);
    CHECK(std::isfinite(t.value));
  }
  SUBCASE("nested grids give nonincreasing values") {
    double prev = 1e300;
    for (int k : {1, 2, 4}) {
      LineSearchOptions o;
      o.grid_theta = 30 * k;
      o.grid_offset = 40 * k;
      o.refine = false;
      const double v = full_robustness_line_bound(sq, o).value;
      CHECK(v <= prev);
      prev = v;
    }
  }
}

TEST_CASE("truncation sweep") {
  const auto sq = unit_square();
  SUBCASE("one line gives two complementary records") {
    const auto s = truncation_sweep(sq, 1, 1);
    REQUIRE(s.samples.size() == 2);
    CHECK(s.samples[0].relative_area + s.samples[1].relative_area == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("bins, categories and determinism") {
    const auto a = truncation_sweep(sq, 20000, 7);
    const auto b = truncation_sweep(sq, 20000, 7);
    REQUIRE(a.samples.size() == b.samples.size());
    bool identical = true;
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
      identical &= a.samples[i].theta == b.samples[i].theta && a.samples[i].offset == b.samples[i].offset &&
                   a.samples[i].relative_area == b.samples[i].relative_area &&
                   a.samples[i].delta_S == b.samples[i].delta_S;
    }
    CHECK(identical);
    CHECK(a.min_delta >= -1);
    CHECK(a.max_delta <= 1);
    for (const auto& bin : a.bins) {
      if (bin.total == 0) continue;
      double sum = bin.degenerate_fraction();
      for (const auto& [d, n] : bin.counts) sum += bin.fraction(d);
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  SUBCASE("corner triangles have three stable points") {
    const auto s = truncation_sweep(sq, 5000, 3);
    int triangles = 0;
    for (const auto& rec : s.samples) {
      const auto piece = clip_halfplane(sq, Line2::from_normal(rec.theta, rec.offset), rec.side);
      if (!piece || piece->size() != 3 || rec.degenerate) continue;
      ++triangles;
      CHECK(rec.piece_S == 3);
      CHECK(oracle::stable_count(verts(*piece), oracle::lamina_centroid(verts(*piece))) == 3);
    }
    CHECK(triangles > 100);
  }
}

TEST_CASE("average robustness") {
  const auto sq = unit_square();
  const std::size_t n = 20000;
  const auto a1 = average_robustness(sq, 1, n, 5);
  const auto sweep = truncation_sweep(sq, n, 6);
  std::size_t neutral = 0, valid = 0;
  for (const auto& s : sweep.samples) {
    if (s.degenerate) continue;
    ++valid;
    neutral += s.delta_S == 0;
  }
  const double p = static_cast<double>(neutral) / static_cast<double>(valid);
  const double sigma = std::sqrt(p * (1 - p) / static_cast<double>(n));
  CHECK(std::abs(a1.value - p) <= 3.0 * (sigma + a1.standard_error));

  const auto a2 = average_robustness(sq, 2, n, 5);
  CHECK(a2.value <= a1.value + 3.0 * (a1.standard_error + a2.standard_error));
  CHECK_THROWS_AS(average_robustness(sq, 1, 0, 5), GeometryError);

  const auto again = average_robustness(sq, 2, n, 5);
  CHECK(again.value == a2.value);
}

TEST_CASE("Dowker sequence") {
  CHECK(dowker_area(4) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(dowker_area(6) == doctest::Approx(3.4641016151377544).epsilon(1e-15));
  CHECK(dowker_convexity_check(6, 2));
  CHECK_THROWS_AS(dowker_convexity_check(6, 4), GeometryError);
  CHECK_THROWS_AS(dowker_convexity_check(2, 1), GeometryError);
}
