#include "eqrobust/robust2d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "eqrobust/common.hpp"
#include "eqrobust/equilib2d.hpp"
#include "parallel.hpp"

namespace eqrobust::robust2d {

using geom2d::cross;
using geom2d::dot;
using geom2d::Line2;
using geom2d::norm;
using geom2d::perp;

namespace {

constexpr double kPi = std::numbers::pi;

struct PieceOutcome {
  double relative_area = 0.0;
  int S = 0;
  bool degenerate = true;
};

// Classification of one side of a cut with respect to the piece's centroid.
PieceOutcome evaluate_piece(const ConvexPolygon2& poly, double total_area, const Line2& line,
                            int side) {
  PieceOutcome out;
  const auto piece = geom2d::clip_halfplane(poly, line, side);
  if (!piece) return out;
  out.relative_area = geom2d::area(*piece) / total_area;
  try {
    const auto set = equilib2d::equilibria(*piece, geom2d::centroid(*piece));
    out.S = set.S;
    out.degenerate = set.any_degenerate();
  } catch (const GeometryError&) {
    out.degenerate = true;
  }
  return out;
}

equilib2d::EquilibriumSet2 nondegenerate_equilibria(const ConvexPolygon2& poly, Point2 p) {
  auto set = equilib2d::equilibria(poly, p);
  if (set.any_degenerate()) {
    throw GeometryError(ErrorCode::DegenerateConfiguration,
                        "degenerate equilibrium with respect to the reference point");
  }
  return set;
}

}  // namespace

RobustnessReport2 rho_in_exact(const ConvexPolygon2& poly, Point2 p, CausticMode mode) {
  nondegenerate_equilibria(poly, p);
  const std::size_t n = poly.size();
  double best = std::numeric_limits<double>::infinity();
  CausticWitness witness{0, 0, mode == CausticMode::rays_only};
  for (std::size_t v = 0; v < n; ++v) {
    const Point2 vertex = poly.vertex(v);
    for (const std::size_t e : {(v + n - 1) % n, v}) {
      const Point2 edge = poly.edge_vector(e);
      const Point2 inward = (1.0 / norm(edge)) * perp(edge);
      const double d = mode == CausticMode::full_lines
                           ? geom2d::dist_point_to_line(p, Line2{vertex, inward})
                           : geom2d::dist_point_to_ray(p, geom2d::Ray2{vertex, inward});
      if (d < best) {
        best = d;
        witness.vertex = v;
        witness.edge = e;
      }
    }
  }
  RobustnessReport2 r;
  r.kind = RobustnessKind::internal;
  r.value = best / geom2d::perimeter(poly);
  r.method = Method::exact;
  r.witness = witness;
  return r;
}

int boundary_local_minima(const ConvexPolygon2& poly, Point2 q) {
  const std::size_t n = poly.size();
  int count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = poly.vertex(i);
    const Point2 e = poly.edge_vector(i);
    const double t = dot(q - a, e);
    if (t > 0.0 && t < dot(e, e)) ++count;  // interior foot on edge i
    // Vertex minimum: distance grows along both incident edges.
    const Point2 out_prev = poly.vertex(i + n - 1) - a;
    if (dot(a - q, e) > 0.0 && dot(a - q, out_prev) > 0.0) ++count;
  }
  return count;
}

RobustnessReport2 rho_in_sampled(const ConvexPolygon2& poly, Point2 p, int directions,
                                 double tol) {
  if (directions < 1 || !(tol > 0.0)) {
    throw GeometryError(ErrorCode::InvalidArgument, "need directions >= 1 and tol > 0");
  }
  const double perim = geom2d::perimeter(poly);
  const int base = boundary_local_minima(poly, p);
  const double step = 1e-3 * perim;
  const double reach = 4.0 * poly.scale();

  std::vector<double> first_change(static_cast<std::size_t>(directions),
                                   std::numeric_limits<double>::infinity());
  detail::parallel_for(first_change.size(), [&](std::size_t k) {
    const double phi = 2.0 * kPi * static_cast<double>(k) / directions;
    const Point2 u{std::cos(phi), std::sin(phi)};
    auto changed = [&](double t) { return boundary_local_minima(poly, p + t * u) != base; };
    double lo = 0.0, hi = step;
    while (hi <= reach && !changed(hi)) {
      lo = hi;
      hi += step;
    }
    if (hi > reach) return;
    while (hi - lo > tol * perim) {
      const double mid = 0.5 * (lo + hi);
      (changed(mid) ? hi : lo) = mid;
    }
    first_change[k] = 0.5 * (lo + hi);
  });

  const auto it = std::min_element(first_change.begin(), first_change.end());
  const double phi = 2.0 * kPi * static_cast<double>(it - first_change.begin()) / directions;
  RobustnessReport2 r;
  r.kind = RobustnessKind::internal;
  r.value = *it / perim;
  r.method = Method::sampled;
  r.witness = DirectionWitness{{std::cos(phi), std::sin(phi), 0.0}};
  return r;
}

std::vector<ExternalSector> external_sectors(const ConvexPolygon2& poly, Point2 p) {
  const auto set = nondegenerate_equilibria(poly, p);
  std::vector<Point2> feet;
  for (const auto& e : set.points) {
    if (e.kind == equilib2d::Kind::stable) feet.push_back(e.location);
  }
  const std::size_t m = feet.size();
  std::vector<ExternalSector> sectors;
  for (std::size_t i = 0; i < m; ++i) {
    const Point2 a = feet[i] - p;
    const Point2 b = feet[(i + 1) % m] - p;
    double angle = std::atan2(cross(a, b), dot(a, b));
    if (angle <= 0.0) angle += 2.0 * kPi;
    if (m == 1) angle = 2.0 * kPi;

    ExternalSector sector;
    sector.index = i;
    sector.radius = std::max(norm(a), norm(b));
    sector.wide = angle >= kPi;

    // Wedges from direction `from` counterclockwise to `to`, each below π.
    std::vector<std::pair<Point2, Point2>> wedges;
    if (sector.wide) {
      const double half = 0.5 * angle;
      const double c = std::cos(half), s = std::sin(half);
      const Point2 mid{c * a.x - s * a.y, s * a.x + c * a.y};
      wedges = {{a, mid}, {mid, b}};
    } else {
      wedges = {{a, b}};
    }
    for (const auto& [from, to] : wedges) {
      auto piece = geom2d::clip_halfplane(poly, Line2::through(p, p + from), +1);
      if (piece) piece = geom2d::clip_halfplane(*piece, Line2::through(p, p + to), -1);
      if (!piece) continue;
      sector.area += geom2d::area(*piece);
      sector.outside_area += geom2d::area_outside_disk(*piece, p, sector.radius);
    }
    sectors.push_back(sector);
  }
  return sectors;
}

RobustnessReport2 rho_ex_exact(const ConvexPolygon2& poly, Point2 p) {
  const auto set = nondegenerate_equilibria(poly, p);
  if (set.S < 3) {
    throw GeometryError(ErrorCode::TooFewStable, "external robustness needs at least 3 stable points");
  }
  const auto sectors = external_sectors(poly, p);
  const auto best = std::min_element(sectors.begin(), sectors.end(), [](const auto& x, const auto& y) {
    return x.outside_area < y.outside_area;
  });
  RobustnessReport2 r;
  r.kind = RobustnessKind::external;
  r.value = best->outside_area / geom2d::area(poly);
  r.method = Method::exact;
  r.witness = SectorWitness{best->index, best->radius, best->wide};
  return r;
}

double rho_regular_closed(int sides, RobustnessKind kind) {
  if (sides < 3) throw GeometryError(ErrorCode::InvalidArgument, "closed forms need S >= 3");
  const double s = static_cast<double>(sides);
  switch (kind) {
    case RobustnessKind::internal:
      return 1.0 / (2.0 * s);
    case RobustnessKind::external: {
      const double t = std::tan(kPi / s);
      return (t - kPi / s) / (s * t);
    }
    default:
      throw GeometryError(ErrorCode::InvalidArgument, "closed form exists for internal and external only");
  }
}

RobustnessReport2 full_robustness_line_bound(const ConvexPolygon2& poly,
                                             const LineSearchOptions& options) {
  if (options.grid_theta < 1 || options.grid_offset < 2 || !(options.refine_tol > 0.0)) {
    throw GeometryError(ErrorCode::InvalidArgument, "invalid line search grid");
  }
  const double total = geom2d::area(poly);
  const int base_S = nondegenerate_equilibria(poly, geom2d::centroid(poly)).S;

  struct Candidate {
    double removed = std::numeric_limits<double>::infinity();
    double theta = 0.0, offset = 0.0;
    int side = 1, piece_S = 0;
  };
  struct Probe {
    bool reduced = false;
    double removed = 0.0;
    int S = 0;
  };

  auto probe = [&](double theta, double offset, int side) {
    const auto o = evaluate_piece(poly, total, Line2::from_normal(theta, offset), side);
    Probe pr;
    pr.reduced = !o.degenerate && o.S < base_S;
    pr.removed = 1.0 - o.relative_area;
    pr.S = o.S;
    return pr;
  };

  // Best cut at a fixed angle and side. Removal decreases monotonically as
  // the offset moves towards the far support line, so every switch from a
  // reducing grid point to a non-reducing neighbour brackets a local optimum.
  auto best_at = [&](double theta, int side, std::size_t& evaluated) {
    const Point2 u{std::cos(theta), std::sin(theta)};
    const auto [lo, hi] = geom2d::support_interval(poly, u);
    const double width = hi - lo;
    const int n = options.grid_offset;
    std::vector<double> offsets;
    for (int j = 1; j < n; ++j) offsets.push_back(lo + width * j / n);
    if (side < 0) std::reverse(offsets.begin(), offsets.end());  // least removal last
    const double far_end = side > 0 ? hi : lo;

    Candidate best;
    auto consider = [&](double d, const Probe& pr) {
      if (pr.reduced && pr.removed < best.removed) best = {pr.removed, theta, d, side, pr.S};
    };
    std::vector<Probe> probes;
    for (double d : offsets) {
      probes.push_back(probe(theta, d, side));
      ++evaluated;
      consider(d, probes.back());
    }
    if (!options.refine) return best;
    for (std::size_t j = 0; j < offsets.size(); ++j) {
      if (!probes[j].reduced) continue;
      if (j + 1 < offsets.size() && probes[j + 1].reduced) continue;
      double good = offsets[j];
      double bad = j + 1 < offsets.size() ? offsets[j + 1] : far_end;
      Probe good_probe = probes[j];
      for (int it = 0; it < 200 && std::abs(bad - good) > options.refine_tol * width; ++it) {
        const double mid = 0.5 * (good + bad);
        const Probe pr = probe(theta, mid, side);
        ++evaluated;
        if (pr.reduced) {
          good = mid;
          good_probe = pr;
        } else {
          bad = mid;
        }
      }
      consider(good, good_probe);
    }
    return best;
  };

  const int gt = options.grid_theta;
  std::vector<Candidate> per_theta(static_cast<std::size_t>(2 * gt));
  std::vector<std::size_t> counts(per_theta.size(), 0);
  detail::parallel_for(per_theta.size(), [&](std::size_t k) {
    const double theta = kPi * static_cast<double>(k / 2) / gt;
    per_theta[k] = best_at(theta, k % 2 == 0 ? 1 : -1, counts[k]);
  });
  std::size_t evaluated = 0;
  Candidate best;
  for (std::size_t k = 0; k < per_theta.size(); ++k) {
    evaluated += counts[k];
    if (per_theta[k].removed < best.removed) best = per_theta[k];
  }

  if (options.refine && std::isfinite(best.removed)) {
    // Zoom in on the best angle.
    double window = kPi / gt;
    for (int round = 0; round < 4; ++round) {
      const double centre = best.theta;
      for (int i = -10; i <= 10; ++i) {
        if (i == 0) continue;
        const auto c = best_at(centre + window * i / 10.0, best.side, evaluated);
        if (c.removed < best.removed) best = c;
      }
      window /= 10.0;
    }
  }

  RobustnessReport2 r;
  r.kind = RobustnessKind::full_line_bound;
  r.method = Method::search;
  r.upper_bound = true;
  r.provenance = SearchProvenance{gt, options.grid_offset, options.refine_tol, evaluated};
  if (!std::isfinite(best.removed)) {
    r.reduction_found = false;
    r.value = std::numeric_limits<double>::quiet_NaN();
    return r;
  }
  // Keep θ in [0, π) by flipping the line orientation.
  double theta = std::fmod(best.theta, 2.0 * kPi);
  if (theta < 0.0) theta += 2.0 * kPi;
  double offset = best.offset;
  int side = best.side;
  if (theta >= kPi) {
    theta -= kPi;
    offset = -offset;
    side = -side;
  }
  r.value = best.removed;
  r.witness = CutLineWitness{theta, offset, side, best.piece_S};
  return r;
}

double SweepBin::fraction(int delta_s) const {
  if (total == 0) return 0.0;
  const auto it = counts.find(delta_s);
  return it == counts.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(total);
}

double SweepBin::degenerate_fraction() const {
  return total == 0 ? 0.0 : static_cast<double>(degenerate) / static_cast<double>(total);
}

SweepResult truncation_sweep(const ConvexPolygon2& poly, std::size_t samples, std::uint64_t seed,
                             int bins) {
  if (samples < 1 || bins < 1) {
    throw GeometryError(ErrorCode::InvalidArgument, "sweep needs samples >= 1 and bins >= 1");
  }
  const double total = geom2d::area(poly);
  SweepResult result;
  result.base_S = nondegenerate_equilibria(poly, geom2d::centroid(poly)).S;
  result.samples.resize(2 * samples);

  detail::parallel_for(samples, [&](std::size_t i) {
    CounterRng rng(seed, 1, i);
    const double theta = kPi * rng.uniform();
    const auto [lo, hi] = geom2d::support_interval(poly, {std::cos(theta), std::sin(theta)});
    const double offset = rng.uniform(lo, hi);
    const Line2 line = Line2::from_normal(theta, offset);
    const auto plus = evaluate_piece(poly, total, line, +1);
    const auto minus = evaluate_piece(poly, total, line, -1);
    // A sliver side has no polygon to measure; take it from its complement.
    double ra_plus = plus.relative_area, ra_minus = minus.relative_area;
    if (ra_plus == 0.0) ra_plus = 1.0 - ra_minus;
    if (ra_minus == 0.0) ra_minus = 1.0 - ra_plus;
    result.samples[2 * i] = {theta, offset, +1, ra_plus, plus.S, plus.S - result.base_S,
                             plus.degenerate};
    result.samples[2 * i + 1] = {theta, offset, -1, ra_minus, minus.S,
                                 minus.S - result.base_S, minus.degenerate};
  });

  result.bins.resize(static_cast<std::size_t>(bins));
  for (int b = 0; b < bins; ++b) {
    result.bins[static_cast<std::size_t>(b)].lo = static_cast<double>(b) / bins;
    result.bins[static_cast<std::size_t>(b)].hi = static_cast<double>(b + 1) / bins;
  }
  bool first = true;
  for (const auto& s : result.samples) {
    const int b = std::clamp(static_cast<int>(std::floor(s.relative_area * bins)), 0, bins - 1);
    auto& bin = result.bins[static_cast<std::size_t>(b)];
    ++bin.total;
    if (s.degenerate) {
      ++bin.degenerate;
      continue;
    }
    ++bin.counts[s.delta_S];
    result.min_delta = first ? s.delta_S : std::min(result.min_delta, s.delta_S);
    result.max_delta = first ? s.delta_S : std::max(result.max_delta, s.delta_S);
    first = false;
  }
  return result;
}

AverageRobustness average_robustness(const ConvexPolygon2& poly, int order, std::size_t samples,
                                     std::uint64_t seed) {
  if (order < 1 || samples < 1) {
    throw GeometryError(ErrorCode::InvalidArgument, "average robustness needs n >= 1 and samples >= 1");
  }
  const int base_S = nondegenerate_equilibria(poly, geom2d::centroid(poly)).S;
  // 0 = neutral, 1 = changed class, 2 = degenerate
  std::vector<unsigned char> outcome(samples, 1);
  detail::parallel_for(samples, [&](std::size_t i) {
    CounterRng rng(seed, 2, i);
    std::optional<ConvexPolygon2> current = poly;
    for (int cut = 0; cut < order; ++cut) {
      const double theta = kPi * rng.uniform();
      const auto [lo, hi] = geom2d::support_interval(*current, {std::cos(theta), std::sin(theta)});
      const double offset = rng.uniform(lo, hi);
      const int side = rng.uniform() < 0.5 ? 1 : -1;
      current = geom2d::clip_halfplane(*current, Line2::from_normal(theta, offset), side);
      if (!current) {
        outcome[i] = 2;
        return;
      }
    }
    try {
      const auto set = equilib2d::equilibria(*current, geom2d::centroid(*current));
      if (set.any_degenerate()) {
        outcome[i] = 2;
      } else {
        outcome[i] = set.S == base_S ? 0 : 1;
      }
    } catch (const GeometryError&) {
      outcome[i] = 2;
    }
  });

  AverageRobustness r;
  r.trials = samples;
  for (auto o : outcome) {
    r.neutral += o == 0;
    r.degenerate += o == 2;
  }
  r.value = static_cast<double>(r.neutral) / static_cast<double>(samples);
  r.standard_error = std::sqrt(r.value * (1.0 - r.value) / static_cast<double>(samples));
  return r;
}

double dowker_area(int n) {
  if (n < 3) throw GeometryError(ErrorCode::InvalidArgument, "a_n needs n >= 3");
  return n * std::tan(kPi / n);
}

bool dowker_convexity_check(int n, int k) {
  if (n < 3 || k <= 0 || k >= n - 2) {
    throw GeometryError(ErrorCode::InvalidArgument, "need n >= 3 and 0 < k < n - 2");
  }
  return dowker_area(n - k) + dowker_area(n + k) > 2.0 * dowker_area(n);
}

}  // namespace eqrobust::robust2d
