#include "eqrobust/geom2d.hpp"

#include <algorithm>
#include <complex>
#include <limits>
#include <numbers>

#include "eqrobust/common.hpp"

namespace eqrobust::geom2d {

namespace {

double bbox_diagonal(std::span<const Point2> pts) {
  double xmin = pts[0].x, xmax = pts[0].x, ymin = pts[0].y, ymax = pts[0].y;
  for (const auto& p : pts) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  return std::hypot(xmax - xmin, ymax - ymin);
}

double signed_area(std::span<const Point2> v) {
  double a = 0.0;
  for (std::size_t i = 0, n = v.size(); i < n; ++i) a += cross(v[i], v[(i + 1) % n]);
  return 0.5 * a;
}

// Distance of b from the chord (a, c); positive when a, b, c turn left.
double turn_height(Point2 a, Point2 b, Point2 c) {
  const Point2 chord = c - a;
  const double len = norm(chord);
  if (len == 0.0) return 0.0;
  return cross(b - a, chord) / len;
}

double dist_point_to_segment(Point2 p, Point2 a, Point2 b) {
  const Point2 ab = b - a;
  const double len2 = dot(ab, ab);
  double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return distance(p, a + t * ab);
}

double dist_point_to_body(const ConvexPolygon2& poly, Point2 p) {
  if (inner_distance(poly, p) >= 0.0) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < poly.size(); ++i) {
    best = std::min(best, dist_point_to_segment(p, poly.vertex(i), poly.vertex(i + 1)));
  }
  return best;
}

// Signed area of the triangle (origin, a, b) intersected with the disk of
// radius r about the origin.
double triangle_disk_area(Point2 a, Point2 b, double r) {
  const Point2 d = b - a;
  const double qa = dot(d, d);
  if (qa == 0.0) return 0.0;
  const double qb = 2.0 * dot(a, d);
  const double qc = dot(a, a) - r * r;
  double cuts[4] = {0.0, 0.0, 0.0, 1.0};
  int n = 1;
  const double disc = qb * qb - 4.0 * qa * qc;
  // A line that at most touches the circle leaves the whole triangle as a sector.
  if (disc <= 0.0) return 0.5 * r * r * std::atan2(cross(a, b), dot(a, b));
  const double s = std::sqrt(disc);
  const double t1 = (-qb - s) / (2.0 * qa);
  const double t2 = (-qb + s) / (2.0 * qa);
  if (t1 > 0.0 && t1 < 1.0) cuts[n++] = t1;
  if (t2 > 0.0 && t2 < 1.0) cuts[n++] = t2;
  cuts[n++] = 1.0;
  double total = 0.0;
  for (int i = 0; i + 1 < n; ++i) {
    const Point2 p = a + cuts[i] * d;
    const Point2 q = a + cuts[i + 1] * d;
    const Point2 mid = a + (0.5 * (cuts[i] + cuts[i + 1])) * d;
    if (dot(mid, mid) < r * r) {
      total += 0.5 * cross(p, q);
    } else {
      total += 0.5 * r * r * std::atan2(cross(p, q), dot(p, q));
    }
  }
  return total;
}

}  // namespace

Line2 Line2::through(Point2 a, Point2 b) {
  const Point2 d = b - a;
  const double len = norm(d);
  if (!(len > 0.0)) throw GeometryError(ErrorCode::DegenerateInput, "line through coincident points");
  return {a, (1.0 / len) * d};
}

Line2 Line2::from_normal(double theta, double offset) {
  const Point2 u{std::cos(theta), std::sin(theta)};
  return {offset * u, perp(u)};
}

double dist_point_to_line(Point2 p, const Line2& line) {
  return std::abs(cross(line.direction, p - line.origin));
}

double dist_point_to_ray(Point2 p, const Ray2& ray) {
  const double t = std::max(0.0, dot(p - ray.origin, ray.direction));
  return distance(p, ray.origin + t * ray.direction);
}

ConvexPolygon2::ConvexPolygon2(std::vector<Point2> v)
    : vertices_(std::move(v)), scale_(bbox_diagonal(vertices_)) {}

double ConvexPolygon2::eps() const { return geometric_epsilon() * scale_; }

ConvexPolygon2 ConvexPolygon2::from_points(std::span<const Point2> points) {
  if (points.size() < 3) throw GeometryError(ErrorCode::DegenerateInput, "need at least 3 points");
  for (const auto& p : points) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw GeometryError(ErrorCode::DegenerateInput, "non-finite coordinate");
    }
  }
  const double diam = bbox_diagonal(points);
  const double tol = geometric_epsilon() * diam;

  std::vector<Point2> v;
  for (const auto& p : points) {
    if (v.empty() || distance(v.back(), p) > tol) v.push_back(p);
  }
  while (v.size() > 1 && distance(v.front(), v.back()) <= tol) v.pop_back();
  if (v.size() < 3) throw GeometryError(ErrorCode::DegenerateInput, "fewer than 3 distinct points");

  bool left = false, right = false;
  for (std::size_t i = 0, n = v.size(); i < n; ++i) {
    const double h = turn_height(v[(i + n - 1) % n], v[i], v[(i + 1) % n]);
    left |= h > tol;
    right |= h < -tol;
  }
  if (left && right) throw GeometryError(ErrorCode::NonConvexInput, "turn directions are mixed");

  double a = signed_area(v);
  if (std::abs(a) <= 1e-12 * diam * diam) {
    throw GeometryError(ErrorCode::DegenerateInput, "area is zero within tolerance");
  }
  if (a < 0.0) std::reverse(v.begin(), v.end());

  // Drop vertices lying on the chord of their neighbours.
  for (bool changed = true; changed && v.size() >= 3;) {
    changed = false;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const std::size_t n = v.size();
      const Point2 prev = v[(i + n - 1) % n], cur = v[i], next = v[(i + 1) % n];
      if (std::abs(turn_height(prev, cur, next)) <= tol) {
        if (dot(cur - prev, next - cur) <= 0.0) {
          throw GeometryError(ErrorCode::NonConvexInput, "boundary folds back on itself");
        }
        v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
    }
  }
  if (v.size() < 3) throw GeometryError(ErrorCode::DegenerateInput, "collinear input");

  // A star polygon turns left everywhere but winds more than once.
  double turning = 0.0;
  for (std::size_t i = 0, n = v.size(); i < n; ++i) {
    const Point2 e0 = v[i] - v[(i + n - 1) % n];
    const Point2 e1 = v[(i + 1) % n] - v[i];
    const double ang = std::atan2(cross(e0, e1), dot(e0, e1));
    if (ang <= 0.0) throw GeometryError(ErrorCode::NonConvexInput, "reflex or straight vertex");
    turning += ang;
  }
  if (std::abs(turning - 2.0 * std::numbers::pi) > 1e-6) {
    throw GeometryError(ErrorCode::NonConvexInput, "boundary winds more than once");
  }

  const auto start = std::min_element(v.begin(), v.end(), [](Point2 p, Point2 q) {
    return p.y < q.y || (p.y == q.y && p.x < q.x);
  });
  std::rotate(v.begin(), start, v.end());
  return ConvexPolygon2(std::move(v));
}

double area(const ConvexPolygon2& poly) { return signed_area(poly.vertices()); }

double perimeter(const ConvexPolygon2& poly) {
  double p = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) p += norm(poly.edge_vector(i));
  return p;
}

Point2 centroid(const ConvexPolygon2& poly) {
  // Fan from the first vertex keeps the cross products well scaled.
  const Point2 o = poly.vertex(0);
  double a2 = 0.0;
  Point2 acc{};
  for (std::size_t i = 1; i + 1 < poly.size(); ++i) {
    const Point2 p = poly.vertex(i) - o, q = poly.vertex(i + 1) - o;
    const double c = cross(p, q);
    a2 += c;
    acc = acc + c * (p + q);
  }
  return o + (1.0 / (3.0 * a2)) * acc;
}

double inner_distance(const ConvexPolygon2& poly, Point2 q) {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point2 e = poly.edge_vector(i);
    d = std::min(d, cross(e, q - poly.vertex(i)) / norm(e));
  }
  return d;
}

bool contains_strictly(const ConvexPolygon2& poly, Point2 q) {
  return inner_distance(poly, q) > poly.eps();
}

std::pair<double, double> support_interval(const ConvexPolygon2& poly, Point2 direction) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& v : poly.vertices()) {
    const double s = dot(direction, v);
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  return {lo, hi};
}

ConvexPolygon2 regular_ngon(int sides, NgonScale scale, double size, Point2 center) {
  if (sides < 3) throw GeometryError(ErrorCode::InvalidArgument, "regular polygon needs S >= 3");
  const double step = 2.0 * std::numbers::pi / sides;
  const double radius =
      scale == NgonScale::unit_perimeter ? 1.0 / (2.0 * sides * std::sin(step / 2.0)) : size;
  if (!(radius > 0.0)) throw GeometryError(ErrorCode::InvalidArgument, "radius must be positive");
  std::vector<Point2> pts;
  pts.reserve(static_cast<std::size_t>(sides));
  for (int k = 0; k < sides; ++k) {
    pts.push_back(center + radius * Point2{std::cos(step * k), std::sin(step * k)});
  }
  return ConvexPolygon2::from_points(pts);
}

std::optional<ConvexPolygon2> clip_halfplane(const ConvexPolygon2& poly, const Line2& line,
                                             int keep_side) {
  const double tol = poly.eps();
  const double sign = keep_side >= 0 ? 1.0 : -1.0;
  const std::size_t n = poly.size();
  std::vector<double> s(n);
  bool any_out = false, any_in = false;
  for (std::size_t i = 0; i < n; ++i) {
    double d = sign * cross(line.direction, poly.vertex(i) - line.origin);
    if (std::abs(d) <= tol) d = 0.0;
    s[i] = d;
    any_out |= d < 0.0;
    any_in |= d > 0.0;
  }
  if (!any_out) return poly;
  if (!any_in) return std::nullopt;

  std::vector<Point2> out;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = (i + 1) % n;
    const Point2 p = poly.vertex(i), q = poly.vertex(j);
    if (s[i] >= 0.0) out.push_back(p);
    if ((s[i] > 0.0 && s[j] < 0.0) || (s[i] < 0.0 && s[j] > 0.0)) {
      const double t = s[i] / (s[i] - s[j]);
      out.push_back(p + t * (q - p));
    }
  }
  if (out.size() < 3) return std::nullopt;
  if (std::abs(signed_area(out)) < geometric_epsilon() * poly.scale() * poly.scale()) {
    return std::nullopt;
  }
  try {
    return ConvexPolygon2::from_points(out);
  } catch (const GeometryError& e) {
    if (e.code() == ErrorCode::DegenerateInput) return std::nullopt;
    throw;
  }
}

double area_inside_disk(const ConvexPolygon2& poly, Point2 center, double r) {
  if (!(r > 0.0)) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    total += triangle_disk_area(poly.vertex(i) - center, poly.vertex(i + 1) - center, r);
  }
  return std::abs(total);
}

double area_outside_disk(const ConvexPolygon2& poly, Point2 center, double r) {
  return std::max(0.0, area(poly) - area_inside_disk(poly, center, r));
}

double segment_strip_radius(Point2 a, Point2 b, Point2 q) {
  // Strip with unit normal n holds the disk iff <n, q-a> >= rho and
  // <n, b-q> >= rho; maximize the smaller of the two over n.
  const Point2 u = q - a, w = b - q;
  auto value = [&](Point2 n) { return std::min(dot(n, u), dot(n, w)); };
  double best = -std::numeric_limits<double>::infinity();
  if (const double lu = norm(u); lu > 0.0) best = std::max(best, value((1.0 / lu) * u));
  if (const double lw = norm(w); lw > 0.0) best = std::max(best, value((1.0 / lw) * w));
  const Point2 diff = u - w;
  if (const double ld = norm(diff); ld > 0.0) {
    const Point2 n = (1.0 / ld) * perp(diff);
    best = std::max({best, value(n), value(-1.0 * n)});
  }
  return best;
}

bool strip_cover_admits(const ConvexPolygon2& poly, Point2 q, double rho) {
  const double tol = 1e-12 * std::max(1.0, poly.scale());
  for (std::size_t i = 0; i < poly.size(); ++i) {
    if (segment_strip_radius(poly.vertex(i), poly.vertex(i + 1), q) < rho - tol) return false;
  }
  return true;
}

std::vector<Point2> convex_hull(std::vector<Point2> pts) {
  std::sort(pts.begin(), pts.end(), [](Point2 a, Point2 b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Point2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

double hausdorff_distance(const ConvexPolygon2& a, const ConvexPolygon2& b) {
  double d = 0.0;
  for (const auto& v : a.vertices()) d = std::max(d, dist_point_to_body(b, v));
  for (const auto& v : b.vertices()) d = std::max(d, dist_point_to_body(a, v));
  return d;
}

double distance_to_regular(const ConvexPolygon2& poly, Point2 center, int sides) {
  if (sides < 3 || poly.size() != static_cast<std::size_t>(sides)) {
    return std::numeric_limits<double>::infinity();
  }
  // Least-squares fit of R·exp(i(φ + 2πk/S)) to the vertices.
  std::complex<double> fit{};
  const double step = 2.0 * std::numbers::pi / sides;
  for (int k = 0; k < sides; ++k) {
    const Point2 v = poly.vertex(static_cast<std::size_t>(k)) - center;
    fit += std::complex<double>(v.x, v.y) * std::polar(1.0, -step * k);
  }
  fit /= static_cast<double>(sides);
  std::vector<Point2> pts;
  for (int k = 0; k < sides; ++k) {
    const auto z = fit * std::polar(1.0, step * k);
    pts.push_back(center + Point2{z.real(), z.imag()});
  }
  return hausdorff_distance(poly, ConvexPolygon2::from_points(pts));
}

ConvexPolygon2 random_convex_polygon(std::mt19937_64& rng, int n) {
  if (n < 3) throw GeometryError(ErrorCode::InvalidArgument, "polygon needs n >= 3");
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> stretch(0.4, 1.0);
  std::uniform_real_distribution<double> shear(-0.5, 0.5);
  const double min_gap = 0.2 / n;
  std::exponential_distribution<double> spacing(1.0);
  for (;;) {
    // Uniform angles conditioned on every gap exceeding min_gap: fixed gaps
    // plus uniform spacings of the remaining circumference.
    std::vector<double> t(static_cast<std::size_t>(n));
    double total = 0.0;
    for (auto& x : t) total += (x = spacing(rng));
    const double slack = 2.0 * std::numbers::pi - n * min_gap;
    double acc = angle(rng);
    for (auto& x : t) {
      const double gap = min_gap + slack * x / total;
      x = acc;
      acc += gap;
    }
    const double sx = stretch(rng), sy = stretch(rng), k = shear(rng);
    const double rot = angle(rng), c = std::cos(rot), s = std::sin(rot);
    std::vector<Point2> pts;
    for (double a : t) {
      const Point2 p{sx * std::cos(a) + k * std::sin(a), sy * std::sin(a)};
      pts.push_back({c * p.x - s * p.y, s * p.x + c * p.y});
    }
    try {
      auto poly = ConvexPolygon2::from_points(pts);
      if (poly.size() == static_cast<std::size_t>(n)) return poly;
    } catch (const GeometryError&) {
    }
  }
}

}  // namespace eqrobust::geom2d
