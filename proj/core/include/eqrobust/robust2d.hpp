#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "eqrobust/geom2d.hpp"
#include "eqrobust/robustness.hpp"

namespace eqrobust::robust2d {

using geom2d::ConvexPolygon2;
using geom2d::Point2;

enum class CausticMode {
  full_lines,  // perpendicular lines at the vertices (default)
  rays_only,   // only the inner normal half lines
};

/// Internal robustness of a polygon: distance from p to the nearest
/// perpendicular erected at a vertex on one of its incident edges, divided
/// by the perimeter. Throws DegenerateConfiguration if any equilibrium with
/// respect to p is degenerate.
RobustnessReport2 rho_in_exact(const ConvexPolygon2& poly, Point2 p,
                               CausticMode mode = CausticMode::full_lines);

/// Number of strict local minima of z -> |z - q| on the boundary. Defined for
/// every q in the plane, which is what the sampled internal robustness needs
/// once the displaced reference point leaves the body.
int boundary_local_minima(const ConvexPolygon2& poly, Point2 q);

/// Sampled internal robustness: along `directions` evenly spaced rays from p,
/// the first displacement at which boundary_local_minima changes, located by
/// marching then bisecting to `tol` (in perimeter units).
RobustnessReport2 rho_in_sampled(const ConvexPolygon2& poly, Point2 p, int directions = 720,
                                 double tol = 1e-6);

struct ExternalSector {
  std::size_t index = 0;
  double area = 0.0;          // area of the sector K_i
  double outside_area = 0.0;  // area of K_i beyond radius r_i
  double radius = 0.0;        // r_i = max(|s_i - p|, |s_{i+1} - p|)
  bool wide = false;
};

/// The sectors of the polygon between consecutive stable points, as seen
/// from p. Sectors spanning an angle of at least π are split in two wedges
/// before clipping and reported with `wide` set.
std::vector<ExternalSector> external_sectors(const ConvexPolygon2& poly, Point2 p);

/// External robustness: min_i area(X_i) / area(poly). Requires at least three
/// nondegenerate stable points (TooFewStable, DegenerateConfiguration).
RobustnessReport2 rho_ex_exact(const ConvexPolygon2& poly, Point2 p);

/// Closed-form robustness of the regular S-gon about its centre.
double rho_regular_closed(int sides, RobustnessKind kind);

struct LineSearchOptions {
  int grid_theta = 90;
  int grid_offset = 100;
  double refine_tol = 1e-10;
  bool refine = true;
};

/// Smallest relative area removed by a single straight cut whose retained
/// piece has fewer stable points with respect to its own centroid. An upper
/// bound on full robustness; `reduction_found` is false when no cut in the
/// searched family reduces S.
RobustnessReport2 full_robustness_line_bound(const ConvexPolygon2& poly,
                                             const LineSearchOptions& options = {});

struct TruncationSample {
  double theta = 0.0;
  double offset = 0.0;
  int side = 1;
  double relative_area = 0.0;
  int piece_S = 0;
  int delta_S = 0;
  bool degenerate = false;
};

struct SweepBin {
  double lo = 0.0;
  double hi = 0.0;
  std::map<int, std::size_t> counts;  // by ΔS, non-degenerate records only
  std::size_t degenerate = 0;
  std::size_t total = 0;

  double fraction(int delta_s) const;
  double degenerate_fraction() const;
};

struct SweepResult {
  int base_S = 0;
  std::vector<TruncationSample> samples;
  std::vector<SweepBin> bins;
  int min_delta = 0;  // over non-degenerate records
  int max_delta = 0;
};

/// Cutting lines drawn from the motion-invariant measure restricted to lines
/// meeting the polygon; both pieces of each line are classified with respect
/// to their own centroids. Deterministic for a given seed and sample count.
SweepResult truncation_sweep(const ConvexPolygon2& poly, std::size_t samples,
                             std::uint64_t seed, int bins = 20);

struct AverageRobustness {
  double value = 0.0;
  std::size_t neutral = 0;
  std::size_t trials = 0;
  std::size_t degenerate = 0;
  double standard_error = 0.0;
};

/// Monte Carlo n-th order average robustness: fraction of n successive
/// random cuts (invariant measure restricted to the current piece, fair coin
/// for the retained side) after which the stable count is unchanged.
AverageRobustness average_robustness(const ConvexPolygon2& poly, int order, std::size_t samples,
                                     std::uint64_t seed);

/// Area of the regular n-gon circumscribed about the unit circle.
double dowker_area(int n);
/// a_{n-k} + a_{n+k} > 2 a_n, for n >= 3 and 0 < k < n - 2.
bool dowker_convexity_check(int n, int k);

}  // namespace eqrobust::robust2d
