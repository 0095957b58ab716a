#pragma once

#include <vector>

#include "geomonge/disintegration.hpp"
#include "geomonge/rays.hpp"

namespace geomonge {

/// Per-ray tables over the intervals between consecutive ray params
/// (a ray with k params has k-1 interval cells).
using RayIntervalTable = std::vector<std::vector<double>>;

/// One-dimensional current along the rays: a coefficient per interval
/// cell, weighted by the quotient measure. Acting on a pair of
/// per-point tables (h, w) it sums coeff * h(left point) * forward
/// difference of w, so integration by parts telescopes exactly.
struct DiscreteCurrent {
  std::vector<double> m;  // quotient weight per ray
  RayIntervalTable coeff;
  std::vector<std::vector<int>> points;     // ray chains
  std::vector<std::vector<double>> params;  // ray params
  int n = 0;

  double action(const std::vector<double>& h, const std::vector<double>& w) const;
};

/// Signed point measure, dense over the space.
using SignedMeasure = std::vector<double>;

/// Flow current of a background family: coefficients are the family's
/// densities sampled at the left param of each interval.
/// Throws MISSING_DENSITY.
DiscreteCurrent build_current(const RaySystem& rs, const ConditionalFamily& eta);

struct BoundaryResult {
  SignedMeasure measure;
  double total_variation = 0.0;
};

/// Backward differences of the coefficients with explicit jumps at both
/// ray ends, pushed to the ray points and weighted by m.
BoundaryResult boundary(const DiscreteCurrent& current);

struct TransportEquationResult {
  DiscreteCurrent U;       // coefficients F - H per interval
  double l1_norm = 0.0;    // sum (H - F) * dt, equals the transport cost
};

/// Current solving boundary(U) = mu - nu along the rays, from the
/// cumulative distributions of the two conditional families (weighted
/// by their raw ray masses). Throws ORDER_VIOLATION when F > H.
TransportEquationResult solve_transport_equation(const RaySystem& rs,
                                                 const ConditionalFamily& mu_fam,
                                                 const ConditionalFamily& nu_fam);

/// Scalar density with rho * q = F - H cellwise. Throws
/// DIVISION_BY_ZERO_CELL where q vanishes under nonzero coefficient.
RayIntervalTable density_rho(const DiscreteCurrent& U, const DiscreteCurrent& background);

/// Total variation of a coefficient table extended by zero outside the
/// ray (both endpoint jumps included), weighted by m.
double coefficient_total_variation(const DiscreteCurrent& current);

struct BoundarySplit {
  /// Interior jump over background mass, per ray and interior param;
  /// empty when some interior jump sits on a massless cell.
  std::vector<std::vector<double>> interior_density;
  /// (point, jump) at the two ends of each ray.
  std::vector<std::pair<int, double>> endpoint_jumps;
  bool expressible = true;
  std::string note;
};

/// Splits the boundary into endpoint jumps plus an interior part
/// written as a density against the background family, when the
/// background carries mass wherever the interior jumps.
BoundarySplit boundary_split(const DiscreteCurrent& current,
                             const ConditionalFamily& background);

}  // namespace geomonge
