#pragma once

#include <optional>
#include <vector>

#include "geomonge/disintegration.hpp"
#include "geomonge/rays.hpp"

namespace geomonge {

struct McpParams {
  double K = 0.0;
  double N = 1.0;  // >= 1
};

/// Comparison sine: sin(sqrt(K) t)/sqrt(K), t, or sinh(sqrt(-K) t)/sqrt(-K).
/// Throws DOMAIN when K > 0 and t >= pi/sqrt(K).
double s_K(const McpParams& params, double t);

/// Peak-density bound c_K(t): s_K(t/2)^(N-1) / (2 * int_0^{t/2} s_K^(N-1)).
/// The integral is evaluated by adaptive midpoint refinement to 1e-8
/// relative error.
double c_K_bound(const McpParams& params, double t);

struct McpCellCheck {
  int ray;
  int s_idx, t_idx;
  double ratio;        // q(t)/q(s)
  double lower, upper; // comparison bounds
  bool testable;
  bool ok;
};

struct McpReport {
  std::vector<McpCellCheck> violations;
  std::vector<McpCellCheck> untestable;
  int checked = 0;
  bool pass() const { return violations.empty(); }
};

/// Two-sided comparison of conditional density ratios against the
/// endpoint-anchored s_K bounds, for every ordered param pair on every
/// ray. Ratios with a vanishing base density are reported untestable.
/// When `target` is set, checks the one-sided single-target bound
/// against that point instead. Throws ENDPOINT_MISSING.
McpReport verify_density_bounds(const FiniteGeodesicSpace& space,
                                const RaySystem& rs,
                                const ConditionalFamily& q_family,
                                const McpParams& params,
                                std::optional<int> target = std::nullopt,
                                double tol_mcp = 1e-6);

struct TvCheck {
  int ray;
  double tv;
  double bound;
  bool ok;
};

struct TvReport {
  std::vector<TvCheck> rays;
  bool pass = true;
};

/// Discrete total variation of each ray's density against the
/// assembled bound 2 (1 + 2 (s_K(2l)/s_K(l) - 1)) c_K(2l), l = half the
/// ray length. Throws ENDPOINT_MISSING or DOMAIN.
TvReport verify_tv_bound(const FiniteGeodesicSpace& space, const RaySystem& rs,
                         const ConditionalFamily& q_family, const McpParams& params);

struct ContractionCheck {
  bool pass = true;
  double max_defect = 0.0;   // worst pointwise excess over eta + slack
  double slack = 0.0;        // snapping allowance used
  std::vector<double> defects;  // per sampled t
};

/// Discrete measure contraction toward x_bar: interpolates every point
/// of A along its geodesic to x_bar at each t, accumulates the
/// comparison-weighted image mass and checks it never exceeds eta
/// beyond the snapping slack. Propagates AMBIGUOUS_GEODESIC.
ContractionCheck mcp_contract_check(const FiniteGeodesicSpace& space,
                                    const DiscreteMeasure& eta, int x_bar,
                                    const std::vector<int>& A,
                                    const std::vector<double>& ts,
                                    const McpParams& params);

}  // namespace geomonge
