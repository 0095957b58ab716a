#pragma once

#include <optional>
#include <vector>

#include "geomonge/disintegration.hpp"
#include "geomonge/rays.hpp"

namespace geomonge {

/// One-dimensional coupling in param coordinates.
struct Rearrangement1D {
  struct Link {
    double s, t, mass;
  };
  std::vector<Link> links;
  bool is_pure_map = true;  // no source atom split across targets
  double cost = 0.0;
};

/// The order-preserving coupling of two atomic measures on the line,
/// built by merging their cumulative distributions. Pure exactly when
/// no source atom has to split. Throws MASS_MISMATCH.
Rearrangement1D monotone_rearrangement_1d(const std::vector<double>& mu_params,
                                          const std::vector<double>& mu_weights,
                                          const std::vector<double>& nu_params,
                                          const std::vector<double>& nu_weights);

struct TransportMap {
  /// Pure part: one target per source, sorted by source.
  std::vector<std::pair<int, int>> assignment;
  /// Entries of sources whose atom had to split.
  std::optional<TransportPlan> fallback_plan;
  bool is_pure_map = true;
  double cost = 0.0;
  double identity_mass = 0.0;     // fixed by the off-rays identity extension
  bool direction_ok = true;       // every ray link moves forward
  double min_direction_gap = 0.0; // min (t - s) over ray links
};

/// Per-ray monotone rearrangement of the plan glued to a global map,
/// identity off the transport set, direct coupling on interior-free
/// pairs. Throws RAY_MISMATCH when the plan leaves a ray class.
TransportMap assemble_monge_map(const FiniteGeodesicSpace& space,
                                const RaySystem& rs, const DiscreteMeasure& mu,
                                const DiscreteMeasure& nu,
                                const TransportPlan& plan);

struct CostIdentity {
  double lhs = 0.0;  // transport cost
  double rhs = 0.0;  // sum of param * (nu - mu) over ray points
  double defect = 0.0;
};

/// Transport cost against the telescoped param integral of nu - mu.
/// Throws PARAM_UNDEFINED when net mass sits off every ray.
CostIdentity verify_cost_identity(const FiniteGeodesicSpace& space,
                                  const RaySystem& rs, const TransportPlan& plan,
                                  const DiscreteMeasure& mu,
                                  const DiscreteMeasure& nu);

/// Equal-cost plan that keeps the common mass mu ^ nu in place: per
/// ray, the pointwise minimum goes on the diagonal and the remainders
/// are coupled monotonically.
TransportPlan fix_common_mass(const FiniteGeodesicSpace& space,
                              const RaySystem& rs, const TransportPlan& plan);

/// Plan entries of a transport map (pure part + fallback).
TransportPlan map_as_plan(int n, const TransportMap& map,
                          const DiscreteMeasure& mu);

/// Source and target conditionals of a plan routed ray by ray. Unlike
/// the measure-based disintegration this resolves points that end one
/// ray and start another, because every entry knows its ray.
struct PlanFamilies {
  ConditionalFamily mu_family;
  ConditionalFamily nu_family;
  /// Ray-routed marginal mass per point (excludes direct/identity pairs).
  std::vector<double> ray_borne_mu;
  std::vector<double> ray_borne_nu;
  double direct_mass = 0.0;
  double identity_mass = 0.0;
};

PlanFamilies plan_conditionals(const RaySystem& rs, const TransportPlan& plan);

}  // namespace geomonge
