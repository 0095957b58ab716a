#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "geomonge/measure.hpp"
#include "geomonge/space.hpp"

namespace geomonge {

struct PlanEntry {
  int src;
  int dst;
  double mass;
};

/// Sparse coupling with marginal bookkeeping. `entries` is kept sorted
/// by (src, dst) and carries strictly positive masses only.
struct TransportPlan {
  std::vector<PlanEntry> entries;
  DiscreteMeasure left_marginal;
  DiscreteMeasure right_marginal;
  std::optional<double> cost_cache;

  static TransportPlan from_entries(int n, std::vector<PlanEntry> entries);
  static TransportPlan identity(const DiscreteMeasure& mu);

  /// Support pairs (src, dst), sorted, one per entry.
  std::vector<std::pair<int, int>> support() const;
  double cost(const FiniteGeodesicSpace& space) const;
};

struct PotentialPair {
  std::vector<double> phi;  // +inf outside the base component
  std::vector<double> psi;  // -phi where finite, +inf elsewhere
};

struct CycleViolation {
  std::vector<int> pair_indices;  // indices into the support pair list
  double defect;                  // negative: swapped cost minus plan cost
};

struct MonotoneCertificate {
  bool pass = true;
  int max_cycle = 0;
  std::optional<CycleViolation> violation;
  /// Set when a finite potential certifies monotonicity at all cycle
  /// lengths (available when the support sits in one finite-dL class).
  bool potential_certified = false;
};

/// Exact minimizer of sum dL(x,y)*mass over couplings of mu and nu,
/// computed by successive shortest augmenting paths on the bipartite
/// support graph. Deterministic. Throws INFEASIBLE_MASS or
/// NO_FINITE_COUPLING.
TransportPlan solve_kantorovich(const FiniteGeodesicSpace& space,
                                const DiscreteMeasure& mu,
                                const DiscreteMeasure& nu);

/// Exhaustive check of all support cycles of length <= max_cycle.
/// When the relaxation potential exists, also certifies all lengths.
MonotoneCertificate certify_monotone(const FiniteGeodesicSpace& space,
                                     const TransportPlan& plan, int max_cycle);

/// Shortest-path relaxation over the support pair graph rooted at
/// `base`: phi(base) = 0 and phi(x) - phi(y) = dL(x,y) on every support
/// pair in base's finite-dL component. Throws NEGATIVE_CYCLE when the
/// plan is not monotone.
PotentialPair compute_potential(const FiniteGeodesicSpace& space,
                                const TransportPlan& plan, int base);

/// J(phi, psi) = sum phi dmu + sum psi dnu over finite entries.
double dual_value(const PotentialPair& pot, const DiscreteMeasure& mu,
                  const DiscreteMeasure& nu);

/// Costs of every vertex of the transport polytope, enumerated from
/// spanning forests of the bipartite support graph. Guarded to at most
/// `max_atoms` atoms per marginal.
std::vector<double> vertex_coupling_costs(const FiniteGeodesicSpace& space,
                                          const DiscreteMeasure& mu,
                                          const DiscreteMeasure& nu,
                                          int max_atoms = 6);

}  // namespace geomonge
