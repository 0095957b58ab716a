#pragma once

#include <vector>

#include "geomonge/measure.hpp"
#include "geomonge/rays.hpp"

namespace geomonge {

/// Conditional measure of one ray: atom masses aligned with the ray's
/// params (normalized to total 1 when the ray carries mass), the
/// midpoint-cell densities of that conditional w.r.t. arclength, and
/// the left-continuous cumulative H at each param.
struct RayConditional {
  std::vector<double> masses;
  std::vector<double> densities;
  std::vector<double> H;
  double raw_mass = 0.0;
};

struct ConditionalFamily {
  DiscreteMeasure m;  // quotient measure, indexed by ray
  std::vector<RayConditional> conditionals;

  double total = 0.0;             // input total
  double mass_interior = 0.0;     // on interior points
  double mass_endpoints = 0.0;    // on endpoints assigned to a single ray
  double mass_shared = 0.0;       // on endpoints shared between rays (unassigned)
  double mass_isolated = 0.0;     // on isolated-pair points
  double mass_off_rays = 0.0;     // outside the extended transport set
  double mass_on_initial = 0.0;   // on initial endpoint points
  double mass_on_final = 0.0;     // on final endpoint points
  std::vector<int> shared_points;
};

/// Midpoint-cell lengths for a param chain: interior cells span half
/// the gap to each neighbour, end cells the half gap inward.
std::vector<double> midpoint_cells(const std::vector<double>& params);

/// Quotient measure + per-ray conditionals of mu along the rays.
/// Endpoint mass is assigned to its unique ray when possible, reported
/// unassigned otherwise. Throws MASS_OFF_RAYS when mu charges points
/// outside the extended transport set beyond tol.
ConditionalFamily disintegrate(const DiscreteMeasure& mu, const RaySystem& rs,
                               double tol = 1e-12);

struct EvolvedSet {
  std::vector<int> points;
  int dropped = 0;  // shifted beyond a ray or off the param grid
};

/// Shifts every on-ray point of A by arclength t, snapping to the
/// nearest ray param within half the minimal cell of that ray.
EvolvedSet evolve_set(const std::vector<int>& A, double t, const RaySystem& rs);

struct EvolutionProfile {
  std::vector<double> ts;
  std::vector<double> masses;
  int support_count = 0;  // samples with positive mass
};

EvolutionProfile evolution_profile(const std::vector<int>& A,
                                   const DiscreteMeasure& mu,
                                   const RaySystem& rs,
                                   const std::vector<double>& ts);

struct RegularityLevel {
  double max_atom = 0.0;     // largest conditional atom
  double sup_density = 0.0;  // largest conditional cell density
  double initial_mass = 0.0; // raw mass on initial points
};

struct RegularityReport {
  std::vector<RegularityLevel> levels;
  bool atoms_vanishing = false;
  bool densities_bounded = false;
  bool initial_mass_vanishing = false;
  bool pass = false;
};

/// Refinement diagnostics across >= 2 levels: conditional atoms must
/// decay, densities stay bounded, initial-point mass vanish.
RegularityReport check_regularity(const std::vector<ConditionalFamily>& levels);

struct DensityLevel {
  std::vector<double> weights;    // base measure of each cell
  std::vector<double> densities;  // density on each cell
};

DensityLevel flatten_density_table(const ConditionalFamily& fam, const RaySystem& rs);

struct EquintegrabilityResult {
  bool pass = false;
  /// Largest passing delta per epsilon (0 when none passes).
  std::vector<double> delta_for_eps;
  /// Worst witness: [eps index, level, greedy cell count] of a failure.
  int witness_eps = -1;
  int witness_level = -1;
  std::vector<int> witness_cells;
};

/// For each epsilon, the largest delta such that on every level the
/// extremal (largest-density-first) set of base measure delta carries
/// density-mass at most epsilon.
EquintegrabilityResult check_equintegrability(const std::vector<DensityLevel>& levels,
                                              const std::vector<double>& eps_grid,
                                              const std::vector<double>& delta_grid);

}  // namespace geomonge
