#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "geomonge/kantorovich.hpp"
#include "geomonge/space.hpp"

namespace geomonge {

using PairSet = std::vector<std::pair<int, int>>;  // kept sorted + unique

/// Oriented ray structure extracted from a monotone support:
/// G is the oriented relation, T_points its interior (points with both
/// a strict predecessor and successor), rays the ordered chains of each
/// interior equivalence class extended to its endpoints. Ray params are
/// signed arclength from the class representative (param 0, oriented
/// along G).
struct RaySystem {
  PairSet G;
  std::vector<int> T_points;
  std::vector<int> Te_points;
  std::vector<int> a_map;  // size n, -1 where undefined; on T only
  std::vector<int> b_map;
  std::vector<int> section;    // class representative per ray index
  std::vector<int> quotient;   // size n, point -> ray index, -1 off T
  std::vector<GeodesicPath> rays;
  /// G pairs with no interior: transport these directly, they carry no
  /// one-dimensional structure.
  PairSet isolated_pairs;

  int n = 0;

  int ray_of(int point) const { return quotient[point]; }
  /// Index of `point` inside ray r's chain, or -1.
  int position_on_ray(int r, int point) const;
  /// Signed param of `point` on ray r; PARAM_UNDEFINED if absent.
  double param_on_ray(int r, int point) const;
};

/// Zero-defect cycle closure of a support set. Idempotent; the result
/// contains the input and stays inside finite-dL pairs. Throws
/// NONMONOTONE_INPUT on a cost-decreasing cycle.
PairSet close_cycles(const FiniteGeodesicSpace& space, const PairSet& support);

/// All ordered pairs lying additively inside some closed pair.
PairSet build_G(const FiniteGeodesicSpace& space, const PairSet& gamma_prime);

/// Interior and extended transport point sets of G.
std::pair<std::vector<int>, std::vector<int>> transport_sets(int n, const PairSet& G);

/// Initial/final endpoint maps on the interior set. Throws
/// BRANCHING_DETECTED when some interior point has two distinct initial
/// or final points.
std::pair<std::vector<int>, std::vector<int>> endpoints(int n, const PairSet& G);

/// Full decomposition: interior classes, lexicographic section, ordered
/// chains with signed params. Throws EQUIVALENCE_FAILURE (with a
/// witnessing triple in the message) or BRANCHING_DETECTED.
RaySystem build_ray_system(const FiniteGeodesicSpace& space, const PairSet& G);

struct AxiomReport {
  bool ok = true;
  std::string detail;
};

/// Reflexivity + transitivity on Te, antisymmetry off the diagonal.
AxiomReport check_partial_order_axioms(int n, const PairSet& G);
/// Reflexivity, symmetry, transitivity of R = G u G^-1 restricted to T.
AxiomReport check_equivalence_axioms(int n, const PairSet& G);

/// Plan mass sitting inside Te x Te or on the diagonal (the rest is
/// unreachable by rays and signals a support/space mismatch).
double covered_plan_mass(const TransportPlan& plan, const RaySystem& rs);

}  // namespace geomonge
