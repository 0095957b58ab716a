#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "geomonge/common.hpp"

namespace geomonge {

/// Finite point set with two distance matrices: an ambient distance `d`
/// (always finite) and a geodesic cost distance `dL` that may take the
/// value kInf on unreachable pairs. Immutable after construction.
struct FiniteGeodesicSpace {
  int n = 0;
  /// Optional per-point coordinate tags, for reporting only.
  std::vector<std::vector<double>> labels;
  std::vector<double> d;   // row-major n*n
  std::vector<double> dL;  // row-major n*n, kInf allowed off-diagonal
  double tol = 1e-9;

  double dist(int i, int j) const { return d[static_cast<size_t>(i) * n + j]; }
  double distL(int i, int j) const { return dL[static_cast<size_t>(i) * n + j]; }
};

/// Ordered chain of points along one geodesic, with nondecreasing
/// arclength parameters in dL units.
struct GeodesicPath {
  std::vector<int> points;
  std::vector<double> params;
};

struct AdditivityDefect {
  int i, j, k;
  double defect;
};

/// Quadruple (x, through, y1, y2): two distinct continuations beyond
/// `through` at equal distance from x.
struct BranchWitness {
  int x, through, y1, y2;
};

struct StructureReport {
  bool triangle_ok = true;
  std::vector<AdditivityDefect> triangle_violations;
  std::vector<BranchWitness> branching_witnesses;
  /// Partition of points into classes of mutually finite dL.
  std::vector<std::vector<int>> finite_components;

  bool non_branching() const { return branching_witnesses.empty(); }
};

/// n_points equally spaced points on [0, length]; d = dL = |Δposition|.
FiniteGeodesicSpace build_segment(int n_points, double length);

/// Segment-like space from explicit 1D positions (need not be sorted).
FiniteGeodesicSpace build_line_points(const std::vector<double>& positions);

/// Weighted tree metric: parent[i] < i for i >= 1, edge_len[i] is the
/// length of the edge {i, parent[i]}. d = dL = tree path length.
FiniteGeodesicSpace build_tree(const std::vector<int>& parent,
                               const std::vector<double>& edge_len);

struct CounterexampleSpace {
  FiniteGeodesicSpace space;
  double alpha;        // the rational slope actually used
  int alpha_num;       // reduced numerator
  int alpha_den;       // reduced denominator
  int strip_res;       // y samples per unit height
  /// Point indices of the central sheet's closed admissible curve, in
  /// curve order; entry k sits at curve parameter k / strip_res.
  std::vector<int> sheet_curve;
  /// Indices into sheet_curve for the source strip (lower band) and the
  /// curve shifts realizing the two translation maps.
  std::vector<int> band_a_offsets;
  int shift_up;    // curve steps for the in-sheet upward map
  int shift_down;  // curve steps (negative direction) for the cheap map
};

/// Glued multi-sheet space with a weighted admissible-line metric:
/// central sheet charges 4x above the mid line and 1x below, side
/// sheets (slopes i*alpha, i in {-2,-1,1,2}) charge 1x, all glued
/// along the base circle. dL = weighted shortest path along admissible
/// lines; d = unweighted shortest path including base-circle arcs.
CounterexampleSpace build_counterexample_space(int q_denom, int strip_res);

/// Diagnostic pass over both matrices: symmetry/diagonal/triangle
/// defects, discrete branching witnesses, dL-finiteness classes.
StructureReport validate_structure(const FiniteGeodesicSpace& space);

/// Maximal additive chain from x to y ordered by dL(x, .).
/// Throws INFINITE_DISTANCE or AMBIGUOUS_GEODESIC.
GeodesicPath geodesic_between(const FiniteGeodesicSpace& space, int x, int y);

}  // namespace geomonge
