#pragma once

#include <vector>

#include "geomonge/common.hpp"

namespace geomonge {

/// Nonnegative weights on point indices. Total mass is cached and is
/// not forced to 1.
struct DiscreteMeasure {
  std::vector<double> weights;
  double total = 0.0;

  static DiscreteMeasure from_weights(std::vector<double> w);
  static DiscreteMeasure dirac(int n, int at, double mass = 1.0);
  static DiscreteMeasure uniform(int n, double total_mass = 1.0);
  /// Zero everywhere except the given (index, mass) atoms.
  static DiscreteMeasure atoms(int n, const std::vector<std::pair<int, double>>& a);

  int size() const { return static_cast<int>(weights.size()); }
  double operator[](int i) const { return weights[i]; }
  DiscreteMeasure scaled(double lambda) const;
};

}  // namespace geomonge
