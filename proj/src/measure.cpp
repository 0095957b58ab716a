#include "geomonge/measure.hpp"

#include <numeric>

namespace geomonge {

DiscreteMeasure DiscreteMeasure::from_weights(std::vector<double> w) {
  for (double v : w)
    if (v < 0) fail(ErrorCode::INVALID_ARGUMENT, "negative weight");
  DiscreteMeasure m;
  m.weights = std::move(w);
  m.total = std::accumulate(m.weights.begin(), m.weights.end(), 0.0);
  return m;
}

DiscreteMeasure DiscreteMeasure::dirac(int n, int at, double mass) {
  std::vector<double> w(n, 0.0);
  if (at < 0 || at >= n) fail(ErrorCode::INVALID_ARGUMENT, "dirac index out of range");
  w[at] = mass;
  return from_weights(std::move(w));
}

DiscreteMeasure DiscreteMeasure::uniform(int n, double total_mass) {
  std::vector<double> w(n, total_mass / n);
  return from_weights(std::move(w));
}

DiscreteMeasure DiscreteMeasure::atoms(int n, const std::vector<std::pair<int, double>>& a) {
  std::vector<double> w(n, 0.0);
  for (auto& [i, mass] : a) {
    if (i < 0 || i >= n) fail(ErrorCode::INVALID_ARGUMENT, "atom index out of range");
    w[i] += mass;
  }
  return from_weights(std::move(w));
}

DiscreteMeasure DiscreteMeasure::scaled(double lambda) const {
  std::vector<double> w = weights;
  for (double& v : w) v *= lambda;
  return from_weights(std::move(w));
}

}  // namespace geomonge
