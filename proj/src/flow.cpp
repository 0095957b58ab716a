#include "geomonge/flow.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace geomonge {

double DiscreteCurrent::action(const std::vector<double>& h,
                               const std::vector<double>& w) const {
  if (static_cast<int>(h.size()) != n || static_cast<int>(w.size()) != n)
    fail(ErrorCode::INVALID_ARGUMENT, "test table size mismatch");
  double total = 0.0;
  for (size_t r = 0; r < coeff.size(); ++r) {
    if (m[r] == 0) continue;
    double ray_sum = 0.0;
    for (size_t i = 0; i < coeff[r].size(); ++i)
      ray_sum += coeff[r][i] * h[points[r][i]] * (w[points[r][i + 1]] - w[points[r][i]]);
    total += m[r] * ray_sum;
  }
  return total;
}

DiscreteCurrent build_current(const RaySystem& rs, const ConditionalFamily& eta) {
  if (eta.conditionals.size() != rs.rays.size())
    fail(ErrorCode::MISSING_DENSITY, "family does not carry densities for these rays");
  DiscreteCurrent cur;
  cur.n = rs.n;
  for (size_t r = 0; r < rs.rays.size(); ++r) {
    const auto& ray = rs.rays[r];
    if (eta.conditionals[r].densities.size() != ray.params.size())
      fail(ErrorCode::MISSING_DENSITY, "density table misaligned on ray " +
                                           std::to_string(r));
    cur.m.push_back(eta.m[static_cast<int>(r)]);
    cur.points.push_back(ray.points);
    cur.params.push_back(ray.params);
    std::vector<double> c(ray.params.size() > 0 ? ray.params.size() - 1 : 0);
    for (size_t i = 0; i < c.size(); ++i)
      c[i] = eta.conditionals[r].densities[i];  // left param of the interval
    cur.coeff.push_back(std::move(c));
  }
  return cur;
}

BoundaryResult boundary(const DiscreteCurrent& cur) {
  BoundaryResult out;
  out.measure.assign(cur.n, 0.0);
  for (size_t r = 0; r < cur.coeff.size(); ++r) {
    const auto& c = cur.coeff[r];
    const auto& pts = cur.points[r];
    double tv = 0.0;
    for (size_t j = 0; j < pts.size(); ++j) {
      double before = (j == 0) ? 0.0 : c[j - 1];
      double after = (j < c.size()) ? c[j] : 0.0;
      out.measure[pts[j]] += cur.m[r] * (before - after);
      tv += std::abs(before - after);
    }
    out.total_variation += cur.m[r] * tv;
  }
  return out;
}

double coefficient_total_variation(const DiscreteCurrent& cur) {
  double total = 0.0;
  for (size_t r = 0; r < cur.coeff.size(); ++r) {
    const auto& c = cur.coeff[r];
    double tv = 0.0;
    for (size_t j = 0; j <= c.size(); ++j) {
      double before = (j == 0) ? 0.0 : c[j - 1];
      double after = (j < c.size()) ? c[j] : 0.0;
      tv += std::abs(before - after);
    }
    total += cur.m[r] * tv;
  }
  return total;
}

TransportEquationResult solve_transport_equation(const RaySystem& rs,
                                                 const ConditionalFamily& mu_fam,
                                                 const ConditionalFamily& nu_fam) {
  if (mu_fam.conditionals.size() != rs.rays.size() ||
      nu_fam.conditionals.size() != rs.rays.size())
    fail(ErrorCode::INVALID_ARGUMENT, "families do not match the ray system");

  TransportEquationResult res;
  DiscreteCurrent& U = res.U;
  U.n = rs.n;
  double scale = std::max(1.0, mu_fam.total);
  for (size_t r = 0; r < rs.rays.size(); ++r) {
    const auto& ray = rs.rays[r];
    size_t k = ray.params.size();
    double mr = mu_fam.m[static_cast<int>(r)], nr = nu_fam.m[static_cast<int>(r)];
    if (std::abs(mr - nr) > 1e-9 * scale)
      fail(ErrorCode::MASS_MISMATCH, "ray " + std::to_string(r) +
                                         " carries unbalanced marginal mass");
    // raw cumulative sums; the quotient weight is folded in so the
    // boundary telescopes to the raw signed measure
    std::vector<double> c(k > 0 ? k - 1 : 0, 0.0);
    double Hbar = 0.0, Fbar = 0.0;
    for (size_t i = 0; i + 1 < k; ++i) {
      Hbar += mr * mu_fam.conditionals[r].masses[i];
      Fbar += nr * nu_fam.conditionals[r].masses[i];
      if (Fbar > Hbar + 1e-9 * scale)
        fail(ErrorCode::ORDER_VIOLATION,
             "cumulative target mass exceeds source mass on ray " +
                 std::to_string(r) + " before param " +
                 std::to_string(ray.params[i + 1]));
      c[i] = Fbar - Hbar;
      res.l1_norm += (Hbar - Fbar) * (ray.params[i + 1] - ray.params[i]);
    }
    U.m.push_back(1.0);
    U.coeff.push_back(std::move(c));
    U.points.push_back(ray.points);
    U.params.push_back(ray.params);
  }
  return res;
}

BoundarySplit boundary_split(const DiscreteCurrent& cur,
                             const ConditionalFamily& background) {
  BoundarySplit out;
  if (background.conditionals.size() != cur.coeff.size())
    fail(ErrorCode::INVALID_ARGUMENT, "background does not match the current");
  for (size_t r = 0; r < cur.coeff.size(); ++r) {
    const auto& c = cur.coeff[r];
    const auto& pts = cur.points[r];
    std::vector<double> cells = midpoint_cells(cur.params[r]);
    std::vector<double> h(pts.size(), 0.0);
    for (size_t j = 1; j + 1 < pts.size(); ++j) {
      double jump = cur.m[r] * (c[j - 1] - c[j]);
      double mass = background.m[static_cast<int>(r)] *
                    background.conditionals[r].masses[j];
      if (mass <= 0.0) {
        if (std::abs(jump) > 1e-12) {
          out.expressible = false;
          out.note = "interior jump on a massless cell of ray " + std::to_string(r);
          out.interior_density.clear();
          return out;
        }
        continue;
      }
      h[j] = jump / mass;
    }
    out.interior_density.push_back(std::move(h));
    if (!pts.empty()) {
      out.endpoint_jumps.push_back({pts.front(), -cur.m[r] * c.front()});
      out.endpoint_jumps.push_back({pts.back(), cur.m[r] * c.back()});
    }
  }
  return out;
}

RayIntervalTable density_rho(const DiscreteCurrent& U, const DiscreteCurrent& bg) {
  if (U.coeff.size() != bg.coeff.size())
    fail(ErrorCode::INVALID_ARGUMENT, "currents live on different ray systems");
  RayIntervalTable rho(U.coeff.size());
  std::string bad_cells;
  for (size_t r = 0; r < U.coeff.size(); ++r) {
    rho[r].assign(U.coeff[r].size(), 0.0);
    for (size_t i = 0; i < U.coeff[r].size(); ++i) {
      double num = U.m[r] * U.coeff[r][i];
      double den = bg.m[r] * bg.coeff[r][i];
      if (std::abs(den) < 1e-300) {
        if (std::abs(num) > 1e-12)
          bad_cells += " (" + std::to_string(r) + "," + std::to_string(i) + ")";
        continue;
      }
      rho[r][i] = num / den;
    }
  }
  if (!bad_cells.empty())
    fail(ErrorCode::DIVISION_BY_ZERO_CELL,
         "background density vanishes under nonzero coefficient at cells" + bad_cells);
  return rho;
}

}  // namespace geomonge
