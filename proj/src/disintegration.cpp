#include "geomonge/disintegration.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

namespace geomonge {

std::vector<double> midpoint_cells(const std::vector<double>& params) {
  size_t k = params.size();
  std::vector<double> cells(k, 0.0);
  if (k < 2) return cells;
  for (size_t i = 0; i < k; ++i) {
    double lo = (i == 0) ? params[0] : 0.5 * (params[i - 1] + params[i]);
    double hi = (i + 1 == k) ? params[k - 1] : 0.5 * (params[i] + params[i + 1]);
    cells[i] = hi - lo;
  }
  return cells;
}

namespace {

// rays containing each point (interior points sit on exactly one, ray
// endpoints may be shared)
std::vector<std::vector<int>> rays_per_point(const RaySystem& rs) {
  std::vector<std::vector<int>> out(rs.n);
  for (size_t r = 0; r < rs.rays.size(); ++r)
    for (int p : rs.rays[r].points) out[p].push_back(static_cast<int>(r));
  return out;
}

}  // namespace

ConditionalFamily disintegrate(const DiscreteMeasure& mu, const RaySystem& rs,
                               double tol) {
  if (mu.size() != rs.n) fail(ErrorCode::INVALID_ARGUMENT, "measure/space size mismatch");
  ConditionalFamily fam;
  fam.total = mu.total;

  auto on_rays = rays_per_point(rs);
  std::vector<bool> inT(rs.n, false), inTe(rs.n, false), isolated(rs.n, false);
  for (int x : rs.T_points) inT[x] = true;
  for (int x : rs.Te_points) inTe[x] = true;
  for (auto& [x, y] : rs.isolated_pairs) isolated[x] = isolated[y] = true;
  std::set<int> initial_pts, final_pts;
  for (int x : rs.T_points) {
    if (rs.a_map[x] >= 0) initial_pts.insert(rs.a_map[x]);
    if (rs.b_map[x] >= 0) final_pts.insert(rs.b_map[x]);
  }

  size_t R = rs.rays.size();
  std::vector<double> ray_mass(R, 0.0);
  std::vector<std::vector<double>> raw(R);
  for (size_t r = 0; r < R; ++r) raw[r].assign(rs.rays[r].params.size(), 0.0);

  for (int p = 0; p < rs.n; ++p) {
    double w = mu[p];
    if (w <= 0) continue;
    if (inT[p]) {
      fam.mass_interior += w;
      int r = rs.quotient[p];
      raw[r][rs.position_on_ray(r, p)] += w;
      ray_mass[r] += w;
    } else if (on_rays[p].size() == 1) {
      fam.mass_endpoints += w;
      int r = on_rays[p][0];
      raw[r][rs.position_on_ray(r, p)] += w;
      ray_mass[r] += w;
    } else if (on_rays[p].size() > 1) {
      fam.mass_shared += w;
      fam.shared_points.push_back(p);
    } else if (isolated[p]) {
      fam.mass_isolated += w;
    } else if (!inTe[p]) {
      fam.mass_off_rays += w;
    } else {
      fam.mass_isolated += w;  // in Te but on no chain (endpoint of nothing built)
    }
    if (initial_pts.count(p)) fam.mass_on_initial += w;
    if (final_pts.count(p)) fam.mass_on_final += w;
  }

  if (fam.mass_off_rays > tol)
    fail(ErrorCode::MASS_OFF_RAYS,
         "measure charges " + std::to_string(fam.mass_off_rays) +
             " outside the extended transport set");

  fam.m = DiscreteMeasure::from_weights(ray_mass);
  fam.conditionals.resize(R);
  for (size_t r = 0; r < R; ++r) {
    RayConditional& c = fam.conditionals[r];
    c.raw_mass = ray_mass[r];
    size_t k = rs.rays[r].params.size();
    c.masses.assign(k, 0.0);
    if (ray_mass[r] > 0)
      for (size_t i = 0; i < k; ++i) c.masses[i] = raw[r][i] / ray_mass[r];
    std::vector<double> cells = midpoint_cells(rs.rays[r].params);
    c.densities.assign(k, 0.0);
    for (size_t i = 0; i < k; ++i)
      if (cells[i] > 0) c.densities[i] = c.masses[i] / cells[i];
    c.H.assign(k, 0.0);
    double acc = 0.0;
    for (size_t i = 0; i < k; ++i) {
      c.H[i] = acc;
      acc += c.masses[i];
    }
  }
  return fam;
}

EvolvedSet evolve_set(const std::vector<int>& A, double t, const RaySystem& rs) {
  EvolvedSet out;
  std::set<int> landed;
  auto on_rays = rays_per_point(rs);
  for (int p : A) {
    if (p < 0 || p >= rs.n) fail(ErrorCode::INVALID_ARGUMENT, "set point out of range");
    if (on_rays[p].empty()) {
      ++out.dropped;
      continue;
    }
    bool hit = false;
    for (int r : on_rays[p]) {
      const auto& params = rs.rays[r].params;
      double snap = kInf;
      for (size_t i = 0; i + 1 < params.size(); ++i)
        snap = std::min(snap, 0.5 * (params[i + 1] - params[i]));
      double target = rs.param_on_ray(r, p) + t;
      auto it = std::lower_bound(params.begin(), params.end(), target);
      double best = kInf;
      size_t best_i = 0;
      for (auto cand : {it, it == params.begin() ? it : std::prev(it)}) {
        if (cand == params.end()) continue;
        double diff = std::abs(*cand - target);
        if (diff < best) {
          best = diff;
          best_i = static_cast<size_t>(cand - params.begin());
        }
      }
      if (best <= snap + 1e-12) {
        landed.insert(rs.rays[r].points[best_i]);
        hit = true;
      }
    }
    if (!hit) ++out.dropped;
  }
  out.points.assign(landed.begin(), landed.end());
  return out;
}

EvolutionProfile evolution_profile(const std::vector<int>& A,
                                   const DiscreteMeasure& mu,
                                   const RaySystem& rs,
                                   const std::vector<double>& ts) {
  EvolutionProfile prof;
  prof.ts = ts;
  for (double t : ts) {
    EvolvedSet ev = evolve_set(A, t, rs);
    double mass = 0.0;
    for (int p : ev.points) mass += mu[p];
    prof.masses.push_back(mass);
    if (mass > 0) ++prof.support_count;
  }
  return prof;
}

RegularityReport check_regularity(const std::vector<ConditionalFamily>& levels) {
  if (levels.size() < 2)
    fail(ErrorCode::INVALID_ARGUMENT, "need at least two refinement levels");
  RegularityReport rep;
  for (const ConditionalFamily& fam : levels) {
    RegularityLevel lv;
    for (const RayConditional& c : fam.conditionals) {
      for (double a : c.masses) lv.max_atom = std::max(lv.max_atom, a);
      for (double d : c.densities) lv.sup_density = std::max(lv.sup_density, d);
    }
    lv.initial_mass = fam.mass_on_initial;
    rep.levels.push_back(lv);
  }
  const RegularityLevel& first = rep.levels.front();
  const RegularityLevel& last = rep.levels.back();
  const double decay = 1.5, growth = 2.0, eps = 1e-12;
  rep.atoms_vanishing = last.max_atom <= first.max_atom / decay + eps;
  rep.densities_bounded = last.sup_density <= growth * first.sup_density + eps;
  rep.initial_mass_vanishing =
      last.initial_mass <= first.initial_mass / decay + eps;
  rep.pass = rep.atoms_vanishing && rep.densities_bounded && rep.initial_mass_vanishing;
  return rep;
}

DensityLevel flatten_density_table(const ConditionalFamily& fam, const RaySystem& rs) {
  DensityLevel lvl;
  for (size_t r = 0; r < rs.rays.size(); ++r) {
    if (fam.m[static_cast<int>(r)] <= 0) continue;
    std::vector<double> cells = midpoint_cells(rs.rays[r].params);
    for (size_t i = 0; i < cells.size(); ++i) {
      lvl.weights.push_back(fam.m[static_cast<int>(r)] * cells[i]);
      lvl.densities.push_back(fam.conditionals[r].densities[i]);
    }
  }
  return lvl;
}

EquintegrabilityResult check_equintegrability(const std::vector<DensityLevel>& levels,
                                              const std::vector<double>& eps_grid,
                                              const std::vector<double>& delta_grid) {
  EquintegrabilityResult res;
  res.pass = true;

  // extremal density-mass in a base-measure budget: fill cells by
  // decreasing density, last cell fractionally
  auto sup_mass = [](const DensityLevel& lvl, double budget,
                     std::vector<int>* cells_out) {
    std::vector<int> order(lvl.weights.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return lvl.densities[a] > lvl.densities[b];
    });
    double mass = 0.0, used = 0.0;
    for (int i : order) {
      if (used >= budget) break;
      double take = std::min(lvl.weights[i], budget - used);
      mass += take * lvl.densities[i];
      used += take;
      if (cells_out) cells_out->push_back(i);
    }
    return mass;
  };

  for (size_t ei = 0; ei < eps_grid.size(); ++ei) {
    double eps = eps_grid[ei];
    double best_delta = 0.0;
    for (double delta : delta_grid) {
      bool ok = true;
      for (const DensityLevel& lvl : levels)
        if (sup_mass(lvl, delta, nullptr) > eps + 1e-12) {
          ok = false;
          break;
        }
      if (ok) best_delta = std::max(best_delta, delta);
    }
    res.delta_for_eps.push_back(best_delta);
    if (best_delta <= 0.0) {
      res.pass = false;
      if (res.witness_eps < 0) {
        res.witness_eps = static_cast<int>(ei);
        double dmin = *std::min_element(delta_grid.begin(), delta_grid.end());
        for (size_t li = 0; li < levels.size(); ++li) {
          std::vector<int> cells;
          if (sup_mass(levels[li], dmin, &cells) > eps + 1e-12) {
            res.witness_level = static_cast<int>(li);
            res.witness_cells = cells;
            break;
          }
        }
      }
    }
  }
  return res;
}

}  // namespace geomonge
