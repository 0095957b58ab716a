#include "geomonge/monge.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

namespace geomonge {

namespace {

struct Atom {
  double param;
  double mass;
};

// merge duplicate params, drop zero mass, verify ordering
std::vector<Atom> tidy_atoms(const std::vector<double>& params,
                             const std::vector<double>& weights) {
  if (params.size() != weights.size())
    fail(ErrorCode::INVALID_ARGUMENT, "params/weights size mismatch");
  std::vector<Atom> atoms;
  for (size_t i = 0; i < params.size(); ++i) {
    if (i > 0 && params[i] < params[i - 1])
      fail(ErrorCode::INVALID_ARGUMENT, "params must be sorted");
    if (weights[i] < 0) fail(ErrorCode::INVALID_ARGUMENT, "negative weight");
    if (weights[i] == 0) continue;
    if (!atoms.empty() && atoms.back().param == params[i])
      atoms.back().mass += weights[i];
    else
      atoms.push_back({params[i], weights[i]});
  }
  return atoms;
}

}  // namespace

Rearrangement1D monotone_rearrangement_1d(const std::vector<double>& mu_params,
                                          const std::vector<double>& mu_weights,
                                          const std::vector<double>& nu_params,
                                          const std::vector<double>& nu_weights) {
  std::vector<Atom> mu = tidy_atoms(mu_params, mu_weights);
  std::vector<Atom> nu = tidy_atoms(nu_params, nu_weights);
  double mu_total = 0.0, nu_total = 0.0;
  for (auto& a : mu) mu_total += a.mass;
  for (auto& a : nu) nu_total += a.mass;
  double scale = std::max(1.0, std::max(mu_total, nu_total));
  if (std::abs(mu_total - nu_total) > 1e-9 * scale)
    fail(ErrorCode::MASS_MISMATCH, "totals differ: " + std::to_string(mu_total) +
                                       " vs " + std::to_string(nu_total));

  Rearrangement1D out;
  size_t i = 0, j = 0;
  double rem_i = mu.empty() ? 0.0 : mu[0].mass;
  double rem_j = nu.empty() ? 0.0 : nu[0].mass;
  int links_for_atom = 0;
  while (i < mu.size() && j < nu.size()) {
    double take = std::min(rem_i, rem_j);
    if (take > 0) {
      out.links.push_back({mu[i].param, nu[j].param, take});
      out.cost += std::abs(nu[j].param - mu[i].param) * take;
      ++links_for_atom;
    }
    rem_i -= take;
    rem_j -= take;
    // advance the exhausted side; on a tie advance both
    bool adv_i = rem_i <= 1e-15 * scale;
    bool adv_j = rem_j <= 1e-15 * scale;
    if (adv_i) {
      if (links_for_atom > 1) out.is_pure_map = false;
      links_for_atom = 0;
      ++i;
      rem_i = i < mu.size() ? mu[i].mass : 0.0;
    }
    if (adv_j) {
      ++j;
      rem_j = j < nu.size() ? nu[j].mass : 0.0;
    }
    if (!adv_i && !adv_j)
      fail(ErrorCode::MASS_MISMATCH, "rearrangement stalled");  // unreachable
  }
  return out;
}

namespace {

// plan entries grouped against the ray structure
struct Buckets {
  std::vector<std::vector<PlanEntry>> per_ray;
  std::vector<PlanEntry> direct;    // interior-free pairs, coupled as-is
  std::vector<PlanEntry> identity;  // diagonal off the rays
};

Buckets bucket_plan(const RaySystem& rs, const TransportPlan& plan) {
  Buckets b;
  b.per_ray.resize(rs.rays.size());
  std::vector<std::vector<int>> on_rays(rs.n);
  for (size_t r = 0; r < rs.rays.size(); ++r)
    for (int p : rs.rays[r].points) on_rays[p].push_back(static_cast<int>(r));

  auto contains_pair = [&](int x, int y) {
    return std::binary_search(rs.G.begin(), rs.G.end(), std::make_pair(x, y));
  };

  for (const PlanEntry& e : plan.entries) {
    int rx = rs.quotient[e.src], ry = rs.quotient[e.dst];
    if (rx >= 0) {
      if (rs.position_on_ray(rx, e.dst) < 0)
        fail(ErrorCode::RAY_MISMATCH,
             "entry (" + std::to_string(e.src) + "," + std::to_string(e.dst) +
                 ") leaves the ray class of its source");
      b.per_ray[rx].push_back(e);
    } else if (ry >= 0) {
      if (rs.position_on_ray(ry, e.src) < 0)
        fail(ErrorCode::RAY_MISMATCH,
             "entry (" + std::to_string(e.src) + "," + std::to_string(e.dst) +
                 ") leaves the ray class of its target");
      b.per_ray[ry].push_back(e);
    } else {
      // neither end interior: a whole-ray jump, an interior-free pair,
      // or off-structure identity mass
      int shared = -1;
      for (int r : on_rays[e.src])
        for (int r2 : on_rays[e.dst])
          if (r == r2) shared = r;
      if (shared >= 0) {
        b.per_ray[shared].push_back(e);
      } else if (e.src == e.dst) {
        b.identity.push_back(e);
      } else if (contains_pair(e.src, e.dst)) {
        b.direct.push_back(e);
      } else {
        fail(ErrorCode::RAY_MISMATCH,
             "entry (" + std::to_string(e.src) + "," + std::to_string(e.dst) +
                 ") is not part of the transport structure");
      }
    }
  }
  return b;
}

int point_at_param(const GeodesicPath& ray, double param) {
  auto it = std::lower_bound(ray.params.begin(), ray.params.end(), param);
  if (it == ray.params.end() || *it != param)
    fail(ErrorCode::PARAM_UNDEFINED, "no ray point at param " + std::to_string(param));
  return ray.points[it - ray.params.begin()];
}

}  // namespace

TransportMap assemble_monge_map(const FiniteGeodesicSpace& sp, const RaySystem& rs,
                                const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                const TransportPlan& plan) {
  double scale = std::max(1.0, mu.total);
  for (int i = 0; i < rs.n; ++i) {
    if (std::abs(plan.left_marginal[i] - mu[i]) > 1e-9 * scale ||
        std::abs(plan.right_marginal[i] - nu[i]) > 1e-9 * scale)
      fail(ErrorCode::INVALID_ARGUMENT, "plan marginals do not match mu/nu");
  }

  Buckets buckets = bucket_plan(rs, plan);
  TransportMap map;
  map.min_direction_gap = kInf;
  std::map<int, std::map<int, double>> flows;  // src -> dst -> mass

  for (size_t r = 0; r < rs.rays.size(); ++r) {
    if (buckets.per_ray[r].empty()) continue;
    const GeodesicPath& ray = rs.rays[r];
    std::map<double, double> mu_atoms, nu_atoms;
    for (const PlanEntry& e : buckets.per_ray[r]) {
      double s = rs.param_on_ray(static_cast<int>(r), e.src);
      double t = rs.param_on_ray(static_cast<int>(r), e.dst);
      mu_atoms[s] += e.mass;
      nu_atoms[t] += e.mass;
    }
    std::vector<double> sp_, sw_, tp_, tw_;
    for (auto& [p, w] : mu_atoms) sp_.push_back(p), sw_.push_back(w);
    for (auto& [p, w] : nu_atoms) tp_.push_back(p), tw_.push_back(w);
    Rearrangement1D re = monotone_rearrangement_1d(sp_, sw_, tp_, tw_);
    for (const auto& link : re.links) {
      int src = point_at_param(ray, link.s);
      int dst = point_at_param(ray, link.t);
      flows[src][dst] += link.mass;
      map.min_direction_gap = std::min(map.min_direction_gap, link.t - link.s);
      map.cost += std::abs(link.t - link.s) * link.mass;
    }
  }

  for (const PlanEntry& e : buckets.direct) {
    flows[e.src][e.dst] += e.mass;
    map.cost += sp.distL(e.src, e.dst) * e.mass;
  }
  for (const PlanEntry& e : buckets.identity) {
    flows[e.src][e.dst] += e.mass;
    map.identity_mass += e.mass;
  }

  if (map.min_direction_gap == kInf) map.min_direction_gap = 0.0;
  map.direction_ok = map.min_direction_gap >= -sp.tol;

  std::vector<PlanEntry> fallback_entries;
  for (auto& [src, targets] : flows) {
    if (targets.size() == 1) {
      map.assignment.push_back({src, targets.begin()->first});
    } else {
      map.is_pure_map = false;
      for (auto& [dst, mass] : targets) fallback_entries.push_back({src, dst, mass});
    }
  }
  if (!fallback_entries.empty())
    map.fallback_plan = TransportPlan::from_entries(rs.n, std::move(fallback_entries));

  // push-forward exactness check
  std::vector<double> pushed(rs.n, 0.0);
  for (auto& [src, dst] : map.assignment) pushed[dst] += mu[src];
  if (map.fallback_plan)
    for (const PlanEntry& e : map.fallback_plan->entries) pushed[e.dst] += e.mass;
  for (int i = 0; i < rs.n; ++i)
    if (std::abs(pushed[i] - nu[i]) > 1e-9 * scale)
      fail(ErrorCode::MASS_MISMATCH,
           "assembled map does not push mu to nu at point " + std::to_string(i));
  return map;
}

CostIdentity verify_cost_identity(const FiniteGeodesicSpace& sp, const RaySystem& rs,
                                  const TransportPlan& plan, const DiscreteMeasure& mu,
                                  const DiscreteMeasure& nu) {
  CostIdentity out;
  out.lhs = plan.cost(sp);

  std::vector<std::vector<int>> on_rays(rs.n);
  for (size_t r = 0; r < rs.rays.size(); ++r)
    for (int p : rs.rays[r].points) on_rays[p].push_back(static_cast<int>(r));

  // the telescoped integral needs every move to run forward along a
  // ray; mass on interior-free pairs sits outside that structure
  for (const PlanEntry& e : plan.entries) {
    if (e.src == e.dst || e.mass <= 0) continue;
    if (rs.quotient[e.src] >= 0 || rs.quotient[e.dst] >= 0) continue;
    bool share = false;
    for (int r : on_rays[e.src])
      for (int r2 : on_rays[e.dst])
        if (r == r2) share = true;
    if (!share)
      fail(ErrorCode::PARAM_UNDEFINED,
           "plan moves mass on the interior-free pair (" + std::to_string(e.src) +
               "," + std::to_string(e.dst) + ") outside the ray structure");
  }

  double net_tol = 1e-12 * std::max(1.0, mu.total);
  for (int p = 0; p < rs.n; ++p) {
    double net = nu[p] - mu[p];
    if (on_rays[p].empty()) {
      if (std::abs(net) > net_tol)
        fail(ErrorCode::PARAM_UNDEFINED,
             "net mass " + std::to_string(net) + " at point " + std::to_string(p) +
                 " off every ray");
      continue;
    }
    if (on_rays[p].size() > 1 && std::abs(net) > net_tol)
      fail(ErrorCode::PARAM_UNDEFINED,
           "net mass at shared endpoint " + std::to_string(p) +
               " has no single param");
    out.rhs += rs.param_on_ray(on_rays[p][0], p) * net;
  }
  out.defect = std::abs(out.lhs - out.rhs);
  return out;
}

TransportPlan fix_common_mass(const FiniteGeodesicSpace& sp, const RaySystem& rs,
                              const TransportPlan& plan) {
  Buckets buckets = bucket_plan(rs, plan);
  std::vector<PlanEntry> entries;

  for (size_t r = 0; r < rs.rays.size(); ++r) {
    if (buckets.per_ray[r].empty()) continue;
    const GeodesicPath& ray = rs.rays[r];
    size_t k = ray.params.size();
    std::vector<double> mu_w(k, 0.0), nu_w(k, 0.0);
    for (const PlanEntry& e : buckets.per_ray[r]) {
      mu_w[rs.position_on_ray(static_cast<int>(r), e.src)] += e.mass;
      nu_w[rs.position_on_ray(static_cast<int>(r), e.dst)] += e.mass;
    }
    for (size_t i = 0; i < k; ++i) {
      double common = std::min(mu_w[i], nu_w[i]);
      if (common > 0) {
        entries.push_back({ray.points[i], ray.points[i], common});
        mu_w[i] -= common;
        nu_w[i] -= common;
      }
    }
    Rearrangement1D re = monotone_rearrangement_1d(ray.params, mu_w, ray.params, nu_w);
    for (const auto& link : re.links)
      entries.push_back({point_at_param(ray, link.s), point_at_param(ray, link.t),
                         link.mass});
  }
  for (const PlanEntry& e : buckets.direct) entries.push_back(e);
  for (const PlanEntry& e : buckets.identity) entries.push_back(e);

  TransportPlan out = TransportPlan::from_entries(rs.n, std::move(entries));
  out.cost_cache = out.cost(sp);
  return out;
}

PlanFamilies plan_conditionals(const RaySystem& rs, const TransportPlan& plan) {
  Buckets buckets = bucket_plan(rs, plan);
  PlanFamilies out;
  out.ray_borne_mu.assign(rs.n, 0.0);
  out.ray_borne_nu.assign(rs.n, 0.0);

  auto finish = [](ConditionalFamily& fam, std::vector<std::vector<double>>& raw,
                   const RaySystem& rs_) {
    std::vector<double> ray_mass(raw.size(), 0.0);
    for (size_t r = 0; r < raw.size(); ++r)
      for (double v : raw[r]) ray_mass[r] += v;
    fam.m = DiscreteMeasure::from_weights(ray_mass);
    fam.total = fam.m.total;
    fam.conditionals.resize(raw.size());
    for (size_t r = 0; r < raw.size(); ++r) {
      RayConditional& c = fam.conditionals[r];
      size_t k = rs_.rays[r].params.size();
      c.raw_mass = ray_mass[r];
      c.masses.assign(k, 0.0);
      if (ray_mass[r] > 0)
        for (size_t i = 0; i < k; ++i) c.masses[i] = raw[r][i] / ray_mass[r];
      std::vector<double> cells = midpoint_cells(rs_.rays[r].params);
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
  };

  std::vector<std::vector<double>> raw_mu(rs.rays.size()), raw_nu(rs.rays.size());
  for (size_t r = 0; r < rs.rays.size(); ++r) {
    raw_mu[r].assign(rs.rays[r].params.size(), 0.0);
    raw_nu[r].assign(rs.rays[r].params.size(), 0.0);
    for (const PlanEntry& e : buckets.per_ray[r]) {
      raw_mu[r][rs.position_on_ray(static_cast<int>(r), e.src)] += e.mass;
      raw_nu[r][rs.position_on_ray(static_cast<int>(r), e.dst)] += e.mass;
      out.ray_borne_mu[e.src] += e.mass;
      out.ray_borne_nu[e.dst] += e.mass;
    }
  }
  finish(out.mu_family, raw_mu, rs);
  finish(out.nu_family, raw_nu, rs);
  for (const PlanEntry& e : buckets.direct) out.direct_mass += e.mass;
  for (const PlanEntry& e : buckets.identity) out.identity_mass += e.mass;
  return out;
}

TransportPlan map_as_plan(int n, const TransportMap& map, const DiscreteMeasure& mu) {
  std::vector<PlanEntry> entries;
  for (auto& [src, dst] : map.assignment)
    if (mu[src] > 0) entries.push_back({src, dst, mu[src]});
  if (map.fallback_plan)
    for (const PlanEntry& e : map.fallback_plan->entries) entries.push_back(e);
  return TransportPlan::from_entries(n, std::move(entries));
}

}  // namespace geomonge
