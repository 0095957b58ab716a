#include "geomonge/mcp.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace geomonge {

double s_K(const McpParams& params, double t) {
  if (t < 0) fail(ErrorCode::DOMAIN, "comparison sine needs t >= 0");
  double K = params.K;
  if (K > 0) {
    double root = std::sqrt(K);
    if (t >= M_PI / root)
      fail(ErrorCode::DOMAIN, "t = " + std::to_string(t) +
                                  " outside [0, pi/sqrt(K)) for K = " +
                                  std::to_string(K));
    return std::sin(root * t) / root;
  }
  if (K == 0) return t;
  double root = std::sqrt(-K);
  return std::sinh(root * t) / root;
}

namespace {

template <class F>
double adaptive_midpoint(const F& f, double a, double b, double whole, double rel,
                         int depth) {
  double m = 0.5 * (a + b), h = b - a;
  double left = f(a + 0.25 * h) * 0.5 * h;
  double right = f(b - 0.25 * h) * 0.5 * h;
  double refined = left + right;
  if (depth > 48 || std::abs(refined - whole) <= rel * (std::abs(refined) + 1e-300))
    return refined + (refined - whole) / 3.0;
  return adaptive_midpoint(f, a, m, left, rel, depth + 1) +
         adaptive_midpoint(f, m, b, right, rel, depth + 1);
}

template <class F>
double integrate(const F& f, double a, double b, double rel) {
  if (b <= a) return 0.0;
  double whole = f(0.5 * (a + b)) * (b - a);
  return adaptive_midpoint(f, a, b, whole, rel, 0);
}

double ratio_power(double num, double den, double expo) {
  // 0/0 reads as 1; a vanishing denominator alone gives an unbounded side
  if (den == 0.0) return num == 0.0 ? 1.0 : kInf;
  return std::pow(num / den, expo);
}

}  // namespace

double c_K_bound(const McpParams& params, double t) {
  if (!(t > 0)) fail(ErrorCode::DOMAIN, "c_K needs t > 0");
  double half = 0.5 * t;
  double top = std::pow(s_K(params, half), params.N - 1.0);
  double integral = integrate(
      [&](double tau) { return std::pow(s_K(params, tau), params.N - 1.0); }, 0.0,
      half, 1e-9);
  if (integral <= 0) fail(ErrorCode::DOMAIN, "degenerate comparison integral");
  return 0.5 * top / integral;
}

namespace {

// first/last chain entries must be genuine endpoints for the anchored bounds
void require_endpoints(const RaySystem& rs, int ray_idx) {
  int rep = rs.section[ray_idx];
  if (rs.a_map[rep] < 0 || rs.b_map[rep] < 0)
    fail(ErrorCode::ENDPOINT_MISSING,
         "ray " + std::to_string(ray_idx) + " lacks an endpoint");
}

}  // namespace

McpReport verify_density_bounds(const FiniteGeodesicSpace& sp, const RaySystem& rs,
                                const ConditionalFamily& q_family,
                                const McpParams& params, std::optional<int> target,
                                double tol_mcp) {
  if (q_family.conditionals.size() != rs.rays.size())
    fail(ErrorCode::INVALID_ARGUMENT, "family does not match the ray system");
  McpReport rep;
  double expo = params.N - 1.0;

  for (size_t r = 0; r < rs.rays.size(); ++r) {
    if (q_family.m[static_cast<int>(r)] <= 0) continue;
    require_endpoints(rs, static_cast<int>(r));
    const auto& ray = rs.rays[r];
    const auto& q = q_family.conditionals[r].densities;
    double t_a = ray.params.front(), t_b = ray.params.back();

    for (size_t si = 0; si < ray.params.size(); ++si)
      for (size_t ti = si + 1; ti < ray.params.size(); ++ti) {
        McpCellCheck cell;
        cell.ray = static_cast<int>(r);
        cell.s_idx = static_cast<int>(si);
        cell.t_idx = static_cast<int>(ti);
        cell.testable = q[si] > 0 && q[ti] > 0;
        double s = ray.params[si], t = ray.params[ti];
        if (!cell.testable) {
          rep.untestable.push_back(cell);
          continue;
        }
        cell.ratio = q[ti] / q[si];
        try {
          if (target) {
            double dt = sp.distL(ray.points[ti], *target);
            double ds = sp.distL(ray.points[si], *target);
            if (is_inf(dt) || is_inf(ds) || dt <= 0) {
              cell.testable = false;
              rep.untestable.push_back(cell);
              continue;
            }
            cell.lower = ratio_power(s_K(params, dt), s_K(params, ds), expo);
            cell.upper = kInf;
          } else {
            cell.lower =
                ratio_power(s_K(params, t_b - t), s_K(params, t_b - s), expo);
            cell.upper =
                ratio_power(s_K(params, t - t_a), s_K(params, s - t_a), expo);
          }
        } catch (const Error& e) {
          if (e.code() == ErrorCode::DOMAIN) {
            cell.testable = false;
            rep.untestable.push_back(cell);
            continue;
          }
          throw;
        }
        ++rep.checked;
        cell.ok = cell.ratio >= cell.lower / (1.0 + tol_mcp) &&
                  cell.ratio <= cell.upper * (1.0 + tol_mcp);
        if (!cell.ok) rep.violations.push_back(cell);
      }
  }
  return rep;
}

TvReport verify_tv_bound(const FiniteGeodesicSpace& sp, const RaySystem& rs,
                         const ConditionalFamily& q_family, const McpParams& params) {
  (void)sp;
  if (q_family.conditionals.size() != rs.rays.size())
    fail(ErrorCode::INVALID_ARGUMENT, "family does not match the ray system");
  TvReport rep;
  for (size_t r = 0; r < rs.rays.size(); ++r) {
    if (q_family.m[static_cast<int>(r)] <= 0) continue;
    require_endpoints(rs, static_cast<int>(r));
    const auto& ray = rs.rays[r];
    const auto& q = q_family.conditionals[r].densities;
    double tv = 0.0;
    for (size_t i = 0; i + 1 < q.size(); ++i) tv += std::abs(q[i + 1] - q[i]);
    double l = 0.5 * (ray.params.back() - ray.params.front());
    double ck = c_K_bound(params, 2.0 * l);
    double stretch = s_K(params, 2.0 * l) / s_K(params, l);
    double bound = 2.0 * (1.0 + 2.0 * (stretch - 1.0)) * ck;
    bool ok = tv <= bound * (1.0 + 1e-6);
    rep.rays.push_back({static_cast<int>(r), tv, bound, ok});
    if (!ok) rep.pass = false;
  }
  return rep;
}

ContractionCheck mcp_contract_check(const FiniteGeodesicSpace& sp,
                                    const DiscreteMeasure& eta, int x_bar,
                                    const std::vector<int>& A,
                                    const std::vector<double>& ts,
                                    const McpParams& params) {
  ContractionCheck out;
  double expo = params.N - 1.0;

  struct Geo {
    GeodesicPath path;
    double length;
    double weight;
  };
  std::vector<Geo> geos;
  double max_atom = 0.0;
  for (int p : A) {
    if (eta[p] <= 0) continue;
    Geo g{geodesic_between(sp, x_bar, p), sp.distL(x_bar, p), eta[p]};
    max_atom = std::max(max_atom, eta[p]);
    geos.push_back(std::move(g));
  }

  double max_factor = 0.0, max_t = 0.0;
  for (double t : ts) {
    if (t < 0 || t > 1) fail(ErrorCode::INVALID_ARGUMENT, "ts must lie in [0,1]");
    max_t = std::max(max_t, t);
    std::map<int, double> rhs;
    for (const Geo& g : geos) {
      double factor =
          t * ratio_power(s_K(params, t * g.length), s_K(params, g.length), expo);
      max_factor = std::max(max_factor, factor);
      // nearest param on the geodesic to the contracted position
      double want = t * g.length;
      const auto& pm = g.path.params;
      auto it = std::lower_bound(pm.begin(), pm.end(), want);
      size_t idx = it - pm.begin();
      if (idx == pm.size() || (idx > 0 && want - pm[idx - 1] < pm[idx] - want)) --idx;
      rhs[g.path.points[idx]] += factor * g.weight;
    }
    double defect = 0.0;
    for (auto& [z, mass] : rhs) defect = std::max(defect, mass - eta[z]);
    out.defects.push_back(defect);
    out.max_defect = std::max(out.max_defect, defect);
  }
  out.slack = max_t * max_atom * std::max(1.0, max_factor) + 1e-12;
  out.pass = out.max_defect <= out.slack;
  return out;
}

}  // namespace geomonge
