// Acceptance suite: one line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <string>
#include <vector>

#include "geomonge/disintegration.hpp"
#include "geomonge/flow.hpp"
#include "geomonge/mcp.hpp"
#include "geomonge/monge.hpp"
#include "geomonge/scenario.hpp"

using namespace geomonge;

namespace {

int failures = 0;

void report(int criterion, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s\n", ok ? "PASS" : "FAIL", criterion,
              detail.c_str());
  if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Fixture {
  FiniteGeodesicSpace sp;
  DiscreteMeasure mu, nu;
  bool is_tree = false;
};

Fixture make_fixture(std::uint64_t seed) {
  SplitMix64 rng(seed);
  int n = 4 + static_cast<int>(rng.next_below(9));  // 4..12 points
  Fixture fx;
  fx.is_tree = (seed % 2 == 1);
  if (fx.is_tree) {
    std::vector<int> parent(n, 0);
    std::vector<double> edge(n, 0.0);
    for (int i = 1; i < n; ++i) {
      parent[i] = static_cast<int>(rng.next_below(i));
      edge[i] = (1.0 + rng.next_below(8)) / 8.0;  // rational lengths
    }
    fx.sp = build_tree(parent, edge);
  } else {
    std::vector<double> pos(n);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      pos[i] = acc;
      acc += (1.0 + rng.next_below(8)) / 8.0;
    }
    fx.sp = build_line_points(pos);
  }
  auto draw = [&](int guard) {
    std::vector<double> w(n, 0.0);
    int total = 0;
    std::vector<int> units(n);
    for (int i = 0; i < n; ++i) {
      units[i] = static_cast<int>(rng.next_below(5));
      total += units[i];
    }
    if (total == 0) {
      units[guard] = 1;
      total = 1;
    }
    for (int i = 0; i < n; ++i) w[i] = static_cast<double>(units[i]) / total;
    return DiscreteMeasure::from_weights(std::move(w));
  };
  fx.mu = draw(0);
  fx.nu = draw(n - 1);
  return fx;
}

struct PipelineRun {
  TransportPlan plan;
  RaySystem rs;
  TransportMap map;
};

// full pipeline; throws when the transport structure branches
PipelineRun run_fixture(const Fixture& fx) {
  PipelineRun out;
  out.plan = solve_kantorovich(fx.sp, fx.mu, fx.nu);
  out.rs = build_ray_system(fx.sp, build_G(fx.sp, close_cycles(fx.sp, out.plan.support())));
  out.map = assemble_monge_map(fx.sp, out.rs, fx.mu, fx.nu, out.plan);
  return out;
}

void criterion_1() {
  auto t0 = std::chrono::steady_clock::now();
  Scenario sc{"counterexample", 0, {}};
  Json rep = run_scenario(sc);
  double ratio = rep["assembled_ratio"].get<double>();
  bool mono = rep["plans"]["upward"]["monotone_pass"].get<bool>() &&
              rep["plans"]["downward"]["monotone_pass"].get<bool>();
  double elapsed = seconds_since(t0);
  bool ok = std::abs(ratio - 1.5) <= 0.05 * 1.5 && mono && elapsed < 60.0;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "counterexample assembled ratio %.6f (target 1.5 within 5%%), "
                "monotone at cycle 4: %s, %.1fs",
                ratio, mono ? "yes" : "no", elapsed);
  report(1, ok, buf);
}

void criterion_2() {
  bool ok = true;
  double worst = 0.0;
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 4ULL, 5ULL}) {
    Scenario sc{"intro-1d", seed, {}};
    Json rep = run_scenario(sc);
    double spread = rep["vertex_couplings"]["spread"].get<double>();
    worst = std::max(worst, spread);
    ok = ok && spread <= 1e-9;
  }
  report(2, ok, "degenerate line: worst vertex-coupling cost spread " +
                    std::to_string(worst));
}

void criterion_3(std::vector<PipelineRun>* keep, std::vector<Fixture>* keep_fx) {
  auto t0 = std::chrono::steady_clock::now();
  int pure = 0, split = 0, resampled = 0;
  double worst_gap = 0.0;
  bool ok = true;
  for (int k = 0; k < 200; ++k) {
    std::uint64_t seed = 1000 + k;
    Fixture fx = make_fixture(seed);
    PipelineRun run;
    int attempts = 0;
    for (;;) {
      try {
        run = run_fixture(fx);
        break;
      } catch (const Error& e) {
        // branching transport structures sit outside the theory: only
        // tree fixtures may hit them, and they are redrawn
        if (!fx.is_tree || (e.code() != ErrorCode::BRANCHING_DETECTED &&
                            e.code() != ErrorCode::EQUIVALENCE_FAILURE)) {
          std::printf("  fixture %d failed: %s\n", k, e.what());
          ok = false;
          break;
        }
        ++resampled;
        if (++attempts > 50) {
          ok = false;
          break;
        }
        fx = make_fixture(seed * 1000 + attempts);
      }
    }
    if (!ok) break;
    double gap = std::abs(run.map.cost - *run.plan.cost_cache);
    worst_gap = std::max(worst_gap, gap);
    ok = ok && gap <= 1e-9;
    (run.map.is_pure_map ? pure : split)++;
    keep->push_back(std::move(run));
    keep_fx->push_back(fx);
  }
  double elapsed = seconds_since(t0);
  ok = ok && elapsed < 120.0;
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "oracle equivalence on 200 fixtures: worst |map - plan| = %.2e "
                "(%d pure, %d split, %d redrawn), %.1fs",
                worst_gap, pure, split, resampled, elapsed);
  report(3, ok, buf);
}

void criterion_4(const std::vector<PipelineRun>& runs, const std::vector<Fixture>& fxs) {
  bool ok = true;
  std::string detail = "structure axioms: ";
  int checked = 0, certified_G = 0;
  for (size_t k = 0; k < runs.size() && ok; ++k) {
    const Fixture& fx = fxs[k];
    const TransportPlan& plan = runs[k].plan;
    if (static_cast<int>(runs[k].rs.Te_points.size()) > 64) continue;
    PairSet support = plan.support();
    PairSet gp = close_cycles(fx.sp, support);
    PairSet G = build_G(fx.sp, gp);

    auto subset = [](const PairSet& a, const PairSet& b) {
      for (auto& p : a)
        if (!std::binary_search(b.begin(), b.end(), p)) return false;
      return true;
    };
    ok = ok && subset(support, gp) && subset(gp, G);
    ok = ok && close_cycles(fx.sp, gp) == gp;  // idempotence
    for (auto& [x, y] : G) ok = ok && !is_inf(fx.sp.distL(x, y));
    ok = ok && check_partial_order_axioms(fx.sp.n, G).ok;
    ok = ok && check_equivalence_axioms(fx.sp.n, G).ok;

    // monotonicity is preserved under closure
    std::vector<PlanEntry> gp_entries;
    for (auto& [x, y] : gp) gp_entries.push_back({x, y, 1.0});
    ok = ok && certify_monotone(fx.sp, TransportPlan::from_entries(fx.sp.n, gp_entries), 4).pass;
    if (G.size() <= 48) {
      std::vector<PlanEntry> g_entries;
      for (auto& [x, y] : G) g_entries.push_back({x, y, 1.0});
      ok = ok &&
           certify_monotone(fx.sp, TransportPlan::from_entries(fx.sp.n, g_entries), 4).pass;
      ++certified_G;
    }
    ++checked;
  }
  report(4, ok,
         "sandwich/idempotence/order/equivalence on " + std::to_string(checked) +
             " fixtures, closure monotone (G re-certified on " +
             std::to_string(certified_G) + ")");
}

void criterion_5() {
  bool ok = true;
  double worst = 0.0;
  for (const char* name : {"intro-1d", "identity", "mcp-segment"}) {
    Scenario sc{name, 3, {}};
    Json rep = run_scenario(sc);
    double d = rep["stages"]["monge"]["cost_identity_defect"].get<double>();
    worst = std::max(worst, d);
  }
  Scenario cx{"counterexample", 0, {}};
  Json rep = run_scenario(cx);
  for (const char* plan : {"upward", "downward"})
    worst = std::max(worst, rep["plans"][plan]["cost_identity_defect"].get<double>());
  ok = worst < 1e-9;
  report(5, ok, "cost identity defect on all scenario instances: worst " +
                    std::to_string(worst));
}

void criterion_6(const std::vector<PipelineRun>& runs, const std::vector<Fixture>& fxs) {
  bool ok = true;
  double worst_stokes = 0.0, worst_l1 = 0.0;
  for (size_t k = 0; k < runs.size(); ++k) {
    const RaySystem& rs = runs[k].rs;
    const Fixture& fx = fxs[k];
    PlanFamilies pf = plan_conditionals(rs, runs[k].plan);
    TransportEquationResult te = solve_transport_equation(rs, pf.mu_family, pf.nu_family);
    BoundaryResult bd = boundary(te.U);
    for (int i = 0; i < fx.sp.n; ++i)
      worst_stokes = std::max(
          worst_stokes, std::abs(bd.measure[i] - (pf.ray_borne_mu[i] - pf.ray_borne_nu[i])));
    double direct_cost = 0.0;
    for (const PlanEntry& e : runs[k].plan.entries)
      if (std::binary_search(rs.isolated_pairs.begin(), rs.isolated_pairs.end(),
                             std::make_pair(e.src, e.dst)))
        direct_cost += fx.sp.distL(e.src, e.dst) * e.mass;
    worst_l1 = std::max(worst_l1,
                        std::abs(te.l1_norm + direct_cost - *runs[k].plan.cost_cache));
  }
  ok = worst_stokes <= 1e-12 && worst_l1 <= 1e-9;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "discrete stokes: worst boundary defect %.2e, worst |L1 - cost| %.2e",
                worst_stokes, worst_l1);
  report(6, ok, buf);
}

void criterion_7() {
  auto t0 = std::chrono::steady_clock::now();
  bool ok = true;

  ok = ok && s_K({0.0, 1.0}, 0.3) == 0.3 && s_K({0.0, 1.0}, 7.25) == 7.25;
  ok = ok && std::abs(s_K({1.0, 1.0}, M_PI / 2) - 1.0) <= 1e-12;
  ok = ok && std::abs(s_K({-1.0, 1.0}, 1.0) - std::sinh(1.0)) <= 1e-12;

  for (double t : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    ok = ok && std::abs(c_K_bound({0.0, 1.0}, t) - 1.0 / t) <= 1e-8 * (1.0 / t);
    ok = ok && std::abs(c_K_bound({0.0, 2.0}, t) - 2.0 / t) <= 1e-8 * (2.0 / t);
  }

  // envelope-generated densities pass both bounds
  FiniteGeodesicSpace sp = build_segment(17, 1.0);
  RaySystem rs = build_ray_system(sp, build_G(sp, {{0, 16}}));
  for (double K : {-1.0, 0.0, 1.0})
    for (double N : {1.0, 2.0}) {
      McpParams params{K, N};
      double t_b = rs.rays[0].params.back();
      std::vector<double> cells = midpoint_cells(rs.rays[0].params);
      ConditionalFamily fam;
      RayConditional c;
      double total = 0.0;
      for (size_t i = 0; i < cells.size(); ++i) {
        double q = std::pow(s_K(params, t_b - rs.rays[0].params[i]), N - 1.0) + 1e-12;
        c.masses.push_back(q * cells[i]);
        total += c.masses.back();
      }
      for (size_t i = 0; i < cells.size(); ++i) {
        c.masses[i] /= total;
        c.densities.push_back(c.masses[i] / cells[i]);
      }
      double acc = 0.0;
      for (double m : c.masses) {
        c.H.push_back(acc);
        acc += m;
      }
      c.raw_mass = 1.0;
      fam.m = DiscreteMeasure::from_weights({1.0});
      fam.conditionals.push_back(c);
      ok = ok && verify_density_bounds(sp, rs, fam, params).pass();
      ok = ok && verify_tv_bound(sp, rs, fam, params).pass;
    }

  // contraction toward a point mass over the length measure
  int n = 33;
  FiniteGeodesicSpace seg = build_segment(n, 1.0);
  double h = 1.0 / (n - 1);
  std::vector<double> w(n, h);
  w[0] = w[n - 1] = h / 2;
  std::vector<int> A(n);
  std::iota(A.begin(), A.end(), 0);
  ContractionCheck cc =
      mcp_contract_check(seg, DiscreteMeasure::from_weights(w), n - 1, A,
                         {0.0, 0.25, 0.5, 0.75, 1.0}, {0.0, 1.0});
  ok = ok && cc.pass;

  double elapsed = seconds_since(t0);
  ok = ok && elapsed < 30.0;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "comparison functions, envelope bounds, contraction: %s, %.1fs",
                ok ? "all match" : "mismatch", elapsed);
  report(7, ok, buf);
}

void criterion_8() {
  std::vector<ConditionalFamily> uniform_levels, dirac_levels;
  bool atoms_exact = true;
  for (int n : {10, 20, 40, 80}) {
    FiniteGeodesicSpace sp = build_segment(n, 1.0);
    RaySystem rs = build_ray_system(sp, build_G(sp, {{0, n - 1}}));
    ConditionalFamily fam = disintegrate(DiscreteMeasure::uniform(n), rs);
    double max_atom = 0.0;
    for (double a : fam.conditionals[0].masses) max_atom = std::max(max_atom, a);
    atoms_exact = atoms_exact && std::abs(max_atom - 1.0 / n) <= 1e-12;
    uniform_levels.push_back(fam);
    dirac_levels.push_back(disintegrate(DiscreteMeasure::dirac(n, 1), rs));
  }
  RegularityReport good = check_regularity(uniform_levels);
  RegularityReport bad = check_regularity(dirac_levels);
  bool ok = atoms_exact && good.pass && good.densities_bounded && !bad.pass &&
            !bad.atoms_vanishing;
  report(8, ok,
         std::string("refinement diagnostics: uniform atoms 1/n ") +
             (atoms_exact ? "exact" : "WRONG") + ", uniform " +
             (good.pass ? "PASS" : "FAIL") + ", persistent atom flagged " +
             (!bad.pass ? "FAIL (as required)" : "pass (wrong)"));
}

void criterion_9() {
  bool ok = true;
  double worst_cost = 0.0, worst_diag = 0.0;
  for (int k = 0; k < 50; ++k) {
    SplitMix64 rng(9000 + k);
    int n = 8 + static_cast<int>(rng.next_below(9));
    FiniteGeodesicSpace sp = build_segment(n, static_cast<double>(n - 1));
    int len1 = 3 + static_cast<int>(rng.next_below(3));
    int start2 = 1 + static_cast<int>(rng.next_below(len1 - 1));  // overlap
    int len2 = 3 + static_cast<int>(rng.next_below(3));
    len2 = std::min(len2, n - start2);
    std::vector<double> w_mu(n, 0.0), w_nu(n, 0.0);
    for (int i = 0; i < len1; ++i) w_mu[i] = 1.0 / len1;
    for (int i = 0; i < len2; ++i) w_nu[start2 + i] = 1.0 / len2;
    DiscreteMeasure mu = DiscreteMeasure::from_weights(w_mu);
    DiscreteMeasure nu = DiscreteMeasure::from_weights(w_nu);

    TransportPlan plan = solve_kantorovich(sp, mu, nu);
    RaySystem rs = build_ray_system(sp, build_G(sp, close_cycles(sp, plan.support())));
    TransportPlan fixed = fix_common_mass(sp, rs, plan);

    worst_cost = std::max(worst_cost, std::abs(*fixed.cost_cache - *plan.cost_cache));
    double diag = 0.0, overlap = 0.0;
    for (const PlanEntry& e : fixed.entries)
      if (e.src == e.dst) diag += e.mass;
    for (int i = 0; i < n; ++i) overlap += std::min(mu[i], nu[i]);
    worst_diag = std::max(worst_diag, std::abs(diag - overlap));
  }
  ok = worst_cost <= 1e-9 && worst_diag <= 1e-12;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "common mass on 50 fixtures: worst cost drift %.2e, worst "
                "diagonal defect %.2e",
                worst_cost, worst_diag);
  report(9, ok, buf);
}

void criterion_10() {
  bool ok = true;
  for (const char* name : {"intro-1d", "counterexample", "identity", "mcp-segment"}) {
    Scenario sc{name, 42, {}};
    std::string a = run_scenario(sc).dump();
    std::string b = run_scenario(sc).dump();
    ok = ok && a == b;
  }
  report(10, ok, "byte-identical reports on re-run for every scenario");
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  std::vector<PipelineRun> runs;
  std::vector<Fixture> fxs;
  criterion_3(&runs, &fxs);
  criterion_4(runs, fxs);
  criterion_5();
  criterion_6(runs, fxs);
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
