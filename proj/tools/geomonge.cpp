#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "geomonge/disintegration.hpp"
#include "geomonge/io.hpp"
#include "geomonge/mcp.hpp"
#include "geomonge/monge.hpp"
#include "geomonge/scenario.hpp"

using namespace geomonge;

namespace {

void emit(const Json& j, const std::string& out) {
  if (out.empty())
    std::cout << j.dump(2) << "\n";
  else
    save_json(j, out);
}

RaySystem rays_for_plan(const FiniteGeodesicSpace& sp, const TransportPlan& plan) {
  return build_ray_system(sp, build_G(sp, close_cycles(sp, plan.support())));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"transport-ray decomposition toolkit"};
  app.require_subcommand(1);

  std::string out, space_file, plan_file, mu_file, nu_file, rays_file, set_file;
  std::string eta_file, config_file, scenario_name;
  double tol = -1.0, length = 1.0, K = 0.0, N = 1.0;
  int n = 10, q_denom = 64, strip_res = 16, max_cycle = 4, x_bar = -1;
  std::uint64_t seed = 0;
  std::vector<double> t_values;
  bool want_rho = false;

  // --- space ---
  auto* space = app.add_subcommand("space", "generate and validate spaces");
  space->require_subcommand(1);
  auto* gen = space->add_subcommand("gen", "emit a built-in space");
  gen->require_subcommand(1);
  auto* seg = gen->add_subcommand("segment", "uniform points on [0, length]");
  seg->add_option("--n", n, "point count")->default_val(10);
  seg->add_option("--length", length)->default_val(1.0);
  seg->add_option("--tol", tol);
  seg->add_option("--out", out);
  seg->callback([&] {
    FiniteGeodesicSpace sp = build_segment(n, length);
    if (tol > 0) sp.tol = tol;
    emit(space_to_json(sp), out);
  });
  auto* cx = gen->add_subcommand("counterexample", "glued sheets with weighted lines");
  cx->add_option("--q-denom", q_denom)->default_val(64);
  cx->add_option("--strip-res", strip_res)->default_val(16);
  cx->add_option("--out", out);
  cx->callback([&] {
    CounterexampleSpace built = build_counterexample_space(q_denom, strip_res);
    Json j = space_to_json(built.space);
    j["meta"]["alpha"] = built.alpha;
    j["meta"]["alpha_fraction"] = {built.alpha_num, built.alpha_den};
    j["meta"]["strip_res"] = built.strip_res;
    std::cerr << "alpha = " << built.alpha_num << "/" << built.alpha_den << " = "
              << built.alpha << "\n";
    emit(j, out);
  });
  auto* validate = space->add_subcommand("validate", "structure diagnostics");
  validate->add_option("file", space_file)->required();
  validate->add_option("--out", out);
  validate->callback([&] {
    FiniteGeodesicSpace sp = space_from_json(load_json(space_file));
    StructureReport rep = validate_structure(sp);
    Json j;
    j["triangle_ok"] = rep.triangle_ok;
    j["triangle_violations"] = rep.triangle_violations.size();
    j["non_branching"] = rep.non_branching();
    Json witnesses = Json::array();
    for (size_t i = 0; i < rep.branching_witnesses.size() && i < 20; ++i) {
      const BranchWitness& w = rep.branching_witnesses[i];
      witnesses.push_back({w.x, w.through, w.y1, w.y2});
    }
    j["branch_witnesses"] = witnesses;
    j["branch_witness_count"] = rep.branching_witnesses.size();
    j["finite_components"] = rep.finite_components.size();
    emit(j, out);
  });

  // --- kanto ---
  auto* kanto = app.add_subcommand("kanto", "exact couplings and certificates");
  kanto->require_subcommand(1);
  auto* solve = kanto->add_subcommand("solve", "minimize the coupling cost");
  solve->add_option("space", space_file)->required();
  solve->add_option("mu", mu_file)->required();
  solve->add_option("nu", nu_file)->required();
  solve->add_option("--out", out);
  solve->callback([&] {
    FiniteGeodesicSpace sp = space_from_json(load_json(space_file));
    TransportPlan plan = solve_kantorovich(sp, measure_from_csv(mu_file, sp.n),
                                           measure_from_csv(nu_file, sp.n));
    emit(plan_to_json(plan), out);
  });
  auto* certify = kanto->add_subcommand("certify", "bounded-cycle monotonicity");
  certify->add_option("space", space_file)->required();
  certify->add_option("plan", plan_file)->required();
  certify->add_option("--max-cycle", max_cycle)->default_val(4);
  certify->add_option("--out", out);
  certify->callback([&] {
    FiniteGeodesicSpace sp = space_from_json(load_json(space_file));
    TransportPlan plan = plan_from_json(load_json(plan_file), sp.n);
    MonotoneCertificate cert = certify_monotone(sp, plan, max_cycle);
    Json j;
    j["pass"] = cert.pass;
    j["max_cycle"] = cert.max_cycle;
    j["potential_certified"] = cert.potential_certified;
    if (cert.violation) {
      j["violation"]["pairs"] = cert.violation->pair_indices;
      j["violation"]["defect"] = cert.violation->defect;
    }
    emit(j, out);
  });

  // --- rays ---
  auto* rays = app.add_subcommand("rays", "transport-ray decomposition");
  auto* rays_build = rays->add_subcommand("build", "closure, order, chains");
  rays_build->add_option("space", space_file)->required();
  rays_build->add_option("plan", plan_file)->required();
  rays_build->add_option("--out", out);
  rays_build->callback([&] {
    FiniteGeodesicSpace sp = space_from_json(load_json(space_file));
    TransportPlan plan = plan_from_json(load_json(plan_file), sp.n);
    emit(rays_to_json(rays_for_plan(sp, plan)), out);
  });

  // --- disint ---
  auto* disint = app.add_subcommand("disint", "conditional measures along rays");
  disint->require_subcommand(1);
  auto* drun = disint->add_subcommand("run", "disintegrate a measure");
  drun->add_option("space", space_file)->required();
  drun->add_option("plan", plan_file)->required();
  drun->add_option("mu", mu_file)->required();
  drun->add_option("--out", out);
  drun->callback([&] {
    FiniteGeodesicSpace sp = space_from_json(load_json(space_file));
    TransportPlan plan = plan_from_json(load_json(plan_file), sp.n);
    RaySystem rs = rays_for_plan(sp, plan);
    ConditionalFamily fam = disintegrate(measure_from_csv(mu_file, sp.n), rs);
    Json j;
    j["quotient_weights"] = fam.m.weights;
    j["interior_mass"] = fam.mass_interior;
    j["endpoint_mass"] = fam.mass_endpoints;
    j["shared_endpoint_mass"] = fam.mass_shared;
    j["initial_point_mass"] = fam.mass_on_initial;
    j["final_point_mass"] = fam.mass_on_final;
    Json per_ray = Json::array();
    for (size_t r = 0; r < fam.conditionals.size(); ++r) {
      Json rj;
      rj["params"] = rs.rays[r].params;
      rj["masses"] = fam.conditionals[r].masses;
      rj["densities"] = fam.conditionals[r].densities;
      rj["H"] = fam.conditionals[r].H;
      per_ray.push_back(rj);
    }
    j["rays"] = per_ray;
    emit(j, out);
  });
  auto* devolve = disint->add_subcommand("evolve", "translate a set along rays");
  devolve->add_option("rays", rays_file)->required();
  devolve->add_option("set", set_file)->required();
  devolve->add_option("--t", t_values, "shift values")->required();
  devolve->add_option("--out", out);
  devolve->callback([&] {
    RaySystem rs = rays_from_json(load_json(rays_file));
    std::vector<int> A = load_json(set_file).at("points").get<std::vector<int>>();
    Json j = Json::array();
    for (double t : t_values) {
      EvolvedSet ev = evolve_set(A, t, rs);
      j.push_back({{"t", t}, {"points", ev.points}, {"dropped", ev.dropped}});
    }
    emit(j, out);
  });
  auto* dreg = disint->add_subcommand("regularity", "refinement diagnostics");
  dreg->add_option("levels", config_file, "json: {levels:[{space,plan,mu}...]}")
      ->required();
  dreg->add_option("--out", out);
  dreg->callback([&] {
    Json spec = load_json(config_file);
    std::vector<ConditionalFamily> fams;
    for (const auto& lvl : spec.at("levels")) {
      FiniteGeodesicSpace sp = space_from_json(load_json(lvl.at("space")));
      TransportPlan plan = plan_from_json(load_json(lvl.at("plan")), sp.n);
      RaySystem rs = rays_for_plan(sp, plan);
      fams.push_back(disintegrate(measure_from_csv(lvl.at("mu"), sp.n), rs));
    }
    RegularityReport rep = check_regularity(fams);
    Json j;
    Json levels = Json::array();
    for (const RegularityLevel& lv : rep.levels)
      levels.push_back({{"max_atom", lv.max_atom},
                        {"sup_density", lv.sup_density},
                        {"initial_mass", lv.initial_mass}});
    j["levels"] = levels;
    j["atoms_vanishing"] = rep.atoms_vanishing;
    j["densities_bounded"] = rep.densities_bounded;
    j["initial_mass_vanishing"] = rep.initial_mass_vanishing;
    j["pass"] = rep.pass;
    emit(j, out);
  });

  // --- monge ---
  auto* monge = app.add_subcommand("monge", "assemble the transport map");
  auto* msolve = monge->add_subcommand("solve", "full pipeline to a map");
  msolve->add_option("space", space_file)->required();
  msolve->add_option("mu", mu_file)->required();
  msolve->add_option("nu", nu_file)->required();
  msolve->add_option("--out", out);
  msolve->callback([&] {
    FiniteGeodesicSpace sp = space_from_json(load_json(space_file));
    DiscreteMeasure mu = measure_from_csv(mu_file, sp.n);
    DiscreteMeasure nu = measure_from_csv(nu_file, sp.n);
    TransportPlan plan = solve_kantorovich(sp, mu, nu);
    RaySystem rs = rays_for_plan(sp, plan);
    TransportMap map = assemble_monge_map(sp, rs, mu, nu, plan);
    CostIdentity ci = verify_cost_identity(sp, rs, map_as_plan(sp.n, map, mu), mu, nu);
    Json j;
    Json assign = Json::array();
    for (auto& [s, t] : map.assignment) assign.push_back({s, t});
    j["assignment"] = assign;
    j["fallback"] = map.fallback_plan ? plan_to_json(*map.fallback_plan) : Json(nullptr);
    j["cost"] = map.cost;
    j["identity_defect"] = ci.defect;
    j["is_pure_map"] = map.is_pure_map;
    emit(j, out);
  });

  // --- flow ---
  auto* flow = app.add_subcommand("flow", "currents along the rays");
  flow->require_subcommand(1);
  auto* fcur = flow->add_subcommand("current", "background flow current");
  fcur->add_option("rays", rays_file)->required();
  fcur->add_option("eta", eta_file)->required();
  fcur->add_option("--out", out, "csv path (default stdout)");
  fcur->callback([&] {
    RaySystem rs = rays_from_json(load_json(rays_file));
    ConditionalFamily eta = disintegrate(measure_from_csv(eta_file, rs.n), rs);
    DiscreteCurrent cur = build_current(rs, eta);
    BoundaryResult bd = boundary(cur);
    std::cerr << "boundary total variation = " << bd.total_variation << "\n";
    if (out.empty()) {
      interval_table_to_csv(cur, "/dev/stdout");
    } else {
      interval_table_to_csv(cur, out);
    }
  });
  auto* fsolve = flow->add_subcommand("solve", "solve the boundary equation");
  fsolve->add_option("rays", rays_file)->required();
  fsolve->add_option("mu", mu_file)->required();
  fsolve->add_option("nu", nu_file)->required();
  fsolve->add_flag("--rho", want_rho, "divide by the background density");
  fsolve->add_option("--eta", eta_file, "background measure (needed by --rho)");
  fsolve->add_option("--out", out, "csv path (default stdout)");
  fsolve->callback([&] {
    RaySystem rs = rays_from_json(load_json(rays_file));
    ConditionalFamily mu_fam = disintegrate(measure_from_csv(mu_file, rs.n), rs);
    ConditionalFamily nu_fam = disintegrate(measure_from_csv(nu_file, rs.n), rs);
    TransportEquationResult te = solve_transport_equation(rs, mu_fam, nu_fam);
    std::cerr << "l1 norm = " << te.l1_norm << "\n";
    DiscreteCurrent emitted = te.U;
    if (want_rho) {
      if (eta_file.empty()) fail(ErrorCode::INVALID_ARGUMENT, "--rho needs --eta");
      ConditionalFamily eta = disintegrate(measure_from_csv(eta_file, rs.n), rs);
      DiscreteCurrent bg = build_current(rs, eta);
      RayIntervalTable rho = density_rho(te.U, bg);
      emitted.coeff = rho;
      for (auto& m : emitted.m) m = 1.0;
    }
    interval_table_to_csv(emitted, out.empty() ? "/dev/stdout" : out);
  });

  // --- mcp ---
  auto* mcp = app.add_subcommand("mcp", "curvature-dimension checks");
  mcp->require_subcommand(1);
  auto* mcheck = mcp->add_subcommand("check", "contraction toward a point");
  mcheck->add_option("space", space_file)->required();
  mcheck->add_option("eta", eta_file)->required();
  mcheck->add_option("--K", K)->required();
  mcheck->add_option("--N", N)->required();
  mcheck->add_option("--xbar", x_bar)->required();
  mcheck->add_option("--set", set_file, "json {points:[...]} (default: all)");
  mcheck->add_option("--out", out);
  mcheck->callback([&] {
    FiniteGeodesicSpace sp = space_from_json(load_json(space_file));
    DiscreteMeasure eta = measure_from_csv(eta_file, sp.n);
    std::vector<int> A;
    if (!set_file.empty()) {
      A = load_json(set_file).at("points").get<std::vector<int>>();
    } else {
      for (int i = 0; i < sp.n; ++i) A.push_back(i);
    }
    ContractionCheck cc = mcp_contract_check(
        sp, eta, x_bar, A, {0.0, 0.25, 0.5, 0.75, 1.0}, McpParams{K, N});
    Json j;
    j["pass"] = cc.pass;
    j["max_defect"] = cc.max_defect;
    j["slack"] = cc.slack;
    j["defects"] = cc.defects;
    emit(j, out);
  });
  auto* mbounds = mcp->add_subcommand("bounds", "density-ratio and variation bounds");
  mbounds->add_option("rays", rays_file)->required();
  mbounds->add_option("q", eta_file, "background measure csv")->required();
  mbounds->add_option("--K", K)->required();
  mbounds->add_option("--N", N)->required();
  mbounds->add_option("--space", space_file, "space file (for target distances)");
  mbounds->add_option("--out", out);
  mbounds->callback([&] {
    RaySystem rs = rays_from_json(load_json(rays_file));
    ConditionalFamily q_fam = disintegrate(measure_from_csv(eta_file, rs.n), rs);
    FiniteGeodesicSpace sp;
    if (!space_file.empty()) {
      sp = space_from_json(load_json(space_file));
    } else {
      sp.n = rs.n;
      sp.d.assign(static_cast<size_t>(rs.n) * rs.n, 0.0);
      sp.dL = sp.d;
    }
    McpParams params{K, N};
    McpReport dens = verify_density_bounds(sp, rs, q_fam, params);
    TvReport tv = verify_tv_bound(sp, rs, q_fam, params);
    Json j;
    j["density_pass"] = dens.pass();
    j["density_checked"] = dens.checked;
    j["density_violations"] = dens.violations.size();
    j["density_untestable"] = dens.untestable.size();
    Json rays_json = Json::array();
    for (const TvCheck& t : tv.rays)
      rays_json.push_back(
          {{"ray", t.ray}, {"tv", t.tv}, {"bound", t.bound}, {"ok", t.ok}});
    j["tv"] = rays_json;
    j["tv_pass"] = tv.pass;
    emit(j, out);
  });

  // --- run ---
  auto* run = app.add_subcommand("run", "execute a scenario end to end");
  run->add_option("scenario", scenario_name,
                  "intro-1d | counterexample | identity | mcp-segment | custom")
      ->required();
  run->add_option("--seed", seed)->default_val(0);
  run->add_option("--config", config_file, "json with scenario overrides");
  run->add_option("--out", out);
  run->callback([&] {
    Scenario sc;
    sc.name = scenario_name;
    sc.seed = seed;
    if (!config_file.empty()) sc.config = load_json(config_file);
    Json rep = run_scenario(sc);
    if (out.empty())
      std::cout << rep.dump(2) << "\n";
    else
      export_report(rep, out);
  });

  try {
    CLI11_PARSE(app, argc, argv);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
