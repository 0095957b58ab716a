#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "geomonge/disintegration.hpp"
#include "geomonge/io.hpp"
#include "geomonge/mcp.hpp"
#include "geomonge/monge.hpp"
#include "geomonge/scenario.hpp"

namespace py = pybind11;
using namespace geomonge;

namespace {

RaySystem rays_for_plan(const FiniteGeodesicSpace& sp, const TransportPlan& plan) {
  return build_ray_system(sp, build_G(sp, close_cycles(sp, plan.support())));
}

}  // namespace

PYBIND11_MODULE(_geomonge, m) {
  m.doc() = "transport-ray decomposition on finite geodesic spaces";

  py::register_exception<Error>(m, "GeomongeError");

  py::class_<FiniteGeodesicSpace>(m, "Space")
      .def_readonly("n", &FiniteGeodesicSpace::n)
      .def_readonly("labels", &FiniteGeodesicSpace::labels)
      .def_readonly("tol", &FiniteGeodesicSpace::tol)
      .def("d", &FiniteGeodesicSpace::dist)
      .def("dL", &FiniteGeodesicSpace::distL)
      .def("to_json", [](const FiniteGeodesicSpace& sp) { return space_to_json(sp).dump(); })
      .def_static("from_json", [](const std::string& text) {
        return space_from_json(Json::parse(text));
      });

  py::class_<GeodesicPath>(m, "GeodesicPath")
      .def_readonly("points", &GeodesicPath::points)
      .def_readonly("params", &GeodesicPath::params);

  py::class_<StructureReport>(m, "StructureReport")
      .def_readonly("triangle_ok", &StructureReport::triangle_ok)
      .def_readonly("finite_components", &StructureReport::finite_components)
      .def("non_branching", &StructureReport::non_branching)
      .def_property_readonly("branch_witness_count", [](const StructureReport& r) {
        return r.branching_witnesses.size();
      });

  py::class_<DiscreteMeasure>(m, "Measure")
      .def(py::init(&DiscreteMeasure::from_weights))
      .def_readonly("weights", &DiscreteMeasure::weights)
      .def_readonly("total", &DiscreteMeasure::total)
      .def_static("dirac", &DiscreteMeasure::dirac, py::arg("n"), py::arg("at"),
                  py::arg("mass") = 1.0)
      .def_static("uniform", &DiscreteMeasure::uniform, py::arg("n"),
                  py::arg("total_mass") = 1.0);

  py::class_<PlanEntry>(m, "PlanEntry")
      .def_readonly("src", &PlanEntry::src)
      .def_readonly("dst", &PlanEntry::dst)
      .def_readonly("mass", &PlanEntry::mass);

  py::class_<TransportPlan>(m, "Plan")
      .def_static("from_entries",
                  [](int n, const std::vector<std::tuple<int, int, double>>& raw) {
                    std::vector<PlanEntry> entries;
                    for (auto& [s, t, w] : raw) entries.push_back({s, t, w});
                    return TransportPlan::from_entries(n, std::move(entries));
                  })
      .def_readonly("entries", &TransportPlan::entries)
      .def_property_readonly("cost_cache",
                             [](const TransportPlan& p) { return p.cost_cache; })
      .def("cost", &TransportPlan::cost)
      .def("support", &TransportPlan::support);

  py::class_<MonotoneCertificate>(m, "MonotoneCertificate")
      .def_readonly("pass_", &MonotoneCertificate::pass)
      .def_readonly("max_cycle", &MonotoneCertificate::max_cycle)
      .def_readonly("potential_certified", &MonotoneCertificate::potential_certified);

  py::class_<PotentialPair>(m, "PotentialPair")
      .def_readonly("phi", &PotentialPair::phi)
      .def_readonly("psi", &PotentialPair::psi);

  py::class_<RaySystem>(m, "RaySystem")
      .def_readonly("G", &RaySystem::G)
      .def_readonly("T_points", &RaySystem::T_points)
      .def_readonly("Te_points", &RaySystem::Te_points)
      .def_readonly("section", &RaySystem::section)
      .def_readonly("quotient", &RaySystem::quotient)
      .def_readonly("rays", &RaySystem::rays)
      .def_readonly("isolated_pairs", &RaySystem::isolated_pairs)
      .def("param_on_ray", &RaySystem::param_on_ray)
      .def("to_json", [](const RaySystem& rs) { return rays_to_json(rs).dump(); });

  py::class_<RayConditional>(m, "RayConditional")
      .def_readonly("masses", &RayConditional::masses)
      .def_readonly("densities", &RayConditional::densities)
      .def_readonly("H", &RayConditional::H);

  py::class_<ConditionalFamily>(m, "ConditionalFamily")
      .def_readonly("m", &ConditionalFamily::m)
      .def_readonly("conditionals", &ConditionalFamily::conditionals)
      .def_readonly("mass_interior", &ConditionalFamily::mass_interior)
      .def_readonly("mass_on_initial", &ConditionalFamily::mass_on_initial);

  py::class_<EvolvedSet>(m, "EvolvedSet")
      .def_readonly("points", &EvolvedSet::points)
      .def_readonly("dropped", &EvolvedSet::dropped);

  py::class_<EvolutionProfile>(m, "EvolutionProfile")
      .def_readonly("ts", &EvolutionProfile::ts)
      .def_readonly("masses", &EvolutionProfile::masses)
      .def_readonly("support_count", &EvolutionProfile::support_count);

  py::class_<Rearrangement1D::Link>(m, "Link")
      .def_readonly("s", &Rearrangement1D::Link::s)
      .def_readonly("t", &Rearrangement1D::Link::t)
      .def_readonly("mass", &Rearrangement1D::Link::mass);

  py::class_<Rearrangement1D>(m, "Rearrangement1D")
      .def_readonly("links", &Rearrangement1D::links)
      .def_readonly("is_pure_map", &Rearrangement1D::is_pure_map)
      .def_readonly("cost", &Rearrangement1D::cost);

  py::class_<TransportMap>(m, "TransportMap")
      .def_readonly("assignment", &TransportMap::assignment)
      .def_readonly("is_pure_map", &TransportMap::is_pure_map)
      .def_readonly("cost", &TransportMap::cost)
      .def_readonly("identity_mass", &TransportMap::identity_mass)
      .def_readonly("direction_ok", &TransportMap::direction_ok)
      .def_property_readonly("fallback_plan",
                             [](const TransportMap& m_) { return m_.fallback_plan; });

  py::class_<PlanFamilies>(m, "PlanFamilies")
      .def_readonly("mu_family", &PlanFamilies::mu_family)
      .def_readonly("nu_family", &PlanFamilies::nu_family)
      .def_readonly("ray_borne_mu", &PlanFamilies::ray_borne_mu)
      .def_readonly("ray_borne_nu", &PlanFamilies::ray_borne_nu)
      .def_readonly("direct_mass", &PlanFamilies::direct_mass)
      .def_readonly("identity_mass", &PlanFamilies::identity_mass);

  py::class_<CostIdentity>(m, "CostIdentity")
      .def_readonly("lhs", &CostIdentity::lhs)
      .def_readonly("rhs", &CostIdentity::rhs)
      .def_readonly("defect", &CostIdentity::defect);

  py::class_<DiscreteCurrent>(m, "Current")
      .def_readonly("m", &DiscreteCurrent::m)
      .def_readonly("coeff", &DiscreteCurrent::coeff)
      .def("action", &DiscreteCurrent::action);

  py::class_<BoundaryResult>(m, "BoundaryResult")
      .def_readonly("measure", &BoundaryResult::measure)
      .def_readonly("total_variation", &BoundaryResult::total_variation);

  py::class_<TransportEquationResult>(m, "TransportEquationResult")
      .def_readonly("U", &TransportEquationResult::U)
      .def_readonly("l1_norm", &TransportEquationResult::l1_norm);

  py::class_<McpParams>(m, "McpParams")
      .def(py::init([](double K, double N) { return McpParams{K, N}; }),
           py::arg("K"), py::arg("N"))
      .def_readonly("K", &McpParams::K)
      .def_readonly("N", &McpParams::N);

  py::class_<McpReport>(m, "McpReport")
      .def("pass_", &McpReport::pass)
      .def_readonly("checked", &McpReport::checked);

  py::class_<TvReport>(m, "TvReport").def_readonly("pass_", &TvReport::pass);

  py::class_<ContractionCheck>(m, "ContractionCheck")
      .def_readonly("pass_", &ContractionCheck::pass)
      .def_readonly("max_defect", &ContractionCheck::max_defect)
      .def_readonly("slack", &ContractionCheck::slack);

  m.def("build_segment", &build_segment, py::arg("n_points"), py::arg("length"));
  m.def("build_line_points", &build_line_points);
  m.def("build_tree", &build_tree);
  m.def("build_counterexample_space", [](int q_denom, int strip_res) {
    CounterexampleSpace cx = build_counterexample_space(q_denom, strip_res);
    return py::make_tuple(cx.space, cx.alpha);
  });
  m.def("validate_structure", &validate_structure);
  m.def("geodesic_between", &geodesic_between);

  m.def("solve_kantorovich", &solve_kantorovich);
  m.def("certify_monotone", &certify_monotone, py::arg("space"), py::arg("plan"),
        py::arg("max_cycle") = 4);
  m.def("compute_potential", &compute_potential);
  m.def("dual_value", &dual_value);
  m.def("vertex_coupling_costs", &vertex_coupling_costs, py::arg("space"),
        py::arg("mu"), py::arg("nu"), py::arg("max_atoms") = 6);

  m.def("close_cycles", &close_cycles);
  m.def("build_G", &build_G);
  m.def("build_ray_system", &build_ray_system);
  m.def("rays_for_plan", &rays_for_plan);

  m.def("disintegrate", &disintegrate, py::arg("mu"), py::arg("rs"),
        py::arg("tol") = 1e-12);
  m.def("evolve_set", &evolve_set);
  m.def("evolution_profile", &evolution_profile);

  m.def("monotone_rearrangement_1d", &monotone_rearrangement_1d);
  m.def("assemble_monge_map", &assemble_monge_map);
  m.def("plan_conditionals", &plan_conditionals);
  m.def("verify_cost_identity", &verify_cost_identity);
  m.def("fix_common_mass", &fix_common_mass);
  m.def("map_as_plan", &map_as_plan);

  m.def("build_current", &build_current);
  m.def("boundary", &boundary);
  m.def("solve_transport_equation", &solve_transport_equation);
  m.def("density_rho", &density_rho);

  m.def("s_K", &s_K);
  m.def("c_K_bound", &c_K_bound);
  m.def("verify_density_bounds", &verify_density_bounds, py::arg("space"),
        py::arg("rs"), py::arg("q_family"), py::arg("params"),
        py::arg("target") = std::nullopt, py::arg("tol_mcp") = 1e-6);
  m.def("verify_tv_bound", &verify_tv_bound);
  m.def("mcp_contract_check", &mcp_contract_check);

  m.def("run_scenario", [](const std::string& name, std::uint64_t seed,
                           const std::string& config) {
    Scenario sc;
    sc.name = name;
    sc.seed = seed;
    if (!config.empty()) sc.config = Json::parse(config);
    return run_scenario(sc).dump();
  }, py::arg("name"), py::arg("seed") = 0, py::arg("config") = "");
}
