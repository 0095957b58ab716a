#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "geomonge/common.hpp"
#include "geomonge/kantorovich.hpp"
#include "geomonge/space.hpp"

using namespace geomonge;

namespace {

FiniteGeodesicSpace two_components() {
  FiniteGeodesicSpace sp = build_segment(4, 3.0);
  for (int i : {0, 1})
    for (int j : {2, 3}) {
      sp.dL[i * 4 + j] = kInf;
      sp.dL[j * 4 + i] = kInf;
    }
  return sp;
}

DiscreteMeasure random_measure(SplitMix64& rng, int n, double total) {
  std::vector<double> w(n, 0.0);
  int units = 0;
  std::vector<int> u(n);
  for (int i = 0; i < n; ++i) {
    u[i] = static_cast<int>(rng.next_below(5));
    units += u[i];
  }
  if (units == 0) {
    u[0] = 1;
    units = 1;
  }
  for (int i = 0; i < n; ++i) w[i] = total * u[i] / units;
  return DiscreteMeasure::from_weights(std::move(w));
}

}  // namespace

TEST_CASE("dirac to dirac") {
  FiniteGeodesicSpace sp = build_segment(6, 2.5);
  TransportPlan plan = solve_kantorovich(sp, DiscreteMeasure::dirac(6, 0),
                                         DiscreteMeasure::dirac(6, 5));
  REQUIRE(plan.entries.size() == 1);
  CHECK(plan.entries[0].src == 0);
  CHECK(plan.entries[0].dst == 5);
  CHECK(*plan.cost_cache == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("two-by-two degenerate line instance") {
  // atoms at -2, -1, 1, 3: both vertex couplings cost the same
  FiniteGeodesicSpace sp = build_line_points({-2.0, -1.0, 1.0, 3.0});
  DiscreteMeasure mu = DiscreteMeasure::atoms(4, {{0, 0.5}, {1, 0.5}});
  DiscreteMeasure nu = DiscreteMeasure::atoms(4, {{2, 0.5}, {3, 0.5}});

  std::vector<double> vertex_costs = vertex_coupling_costs(sp, mu, nu);
  REQUIRE(vertex_costs.size() >= 2);
  for (double c : vertex_costs) CHECK(c == doctest::Approx(3.5).epsilon(1e-12));

  TransportPlan plan = solve_kantorovich(sp, mu, nu);
  CHECK(*plan.cost_cache == doctest::Approx(3.5).epsilon(1e-12));
}

TEST_CASE("identity optimum for equal marginals") {
  FiniteGeodesicSpace sp = build_segment(7, 1.0);
  DiscreteMeasure mu = DiscreteMeasure::uniform(7);
  TransportPlan plan = solve_kantorovich(sp, mu, mu);
  CHECK(*plan.cost_cache == doctest::Approx(0.0).epsilon(1e-15));
  for (const PlanEntry& e : plan.entries) CHECK(e.src == e.dst);
}

TEST_CASE("solver failure modes") {
  FiniteGeodesicSpace sp = build_segment(3, 1.0);
  try {
    solve_kantorovich(sp, DiscreteMeasure::uniform(3, 1.0),
                      DiscreteMeasure::uniform(3, 2.0));
    FAIL("expected INFEASIBLE_MASS");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::INFEASIBLE_MASS);
  }

  FiniteGeodesicSpace split = two_components();
  try {
    solve_kantorovich(split, DiscreteMeasure::dirac(4, 0),
                      DiscreteMeasure::dirac(4, 3));
    FAIL("expected NO_FINITE_COUPLING");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NO_FINITE_COUPLING);
  }
}

TEST_CASE("monotonicity certificates") {
  FiniteGeodesicSpace sp = build_line_points({0.0, 1.0});

  TransportPlan identity = TransportPlan::from_entries(2, {{0, 0, 0.5}, {1, 1, 0.5}});
  for (int len : {2, 3, 4}) CHECK(certify_monotone(sp, identity, len).pass);

  TransportPlan crossed = TransportPlan::from_entries(2, {{0, 1, 0.5}, {1, 0, 0.5}});
  MonotoneCertificate cert = certify_monotone(sp, crossed, 2);
  REQUIRE_FALSE(cert.pass);
  REQUIRE(cert.violation.has_value());
  CHECK(cert.violation->defect == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(cert.violation->pair_indices == std::vector<int>{0, 1});
}

TEST_CASE("every coupling across the origin is monotone") {
  // sources left of 0, targets right: any support passes at all lengths
  FiniteGeodesicSpace sp = build_line_points({-3.0, -2.0, -1.0, 1.0, 2.0, 3.0});
  SplitMix64 rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<PlanEntry> entries;
    for (int s = 0; s < 3; ++s)
      entries.push_back({s, 3 + static_cast<int>(rng.next_below(3)), 1.0 / 3});
    TransportPlan plan = TransportPlan::from_entries(6, entries);
    MonotoneCertificate cert = certify_monotone(sp, plan, 3);
    CHECK(cert.pass);
    CHECK(cert.potential_certified);
  }
}

TEST_CASE("relaxation potential properties") {
  FiniteGeodesicSpace sp = build_segment(8, 7.0);  // unit spacing
  // translation by 2 on the first six points
  std::vector<PlanEntry> entries;
  for (int i = 0; i < 6; ++i) entries.push_back({i, i + 2, 1.0 / 6});
  TransportPlan plan = TransportPlan::from_entries(8, entries);

  PotentialPair pot = compute_potential(sp, plan, 0);
  CHECK(pot.phi[0] == 0.0);
  for (const PlanEntry& e : plan.entries)
    CHECK(pot.phi[e.src] - pot.phi[e.dst] ==
          doctest::Approx(sp.distL(e.src, e.dst)).epsilon(1e-9));
  // admissible pair: phi(x) - phi(y) <= dL(x,y) everywhere
  for (int x = 0; x < 8; ++x)
    for (int y = 0; y < 8; ++y)
      CHECK(pot.phi[x] - pot.phi[y] <= sp.distL(x, y) + 1e-9);

  DiscreteMeasure mu = plan.left_marginal, nu = plan.right_marginal;
  CHECK(dual_value(pot, mu, nu) == doctest::Approx(plan.cost(sp)).epsilon(1e-9));
}

TEST_CASE("potential on the identity plan vanishes") {
  FiniteGeodesicSpace sp = build_segment(5, 1.0);
  TransportPlan plan = TransportPlan::identity(DiscreteMeasure::uniform(5));
  PotentialPair pot = compute_potential(sp, plan, 0);
  for (const PlanEntry& e : plan.entries)
    CHECK(pot.phi[e.src] - pot.phi[e.dst] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("potential is infinite on a disconnected class") {
  FiniteGeodesicSpace sp = two_components();
  TransportPlan plan = TransportPlan::from_entries(4, {{0, 1, 1.0}});
  PotentialPair pot = compute_potential(sp, plan, 0);
  CHECK_FALSE(is_inf(pot.phi[0]));
  CHECK_FALSE(is_inf(pot.phi[1]));
  CHECK(is_inf(pot.phi[2]));
  CHECK(is_inf(pot.phi[3]));
}

TEST_CASE("nonmonotone plan rejected by the relaxation") {
  FiniteGeodesicSpace sp = build_line_points({0.0, 1.0});
  TransportPlan crossed = TransportPlan::from_entries(2, {{0, 1, 0.5}, {1, 0, 0.5}});
  try {
    compute_potential(sp, crossed, 0);
    FAIL("expected NEGATIVE_CYCLE");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NEGATIVE_CYCLE);
  }
}

TEST_CASE("solved plans certify and dualize on random instances") {
  SplitMix64 rng(2024);
  for (int trial = 0; trial < 25; ++trial) {
    int n = 3 + static_cast<int>(rng.next_below(8));
    FiniteGeodesicSpace sp = build_segment(n, 1.0 + rng.next_double());
    DiscreteMeasure mu = random_measure(rng, n, 1.0);
    DiscreteMeasure nu = random_measure(rng, n, 1.0);
    TransportPlan plan = solve_kantorovich(sp, mu, nu);
    MonotoneCertificate cert = certify_monotone(sp, plan, 3);
    CAPTURE(trial);
    CHECK(cert.pass);
    // duality gap closes via the relaxation potential (d = dL here)
    PotentialPair pot = compute_potential(sp, plan, plan.entries.front().src);
    CHECK(std::abs(dual_value(pot, mu, nu) - *plan.cost_cache) <= 1e-9);
  }
}

TEST_CASE("certification is unchanged by the thread cap") {
  FiniteGeodesicSpace sp = build_segment(8, 7.0);
  SplitMix64 rng(11);
  DiscreteMeasure mu = random_measure(rng, 8, 1.0);
  DiscreteMeasure nu = random_measure(rng, 8, 1.0);
  TransportPlan plan = solve_kantorovich(sp, mu, nu);
  MonotoneCertificate serial = certify_monotone(sp, plan, 4);
  setenv("GEOMONGE_THREADS", "4", 1);
  MonotoneCertificate threaded = certify_monotone(sp, plan, 4);
  unsetenv("GEOMONGE_THREADS");
  CHECK(serial.pass == threaded.pass);
  CHECK(serial.potential_certified == threaded.potential_certified);

  // a violating support yields the same lexicographic witness
  TransportPlan crossed = TransportPlan::from_entries(8, {{0, 7, 0.3}, {7, 0, 0.3}, {3, 3, 0.4}});
  MonotoneCertificate s1 = certify_monotone(sp, crossed, 3);
  setenv("GEOMONGE_THREADS", "3", 1);
  MonotoneCertificate s2 = certify_monotone(sp, crossed, 3);
  unsetenv("GEOMONGE_THREADS");
  REQUIRE(s1.violation.has_value());
  REQUIRE(s2.violation.has_value());
  CHECK(s1.violation->pair_indices == s2.violation->pair_indices);
  CHECK(s1.violation->defect == doctest::Approx(s2.violation->defect));
}

TEST_CASE("relabeling equivariance and scaling") {
  SplitMix64 rng(7);
  FiniteGeodesicSpace sp = build_segment(6, 3.0);
  DiscreteMeasure mu = random_measure(rng, 6, 1.0);
  DiscreteMeasure nu = random_measure(rng, 6, 1.0);
  TransportPlan plan = solve_kantorovich(sp, mu, nu);

  // reverse the index order
  std::vector<int> perm{5, 4, 3, 2, 1, 0};
  FiniteGeodesicSpace rsp = sp;
  std::vector<double> rw_mu(6), rw_nu(6);
  for (int i = 0; i < 6; ++i) {
    rw_mu[perm[i]] = mu[i];
    rw_nu[perm[i]] = nu[i];
    for (int j = 0; j < 6; ++j) {
      rsp.d[perm[i] * 6 + perm[j]] = sp.dist(i, j);
      rsp.dL[perm[i] * 6 + perm[j]] = sp.distL(i, j);
    }
  }
  TransportPlan rplan = solve_kantorovich(rsp, DiscreteMeasure::from_weights(rw_mu),
                                          DiscreteMeasure::from_weights(rw_nu));
  CHECK(*rplan.cost_cache == doctest::Approx(*plan.cost_cache).epsilon(1e-12));

  TransportPlan scaled = solve_kantorovich(sp, mu.scaled(3.0), nu.scaled(3.0));
  CHECK(*scaled.cost_cache == doctest::Approx(3.0 * *plan.cost_cache).epsilon(1e-12));
}

TEST_CASE("solver matches exhaustive vertex enumeration") {
  SplitMix64 rng(60601);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 4 + static_cast<int>(rng.next_below(5));
    FiniteGeodesicSpace sp = build_segment(n, 1.0 + rng.next_double());
    // at most 4 atoms per side keeps the polytope enumerable
    std::vector<double> w_mu(n, 0.0), w_nu(n, 0.0);
    int units_mu = 0, units_nu = 0;
    for (int k = 0; k < 4; ++k) {
      int i = static_cast<int>(rng.next_below(n));
      int j = static_cast<int>(rng.next_below(n));
      int u = 1 + static_cast<int>(rng.next_below(4));
      int v = 1 + static_cast<int>(rng.next_below(4));
      w_mu[i] += u;
      w_nu[j] += v;
      units_mu += u;
      units_nu += v;
    }
    for (int i = 0; i < n; ++i) {
      w_mu[i] /= units_mu;
      w_nu[i] /= units_nu;
    }
    DiscreteMeasure mu = DiscreteMeasure::from_weights(w_mu);
    DiscreteMeasure nu = DiscreteMeasure::from_weights(w_nu);
    TransportPlan plan = solve_kantorovich(sp, mu, nu);
    std::vector<double> costs = vertex_coupling_costs(sp, mu, nu);
    double best = *std::min_element(costs.begin(), costs.end());
    CAPTURE(trial);
    CHECK(*plan.cost_cache == doctest::Approx(best).epsilon(1e-12));
  }
}
