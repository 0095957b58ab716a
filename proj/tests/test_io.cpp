#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>

#include "geomonge/io.hpp"

using namespace geomonge;

TEST_CASE("space files round-trip, unreachable pairs as strings") {
  FiniteGeodesicSpace sp = build_segment(4, 3.0);
  sp.dL[0 * 4 + 3] = kInf;
  sp.dL[3 * 4 + 0] = kInf;
  Json j = space_to_json(sp);
  CHECK(j["dL"][3] == "inf");
  FiniteGeodesicSpace back = space_from_json(j);
  CHECK(back.n == sp.n);
  CHECK(back.tol == sp.tol);
  CHECK(is_inf(back.distL(0, 3)));
  CHECK(back.distL(0, 2) == sp.distL(0, 2));
  CHECK(back.dist(0, 3) == sp.dist(0, 3));
}

TEST_CASE("euclidean metric shorthand expands from labels") {
  Json j;
  j["n"] = 3;
  j["labels"] = {{0.0, 0.0}, {3.0, 4.0}, {0.0, 1.0}};
  j["metric"] = "euclidean";
  j["dL"] = {0.0, 5.0, 1.0, 5.0, 0.0, "inf", 1.0, "inf", 0.0};
  j["tol"] = 1e-8;
  FiniteGeodesicSpace sp = space_from_json(j);
  CHECK(sp.dist(0, 1) == doctest::Approx(5.0));
  CHECK(sp.dist(1, 2) == doctest::Approx(std::sqrt(9.0 + 9.0)));
  CHECK(is_inf(sp.distL(1, 2)));
  CHECK(sp.tol == 1e-8);
}

TEST_CASE("malformed space files are rejected") {
  Json j;
  j["n"] = 2;
  j["dL"] = {0.0, 1.0, 1.0, 0.0};
  CHECK_THROWS_AS(space_from_json(j), Error);  // neither d nor metric

  Json k;
  k["n"] = 2;
  k["d"] = {0.0, 1.0, 1.0, 0.0};
  k["dL"] = {0.0, "what", 1.0, 0.0};
  CHECK_THROWS_AS(space_from_json(k), Error);
}

TEST_CASE("plan files round-trip") {
  TransportPlan plan = TransportPlan::from_entries(5, {{0, 3, 0.5}, {1, 4, 0.5}});
  plan.cost_cache = 1.25;
  Json j = plan_to_json(plan);
  TransportPlan back = plan_from_json(j, 5);
  REQUIRE(back.entries.size() == 2);
  CHECK(back.entries[0].src == 0);
  CHECK(back.entries[1].dst == 4);
  CHECK(*back.cost_cache == 1.25);
  CHECK(back.left_marginal[1] == 0.5);
}

TEST_CASE("ray files rebuild the working structure") {
  FiniteGeodesicSpace sp = build_segment(7, 6.0);
  RaySystem rs = build_ray_system(sp, build_G(sp, {{0, 2}, {4, 6}}));
  Json j = rays_to_json(rs);
  RaySystem back = rays_from_json(j);
  CHECK(back.n == rs.n);
  REQUIRE(back.rays.size() == rs.rays.size());
  for (size_t r = 0; r < rs.rays.size(); ++r) {
    CHECK(back.rays[r].points == rs.rays[r].points);
    CHECK(back.rays[r].params == rs.rays[r].params);
  }
  CHECK(back.T_points == rs.T_points);
  CHECK(back.quotient == rs.quotient);
  CHECK(back.a_map == rs.a_map);
  CHECK(back.b_map == rs.b_map);

  // the rebuilt structure still drives the disintegration
  DiscreteMeasure mu = DiscreteMeasure::atoms(
      7, {{0, 0.2}, {1, 0.2}, {2, 0.1}, {4, 0.25}, {5, 0.25}});
  ConditionalFamily fam = disintegrate(mu, back);
  CHECK(fam.m[0] == doctest::Approx(0.5));
  CHECK(fam.m[1] == doctest::Approx(0.5));
}

TEST_CASE("measure csv accepts headers and accumulates duplicates") {
  const char* path = "io_test_measure.csv";
  write_file(path, "point_index,weight\n0,0.25\n2,0.5\n0,0.25\n");
  DiscreteMeasure mu = measure_from_csv(path, 4);
  CHECK(mu[0] == doctest::Approx(0.5));
  CHECK(mu[2] == doctest::Approx(0.5));
  CHECK(mu.total == doctest::Approx(1.0));

  measure_to_csv(mu, path);
  DiscreteMeasure again = measure_from_csv(path, 4);
  CHECK(again[0] == mu[0]);
  CHECK(again.total == mu.total);
  std::remove(path);

  write_file("io_test_bad.csv", "0,0.25\nnot,numeric\n");
  CHECK_THROWS_AS(measure_from_csv("io_test_bad.csv", 4), Error);
  std::remove("io_test_bad.csv");
}
