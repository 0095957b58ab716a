"""Smoke tests for the python extension."""

import json
import math

import pytest

import _geomonge as gm


def test_segment_and_geodesic():
    sp = gm.build_segment(5, 1.0)
    assert sp.n == 5
    assert sp.dL(0, 4) == pytest.approx(1.0)
    path = gm.geodesic_between(sp, 0, 4)
    assert path.points == [0, 1, 2, 3, 4]


def test_solver_and_certificate():
    sp = gm.build_segment(6, 2.5)
    mu = gm.Measure.dirac(6, 0)
    nu = gm.Measure.dirac(6, 5)
    plan = gm.solve_kantorovich(sp, mu, nu)
    assert plan.cost_cache == pytest.approx(2.5)
    cert = gm.certify_monotone(sp, plan, 4)
    assert cert.pass_


def test_full_pipeline_matches_oracle():
    sp = gm.build_segment(8, 7.0)
    mu = gm.Measure([0.25, 0.25, 0.5, 0, 0, 0, 0, 0])
    nu = gm.Measure([0, 0, 0, 0, 0.5, 0, 0.25, 0.25])
    plan = gm.solve_kantorovich(sp, mu, nu)
    rs = gm.rays_for_plan(sp, plan)
    assert len(rs.rays) >= 1
    tmap = gm.assemble_monge_map(sp, rs, mu, nu, plan)
    assert tmap.cost == pytest.approx(plan.cost_cache, abs=1e-9)
    ci = gm.verify_cost_identity(sp, rs, gm.map_as_plan(sp.n, tmap, mu), mu, nu)
    assert ci.defect < 1e-9


def test_rearrangement_split():
    re = gm.monotone_rearrangement_1d([0.0], [1.0], [1.0, 3.0], [0.5, 0.5])
    assert not re.is_pure_map
    assert re.cost == pytest.approx(2.0)


def test_comparison_functions():
    assert gm.s_K(gm.McpParams(K=0.0, N=1.0), 0.7) == 0.7
    assert gm.s_K(gm.McpParams(K=-1.0, N=1.0), 1.0) == pytest.approx(math.sinh(1.0))
    assert gm.c_K_bound(gm.McpParams(K=0.0, N=2.0), 0.5) == pytest.approx(4.0, rel=1e-8)


def test_counterexample_ratio_via_scenario():
    rep = json.loads(gm.run_scenario("counterexample", 0))
    assert rep["assembled_ratio"] == pytest.approx(1.5, rel=0.05)
    assert rep["pass"]


def test_error_mapping():
    with pytest.raises(gm.GeomongeError):
        gm.build_segment(1, 1.0)
