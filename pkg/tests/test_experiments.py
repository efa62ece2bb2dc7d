import numpy as np
import pytest

from rislink.config import load_config
from rislink.em import RadioParams
from rislink.experiments import (analytic_point_power, equilateral_scene,
                                 plane_endpoints, robustness, solve,
                                 specular_frame, sweep_distance, sweep_plane,
                                 validate_suite)
from rislink.geometry import link_angles
from rislink.solvers import closed_form_solution

from dataclasses import replace


def small_cfg(**kw):
    cfg = load_config()
    sweeps = replace(cfg.sweeps, distance_points=4, plane_points=4,
                     wavelength_points=4, robustness_points=5,
                     robustness_extent=4.0)
    return replace(cfg, sweeps=sweeps, **kw)


def test_specular_frame_is_orthonormal_and_bisecting():
    rng = np.random.default_rng(6)
    for _ in range(20):
        p = rng.uniform(-10, 10, 3)
        t = p + rng.uniform(1, 20) * _unit(rng)
        r = p + rng.uniform(1, 20) * _unit(rng)
        normal, ax, ay = specular_frame(p, t, r)
        for u, v in ((normal, ax), (normal, ay), (ax, ay)):
            assert abs(np.dot(u, v)) < 1e-12
        u_t = (t - p) / np.linalg.norm(t - p)
        u_r = (r - p) / np.linalg.norm(r - p)
        # equal elevation on both sides of the normal
        assert np.dot(u_t, normal) == pytest.approx(np.dot(u_r, normal),
                                                    abs=1e-12)


def _unit(rng):
    v = rng.standard_normal(3)
    return v / np.linalg.norm(v)


def test_equilateral_scene_angles():
    cfg = small_cfg()
    tx, ris, rx = equilateral_scene(cfg, 120.0)
    ang = link_angles(tx, ris, rx)
    assert ang.d_ti == pytest.approx(120.0)
    assert ang.d_ir == pytest.approx(120.0)
    assert ang.d_tr == pytest.approx(120.0)
    assert ang.theta_t == pytest.approx(np.pi / 6)
    assert ang.theta_r == pytest.approx(np.pi / 6)


def test_analytic_point_power_matches_solver_prediction():
    cfg = small_cfg()
    radio = RadioParams(wavelength=cfg.wavelength, tx_power=cfg.tx_power,
                        rx_gain=cfg.rx_gain)
    tx, ris, rx = equilateral_scene(cfg, 150.0)
    sol = closed_form_solution(tx, ris, rx, radio)
    p = analytic_point_power(cfg, 150.0, 150.0, 150.0, cos_mu_ti=0.0,
                             cos_mu_tr=0.0)
    assert p["ris"] == pytest.approx(sol.predicted_power, rel=1e-12)


def test_sweep_distance_monotone_decreasing():
    res = sweep_distance(small_cfg())
    assert len(res.rows) == 4
    closed = [r[res.header.index("closed_form_w")] for r in res.rows]
    assert all(a > b for a, b in zip(closed, closed[1:]))
    assert all(r[-1] == 1 for r in res.rows)  # far-field valid throughout


def test_sweep_plane_direct_link_adds_columns():
    blocked = sweep_plane(small_cfg(direct_link=False))
    assert "direct_dbm" not in blocked.header
    with_direct = sweep_plane(small_cfg(direct_link=True))
    assert "total_dbm" in with_direct.header
    ti = with_direct.header.index("total_dbm")
    ri = with_direct.header.index("ris_dbm")
    di = with_direct.header.index("direct_dbm")
    for row in with_direct.rows:
        assert row[ti] >= max(row[ri], row[di]) - 1e-9


def test_robustness_zero_at_assumed_position():
    res = robustness(small_cfg())
    xi, yi = res.header.index("x_m"), res.header.index("y_m")
    di = res.header.index("deviation")
    center = [r for r in res.rows if r[xi] == 0.0 and r[yi] == 0.0]
    assert len(center) == 1
    assert center[0][di] == pytest.approx(0.0, abs=1e-9)
    assert all(0.0 <= r[di] <= 1.0 for r in res.rows)


def test_solve_reports_all_methods():
    res = solve(small_cfg(direct_link=False))
    methods = [r[0] for r in res.rows]
    assert methods == ["closed-form", "svd-projected", "upper-bound"]


def test_validate_suite_all_pass():
    checks = validate_suite(small_cfg())
    assert len(checks) == 4
    assert all(ok for _, ok, _ in checks)


def test_plane_endpoints_heights():
    cfg = small_cfg()
    tx, rx = plane_endpoints(cfg)
    assert tx.center[2] == pytest.approx(cfg.height)
    assert rx[2] == pytest.approx(cfg.height)
    assert np.linalg.norm(rx - tx.center) == pytest.approx(cfg.d_tr)
