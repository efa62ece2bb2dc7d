"""Experiment runner: scene builders and the simulation studies (distance
sweep, plane sweeps with/without direct link, wavelength sweep with the
anti-decay design, position-perturbation robustness, oracle validation)."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .config import SceneConfig, watts_to_dbm
from .em import (RadioParams, exact_channel, farfield_channel, received_power)
from .errors import ShadowedPanel
from .geometry import (RisPanel, TransmitterArray, UlaLayout, far_field_check,
                       link_angles)
from .placement import optimal_orientation
from .solvers import (closed_form_solution, power_upper_bound, svd_solution,
                      two_path_o, two_path_power_closed_form,
                      anti_decay_design)
from .validation import OracleConfig, exhaustive_phase_search


@dataclass
class SweepResult:
    """Rows of one experiment plus plotting metadata."""

    kind: str                   # "line" | "heatmap" | "robustness"
    header: tuple[str, ...]
    rows: list[tuple] = field(default_factory=list)
    meta: dict = field(default_factory=dict)


def _radio(cfg: SceneConfig) -> RadioParams:
    return RadioParams(wavelength=cfg.wavelength, tx_power=cfg.tx_power,
                       rx_gain=cfg.rx_gain)


def _panel_at(cfg: SceneConfig, center, frame) -> RisPanel:
    normal, ax, ay = frame
    return RisPanel(center=np.asarray(center, dtype=float),
                    rows=cfg.ris_rows, cols=cfg.ris_cols,
                    d_x=cfg.element_size_x, d_y=cfg.element_size_y,
                    normal=normal, axis_x=ax, axis_y=ay,
                    reflection_coeff=cfg.reflection_coeff,
                    pattern_exponent=cfg.pattern_exponent,
                    element_gain=cfg.ris_gain)


def specular_frame(position, tx_center, rx_position):
    """Orthonormal panel frame whose normal bisects the T and R directions,
    i.e. the specular-reflection (optimal) orientation."""
    p = np.asarray(position, dtype=float)
    u_t = np.asarray(tx_center, dtype=float) - p
    u_t = u_t / np.linalg.norm(u_t)
    u_r = np.asarray(rx_position, dtype=float) - p
    u_r = u_r / np.linalg.norm(u_r)
    normal = u_t + u_r
    nn = np.linalg.norm(normal)
    if nn < 1e-12:
        # T and R exactly opposite: any normal in the bisecting plane works
        normal = np.array([0.0, 0.0, 1.0]) if abs(u_t[2]) < 0.9 \
            else np.array([1.0, 0.0, 0.0])
        normal = normal - np.dot(normal, u_t) * u_t
    else:
        normal = normal / nn
    ax = u_t - np.dot(u_t, normal) * normal
    if np.linalg.norm(ax) < 1e-12:
        ax = np.array([1.0, 0.0, 0.0]) \
            if abs(normal[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
        ax = ax - np.dot(ax, normal) * normal
    ax = ax / np.linalg.norm(ax)
    ay = np.cross(normal, ax)
    return normal / np.linalg.norm(normal), ax, ay / np.linalg.norm(ay)


def equilateral_scene(cfg: SceneConfig, d: float):
    """T, RIS, R on an equilateral triangle of side d with the RIS at the
    specular (optimal) orientation; ULA axis out of the triangle plane."""
    t_pos = np.array([-d / 2, 0.0, 0.0])
    r_pos = np.array([d / 2, 0.0, 0.0])
    i_pos = np.array([0.0, 0.0, np.sqrt(3) / 2 * d])
    frame = specular_frame(i_pos, t_pos, r_pos)
    tx = TransmitterArray(center=t_pos,
                          layout=UlaLayout(count=cfg.antennas,
                                           spacing=cfg.spacing,
                                           axis=np.array([0.0, 1.0, 0.0])),
                          element_gain=cfg.tx_gain)
    ris = _panel_at(cfg, i_pos, frame)
    return tx, ris, r_pos


def plane_endpoints(cfg: SceneConfig):
    """T and R of the Fig.-4-style setup: plane S is z = 0, both endpoints
    at height h, projected onto T' = origin and R' = (d_TR, 0)."""
    h = cfg.height
    sep = cfg.d_tr  # equal heights: projected separation equals d_TR
    t_pos = np.array([0.0, 0.0, h])
    r_pos = np.array([sep, 0.0, h])
    tx = TransmitterArray(center=t_pos,
                          layout=UlaLayout(count=cfg.antennas,
                                           spacing=cfg.spacing,
                                           axis=np.array([0.0, 0.0, 1.0])),
                          element_gain=cfg.tx_gain)
    return tx, r_pos


def _delta_tir(cfg: SceneConfig, f_pattern: float) -> float:
    return float(np.sqrt(cfg.tx_gain * cfg.rx_gain * cfg.ris_gain
                         * cfg.element_size_x * cfg.element_size_y
                         * cfg.wavelength**2 * f_pattern
                         * cfg.reflection_coeff**2 / (64 * np.pi**3)))


def _direct_amplitude(cfg: SceneConfig, d_tr: float) -> float:
    return float(np.sqrt(cfg.tx_gain * cfg.rx_gain) * cfg.wavelength
                 / (4 * np.pi * d_tr))


def analytic_point_power(cfg: SceneConfig, d_ti: float, d_ir: float,
                         d_tr: float, cos_mu_ti: float, cos_mu_tr: float,
                         ) -> dict:
    """Closed-form powers at one RIS position with optimal orientation.

    Returns the RIS-only, direct-only and combined two-path received powers
    plus the coherence factor O; all powers in watts.
    """
    _, _, f_star = optimal_orientation(d_ti, d_ir, d_tr,
                                       cfg.pattern_exponent)
    l = cfg.ris_rows * cfg.ris_cols
    n = cfg.antennas
    a_tir = _delta_tir(cfg, f_star) / (d_ti * d_ir)
    a_tr = _direct_amplitude(cfg, d_tr)
    ris_power = n * l**2 * a_tir**2 * cfg.tx_power
    direct_power = n * a_tr**2 * cfg.tx_power
    o = two_path_o(n, cfg.spacing, float(np.arccos(np.clip(cos_mu_ti, -1, 1))),
                   float(np.arccos(np.clip(cos_mu_tr, -1, 1))),
                   cfg.wavelength)
    combined = two_path_power_closed_form(a_tir, a_tr, o, n, l, cfg.tx_power)
    return {"ris": ris_power, "direct": direct_power, "combined": combined,
            "o": o}


def _meta(cfg: SceneConfig, experiment: str, extra: dict | None = None) -> dict:
    meta = {"tool": "rislink", "version": __version__,
            "experiment": experiment, "config_hash": cfg.config_hash}
    if extra:
        meta.update(extra)
    return meta


def sweep_distance(cfg: SceneConfig) -> SweepResult:
    """Equilateral-scene distance sweep: closed-form and SVD designs against
    the upper bound, all evaluated on the exact per-pair channel."""
    radio = _radio(cfg)
    sw = cfg.sweeps
    result = SweepResult(kind="line",
                         header=("d_m", "closed_form_w", "svd_w",
                                 "upper_bound_w", "closed_form_dbm",
                                 "svd_dbm", "upper_bound_dbm",
                                 "far_field_ok"),
                         meta=_meta(cfg, "sweep-distance"))
    for d in np.linspace(sw.distance_min, sw.distance_max,
                         sw.distance_points):
        tx, ris, rx = equilateral_scene(cfg, float(d))
        channels = exact_channel(tx, ris, rx, radio)
        sol = closed_form_solution(tx, ris, rx, radio)
        closed = received_power(channels, sol.theta, sol.v)
        svd = svd_solution(channels, cfg.tx_power).predicted_power
        bound = power_upper_bound(channels, cfg.tx_power)
        ok = far_field_check(tx, ris, rx, margin=1.0).ok
        result.rows.append((float(d), closed, svd, bound,
                            watts_to_dbm(closed), watts_to_dbm(svd),
                            watts_to_dbm(bound), int(ok)))
    return result


def sweep_plane(cfg: SceneConfig) -> SweepResult:
    """Received power versus RIS position on plane S, analytic per-point
    optimal design; adds the two-path balance when the direct link is on."""
    sw = cfg.sweeps
    h = cfg.height
    sep = cfg.d_tr
    header = ["x_m", "y_m", "ris_dbm"]
    if cfg.direct_link:
        header += ["direct_dbm", "total_dbm", "abs_o"]
    result = SweepResult(kind="heatmap", header=tuple(header),
                         meta=_meta(cfg, "sweep-plane",
                                    {"direct_link": cfg.direct_link}))
    xs = np.linspace(sw.plane_x[0], sw.plane_x[1], sw.plane_points)
    ys = np.linspace(sw.plane_y[0], sw.plane_y[1], sw.plane_points)
    for y in ys:
        for x in xs:
            d_ti = float(np.sqrt(x**2 + y**2 + h**2))
            d_ir = float(np.sqrt((x - sep)**2 + y**2 + h**2))
            # ULA axis is the plane normal, so cos(mu_TI) = h / d_TI and the
            # horizontal T->R direction gives cos(mu_TR) = 0
            p = analytic_point_power(cfg, d_ti, d_ir, sep,
                                     cos_mu_ti=h / d_ti, cos_mu_tr=0.0)
            row = [float(x), float(y), watts_to_dbm(p["ris"])]
            if cfg.direct_link:
                row += [watts_to_dbm(p["direct"]),
                        watts_to_dbm(p["combined"]), abs(p["o"])]
            result.rows.append(tuple(row))
    return result


def sweep_wavelength(cfg: SceneConfig) -> SweepResult:
    """Wavelength sweep with the fix-area anti-decay panel design; RIS fixed
    at R' on plane S."""
    sw = cfg.sweeps
    h = cfg.height
    sep = cfg.d_tr
    d_ti = float(np.sqrt(sep**2 + h**2))
    d_ir = h
    lam_hi = sw.wavelength_max
    lam_lo = lam_hi / 2.0 ** sw.wavelength_octaves
    result = SweepResult(kind="line",
                         header=("wavelength_m", "ris_w", "direct_w",
                                 "combined_w", "ris_dbm", "direct_dbm",
                                 "combined_dbm", "rows", "cols"),
                         meta=_meta(cfg, "sweep-wavelength"))
    for lam in np.linspace(lam_lo, lam_hi, sw.wavelength_points):
        design = anti_decay_design(float(lam), "fix_area", sw.element_ratio,
                                   total_area=sw.total_area)
        from dataclasses import replace
        point_cfg = replace(cfg, wavelength=float(lam),
                            ris_rows=design.rows, ris_cols=design.cols,
                            element_size_x=design.d_x,
                            element_size_y=design.d_y,
                            spacing=cfg.spacing / cfg.wavelength * float(lam))
        p = analytic_point_power(point_cfg, d_ti, d_ir, sep,
                                 cos_mu_ti=h / d_ti, cos_mu_tr=0.0)
        result.rows.append((float(lam), p["ris"], p["direct"], p["combined"],
                            watts_to_dbm(p["ris"]), watts_to_dbm(p["direct"]),
                            watts_to_dbm(p["combined"]), design.rows,
                            design.cols))
    return result


def robustness(cfg: SceneConfig) -> SweepResult:
    """Normalized power deviation of the closed-form beamformer and phase
    shifts derived at the assumed position T' but applied at perturbed true
    positions.

    Only the beamformer and phase shifts are estimated; the panel keeps the
    (locally known) specular orientation at its true position.
    """
    radio = _radio(cfg)
    sw = cfg.sweeps
    tx, rx = plane_endpoints(cfg)
    assumed = np.array([0.0, 0.0, 0.0])
    frame = specular_frame(assumed, tx.center, rx)
    ris_assumed = _panel_at(cfg, assumed, frame)
    est = closed_form_solution(tx, ris_assumed, rx, radio)

    result = SweepResult(kind="robustness",
                         header=("x_m", "y_m", "deviation", "estimated_dbm",
                                 "ideal_dbm"),
                         meta=_meta(cfg, "robustness"))
    offs = np.linspace(-sw.robustness_extent, sw.robustness_extent,
                       sw.robustness_points)
    for dy in offs:
        for dx in offs:
            true_pos = np.array([float(dx), float(dy), 0.0])
            ris_true = _panel_at(cfg, true_pos,
                                 specular_frame(true_pos, tx.center, rx))
            try:
                channels, _ = farfield_channel(tx, ris_true, rx, radio,
                                               mode="off")
                est_power = received_power(channels, est.theta, est.v)
            except ShadowedPanel:
                est_power = 0.0
            d_ti = float(np.linalg.norm(tx.center - true_pos))
            d_ir = float(np.linalg.norm(rx - true_pos))
            ideal = analytic_point_power(cfg, d_ti, d_ir, cfg.d_tr,
                                         cos_mu_ti=cfg.height / d_ti,
                                         cos_mu_tr=0.0)["ris"]
            dev = abs(est_power - ideal) / max(est_power, ideal)
            result.rows.append((float(dx), float(dy), dev,
                                watts_to_dbm(est_power),
                                watts_to_dbm(ideal)))
    return result


def solve(cfg: SceneConfig) -> SweepResult:
    """One fixed scene: every method's predicted and evaluated power."""
    radio = _radio(cfg)
    d = cfg.d_tr
    tx, ris, rx = equilateral_scene(cfg, d)
    channels = exact_channel(tx, ris, rx, radio, direct=cfg.direct_link)
    result = SweepResult(kind="line",
                         header=("method", "predicted_dbm", "evaluated_dbm"),
                         meta=_meta(cfg, "solve",
                                    {"direct_link": cfg.direct_link}))
    sols = [closed_form_solution(tx, ris, rx, radio)]
    if cfg.direct_link:
        from .solvers import two_path_solution
        sols.append(two_path_solution(tx, ris, rx, radio,
                                      mode=cfg.far_field_mode))
    sols.append(svd_solution(channels, cfg.tx_power))
    for sol in sols:
        evaluated = received_power(channels, sol.theta, sol.v)
        result.rows.append((sol.method.value,
                            watts_to_dbm(sol.predicted_power),
                            watts_to_dbm(evaluated)))
    result.rows.append(("upper-bound",
                        watts_to_dbm(power_upper_bound(channels,
                                                       cfg.tx_power)),
                        watts_to_dbm(power_upper_bound(channels,
                                                       cfg.tx_power))))
    return result


def validate_suite(cfg: SceneConfig) -> list[tuple[str, bool, str]]:
    """Small oracle suite: returns (name, passed, detail) triples."""
    from dataclasses import replace
    from .solvers import two_path_solution
    from .validation import random_feasible_solutions

    tiny = replace(cfg, ris_rows=2, ris_cols=2, antennas=2)
    radio = _radio(tiny)
    tx, ris, rx = equilateral_scene(tiny, 50.0)
    oracle_cfg = OracleConfig(phase_levels=64)
    checks: list[tuple[str, bool, str]] = []

    channels, _ = farfield_channel(tx, ris, rx, radio, mode="off")
    sol = closed_form_solution(tx, ris, rx, radio)
    closed = received_power(channels, sol.theta, sol.v)
    best, _ = exhaustive_phase_search(channels, tiny.tx_power, oracle_cfg)
    rel = abs(closed - best) / best
    checks.append(("closed-form vs phase-grid oracle", rel < 5e-3,
                   f"relative gap {rel:.2e}"))

    channels2, _ = farfield_channel(tx, ris, rx, radio, direct=True,
                                    mode="off")
    sol2 = two_path_solution(tx, ris, rx, radio, mode="off")
    closed2 = received_power(channels2, sol2.theta, sol2.v)
    best2, _ = exhaustive_phase_search(channels2, tiny.tx_power, oracle_cfg)
    rel2 = abs(closed2 - best2) / best2
    checks.append(("two-path closed form vs oracle", rel2 < 5e-3,
                   f"relative gap {rel2:.2e}"))

    samples = random_feasible_solutions((ris.count, tx.count), tiny.tx_power,
                                        200, seed=7)
    dominated = all(received_power(channels, th, v) <= closed * (1 + 1e-9)
                    for th, v in samples)
    checks.append(("closed form dominates random designs", dominated,
                   "200 samples"))

    bound = power_upper_bound(channels, tiny.tx_power)
    checks.append(("closed form within bound", closed <= bound * (1 + 1e-9),
                   f"power {closed:.3e} bound {bound:.3e}"))
    return checks
