"""Beamforming and phase-shift solutions: MRT, closed-form far-field designs
(with and without direct link), SVD-based projected solutions, and the
received-power upper bound."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .em import (ChannelSet, FarFieldFactors, RadioParams, amplitude_gain_tir,
                 direct_channel, farfield_channel, received_power)
from .errors import (AmbiguousSignWarning, DomainError, NoConvergence,
                     ZeroChannel)
from .geometry import (LinkAngles, RisPanel, TransmitterArray, UlaLayout,
                       _grid_offsets, antenna_positions, link_angles)

_FEAS_POWER_SLACK = 1e-9
_UNIT_TOL = 1e-12


class Method(Enum):
    CLOSED_FORM = "closed-form"
    CLOSED_FORM_TWO_PATH = "closed-form-two-path"
    SVD_PROJECTED = "svd-projected"
    MRT = "mrt"


@dataclass(frozen=True)
class Solution:
    """One joint design: beamformer v, unit-modulus phases theta, and the
    power the method predicts for itself."""

    v: np.ndarray
    theta: np.ndarray
    predicted_power: float
    method: Method


@dataclass(frozen=True)
class TwoPathTerms:
    """Coherence factor O between RIS and direct paths and the constant
    phase offset added to every element in the two-path design."""

    o: float
    phase_offset: float


def _check_feasible(v: np.ndarray, theta: np.ndarray, p_t: float) -> None:
    power = float(np.vdot(v, v).real)
    if power > p_t * (1 + _FEAS_POWER_SLACK) + _FEAS_POWER_SLACK:
        raise DomainError(f"beamformer power {power} exceeds budget {p_t}")
    if np.max(np.abs(np.abs(theta) - 1.0)) > _UNIT_TOL:
        raise DomainError("phase vector entries must be unit-modulus")


def mrt_beamforming(h_eff: np.ndarray, p_t: float) -> np.ndarray:
    """Maximum-ratio transmission against an effective 1 x N channel row:
    v = sqrt(P_t) * conj(h_eff) / ||h_eff||."""
    h_eff = np.asarray(h_eff)
    norm = np.linalg.norm(h_eff)
    if norm == 0.0:
        raise ZeroChannel("effective channel is zero")
    return np.sqrt(p_t) * np.conj(h_eff) / norm


def closed_form_phases(angles: LinkAngles, ris: RisPanel,
                       wavelength: float) -> np.ndarray:
    """Far-field optimal phase shifts, one unit-modulus entry per element.

    phi_q = (2*pi/l) * [(sin(t_t)cos(p_t) + sin(t_r)cos(p_r)) * x_offset_q
                        + (sin(t_t)sin(p_t) + sin(t_r)sin(p_r)) * y_offset_q]
    which is the conjugate of the channel's combined element phasor d_vec.
    """
    xo, yo = _grid_offsets(ris.rows, ris.cols, ris.d_x, ris.d_y)
    gx = (np.sin(angles.theta_t) * np.cos(angles.phi_t)
          + np.sin(angles.theta_r) * np.cos(angles.phi_r))
    gy = (np.sin(angles.theta_t) * np.sin(angles.phi_t)
          + np.sin(angles.theta_r) * np.sin(angles.phi_r))
    phi = 2 * np.pi / wavelength * (gx * xo + gy * yo)
    return np.exp(1j * phi)


def closed_form_beamforming(angles: LinkAngles, tx: TransmitterArray,
                            wavelength: float, p_t: float) -> np.ndarray:
    """Decoupled closed-form ULA beamformer:
    v_p = sqrt(P_t/N) * exp(-j*(2*pi/l)*((N+1)/2 - p)*spacing*cos(mu_TI)).

    UPA arrays carry two-dimensional offsets; use
    closed_form_beamforming_general for those.
    """
    lay = tx.layout
    if not isinstance(lay, UlaLayout):
        raise DomainError("formula variant supports ULA only; "
                          "use closed_form_beamforming_general")
    n = lay.count
    p = np.arange(1, n + 1)
    phase = (2 * np.pi / wavelength * ((n + 1) / 2 - p) * lay.spacing
             * np.cos(angles.mu_ti))
    return np.sqrt(p_t / n) * np.exp(-1j * phase)


def closed_form_beamforming_general(tx: TransmitterArray, ris_position,
                                    wavelength: float,
                                    p_t: float) -> np.ndarray:
    """Closed-form beamformer from linearized per-antenna offsets toward the
    RIS; covers both ULA and UPA layouts."""
    target = np.asarray(ris_position, dtype=float)
    ants = antenna_positions(tx)
    u = target - tx.center
    u = u / np.linalg.norm(u)
    offsets = -(ants - tx.center[None, :]) @ u
    b_vec = np.exp(1j * 2 * np.pi / wavelength * offsets)
    return np.sqrt(p_t / tx.count) * np.conj(b_vec)


def closed_form_predicted_power(a_tir: float, n: int, l: int,
                                p_t: float) -> float:
    """Received power achieved by the far-field closed form: N * L^2 * a_TIR^2 * P_t."""
    return n * l**2 * a_tir**2 * p_t


def closed_form_solution(tx: TransmitterArray, ris: RisPanel, rx_position,
                         radio: RadioParams) -> Solution:
    """Assemble the far-field closed-form design for one scene."""
    angles = link_angles(tx, ris, rx_position)
    gain = amplitude_gain_tir(angles, tx, ris, radio)
    theta = closed_form_phases(angles, ris, radio.wavelength)
    if isinstance(tx.layout, UlaLayout):
        v = closed_form_beamforming(angles, tx, radio.wavelength,
                                    radio.tx_power)
    else:
        v = closed_form_beamforming_general(tx, ris.center, radio.wavelength,
                                            radio.tx_power)
    predicted = closed_form_predicted_power(gain.amplitude, tx.count,
                                            ris.count, radio.tx_power)
    _check_feasible(v, theta, radio.tx_power)
    return Solution(v=v, theta=theta, predicted_power=predicted,
                    method=Method.CLOSED_FORM)


def two_path_o(n: int, spacing: float, mu_ti: float, mu_tr: float,
               wavelength: float) -> float:
    """Sinc-ratio coherence factor between the RIS and direct paths.

    O = sinc(N*u) / sinc(u) with u = spacing*(cos(mu_TI) - cos(mu_TR))*pi/l
    and sinc(x) = sin(x)/x, sinc(0) = 1.  Falls back to the direct
    geometric-progression sum when the denominator sinc vanishes.
    """
    if n < 1:
        raise DomainError("antenna count must be >= 1")
    u = spacing * (np.cos(mu_ti) - np.cos(mu_tr)) * np.pi / wavelength
    den = np.sinc(u / np.pi)  # np.sinc is the normalized sin(pi x)/(pi x)
    if abs(den) < 1e-9:
        # removable singularity: evaluate (1/N) * sum_p cos(K_p) directly
        p = np.arange(1, n + 1)
        k_p = 2 * u * (p - (n + 1) / 2)
        return float(np.mean(np.cos(k_p)))
    return float(np.sinc(n * u / np.pi) / den)


def two_path_terms(angles: LinkAngles, tx: TransmitterArray,
                   wavelength: float) -> TwoPathTerms:
    """O and the constant phase offset of the two-path closed form:
    pi/2*(O/|O| - 1) - (2*pi/l)*(d_TI + d_IR - d_TR)."""
    lay = tx.layout
    if not isinstance(lay, UlaLayout):
        raise DomainError("two-path closed form is derived for ULA layouts")
    o = two_path_o(lay.count, lay.spacing, angles.mu_ti, angles.mu_tr,
                   wavelength)
    if abs(o) < 1e-12:
        warnings.warn("O = 0: sign fold undefined, using +1 branch "
                      "(cross term vanishes)", AmbiguousSignWarning)
        sign = 1.0
    else:
        sign = np.sign(o)
    offset = (np.pi / 2 * (sign - 1.0)
              - 2 * np.pi / wavelength
              * (angles.d_ti + angles.d_ir - angles.d_tr))
    return TwoPathTerms(o=o, phase_offset=float(offset))


def closed_form_phases_two_path(angles: LinkAngles, ris: RisPanel,
                                tx: TransmitterArray,
                                wavelength: float) -> np.ndarray:
    """Two-path closed-form phase shifts: the RIS-only design rotated by the
    constant offset that phase-aligns the RIS path with the direct path."""
    base = closed_form_phases(angles, ris, wavelength)
    terms = two_path_terms(angles, tx, wavelength)
    return base * np.exp(1j * terms.phase_offset)


def two_path_power_closed_form(a_tir: float, a_tr: float, o: float, n: int,
                               l: int, p_t: float) -> float:
    """Received power of the optimal two-path design:
    N*L^2*a_TIR^2*P_t + N*a_TR^2*P_t + 2*N*L*a_TR*a_TIR*|O|*P_t (the sign
    fold in the phases turns the cross term positive)."""
    if a_tir < 0 or a_tr < 0:
        raise DomainError("amplitudes must be nonnegative")
    return (n * l**2 * a_tir**2 * p_t + n * a_tr**2 * p_t
            + 2 * n * l * a_tr * a_tir * abs(o) * p_t)


def two_path_solution(tx: TransmitterArray, ris: RisPanel, rx_position,
                      radio: RadioParams, *, margin: float = 1.0,
                      mode: str = "warn") -> Solution:
    """Two-path closed-form design: phases from the two-path formula, MRT
    beamformer against the assembled far-field effective channel."""
    angles = link_angles(tx, ris, rx_position)
    gain = amplitude_gain_tir(angles, tx, ris, radio)
    theta = closed_form_phases_two_path(angles, ris, tx, radio.wavelength)
    channels, _ = farfield_channel(tx, ris, rx_position, radio, direct=True,
                                   margin=margin, mode=mode)
    row = (channels.h_ir * theta) @ channels.h_ti + channels.h_tr
    v = mrt_beamforming(row, radio.tx_power)
    terms = two_path_terms(angles, tx, radio.wavelength)
    a_tr = float(np.abs(channels.h_tr[0]))
    predicted = two_path_power_closed_form(gain.amplitude, a_tr, terms.o,
                                           tx.count, ris.count,
                                           radio.tx_power)
    _check_feasible(v, theta, radio.tx_power)
    return Solution(v=v, theta=theta, predicted_power=predicted,
                    method=Method.CLOSED_FORM_TWO_PATH)


def _leading_left_singular_vector(a: np.ndarray, *, tol: float = 1e-12,
                                  max_iter: int = 10_000,
                                  seed: int = 0) -> tuple[np.ndarray, float]:
    """Leading left singular vector and singular value of `a` (L x N) via
    power iteration on the N x N Gram matrix.

    Deterministic all-ones start; re-randomized from a fixed seed if the
    start is orthogonal to the dominant eigenvector.  The global phase of
    the returned vector makes its first significant entry real-positive.
    """
    l, n = a.shape
    gram = a.conj().T @ a
    scale = np.linalg.norm(gram)
    if scale == 0.0:
        raise ZeroChannel("cascade channel is identically zero")
    v = np.ones(n, dtype=complex) / np.sqrt(n)
    lam_prev = -np.inf
    rng = np.random.default_rng(seed)
    residual = np.inf
    for _ in range(max_iter):
        w = gram @ v
        norm = np.linalg.norm(w)
        if norm == 0.0:
            # start vector in the null space: restart from the fixed seed
            v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            v /= np.linalg.norm(v)
            continue
        v = w / norm
        lam = float(np.real(np.vdot(v, gram @ v)))
        residual = abs(lam - lam_prev) / max(abs(lam), 1e-300)
        if residual <= tol:
            lam_prev = lam
            break
        lam_prev = lam
    else:
        raise NoConvergence("power iteration did not converge", residual)
    sigma = np.sqrt(max(lam_prev, 0.0))
    u = a @ v / sigma
    u /= np.linalg.norm(u)
    # fix the global phase: first significant entry real-positive
    idx = int(np.argmax(np.abs(u) > 1e-12 * np.max(np.abs(u))))
    u = u * np.exp(-1j * np.angle(u[idx]))
    return u, float(sigma)


def svd_solution(channels: ChannelSet, p_t: float) -> Solution:
    """SVD-based design: project the leading left singular vector of the
    cascade channel onto unit-modulus phases, then MRT."""
    cascade = channels.cascade()
    u1, _sigma = _leading_left_singular_vector(cascade)
    conj_u = np.conj(u1)
    theta = np.where(np.abs(conj_u) > 0.0,
                     np.exp(1j * np.angle(conj_u)), 1.0 + 0j)
    row = theta @ cascade
    if channels.h_tr is not None:
        row = row + channels.h_tr
    v = mrt_beamforming(row, p_t)
    achieved = received_power(channels, theta, v)
    _check_feasible(v, theta, p_t)
    return Solution(v=v, theta=theta, predicted_power=achieved,
                    method=Method.SVD_PROJECTED)


def power_upper_bound(channels: ChannelSet, p_t: float) -> float:
    """Received-power ceiling L * sigma_max(cascade)^2 * P_t (RIS link only)."""
    cascade = channels.cascade()
    if not np.any(cascade):
        return 0.0
    sigma = np.linalg.svd(cascade, compute_uv=False)[0]
    return float(channels.num_elements * sigma**2 * p_t)


@dataclass(frozen=True)
class GridDesign:
    """Panel grid produced by the anti-decay design rule."""

    rows: int
    cols: int
    d_x: float
    d_y: float

    @property
    def count(self) -> int:
        return self.rows * self.cols

    @property
    def achieved_area(self) -> float:
        return self.rows * self.cols * self.d_x * self.d_y


def anti_decay_design(wavelength: float, mode: str, ratio: float, *,
                      total_area: float | None = None,
                      element_size: tuple[float, float] | None = None,
                      count_wavelength_product: float | None = None,
                      ) -> GridDesign:
    """Wavelength-tracking panel design that keeps the RIS-link power flat.

    mode "fix_area": element side = ratio * wavelength; the square grid is
    the largest one fitting the requested total area (rounded down, achieved
    area reported by the result).  mode "fix_element": element size fixed,
    element count L = floor(count_wavelength_product / wavelength) so that
    L * wavelength stays constant.
    """
    if ratio <= 0:
        raise DomainError("ratio must be > 0")
    if mode == "fix_area":
        if total_area is None:
            raise DomainError("fix_area mode requires total_area")
        d = ratio * wavelength
        side = int(np.floor(np.sqrt(total_area) / d))
        if side < 1:
            raise DomainError("total area too small for one element")
        return GridDesign(rows=side, cols=side, d_x=d, d_y=d)
    if mode == "fix_element":
        if element_size is None or count_wavelength_product is None:
            raise DomainError("fix_element mode requires element_size and "
                              "count_wavelength_product")
        l = int(np.floor(count_wavelength_product / wavelength))
        if l < 1:
            raise DomainError("wavelength too long for one element")
        rows = max(int(np.floor(np.sqrt(l))), 1)
        cols = l // rows
        return GridDesign(rows=rows, cols=cols, d_x=element_size[0],
                          d_y=element_size[1])
    raise DomainError(f"unknown anti-decay mode {mode!r}")
