"""Channel construction: radiation pattern, amplitude gains, exact and
far-field approximated channels, direct link, and received power.

Conventions.  `ChannelSet.h_ti` stores the L x N matrix whose (q, p) entry is
the cascaded-path coefficient with positive geometric phase exp(+j*2*pi*d/l),
i.e. the matrix that multiplies the beamformer in the received-power formula.
`h_ir` is the matching length-L row and `h_tr` the optional length-N direct
row.  The far-field amplitude split between the T->I and I->R hops is not
observable; the whole product a_TIR is carried on `h_ti` and `h_ir` entries
have unit amplitude.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (DegenerateGeometry, DimensionMismatch, DomainError,
                     FarFieldViolation, FarFieldWarning, ShadowedPanel)
from .geometry import (LinkAngles, RisPanel, TransmitterArray,
                       antenna_positions, element_positions, far_field_check,
                       link_angles)


@dataclass(frozen=True)
class RadioParams:
    """Link-level radio constants: wavelength (m), transmit power budget (W),
    receive antenna gain (linear power ratio)."""

    wavelength: float
    tx_power: float = 1.0
    rx_gain: float = 1.0

    def __post_init__(self):
        if self.wavelength <= 0:
            raise DomainError("wavelength must be > 0")
        if self.tx_power < 0 or self.rx_gain < 0:
            raise DomainError("power and gain must be nonnegative")


@dataclass(frozen=True)
class ChannelSet:
    """Assembled channel matrices for one scene."""

    h_ti: np.ndarray            # (L, N) cascaded T->RIS coefficients
    h_ir: np.ndarray            # (L,)   RIS->R coefficients
    wavelength: float
    h_tr: np.ndarray | None = None  # (N,) direct T->R row, if present
    farfield: bool = False

    def __post_init__(self):
        if self.h_ti.ndim != 2 or self.h_ir.ndim != 1:
            raise DimensionMismatch("h_ti must be (L, N) and h_ir (L,)")
        if self.h_ti.shape[0] != self.h_ir.shape[0]:
            raise DimensionMismatch("h_ti and h_ir disagree on L")
        if self.h_tr is not None and self.h_tr.shape != (self.h_ti.shape[1],):
            raise DimensionMismatch("h_tr must have length N")
        if self.wavelength <= 0:
            raise DomainError("wavelength must be > 0")

    @property
    def num_elements(self) -> int:
        return self.h_ti.shape[0]

    @property
    def num_antennas(self) -> int:
        return self.h_ti.shape[1]

    def cascade(self) -> np.ndarray:
        """L x N cascade matrix: row q is h_ir[q] * h_ti[q, :]."""
        return self.h_ir[:, None] * self.h_ti


@dataclass(frozen=True)
class FarFieldFactors:
    """Rank-one factorization pieces of the far-field channel.

    a_vec, b_vec, c_vec are the unit-modulus element/antenna phase vectors of
    the T->RIS and RIS->R hops; d_vec = c_vec * a_vec combines both hops per
    reflective element.  phase_ti / phase_ir are the common center-distance
    phasors.
    """

    a_tir: float
    a_vec: np.ndarray   # (L,)
    b_vec: np.ndarray   # (N,)
    c_vec: np.ndarray   # (L,)
    d_vec: np.ndarray   # (L,)
    phase_ti: complex
    phase_ir: complex


@dataclass(frozen=True)
class TirGain:
    delta: float       # distance-free amplitude factor
    amplitude: float   # delta / (d_TI * d_IR)


def radiation_pattern(theta, k: float):
    """Normalized power pattern cos(theta)**k on the front half-space.

    Returns cos(theta)**k for theta in [0, pi/2] and 0 on (pi/2, pi];
    continuous at pi/2 for k > 0.  Accepts scalars or arrays.
    """
    if k < 0:
        raise DomainError("pattern exponent must be >= 0")
    t = np.asarray(theta, dtype=float)
    if np.any(t < 0) or np.any(t > np.pi):
        raise DomainError("pattern angle must lie in [0, pi]")
    front = t <= np.pi / 2
    out = np.where(front, np.cos(np.where(front, t, 0.0)) ** k, 0.0)
    return float(out) if np.isscalar(theta) or np.ndim(theta) == 0 else out


def amplitude_gain_tir(angles: LinkAngles, tx: TransmitterArray,
                       ris: RisPanel, radio: RadioParams) -> TirGain:
    """Combined per-element amplitude gain of the T->RIS->R link.

    delta = sqrt(G_t*G_r*G*d_x*d_y*l^2*F(theta_t)*F(theta_r)*Gamma^2/(64*pi^3))
    and amplitude = delta / (d_TI * d_IR).
    """
    k = ris.pattern_exponent
    f_t = radiation_pattern(angles.theta_t, k)
    f_r = radiation_pattern(angles.theta_r, k)
    if f_t * f_r == 0.0:
        raise ShadowedPanel("pattern gain vanishes; panel does not see both ends")
    delta = np.sqrt(tx.element_gain * radio.rx_gain * ris.element_gain
                    * ris.d_x * ris.d_y * radio.wavelength**2
                    * f_t * f_r * ris.reflection_coeff**2 / (64 * np.pi**3))
    return TirGain(delta=float(delta),
                   amplitude=float(delta / (angles.d_ti * angles.d_ir)))


def _offsets_along(points: np.ndarray, center: np.ndarray,
                   target: np.ndarray) -> np.ndarray:
    """Linearized path-length change of each point toward a far target:
    delta_d = -(point - center) . unit(target - center)."""
    u = target - center
    u = u / np.linalg.norm(u)
    return -(points - center[None, :]) @ u


def _enforce_far_field(tx, ris, rx, margin: float, mode: str) -> None:
    if mode == "off":
        return
    chk = far_field_check(tx, ris, rx, margin=margin)
    if chk.ok:
        return
    msg = (f"far-field conditions fail at margin {margin}: "
           f"ratios {chk.ratios}")
    if mode == "strict":
        raise FarFieldViolation(msg)
    warnings.warn(msg, FarFieldWarning)


def farfield_channel(tx: TransmitterArray, ris: RisPanel, rx_position,
                     radio: RadioParams, *, direct: bool = False,
                     margin: float = 1.0,
                     mode: str = "warn") -> tuple[ChannelSet, FarFieldFactors]:
    """Rank-one far-field channel with its factorization.

    h_ti = a_TIR * exp(j*2*pi*d_TI/l) * outer(a_vec, b_vec) and
    h_ir = exp(j*2*pi*d_IR/l) * c_vec.  `mode` controls far-field
    enforcement: "strict" raises, "warn" (default) warns, "off" skips.
    """
    if mode not in ("strict", "warn", "off"):
        raise DomainError(f"unknown far-field mode {mode!r}")
    rx = np.asarray(rx_position, dtype=float)
    _enforce_far_field(tx, ris, rx, margin, mode)

    angles = link_angles(tx, ris, rx)
    gain = amplitude_gain_tir(angles, tx, ris, radio)
    lam = radio.wavelength
    wavenum = 2 * np.pi / lam

    elems = element_positions(ris)
    ants = antenna_positions(tx)
    d_t_iq = _offsets_along(elems, ris.center, tx.center)   # Delta d^T_{I,q}
    d_r_iq = _offsets_along(elems, ris.center, rx)          # Delta d^R_{I,q}
    d_i_tp = _offsets_along(ants, tx.center, ris.center)    # Delta d^I_{T,p}

    a_vec = np.exp(1j * wavenum * d_t_iq)
    c_vec = np.exp(1j * wavenum * d_r_iq)
    b_vec = np.exp(1j * wavenum * d_i_tp)
    d_vec = c_vec * a_vec
    phase_ti = complex(np.exp(1j * wavenum * angles.d_ti))
    phase_ir = complex(np.exp(1j * wavenum * angles.d_ir))

    h_ti = gain.amplitude * phase_ti * np.outer(a_vec, b_vec)
    h_ir = phase_ir * c_vec

    h_tr = direct_channel(tx, rx, radio, farfield=True) if direct else None
    channels = ChannelSet(h_ti=h_ti, h_ir=h_ir, wavelength=lam, h_tr=h_tr,
                          farfield=True)
    factors = FarFieldFactors(a_tir=gain.amplitude, a_vec=a_vec, b_vec=b_vec,
                              c_vec=c_vec, d_vec=d_vec,
                              phase_ti=phase_ti, phase_ir=phase_ir)
    return channels, factors


def exact_channel(tx: TransmitterArray, ris: RisPanel, rx_position,
                  radio: RadioParams, *, direct: bool = False) -> ChannelSet:
    """Per-pair geometric channel used as the validation oracle.

    Entry (q, p) of h_ti carries the exact phase 2*pi*d_{TI,p,q}/l and the
    per-pair amplitude delta / (d_{TI,p,q} * d_{IR,q}); pattern angles are
    evaluated at the panel center.
    """
    rx = np.asarray(rx_position, dtype=float)
    angles = link_angles(tx, ris, rx)  # raises on coincident points
    gain = amplitude_gain_tir(angles, tx, ris, radio)
    lam = radio.wavelength
    wavenum = 2 * np.pi / lam

    elems = element_positions(ris)             # (L, 3)
    ants = antenna_positions(tx)               # (N, 3)
    d_ti = np.linalg.norm(elems[:, None, :] - ants[None, :, :], axis=2)  # (L, N)
    d_ir = np.linalg.norm(rx[None, :] - elems, axis=1)                   # (L,)
    if np.min(d_ti) == 0.0 or np.min(d_ir) == 0.0:
        raise DegenerateGeometry("antenna/element/receiver positions coincide")

    h_ti = gain.delta / (d_ti * d_ir[:, None]) * np.exp(1j * wavenum * d_ti)
    h_ir = np.exp(1j * wavenum * d_ir)

    h_tr = direct_channel(tx, rx, radio, farfield=False) if direct else None
    return ChannelSet(h_ti=h_ti, h_ir=h_ir, wavelength=lam, h_tr=h_tr,
                      farfield=False)


def direct_channel(tx: TransmitterArray, rx_position, radio: RadioParams,
                   *, farfield: bool = False) -> np.ndarray:
    """Direct T->R row, length N: entry p is a_TR * exp(j*2*pi*d_{TR,p}/l)
    with the Friis amplitude a_TR = sqrt(G_t*G_r)*l/(4*pi*d_TR).

    The far-field variant linearizes the per-antenna distances as
    d_TR + ((N+1)/2 - p) * spacing * cos(mu_TR).
    """
    rx = np.asarray(rx_position, dtype=float)
    d_tr = float(np.linalg.norm(rx - tx.center))
    if d_tr == 0.0:
        raise DegenerateGeometry("transmitter and receiver coincide")
    lam = radio.wavelength
    a_tr = np.sqrt(tx.element_gain * radio.rx_gain) * lam / (4 * np.pi * d_tr)
    ants = antenna_positions(tx)
    if farfield:
        d_p = d_tr + _offsets_along(ants, tx.center, rx)
    else:
        d_p = np.linalg.norm(rx[None, :] - ants, axis=1)
    return a_tr * np.exp(1j * 2 * np.pi * d_p / lam)


def received_power(channels: ChannelSet, theta: np.ndarray,
                   v: np.ndarray) -> float:
    """Received useful power |h_IR^H Theta H_TI^H v (+ h_TR^H v)|^2 in watts.

    Caller guarantees unit-modulus theta and a beamformer within the power
    budget; shapes are checked here.
    """
    theta = np.asarray(theta)
    v = np.asarray(v)
    if theta.shape != (channels.num_elements,):
        raise DimensionMismatch(
            f"theta must have length {channels.num_elements}")
    if v.shape != (channels.num_antennas,):
        raise DimensionMismatch(f"v must have length {channels.num_antennas}")
    amp = (channels.h_ir * theta) @ channels.h_ti @ v
    if channels.h_tr is not None:
        amp = amp + channels.h_tr @ v
    return float(np.abs(amp) ** 2)
