"""Scene geometry: array/panel element positions, link angles, far-field checks.

All positions are 3-D numpy vectors in meters.  The RIS carries an
orthonormal frame (normal, in-plane x, in-plane y); elevation angles are
measured from the panel normal and azimuths counterclockwise from the
in-plane x axis, range [0, 2*pi).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateGeometry, DomainError

Vec3 = np.ndarray

_UNIT_TOL = 1e-12


def _as_vec3(v) -> Vec3:
    a = np.asarray(v, dtype=float)
    if a.shape != (3,):
        raise DomainError(f"expected a 3-vector, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise DomainError("vector components must be finite")
    return a


def _check_unit(v: Vec3, name: str) -> Vec3:
    v = _as_vec3(v)
    if abs(np.linalg.norm(v) - 1.0) > _UNIT_TOL:
        raise DomainError(f"{name} must be unit-norm within {_UNIT_TOL}")
    return v


@dataclass(frozen=True)
class UlaLayout:
    """Uniform linear array: `count` antennas spaced `spacing` along `axis`."""

    count: int
    spacing: float
    axis: Vec3

    def __post_init__(self):
        if self.count < 1:
            raise DomainError("antenna count must be >= 1")
        if self.spacing <= 0:
            raise DomainError("antenna spacing must be > 0")
        object.__setattr__(self, "axis", _check_unit(self.axis, "ULA axis"))


@dataclass(frozen=True)
class UpaLayout:
    """Uniform planar array on two orthonormal in-plane axes."""

    rows: int
    cols: int
    spacing_x: float
    spacing_y: float
    axis_x: Vec3
    axis_y: Vec3

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise DomainError("UPA rows and cols must be >= 1")
        if self.spacing_x <= 0 or self.spacing_y <= 0:
            raise DomainError("UPA spacings must be > 0")
        ax = _check_unit(self.axis_x, "UPA axis_x")
        ay = _check_unit(self.axis_y, "UPA axis_y")
        if abs(np.dot(ax, ay)) > _UNIT_TOL:
            raise DomainError("UPA axes must be orthogonal")
        object.__setattr__(self, "axis_x", ax)
        object.__setattr__(self, "axis_y", ay)

    @property
    def count(self) -> int:
        return self.rows * self.cols


@dataclass(frozen=True)
class TransmitterArray:
    """Transmit array: a center point, a ULA or UPA layout, and element gain."""

    center: Vec3
    layout: UlaLayout | UpaLayout
    element_gain: float = 1.0  # linear power ratio

    def __post_init__(self):
        object.__setattr__(self, "center", _as_vec3(self.center))
        if self.element_gain < 0:
            raise DomainError("element gain must be nonnegative")

    @property
    def count(self) -> int:
        return self.layout.count


@dataclass(frozen=True)
class RisPanel:
    """Reflective panel: rows x cols elements of size d_x x d_y on a rigid frame.

    `normal`, `axis_x`, `axis_y` form an orthonormal frame; elements are laid
    out on the axis_x/axis_y plane centered on `center`.
    """

    center: Vec3
    rows: int
    cols: int
    d_x: float
    d_y: float
    normal: Vec3
    axis_x: Vec3
    axis_y: Vec3
    reflection_coeff: float = 1.0
    pattern_exponent: float = 3.0
    element_gain: float = 1.0  # linear power ratio

    def __post_init__(self):
        object.__setattr__(self, "center", _as_vec3(self.center))
        if self.rows < 1 or self.cols < 1:
            raise DomainError("panel rows and cols must be >= 1")
        if self.d_x <= 0 or self.d_y <= 0:
            raise DomainError("element sizes must be > 0")
        n = _check_unit(self.normal, "panel normal")
        ax = _check_unit(self.axis_x, "panel axis_x")
        ay = _check_unit(self.axis_y, "panel axis_y")
        for a, b, nm in ((n, ax, "normal/axis_x"), (n, ay, "normal/axis_y"),
                         (ax, ay, "axis_x/axis_y")):
            if abs(np.dot(a, b)) > _UNIT_TOL:
                raise DomainError(f"panel frame not orthogonal: {nm}")
        object.__setattr__(self, "normal", n)
        object.__setattr__(self, "axis_x", ax)
        object.__setattr__(self, "axis_y", ay)
        if not 0.0 <= self.reflection_coeff <= 1.0:
            raise DomainError("reflection coefficient must lie in [0, 1]")
        if self.pattern_exponent < 0:
            raise DomainError("pattern exponent must be >= 0")

    @property
    def count(self) -> int:
        return self.rows * self.cols


@dataclass(frozen=True)
class LinkAngles:
    """Center-to-center distances and all angles the channel model consumes.

    `mu_ti` / `mu_tr` are the angles between the transmit-array axis and the
    arrival directions at the transmitter from the RIS / receiver (the
    directions I->T and R->T).  With that convention the linearized path
    difference of antenna p toward X is exactly
    ((N+1)/2 - p) * spacing * cos(mu_TX).
    """

    d_ti: float
    d_ir: float
    d_tr: float
    theta_t: float
    phi_t: float
    theta_r: float
    phi_r: float
    mu_ti: float
    mu_tr: float
    theta_0: float


def _grid_offsets(rows: int, cols: int, d_x: float, d_y: float):
    """Centered row-major grid offsets; row index is the major axis.

    Element q (0-based) has 1-based column m_q = q % cols + 1 and row
    n_q = q // cols + 1; its in-plane offset is
    (m_q - (cols+1)/2) * d_x  and  (n_q - (rows+1)/2) * d_y.
    """
    q = np.arange(rows * cols)
    m = q % cols + 1
    n = q // cols + 1
    return (m - (cols + 1) / 2) * d_x, (n - (rows + 1) / 2) * d_y


def antenna_positions(tx: TransmitterArray) -> np.ndarray:
    """Positions of every transmit antenna, shape (N, 3).

    ULA antenna p (1-based) sits at center + ((N+1)/2 - p) * spacing * axis,
    so positions are symmetric about the center.
    """
    lay = tx.layout
    if isinstance(lay, UlaLayout):
        p = np.arange(1, lay.count + 1)
        off = ((lay.count + 1) / 2 - p) * lay.spacing
        return tx.center[None, :] + off[:, None] * lay.axis[None, :]
    xo, yo = _grid_offsets(lay.rows, lay.cols, lay.spacing_x, lay.spacing_y)
    return (tx.center[None, :]
            + xo[:, None] * lay.axis_x[None, :]
            + yo[:, None] * lay.axis_y[None, :])


def element_positions(ris: RisPanel) -> np.ndarray:
    """Positions of every reflective element, shape (L, 3), row-major order."""
    xo, yo = _grid_offsets(ris.rows, ris.cols, ris.d_x, ris.d_y)
    return (ris.center[None, :]
            + xo[:, None] * ris.axis_x[None, :]
            + yo[:, None] * ris.axis_y[None, :])


def _angle_between(u: Vec3, v: Vec3) -> float:
    c = np.dot(u, v) / (np.linalg.norm(u) * np.linalg.norm(v))
    return float(np.arccos(np.clip(c, -1.0, 1.0)))


def _elevation_azimuth(ris: RisPanel, direction: Vec3) -> tuple[float, float]:
    """Elevation from the panel normal and azimuth from axis_x, in [0, 2*pi)."""
    theta = _angle_between(ris.normal, direction)
    x = np.dot(direction, ris.axis_x)
    y = np.dot(direction, ris.axis_y)
    if x == 0.0 and y == 0.0:
        return theta, 0.0
    phi = float(np.arctan2(y, x)) % (2 * np.pi)
    return theta, phi


def _array_axis(tx: TransmitterArray) -> Vec3:
    lay = tx.layout
    return lay.axis if isinstance(lay, UlaLayout) else lay.axis_x


def link_angles(tx: TransmitterArray, ris: RisPanel, rx_position) -> LinkAngles:
    """Derive all link angles and center distances for one scene.

    theta_0 (the angle at the RIS in the T-I-R triangle) is always computed
    from the law of cosines on the three center distances.
    """
    rx = _as_vec3(rx_position)
    r_t, r_i = tx.center, ris.center
    d_ti = float(np.linalg.norm(r_t - r_i))
    d_ir = float(np.linalg.norm(rx - r_i))
    d_tr = float(np.linalg.norm(rx - r_t))
    if min(d_ti, d_ir, d_tr) == 0.0:
        raise DegenerateGeometry("two of T, I, R coincide")

    theta_t, phi_t = _elevation_azimuth(ris, r_t - r_i)
    theta_r, phi_r = _elevation_azimuth(ris, rx - r_i)

    axis = _array_axis(tx)
    # Arrival directions at the transmitter (I->T, R->T); see LinkAngles doc.
    mu_ti = _angle_between(axis, r_t - r_i)
    mu_tr = _angle_between(axis, r_t - rx)

    cos_t0 = (d_ti**2 + d_ir**2 - d_tr**2) / (2 * d_ti * d_ir)
    theta_0 = float(np.arccos(np.clip(cos_t0, -1.0, 1.0)))

    return LinkAngles(d_ti=d_ti, d_ir=d_ir, d_tr=d_tr,
                      theta_t=theta_t, phi_t=phi_t,
                      theta_r=theta_r, phi_r=phi_r,
                      mu_ti=mu_ti, mu_tr=mu_tr, theta_0=theta_0)


@dataclass(frozen=True)
class FarFieldCheck:
    ok: bool
    ratios: tuple[float, float, float]


def _tx_aperture_scale(tx: TransmitterArray) -> float:
    lay = tx.layout
    if isinstance(lay, UlaLayout):
        return lay.count * lay.spacing
    return lay.count * max(lay.spacing_x, lay.spacing_y)


_STRICTNESS = 2.0  # encodes the "much greater than" in the validity conditions


def far_field_check(tx: TransmitterArray, ris: RisPanel, rx_position,
                    margin: float = 1.0) -> FarFieldCheck:
    """Check the three far-field validity conditions at the given margin.

    The conditions require the hop distances to strictly dominate the array
    scales: ok iff d_TI >= 2 * margin * N * spacing,
    d_TI >= 2 * margin * L * hypot(d_x, d_y) and the same for d_IR; the
    factor of two encodes the strict dominance.  `ratios` reports each
    left/right quotient (larger is safer).
    """
    if margin < 1.0:
        raise DomainError("margin must be >= 1")
    rx = _as_vec3(rx_position)
    d_ti = float(np.linalg.norm(tx.center - ris.center))
    d_ir = float(np.linalg.norm(rx - ris.center))
    panel_scale = ris.count * float(np.hypot(ris.d_x, ris.d_y))
    r1 = d_ti / (_STRICTNESS * margin * _tx_aperture_scale(tx))
    r2 = d_ti / (_STRICTNESS * margin * panel_scale)
    r3 = d_ir / (_STRICTNESS * margin * panel_scale)
    return FarFieldCheck(ok=(r1 >= 1.0 and r2 >= 1.0 and r3 >= 1.0),
                         ratios=(r1, r2, r3))
