"""Comparative experiments between fused angles and ZYX Euler angles.

* ``tilt_sweep``: fused and Euler parameters over a polar grid of pure tilt
  rotations, for sensitivity maps.
* ``euler_sensitivity_probe`` / ``divergence_scan``: finite-difference slopes
  of the parameters with respect to the tilt axis angle.
* ``axisym_scan``: a base rotation conjugated by z-rotations,
  Rz(-beta) R0 Rz(beta), with the invariance checks in ``check_axisymmetry``.
* ``level_sets``: curves of constant tilt angle in the (sin phi, sin theta) plane.

Grids over (-pi, pi] use the points -pi + 2 pi (k + 1) / n, k = 0..n-1, so
they end exactly on pi and contain 0 whenever n is even.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .convert import (
    convert,
    rotmat_to_euler_zxy,
    rotmat_to_euler_zyx,
    rotmat_to_fused,
    rotmat_to_quat,
    rotmat_to_tilt,
    tilt_to_fused,
    tilt_to_rotmat,
)
from .core import (
    HALF_PI,
    PI,
    TILT_AXIS_TOL,
    EulerZXY,
    EulerZYX,
    FusedAngles,
    Quaternion,
    RotationMatrix,
    TiltAngles,
    _out,
    _wrap,
    rot_z,
)
from .ops import fused_yaw

GIMBAL_PROXIMITY = 1e-6


def circle_grid(n: int) -> np.ndarray:
    """``n`` uniformly spaced angles over (-pi, pi], ending at pi."""
    if n < 1:
        raise ValueError("grid size must be >= 1")
    # fraction first so quarter turns come out exact
    return PI * (2 * np.arange(1, n + 1) / n - 1)


def _check_count(name, n):
    if int(n) != n or n < 1:
        raise ValueError(f"{name} must be a positive integer, got {n!r}")


# ---------------------------------------------------------------------------
# Tilt sweep


@dataclass(frozen=True)
class TiltSweepSample:
    x: float
    y: float
    gamma: float
    alpha: float
    fused: FusedAngles
    euler: EulerZYX


def _tilt_params(gamma, alpha):
    t = TiltAngles(np.zeros(np.broadcast(gamma, alpha).shape), gamma, alpha)
    fused = tilt_to_fused(t)
    euler = rotmat_to_euler_zyx(tilt_to_rotmat(t))
    return fused, euler


def tilt_sample(gamma: float, alpha: float) -> TiltSweepSample:
    """Fused and Euler parameters of the pure tilt rotation T(0, gamma, alpha)."""
    gamma, alpha = float(_wrap(gamma)), float(alpha)
    fused, euler = _tilt_params(gamma, alpha)
    return TiltSweepSample(
        _out(alpha * np.cos(gamma)), _out(alpha * np.sin(gamma)), gamma, alpha, fused, euler
    )


def tilt_sweep_arrays(alpha_max: float = 0.95 * PI, n_radial: int = 96, n_angular: int = 256):
    """Batched form of ``tilt_sweep``: (gamma, alpha, fused, euler), radial-major."""
    if not 0 < alpha_max <= PI - 1e-6:
        raise ValueError("alpha_max must lie in (0, pi - 1e-6]")
    _check_count("n_radial", n_radial)
    _check_count("n_angular", n_angular)
    alphas = alpha_max * np.arange(1, n_radial + 1) / n_radial
    a, g = np.meshgrid(alphas, circle_grid(n_angular), indexing="ij")
    a, g = a.ravel(), g.ravel()
    fused, euler = _tilt_params(g, a)
    return g, a, fused, euler


def tilt_sweep(alpha_max: float = 0.95 * PI, n_radial: int = 96, n_angular: int = 256) -> list:
    """Sample pure tilt rotations on a polar grid.

    Radii are alpha_max (i + 1) / n_radial, angles follow ``circle_grid``.
    Rows are ordered radial-major: all angles of the first radius come first.
    """
    g, a, fused, euler = tilt_sweep_arrays(alpha_max, n_radial, n_angular)
    return [
        TiltSweepSample(_out(ak * np.cos(gk)), _out(ak * np.sin(gk)), float(gk), float(ak), f, e)
        for gk, ak, f, e in zip(g, a, fused.unbatch(), euler.unbatch())
    ]


# ---------------------------------------------------------------------------
# Sensitivity probes


@dataclass(frozen=True)
class ProbeResult:
    """Absolute central-difference slopes with respect to the tilt axis angle.

    The fused pitch and roll slopes are those of sin(theta) and sin(phi),
    which are bounded by sin(alpha).
    """

    alpha: float
    gamma_center: float
    delta: float
    margin: float  # pi/2 - |Euler pitch| at the centre
    slope_euler_psi: float
    slope_euler_phi: float
    slope_fused_psi: float
    slope_fused_theta: float
    slope_fused_phi: float
    near_gimbal_lock: bool


def euler_sensitivity_probe(alpha: float, gamma_center: float, delta: float = 0.01) -> ProbeResult:
    if not 0 < alpha < PI:
        raise ValueError("alpha must lie in (0, pi)")
    if not 0 < delta <= 0.1:
        raise ValueError("delta must lie in (0, 0.1]")
    g = np.array([gamma_center - delta, gamma_center, gamma_center + delta])
    fused, euler = _tilt_params(g, float(alpha))
    theta_e = np.asarray(euler.theta_e)

    def slope(v, wrapped=True):
        d = v[2] - v[0]
        return abs(float(_wrap(d) if wrapped else d)) / (2 * delta)

    return ProbeResult(
        alpha=float(alpha),
        gamma_center=float(gamma_center),
        delta=float(delta),
        margin=float(HALF_PI - abs(theta_e[1])),
        slope_euler_psi=slope(np.asarray(euler.psi_e)),
        slope_euler_phi=slope(np.asarray(euler.phi_e)),
        slope_fused_psi=slope(np.asarray(fused.psi)),
        slope_fused_theta=slope(np.sin(fused.theta), False),
        slope_fused_phi=slope(np.sin(fused.phi), False),
        near_gimbal_lock=bool(np.any(np.abs(theta_e) > HALF_PI - GIMBAL_PROXIMITY)),
    )


def alpha_for_margin(margin: float, gamma_center: float = HALF_PI) -> float:
    """Tilt angle in (0, pi/2] whose Euler pitch at ``gamma_center`` is pi/2 - margin."""
    sg = abs(np.sin(gamma_center))
    s = np.cos(margin) / sg if sg > 0 else np.inf
    if not 0 < margin < HALF_PI or s > 1:
        raise ValueError(f"margin {margin} is not reachable at gamma_center {gamma_center}")
    return float(np.arcsin(s))


def divergence_scan(margins=(1e-2, 1e-3, 1e-4), gamma_center: float = HALF_PI, delta_ratio: float = 0.1) -> list:
    """Probe at shrinking distances from gimbal lock.

    For each margin m the tilt angle is chosen so the centre of the stencil
    sits at Euler pitch pi/2 - m, and the stencil half-width is m * delta_ratio.
    """
    out = []
    for m in margins:
        out.append(euler_sensitivity_probe(alpha_for_margin(m, gamma_center), gamma_center, min(0.1, m * delta_ratio)))
    return out


# ---------------------------------------------------------------------------
# Axisymmetry


@dataclass(frozen=True)
class AxisymSample:
    beta: float
    rotmat: RotationMatrix
    quat: Quaternion
    euler: EulerZYX
    euler_zxy: EulerZXY
    tilt: TiltAngles
    fused: FusedAngles
    fused_sines: tuple  # (sin phi, sin theta)
    euler_sines: tuple  # (sin phi_E, sin theta_E)


@dataclass(frozen=True)
class AxisymScan:
    """Batched ``axisym_scan`` result; every field is indexed by the beta grid."""

    base: RotationMatrix
    betas: np.ndarray
    rotmat: RotationMatrix
    quat: Quaternion
    euler: EulerZYX
    euler_zxy: EulerZXY
    tilt: TiltAngles
    fused: FusedAngles

    @property
    def fused_sines(self) -> np.ndarray:
        return np.stack([np.sin(self.fused.phi), np.sin(self.fused.theta)], -1)

    @property
    def euler_sines(self) -> np.ndarray:
        return np.stack([np.sin(self.euler.phi_e), np.sin(self.euler.theta_e)], -1)

    def samples(self) -> list:
        fs, es = self.fused_sines, self.euler_sines
        return [
            AxisymSample(float(b), *parts, tuple(map(float, f)), tuple(map(float, e)))
            for b, *parts, f, e in zip(
                self.betas,
                self.rotmat.unbatch(),
                self.quat.unbatch(),
                self.euler.unbatch(),
                self.euler_zxy.unbatch(),
                self.tilt.unbatch(),
                self.fused.unbatch(),
                fs,
                es,
            )
        ]


def axisym_arrays(base, n_beta: int = 360, betas=None) -> AxisymScan:
    """Batched conjugation scan; see ``axisym_scan``."""
    if fused_yaw(base).singular:
        raise ValueError("base rotation is at the fused yaw singularity (tilt angle pi)")
    r0 = convert(base, RotationMatrix)
    if betas is None:
        _check_count("n_beta", n_beta)
        betas = circle_grid(n_beta)
    betas = np.asarray(betas, float)
    m = rot_z(-betas).r @ r0.r @ rot_z(betas).r
    rm = RotationMatrix(m)
    return AxisymScan(
        base=r0,
        betas=betas,
        rotmat=rm,
        quat=rotmat_to_quat(rm),
        euler=rotmat_to_euler_zyx(rm),
        euler_zxy=rotmat_to_euler_zxy(rm),
        tilt=rotmat_to_tilt(rm),
        fused=rotmat_to_fused(rm),
    )


def axisym_scan(base, n_beta: int = 360) -> list:
    """Parameters of Rz(-beta) R0 Rz(beta) for beta over ``circle_grid(n_beta)``.

    Raises ``ValueError`` if R0 sits at the fused yaw singularity.
    """
    return axisym_arrays(base, n_beta).samples()


@dataclass(frozen=True)
class AxisymReport:
    """Worst-case deviations from the invariances of a conjugation scan."""

    psi_residual: float
    alpha_residual: float
    gamma_residual: float  # nan if the base has no tilt
    h_mismatches: int
    sine_residual: float
    matrix_residual: float
    euler_yaw_range: float
    euler_radius_variation: float
    fused_radius_variation: float

    def holds(self, tol: float = 1e-10) -> bool:
        g = self.gamma_residual
        return (
            max(self.psi_residual, self.alpha_residual, self.sine_residual) <= tol
            and (np.isnan(g) or g <= tol)
            and self.h_mismatches == 0
        )


def _base_params(r0: RotationMatrix):
    return rotmat_to_fused(r0), rotmat_to_tilt(r0)


def check_axisymmetry(scan: AxisymScan) -> AxisymReport:
    f0, t0 = _base_params(scan.base)
    b = scan.betas
    psi_res = np.abs(_wrap(np.asarray(scan.fused.psi) - f0.psi))
    psi_res = np.maximum(psi_res, np.abs(_wrap(np.asarray(scan.tilt.psi) - t0.psi)))
    alpha_res = np.abs(np.asarray(scan.tilt.alpha) - t0.alpha)
    if t0.alpha > TILT_AXIS_TOL:
        gamma_res = float(np.max(np.abs(_wrap(np.asarray(scan.tilt.gamma) - _wrap(t0.gamma - b)))))
    else:
        gamma_res = float("nan")
    h_bad = int(np.count_nonzero(np.asarray(scan.fused.h) != f0.h))
    s0 = np.array([np.sin(f0.phi), np.sin(f0.theta)])
    cb, sb = np.cos(b), np.sin(b)
    expect = np.stack([cb * s0[0] + sb * s0[1], -sb * s0[0] + cb * s0[1]], -1)
    sine_res = np.abs(scan.fused_sines - expect)
    m_expect = rot_z(-b).r @ scan.base.r @ rot_z(b).r
    fr = np.linalg.norm(scan.fused_sines, axis=-1)
    er = np.linalg.norm(scan.euler_sines, axis=-1)
    return AxisymReport(
        psi_residual=float(np.max(psi_res)),
        alpha_residual=float(np.max(alpha_res)),
        gamma_residual=gamma_res,
        h_mismatches=h_bad,
        sine_residual=float(np.max(sine_res)),
        matrix_residual=float(np.max(np.abs(scan.rotmat.r - m_expect))),
        euler_yaw_range=float(np.ptp(np.unwrap(np.asarray(scan.euler.psi_e)))),
        euler_radius_variation=float(np.ptp(er)),
        fused_radius_variation=float(np.ptp(fr)),
    )


# ---------------------------------------------------------------------------
# Level sets


@dataclass(frozen=True)
class LevelSetCurve:
    alpha: float
    representation: str
    gammas: np.ndarray
    points: np.ndarray  # (n, 2): (sin phi, sin theta) in the curve's representation

    @property
    def radii(self) -> np.ndarray:
        return np.linalg.norm(self.points, axis=-1)


def level_sets(representation: str, alphas, n_gamma: int = 360) -> list:
    """Curves of constant tilt angle traced by sweeping the tilt axis angle.

    ``representation`` is ``"fused"`` (points are fused sine ratios, circles of
    radius sin alpha) or ``"euler"`` (ZYX Euler sine ratios of the same
    rotations).
    """
    if representation not in ("fused", "euler"):
        raise ValueError("representation must be 'fused' or 'euler'")
    _check_count("n_gamma", n_gamma)
    g = circle_grid(n_gamma)
    out = []
    for a in np.atleast_1d(np.asarray(alphas, float)):
        if not 0 < a <= HALF_PI:
            raise ValueError("level-set tilt angles must lie in (0, pi/2]")
        fused, euler = _tilt_params(g, float(a))
        if representation == "fused":
            pts = np.stack([np.sin(fused.phi), np.sin(fused.theta)], -1)
        else:
            pts = np.stack([np.sin(euler.phi_e), np.sin(euler.theta_e)], -1)
        out.append(LevelSetCurve(float(a), representation, g, pts))
    return out


__all__ = [
    "TiltSweepSample",
    "tilt_sample",
    "tilt_sweep",
    "tilt_sweep_arrays",
    "circle_grid",
    "ProbeResult",
    "euler_sensitivity_probe",
    "alpha_for_margin",
    "divergence_scan",
    "AxisymSample",
    "AxisymScan",
    "AxisymReport",
    "axisym_arrays",
    "axisym_scan",
    "check_axisymmetry",
    "LevelSetCurve",
    "level_sets",
]
