"""Conversions between quaternions, rotation matrices, ZYX/ZXY Euler angles,
tilt angles and fused angles.

Closed forms are used wherever they exist (matrix <-> everything, Euler <->
tilt/fused, fused <-> tilt); every remaining pair is routed through the
quaternion. ``convert`` dispatches on the target kind and ``via_quat`` always
takes the quaternion route, so the two can be compared against each other.

All functions accept single values or batches (array-valued fields).
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .core import (
    GIMBAL_LOCK_TOL,
    HALF_PI,
    PI,
    TILT_AXIS_TOL,
    YAW_SINGULAR_TOL,
    EulerZXY,
    EulerZYX,
    FusedAngles,
    Quaternion,
    RotationMatrix,
    TiltAngles,
    YawResult,
    _out,
    _wrap,
    clamp_unit,
    representation,
    require_valid,
)

# below this sin(alpha) the tilt-axis entries of the matrix are too small to
# carry the fused yaw and the double-angle form is used instead
_NEAR_IDENTITY_SIN = 1e-6


__all__ = [
    "quat_to_rotmat",
    "rotmat_to_quat",
    "quat_to_fused",
    "quat_to_tilt",
    "rotmat_to_fused",
    "rotmat_to_tilt",
    "tilt_to_rotmat",
    "fused_to_rotmat",
    "fused_to_tilt",
    "tilt_to_fused",
    "tilt_to_quat",
    "fused_to_quat",
    "euler_zyx_to_rotmat",
    "euler_zyx_to_quat",
    "euler_zxy_to_rotmat",
    "euler_zxy_to_quat",
    "rotmat_to_euler_zyx",
    "rotmat_to_euler_zxy",
    "quat_to_euler_zyx",
    "quat_to_euler_zxy",
    "euler_zyx_to_tilt",
    "euler_zyx_to_fused",
    "tilt_to_euler_zyx",
    "fused_to_euler_zyx",
    "EulerFusedRelations",
    "euler_fused_relations",
    "yaw_relation_forms",
    "yaw_relation",
    "to_quat",
    "via_quat",
    "convert",
]


def _flag(a):
    a = np.asarray(a, bool)
    return bool(a) if a.ndim == 0 else a


def _h(a):
    a = np.asarray(a)
    return int(a) if a.ndim == 0 else a.astype(int)


# ---------------------------------------------------------------------------
# Array kernels. Each takes and returns plain numpy arrays.


def _canon(w, x, y, z):
    # w >= 0; at w == 0 the first non-zero of x, y, z is made positive
    zero = w == 0
    neg = (w < 0) | (zero & ((x < 0) | ((x == 0) & ((y < 0) | ((y == 0) & (z < 0))))))
    s = np.where(neg, -1.0, 1.0)
    return w * s + 0.0, x * s + 0.0, y * s + 0.0, z * s + 0.0


def _qmat(w, x, y, z):
    r = np.empty(np.shape(w) + (3, 3))
    r[..., 0, 0] = 1 - 2 * (y * y + z * z)
    r[..., 0, 1] = 2 * (x * y - w * z)
    r[..., 0, 2] = 2 * (x * z + w * y)
    r[..., 1, 0] = 2 * (x * y + w * z)
    r[..., 1, 1] = 1 - 2 * (x * x + z * z)
    r[..., 1, 2] = 2 * (y * z - w * x)
    r[..., 2, 0] = 2 * (x * z - w * y)
    r[..., 2, 1] = 2 * (y * z + w * x)
    r[..., 2, 2] = 1 - 2 * (x * x + y * y)
    return r


def _matq(r):
    # Shepperd's method: pivot on the largest of trace, R11, R22, R33
    r11, r12, r13 = r[..., 0, 0], r[..., 0, 1], r[..., 0, 2]
    r21, r22, r23 = r[..., 1, 0], r[..., 1, 1], r[..., 1, 2]
    r31, r32, r33 = r[..., 2, 0], r[..., 2, 1], r[..., 2, 2]
    tr = r11 + r22 + r33
    k = np.argmax(np.stack([tr, r11, r22, r33], -1), axis=-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        p0 = 0.5 * np.sqrt(np.maximum(1 + tr, 0))
        p1 = 0.5 * np.sqrt(np.maximum(1 + r11 - r22 - r33, 0))
        p2 = 0.5 * np.sqrt(np.maximum(1 - r11 + r22 - r33, 0))
        p3 = 0.5 * np.sqrt(np.maximum(1 - r11 - r22 + r33, 0))
        cand = [
            (p0, (r32 - r23) / (4 * p0), (r13 - r31) / (4 * p0), (r21 - r12) / (4 * p0)),
            ((r32 - r23) / (4 * p1), p1, (r12 + r21) / (4 * p1), (r13 + r31) / (4 * p1)),
            ((r13 - r31) / (4 * p2), (r12 + r21) / (4 * p2), p2, (r23 + r32) / (4 * p2)),
            ((r21 - r12) / (4 * p3), (r13 + r31) / (4 * p3), (r23 + r32) / (4 * p3), p3),
        ]
    comps = [np.choose(k, [c[i] for c in cand]) for i in range(4)]
    n = np.sqrt(sum(c * c for c in comps))
    return _canon(*(c / n for c in comps))


def _tilt_from_quat(w, x, y, z):
    w, x, y, z = _canon(w, x, y, z)
    c2 = w * w + z * z
    singular = c2 <= YAW_SINGULAR_TOL
    psi = np.where(singular, 0.0, _wrap(2 * np.arctan2(z, w)))
    sth = 2 * (w * y - x * z)
    sph = 2 * (w * x + y * z)
    alpha = 2 * np.arctan2(np.hypot(x, y), np.hypot(w, z))
    gamma = _wrap(np.arctan2(sth, sph))
    gamma = np.where(alpha <= TILT_AXIS_TOL, 0.0, gamma)
    gamma = np.where(singular, _fold_half(np.arctan2(y, x)), gamma)
    return psi, gamma, alpha, singular


def _fold_half(g):
    # a half turn about n equals one about -n: fold the axis angle to (-pi/2, pi/2]
    g = np.where(g > HALF_PI, g - PI, g)
    return np.where(g <= -HALF_PI, g + PI, g)


def _fused_from_quat(w, x, y, z):
    w, x, y, z = _canon(w, x, y, z)
    c2 = w * w + z * z
    singular = c2 <= YAW_SINGULAR_TOL
    psi = np.where(singular, 0.0, _wrap(2 * np.arctan2(z, w)))
    sth = 2 * (w * y - x * z)
    sph = 2 * (w * x + y * z)
    wz, xy = np.hypot(w, z), np.hypot(x, y)
    ca = (wz - xy) * (wz + xy)
    theta, phi = _pitch_roll(sth, sph, ca)
    h = np.where(c2 - 0.5 >= 0, 1, -1)
    return psi, theta, phi, h, singular


def _pitch_roll(sth, sph, ca):
    # asin(sth), asin(sph) evaluated as atan2 against the cosines
    # cos(theta) = |(sph, ca)|, cos(phi) = |(sth, ca)|, exact near +-pi/2
    return np.arctan2(sth, np.hypot(sph, ca)), np.arctan2(sph, np.hypot(sth, ca))


def _tilt_quat(psi, gamma, alpha):
    sa2, ca2 = np.sin(alpha / 2), np.cos(alpha / 2)
    sp2, cp2 = np.sin(psi / 2), np.cos(psi / 2)
    g = gamma + psi / 2
    return _canon(cp2 * ca2, sa2 * np.cos(g), sa2 * np.sin(g), sp2 * ca2)


def _tilt_rotmat(psi, gamma, alpha, sth=None, sph=None, ca=None):
    sa = np.sin(alpha)
    sg, cg = np.sin(gamma), np.cos(gamma)
    if ca is None:
        ca = np.cos(alpha)
    if sth is None:
        sth, sph = sa * sg, sa * cg
    d = psi + gamma
    sd, cd = np.sin(d), np.cos(d)
    r = np.empty(np.shape(psi) + (3, 3))
    r[..., 0, 0] = cg * cd + ca * sg * sd
    r[..., 0, 1] = sg * cd - ca * cg * sd
    r[..., 0, 2] = sa * sd
    r[..., 1, 0] = cg * sd - ca * sg * cd
    r[..., 1, 1] = sg * sd + ca * cg * cd
    r[..., 1, 2] = -sa * cd
    r[..., 2, 0] = -sth
    r[..., 2, 1] = sph
    r[..., 2, 2] = ca
    return r


def _yaw_double_angle(r):
    # atan2(R21 - R12, R11 + R22) = atan2(4wz, 2(w^2 - z^2)) = 2 atan2(z, w)
    return np.arctan2(r[..., 1, 0] - r[..., 0, 1], r[..., 0, 0] + r[..., 1, 1])


def _tilt_from_rotmat(r):
    r31, r32, r33 = r[..., 2, 0], r[..., 2, 1], r[..., 2, 2]
    sa = np.hypot(r31, r32)
    alpha = np.arctan2(sa, r33)
    singular = r33 <= -1 + 1e-12
    gamma = np.arctan2(-r31, r32)
    delta = np.arctan2(r[..., 0, 2], -r[..., 1, 2])
    psi = _wrap(delta - gamma)
    psi = np.where((sa < _NEAR_IDENTITY_SIN) & (r33 > 0), _wrap(_yaw_double_angle(r)), psi)
    psi = np.where(singular, 0.0, psi)
    gamma = np.where(alpha <= TILT_AXIS_TOL, 0.0, _wrap(gamma))
    sing_gamma = _fold_half(0.5 * np.arctan2(r[..., 0, 1] + r[..., 1, 0], r[..., 0, 0] - r[..., 1, 1]))
    gamma = np.where(singular, sing_gamma, gamma)
    return psi, gamma, alpha, singular


def _fused_to_tilt(psi, theta, phi, h, zero_axis=True):
    # zero_axis applies the gamma := 0 convention; internal paths keep the raw axis
    sth, sph = np.sin(theta), np.sin(phi)
    s2 = sth * sth + sph * sph
    sa = np.sqrt(np.minimum(s2, 1.0))
    # 1 - s2 as a product: no cancellation when theta or phi nears +-pi/2
    cmag = np.sqrt(np.maximum(np.cos(theta + phi) * np.cos(theta - phi), 0.0))
    ca = np.where(h < 0, -cmag, cmag)
    alpha = np.arctan2(sa, ca)
    gamma = _wrap(np.arctan2(sth, sph))
    if zero_axis:
        gamma = np.where(alpha <= TILT_AXIS_TOL, 0.0, gamma)
    # cos^2(alpha/2) = (1 + ca)/2, written without cancellation for h = -1
    c2half = np.where(h < 0, s2 / (2 * (1 + cmag)), (1 + cmag) / 2)
    singular = c2half <= YAW_SINGULAR_TOL
    return psi, gamma, alpha, singular, sth, sph, ca


def _euler_zyx_rotmat(psi, theta, phi):
    sps, cps = np.sin(psi), np.cos(psi)
    sth, cth = np.sin(theta), np.cos(theta)
    sph, cph = np.sin(phi), np.cos(phi)
    r = np.empty(np.shape(psi) + (3, 3))
    r[..., 0, 0] = cps * cth
    r[..., 0, 1] = cps * sth * sph - sps * cph
    r[..., 0, 2] = cps * sth * cph + sps * sph
    r[..., 1, 0] = sps * cth
    r[..., 1, 1] = sps * sth * sph + cps * cph
    r[..., 1, 2] = sps * sth * cph - cps * sph
    r[..., 2, 0] = -sth
    r[..., 2, 1] = cth * sph
    r[..., 2, 2] = cth * cph
    return r


def _euler_zxy_rotmat(psi, phi, theta):
    sps, cps = np.sin(psi), np.cos(psi)
    sth, cth = np.sin(theta), np.cos(theta)
    sph, cph = np.sin(phi), np.cos(phi)
    r = np.empty(np.shape(psi) + (3, 3))
    r[..., 0, 0] = cps * cth - sps * sph * sth
    r[..., 0, 1] = -sps * cph
    r[..., 0, 2] = cps * sth + sps * sph * cth
    r[..., 1, 0] = sps * cth + cps * sph * sth
    r[..., 1, 1] = cps * cph
    r[..., 1, 2] = sps * sth - cps * sph * cth
    r[..., 2, 0] = -cph * sth
    r[..., 2, 1] = sph
    r[..., 2, 2] = cph * cth
    return r


def _euler_zyx_quat(psi, theta, phi):
    sps, cps = np.sin(psi / 2), np.cos(psi / 2)
    sth, cth = np.sin(theta / 2), np.cos(theta / 2)
    sph, cph = np.sin(phi / 2), np.cos(phi / 2)
    return _canon(
        cph * cth * cps + sph * sth * sps,
        sph * cth * cps - cph * sth * sps,
        cph * sth * cps + sph * cth * sps,
        cph * cth * sps - sph * sth * cps,
    )


def _euler_zxy_quat(psi, phi, theta):
    sps, cps = np.sin(psi / 2), np.cos(psi / 2)
    sth, cth = np.sin(theta / 2), np.cos(theta / 2)
    sph, cph = np.sin(phi / 2), np.cos(phi / 2)
    return _canon(
        cph * cth * cps - sph * sth * sps,
        sph * cth * cps - cph * sth * sps,
        cph * sth * cps + sph * cth * sps,
        cph * cth * sps + sph * sth * cps,
    )


def _lock_zyx(psi, sth, phi):
    """Canonical gimbal-lock representative: roll 0, freedom folded into yaw.

    (psi, +pi/2, phi) == (psi - phi, +pi/2, 0) and (psi, -pi/2, phi) == (psi + phi, -pi/2, 0).
    """
    lock = np.abs(sth) >= 1 - GIMBAL_LOCK_TOL
    up = sth > 0
    psi_l = _wrap(np.where(up, psi - phi, psi + phi))
    return lock, np.where(lock, psi_l, psi), np.where(lock, np.where(up, HALF_PI, -HALF_PI), np.nan), np.where(lock, 0.0, phi)


def _euler_zyx_from_rotmat(r):
    r31 = r[..., 2, 0]
    lock = np.abs(r31) >= 1 - GIMBAL_LOCK_TOL
    theta = np.arcsin(clamp_unit(-r31))
    psi = np.arctan2(r[..., 1, 0], r[..., 0, 0])
    phi = np.arctan2(r[..., 2, 1], r[..., 2, 2])
    psi_l = np.arctan2(-r[..., 0, 1], r[..., 1, 1])
    psi = np.where(lock, psi_l, psi)
    phi = np.where(lock, 0.0, phi)
    theta = np.where(lock, np.where(r31 < 0, HALF_PI, -HALF_PI), theta)
    return _wrap(psi), theta, _wrap(phi), lock


def _euler_zxy_from_rotmat(r):
    r32 = r[..., 2, 1]
    lock = np.abs(r32) >= 1 - GIMBAL_LOCK_TOL
    phi = np.arcsin(clamp_unit(r32))
    psi = np.arctan2(-r[..., 0, 1], r[..., 1, 1])
    theta = np.arctan2(-r[..., 2, 0], r[..., 2, 2])
    psi_l = np.arctan2(r[..., 1, 0], r[..., 0, 0])
    psi = np.where(lock, psi_l, psi)
    theta = np.where(lock, 0.0, theta)
    phi = np.where(lock, np.where(r32 > 0, HALF_PI, -HALF_PI), phi)
    return _wrap(psi), phi, _wrap(theta), lock


def _euler_zyx_relations(psi_e, theta_e, phi_e):
    sth, cth = np.sin(theta_e), np.cos(theta_e)
    sph, cph = np.sin(phi_e), np.cos(phi_e)
    sa_sg, sa_cg, ca = sth, cth * sph, cth * cph
    sa = np.hypot(sa_sg, sa_cg)
    alpha = np.arctan2(sa, ca)
    graw = np.arctan2(sa_sg, sa_cg)
    psi = _wrap(psi_e - graw + np.arctan2(sth * cph, sph))
    gamma = np.where(alpha <= TILT_AXIS_TOL, 0.0, _wrap(graw))
    singular = np.cos(alpha / 2) ** 2 <= YAW_SINGULAR_TOL
    psi = np.where(singular, 0.0, psi)
    phi = np.arcsin(clamp_unit(sa_cg))
    h = np.where(cph >= 0, 1, -1)
    return psi, gamma, alpha, phi, h, singular


def _tilt_to_euler_zyx(psi, gamma, alpha):
    sa, ca = np.sin(alpha), np.cos(alpha)
    sg, cg = np.sin(gamma), np.cos(gamma)
    sth = sa * sg
    theta = np.arcsin(clamp_unit(sth))
    phi = np.arctan2(sa * cg, ca)
    psi_e = _wrap(psi + gamma - np.arctan2(ca * sg, cg))
    lock, psi_e, theta_l, phi = _lock_zyx(psi_e, sth, phi)
    # at lock the rotation is Rz(psi) Ry(+-pi/2); the atan2 terms above are 0/0 there
    psi_e = np.where(lock, _wrap(psi), psi_e)
    return psi_e, np.where(lock, theta_l, theta), _wrap(phi), lock


def _fused_to_euler_zyx(psi, theta, phi, h):
    sth, sph = np.sin(theta), np.sin(phi)
    ca = np.where(h < 0, -1.0, 1.0) * np.sqrt(np.maximum(np.cos(theta + phi) * np.cos(theta - phi), 0.0))
    phi_e = np.arctan2(sph, ca)
    psi_e = _wrap(psi + np.arctan2(sth, sph) - np.arctan2(ca * sth, sph))
    lock, psi_e, theta_l, phi_e = _lock_zyx(psi_e, sth, phi_e)
    psi_e = np.where(lock, _wrap(psi), psi_e)
    return psi_e, np.where(lock, theta_l, theta), _wrap(phi_e), lock


# ---------------------------------------------------------------------------
# Public conversions


def quat_to_rotmat(q: Quaternion) -> RotationMatrix:
    require_valid(q)
    return RotationMatrix(_qmat(q.w, q.x, q.y, q.z))


def rotmat_to_quat(rm: RotationMatrix) -> Quaternion:
    """Shepperd extraction with sign chosen so that w >= 0.

    At w == 0 the first non-zero of (x, y, z) is made positive.
    """
    require_valid(rm)
    return Quaternion(*(_out(c) for c in _matq(rm.r)))


def quat_to_fused(q: Quaternion) -> FusedAngles:
    """Fused angles of a unit quaternion.

    Invariant under q -> -q. At the fused yaw singularity (w = z = 0) the yaw
    is returned as 0 with ``singular`` set; that value does not in general
    reproduce the input rotation.
    """
    require_valid(q)
    psi, theta, phi, h, singular = _fused_from_quat(q.w, q.x, q.y, q.z)
    return FusedAngles(_out(psi), _out(theta), _out(phi), _h(h), _flag(singular))


def quat_to_tilt(q: Quaternion) -> TiltAngles:
    require_valid(q)
    psi, gamma, alpha, singular = _tilt_from_quat(q.w, q.x, q.y, q.z)
    return TiltAngles(_out(psi), _out(gamma), _out(alpha), _flag(singular))


def rotmat_to_fused(rm: RotationMatrix) -> FusedAngles:
    """Fused angles from matrix entries.

    Pitch and roll come from the bottom row (asin(-R31), asin(R32), taken
    as atan2 against the other two entries of the row), the
    hemisphere from the sign of R33, and the yaw as the difference of the
    angles atan2(R13, -R23) and atan2(-R31, R32).
    """
    require_valid(rm)
    r = rm.r
    psi, _, _, singular = _tilt_from_rotmat(r)
    theta, phi = _pitch_roll(-r[..., 2, 0], r[..., 2, 1], r[..., 2, 2])
    h = np.where(r[..., 2, 2] >= 0, 1, -1)
    return FusedAngles(_out(psi), _out(theta), _out(phi), _h(h), _flag(singular))


def rotmat_to_tilt(rm: RotationMatrix) -> TiltAngles:
    require_valid(rm)
    psi, gamma, alpha, singular = _tilt_from_rotmat(rm.r)
    return TiltAngles(_out(psi), _out(gamma), _out(alpha), _flag(singular))


def tilt_to_rotmat(t: TiltAngles) -> RotationMatrix:
    require_valid(t)
    return RotationMatrix(_tilt_rotmat(np.asarray(t.psi), t.gamma, t.alpha))


def fused_to_rotmat(f: FusedAngles) -> RotationMatrix:
    """Matrix of a fused angles rotation; its bottom row is (-sin theta, sin phi, cos alpha)."""
    require_valid(f)
    psi, gamma, alpha, _, sth, sph, ca = _fused_to_tilt(np.asarray(f.psi), f.theta, f.phi, np.asarray(f.h), False)
    return RotationMatrix(_tilt_rotmat(psi, gamma, alpha, sth, sph, ca))


def fused_to_tilt(f: FusedAngles) -> TiltAngles:
    """Tilt angles from fused angles.

    sin(alpha) = sqrt(sin^2 phi + sin^2 theta) with the hemisphere choosing
    between alpha and pi - alpha; gamma = atan2(sin theta, sin phi), or 0 when
    the tilt angle vanishes.
    """
    require_valid(f)
    psi, gamma, alpha, singular, *_ = _fused_to_tilt(np.asarray(f.psi), f.theta, f.phi, np.asarray(f.h))
    return TiltAngles(_out(psi), _out(gamma), _out(alpha), _flag(singular | np.asarray(f.singular)))


def tilt_to_fused(t: TiltAngles) -> FusedAngles:
    require_valid(t)
    sa, ca = np.sin(t.alpha), np.cos(t.alpha)
    theta = np.arcsin(clamp_unit(sa * np.sin(t.gamma)))
    phi = np.arcsin(clamp_unit(sa * np.cos(t.gamma)))
    h = np.where(ca >= 0, 1, -1)
    singular = (np.cos(np.asarray(t.alpha) / 2) ** 2 <= YAW_SINGULAR_TOL) | np.asarray(t.singular)
    psi = np.where(singular, 0.0, t.psi)
    return FusedAngles(_out(psi), _out(theta), _out(phi), _h(h), _flag(singular))


def tilt_to_quat(t: TiltAngles) -> Quaternion:
    """q = q_z(psi) * (cos(alpha/2), sin(alpha/2) cos(gamma), sin(alpha/2) sin(gamma), 0)."""
    require_valid(t)
    return Quaternion(*(_out(c) for c in _tilt_quat(np.asarray(t.psi), t.gamma, t.alpha)))


def fused_to_quat(f: FusedAngles) -> Quaternion:
    require_valid(f)
    psi, gamma, alpha, *_ = _fused_to_tilt(np.asarray(f.psi), f.theta, f.phi, np.asarray(f.h), False)
    return Quaternion(*(_out(c) for c in _tilt_quat(psi, gamma, alpha)))


def euler_zyx_to_rotmat(e: EulerZYX) -> RotationMatrix:
    """R = Rz(psi_e) Ry(theta_e) Rx(phi_e)."""
    require_valid(e)
    return RotationMatrix(_euler_zyx_rotmat(np.asarray(e.psi_e), e.theta_e, e.phi_e))


def euler_zyx_to_quat(e: EulerZYX) -> Quaternion:
    require_valid(e)
    return Quaternion(*(_out(c) for c in _euler_zyx_quat(np.asarray(e.psi_e), e.theta_e, e.phi_e)))


def euler_zxy_to_rotmat(e: EulerZXY) -> RotationMatrix:
    """R = Rz(psi) Rx(phi) Ry(theta)."""
    require_valid(e)
    return RotationMatrix(_euler_zxy_rotmat(np.asarray(e.psi_et), e.phi_et, e.theta_et))


def euler_zxy_to_quat(e: EulerZXY) -> Quaternion:
    require_valid(e)
    return Quaternion(*(_out(c) for c in _euler_zxy_quat(np.asarray(e.psi_et), e.phi_et, e.theta_et)))


def rotmat_to_euler_zyx(rm: RotationMatrix) -> EulerZYX:
    """ZYX Euler angles by atan2/asin extraction.

    At gimbal lock (|R31| >= 1 - 1e-12) the roll is set to 0 and the free
    parameter is folded into the yaw; ``singular`` marks such values.
    """
    require_valid(rm)
    psi, theta, phi, lock = _euler_zyx_from_rotmat(rm.r)
    return EulerZYX(_out(psi), _out(theta), _out(phi), _flag(lock))


def rotmat_to_euler_zxy(rm: RotationMatrix) -> EulerZXY:
    require_valid(rm)
    psi, phi, theta, lock = _euler_zxy_from_rotmat(rm.r)
    return EulerZXY(_out(psi), _out(phi), _out(theta), _flag(lock))


def quat_to_euler_zyx(q: Quaternion) -> EulerZYX:
    return rotmat_to_euler_zyx(quat_to_rotmat(q))


def quat_to_euler_zxy(q: Quaternion) -> EulerZXY:
    return rotmat_to_euler_zxy(quat_to_rotmat(q))


def euler_zyx_to_tilt(e: EulerZYX) -> TiltAngles:
    require_valid(e)
    psi, gamma, alpha, _, _, singular = _euler_zyx_relations(np.asarray(e.psi_e), e.theta_e, e.phi_e)
    return TiltAngles(_out(psi), _out(gamma), _out(alpha), _flag(singular))


def euler_zyx_to_fused(e: EulerZYX) -> FusedAngles:
    """Fused angles from ZYX Euler angles: the pitch carries over unchanged."""
    require_valid(e)
    psi, _, _, phi, h, singular = _euler_zyx_relations(np.asarray(e.psi_e), e.theta_e, e.phi_e)
    theta = np.asarray(e.theta_e, float)
    return FusedAngles(_out(psi), _out(theta), _out(phi), _h(h), _flag(singular))


def tilt_to_euler_zyx(t: TiltAngles) -> EulerZYX:
    require_valid(t)
    psi, theta, phi, lock = _tilt_to_euler_zyx(np.asarray(t.psi), t.gamma, t.alpha)
    return EulerZYX(_out(psi), _out(theta), _out(phi), _flag(lock))


def fused_to_euler_zyx(f: FusedAngles) -> EulerZYX:
    """ZYX Euler angles from fused angles: the pitch carries over unchanged."""
    require_valid(f)
    psi, theta, phi, lock = _fused_to_euler_zyx(np.asarray(f.psi), np.asarray(f.theta, float), f.phi, np.asarray(f.h))
    return EulerZYX(_out(psi), _out(theta), _out(phi), _flag(lock))


# ---------------------------------------------------------------------------
# Fused/Euler cross relations


class EulerFusedRelations(NamedTuple):
    phi_e: object
    gamma: object
    alpha: object
    phi: object
    h: object
    sin2_alpha_residual: object
    gimbal_lock: object


def euler_fused_relations(e: EulerZYX) -> EulerFusedRelations:
    """Evaluate the closed-form links between ZYX Euler, tilt and fused angles.

    Returns the tilt axis angle gamma = atan2(s_thE, c_thE s_phE), tilt angle
    alpha = acos(c_thE c_phE), fused roll phi = asin(c_thE s_phE) and
    hemisphere sign(c_phE), plus the Euler roll recovered back from them as
    atan2(sin phi, cos alpha) and the residual of
    sin^2 alpha = s^2_thE + s^2_phE - s^2_thE s^2_phE.
    ``gimbal_lock`` flags inputs where gamma is ill-conditioned.
    """
    require_valid(e)
    sth, cth = np.sin(e.theta_e), np.cos(e.theta_e)
    sph, cph = np.sin(e.phi_e), np.cos(e.phi_e)
    gamma = np.arctan2(sth, cth * sph)
    alpha = np.arccos(clamp_unit(cth * cph))
    phi = np.arcsin(clamp_unit(cth * sph))
    h = np.where(cph >= 0, 1, -1)
    phi_e = np.arctan2(np.sin(phi), np.cos(alpha))
    s2a = np.sin(alpha) ** 2
    resid = np.abs(s2a - (sth**2 + sph**2 - sth**2 * sph**2))
    lock = np.abs(sth) >= 1 - GIMBAL_LOCK_TOL
    return EulerFusedRelations(
        _out(phi_e), _out(_wrap(gamma)), _out(alpha), _out(phi), _h(h), _out(resid), _flag(lock)
    )


def yaw_relation_forms(e: EulerZYX) -> tuple:
    """The fused yaw of an Euler rotation by both published forms.

    Form A uses the fused pitch/roll sines, form B only Euler parameters:
        psi = wrap(psi_E - atan2(s_th, s_ph) + atan2(s_th c_phE, s_phE))
        psi = wrap(psi_E - atan2(s_thE, c_thE s_phE) + atan2(s_thE c_phE, s_phE))
    """
    require_valid(e)
    sth, cth = np.sin(e.theta_e), np.cos(e.theta_e)
    sph, cph = np.sin(e.phi_e), np.cos(e.phi_e)
    phi = np.arcsin(clamp_unit(cth * sph))
    s_theta, s_phi = np.sin(e.theta_e), np.sin(phi)
    a = _wrap(e.psi_e - np.arctan2(s_theta, s_phi) + np.arctan2(s_theta * cph, sph))
    b = _wrap(e.psi_e - np.arctan2(sth, cth * sph) + np.arctan2(sth * cph, sph))
    return _out(a), _out(b)


def yaw_relation(r) -> YawResult:
    """Translate between the two yaws away from their singularities.

    Tilt or fused input gives the Euler yaw
    psi_E = wrap(psi + gamma - atan2(c_alpha s_gamma, c_gamma)); ZYX Euler input
    gives the fused yaw. ``singular`` flags gimbal lock or the fused yaw
    singularity, where the relation does not apply.
    """
    if isinstance(r, EulerZYX):
        _, b = yaw_relation_forms(r)
        _, _, alpha, _, _, fsing = _euler_zyx_relations(np.asarray(r.psi_e), r.theta_e, r.phi_e)
        lock = np.abs(np.sin(r.theta_e)) >= 1 - GIMBAL_LOCK_TOL
        return YawResult(b, _flag(lock | fsing))
    if isinstance(r, FusedAngles):
        r = fused_to_tilt(r)
    if not isinstance(r, TiltAngles):
        raise TypeError(f"yaw_relation expects EulerZYX, TiltAngles or FusedAngles, not {type(r).__name__}")
    require_valid(r)
    sa, ca = np.sin(r.alpha), np.cos(r.alpha)
    sg, cg = np.sin(r.gamma), np.cos(r.gamma)
    psi_e = _wrap(r.psi + r.gamma - np.arctan2(ca * sg, cg))
    lock = np.abs(sa * sg) >= 1 - GIMBAL_LOCK_TOL
    fsing = (np.cos(np.asarray(r.alpha) / 2) ** 2 <= YAW_SINGULAR_TOL) | np.asarray(r.singular)
    return YawResult(_out(psi_e), _flag(lock | fsing))


# ---------------------------------------------------------------------------
# Conversion graph

_TO_QUAT = {
    Quaternion: lambda q: q,
    RotationMatrix: rotmat_to_quat,
    EulerZYX: euler_zyx_to_quat,
    EulerZXY: euler_zxy_to_quat,
    TiltAngles: tilt_to_quat,
    FusedAngles: fused_to_quat,
}

_FROM_QUAT = {
    Quaternion: lambda q: q,
    RotationMatrix: quat_to_rotmat,
    EulerZYX: quat_to_euler_zyx,
    EulerZXY: quat_to_euler_zxy,
    TiltAngles: quat_to_tilt,
    FusedAngles: quat_to_fused,
}

# closed-form edges that bypass the quaternion
_DIRECT = {
    (RotationMatrix, EulerZYX): rotmat_to_euler_zyx,
    (RotationMatrix, EulerZXY): rotmat_to_euler_zxy,
    (RotationMatrix, TiltAngles): rotmat_to_tilt,
    (RotationMatrix, FusedAngles): rotmat_to_fused,
    (EulerZYX, RotationMatrix): euler_zyx_to_rotmat,
    (EulerZYX, TiltAngles): euler_zyx_to_tilt,
    (EulerZYX, FusedAngles): euler_zyx_to_fused,
    (EulerZXY, RotationMatrix): euler_zxy_to_rotmat,
    (TiltAngles, RotationMatrix): tilt_to_rotmat,
    (TiltAngles, FusedAngles): tilt_to_fused,
    (TiltAngles, EulerZYX): tilt_to_euler_zyx,
    (FusedAngles, RotationMatrix): fused_to_rotmat,
    (FusedAngles, TiltAngles): fused_to_tilt,
    (FusedAngles, EulerZYX): fused_to_euler_zyx,
}


def to_quat(r) -> Quaternion:
    return _TO_QUAT[type(r)](r)


def via_quat(r, kind):
    """Convert by way of the quaternion hub, ignoring any closed-form edge."""
    return _FROM_QUAT[representation(kind)](to_quat(r))


def convert(r, kind):
    """Convert ``r`` to representation ``kind`` (class or name such as ``"fused"``).

    Uses the closed-form edge when one exists, the quaternion hub otherwise.
    """
    dst = representation(kind)
    src = type(r)
    if src is dst:
        require_valid(r)
        return r
    fn = _DIRECT.get((src, dst))
    if fn is not None:
        return fn(r)
    if src is Quaternion:
        return _FROM_QUAT[dst](r)
    return via_quat(r, dst)

