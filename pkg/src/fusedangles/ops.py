"""Rotation algebra: composition, inverses, the fused yaw operator and pure
z-rotations applied on either side.

Composition of non-quaternion values goes through the quaternion: convert,
multiply, convert back to the representation of the left operand.
"""

from __future__ import annotations

import numpy as np

from .convert import _canon, _fused_from_quat, _fused_to_tilt, _lock_zyx, convert, to_quat
from .core import (
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
    quat_z,
    require_valid,
    rot_z,
)

__all__ = [
    "YawResult",
    "compose",
    "quat_multiply",
    "fused_yaw",
    "apply_z_pre",
    "apply_z_post",
    "inverse",
    "geodesic_distance",
    "fused_inverse_tilt_form",
]


def quat_multiply(a: Quaternion, b: Quaternion) -> Quaternion:
    """Hamilton product a * b (apply b first, then a)."""
    w = a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z
    x = a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y
    y = a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x
    z = a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w
    n = np.sqrt(w * w + x * x + y * y + z * z)
    return Quaternion(_out(w / n), _out(x / n), _out(y / n), _out(z / n))


def compose(a, b):
    """Composition whose matrix is the product A B; returned in the representation of ``a``."""
    if isinstance(a, Quaternion) and isinstance(b, Quaternion):
        require_valid(a)
        require_valid(b)
        return quat_multiply(a, b)
    if isinstance(a, RotationMatrix) and isinstance(b, RotationMatrix):
        require_valid(a)
        require_valid(b)
        return a @ b
    q = quat_multiply(to_quat(a), to_quat(b))
    return convert(q, type(a))


def geodesic_distance(a, b):
    """Rotation angle of a^-1 b, in [0, pi]."""
    qa, qb = to_quat(a), to_quat(b)
    # relative quaternion conj(a) * b; atan2 keeps full precision for small angles
    w = qa.w * qb.w + qa.x * qb.x + qa.y * qb.y + qa.z * qb.z
    x = qa.w * qb.x - qa.x * qb.w - qa.y * qb.z + qa.z * qb.y
    y = qa.w * qb.y + qa.x * qb.z - qa.y * qb.w - qa.z * qb.x
    z = qa.w * qb.z - qa.x * qb.y + qa.y * qb.x - qa.z * qb.w
    return _out(2 * np.arctan2(np.sqrt(x * x + y * y + z * z), np.abs(w)))


def fused_yaw(r) -> YawResult:
    """The fused yaw operator Psi(.) on any representation.

    ``singular`` is set iff w^2 + z^2 <= 1e-24 for the rotation's quaternion,
    in which case the yaw is reported as 0.
    """
    if isinstance(r, TiltAngles):
        require_valid(r)
        sing = (np.cos(np.asarray(r.alpha) / 2) ** 2 <= YAW_SINGULAR_TOL) | np.asarray(r.singular)
        return YawResult(_out(np.where(sing, 0.0, r.psi)), _flag(sing))
    if isinstance(r, FusedAngles):
        require_valid(r)
        *_, c2 = _fused_singular(r)
        sing = (c2 <= YAW_SINGULAR_TOL) | np.asarray(r.singular)
        return YawResult(_out(np.where(sing, 0.0, r.psi)), _flag(sing))
    q = to_quat(r)
    psi, _, _, _, sing = _fused_from_quat(q.w, q.x, q.y, q.z)
    return YawResult(_out(psi), _flag(sing))


def _fused_singular(f):
    sth, sph = np.sin(f.theta), np.sin(f.phi)
    s2 = sth * sth + sph * sph
    cmag = np.sqrt(np.maximum(np.cos(f.theta + f.phi) * np.cos(f.theta - f.phi), 0.0))
    c2 = np.where(np.asarray(f.h) < 0, s2 / (2 * (1 + cmag)), (1 + cmag) / 2)
    return sth, sph, c2


def _flag(a):
    a = np.asarray(a, bool)
    return bool(a) if a.ndim == 0 else a


def apply_z_pre(r, psi_z):
    """Global z-rotation: Rz(psi_z) r.

    Adds psi_z to the fused yaw and leaves the tilt component (gamma, alpha)
    or (theta, phi, h) untouched; for Euler angles it adds to the Euler yaw.
    """
    if isinstance(r, TiltAngles):
        require_valid(r)
        return TiltAngles(_out(_wrap(r.psi + np.asarray(psi_z))), r.gamma, r.alpha, r.singular)
    if isinstance(r, FusedAngles):
        require_valid(r)
        return FusedAngles(_out(_wrap(r.psi + np.asarray(psi_z))), r.theta, r.phi, r.h, r.singular)
    if isinstance(r, EulerZYX):
        require_valid(r)
        return EulerZYX(_out(_wrap(r.psi_e + np.asarray(psi_z))), r.theta_e, r.phi_e, r.singular)
    if isinstance(r, EulerZXY):
        require_valid(r)
        return EulerZXY(_out(_wrap(r.psi_et + np.asarray(psi_z))), r.phi_et, r.theta_et, r.singular)
    if isinstance(r, RotationMatrix):
        return compose(rot_z(psi_z), r)
    return compose(quat_z(psi_z), r)


def apply_z_post(r, psi_z):
    """Local z-rotation: r Rz(psi_z). Adds psi_z to the fused yaw."""
    if isinstance(r, RotationMatrix):
        return compose(r, rot_z(psi_z))
    return compose(r, quat_z(psi_z))


def inverse(r):
    """Inverse rotation in the representation of ``r``.

    Quaternions are conjugated and matrices transposed. Tilt angles invert to
    (-psi, wrap(psi + gamma - pi), alpha) and fused angles to
    (-psi, -asin(c_psi s_theta + s_psi s_phi), asin(s_psi s_theta - c_psi s_phi), h).
    ZYX Euler angles use the closed-form atan2/asin inverse, which stays finite
    at gimbal lock; its output is canonicalised like any extracted Euler value.
    """
    if isinstance(r, Quaternion):
        require_valid(r)
        return Quaternion(*(_out(c) for c in _canon(r.w, -r.x, -r.y, -r.z)))
    if isinstance(r, RotationMatrix):
        require_valid(r)
        return r.T
    if isinstance(r, TiltAngles):
        require_valid(r)
        gamma = np.where(np.asarray(r.alpha) <= TILT_AXIS_TOL, 0.0, _wrap(r.psi + np.asarray(r.gamma) - np.pi))
        return TiltAngles(_out(_wrap(-np.asarray(r.psi))), _out(gamma), r.alpha, r.singular)
    if isinstance(r, FusedAngles):
        require_valid(r)
        sps, cps = np.sin(r.psi), np.cos(r.psi)
        sth, sph = np.sin(r.theta), np.sin(r.phi)
        theta = -np.arcsin(clamp_unit(cps * sth + sps * sph))
        phi = np.arcsin(clamp_unit(sps * sth - cps * sph))
        return FusedAngles(_out(_wrap(-np.asarray(r.psi))), _out(theta), _out(phi), r.h, r.singular)
    if isinstance(r, EulerZYX):
        require_valid(r)
        return _euler_zyx_inverse(r)
    if isinstance(r, EulerZXY):
        return convert(inverse(to_quat(r)), EulerZXY)
    raise TypeError(f"not a rotation value: {type(r).__name__}")


def _euler_zyx_inverse(e: EulerZYX) -> EulerZYX:
    sps, cps = np.sin(e.psi_e), np.cos(e.psi_e)
    sth, cth = np.sin(e.theta_e), np.cos(e.theta_e)
    sph, cph = np.sin(e.phi_e), np.cos(e.phi_e)
    psi = np.arctan2(cps * sth * sph - sps * cph, cps * cth)
    s_inv = cps * sth * cph + sps * sph
    theta = -np.arcsin(clamp_unit(s_inv))
    phi = np.arctan2(sps * sth * cph - cps * sph, cth * cph)
    lock, psi, theta_l, phi = _lock_zyx(_wrap(psi), -s_inv, phi)
    return EulerZYX(_out(psi), _out(np.where(lock, theta_l, theta)), _out(_wrap(phi)), _flag(lock))


def fused_inverse_tilt_form(f: FusedAngles) -> tuple:
    """Inverse fused pitch and roll by the tilt form -asin(s_alpha s_(psi+gamma)),
    -asin(s_alpha c_(psi+gamma)); used to cross-check ``inverse``."""
    require_valid(f)
    psi, gamma, alpha, *_ = _fused_to_tilt(np.asarray(f.psi), f.theta, f.phi, np.asarray(f.h), False)
    sa = np.sin(alpha)
    return (
        _out(-np.arcsin(clamp_unit(sa * np.sin(psi + gamma)))),
        _out(-np.arcsin(clamp_unit(sa * np.cos(psi + gamma)))),
    )
