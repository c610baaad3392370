"""Independent reference path for every conversion, and seeded random rotations.

Nothing here reuses the closed-form extraction formulas of ``convert``. Source
values are turned into a matrix by composing elemental rotations, rotating
basis vectors with quaternion sandwich products, or building the minimal
rotation between two vectors. Parameters are then read back off the frame
geometry: angles between axes and planes, a null-space axis for the
quaternion, and elemental rotations peeled off one at a time for Euler
angles. It is slow and only meant for tests.

Random rotations use numpy's PCG64 bit generator: ``seed`` goes through
``numpy.random.SeedSequence``, and child streams come from
``SeedSequence.spawn``. Each draw is a 4-D standard normal sample,
normalised, so rotations are uniform on SO(3).
"""

from __future__ import annotations

import numpy as np

from .core import (
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
    representation,
)

ORACLE_MARGIN = 1e-6

_E = np.eye(3)


def _elemental(axis, a):
    a = np.asarray(a, float)
    s, c = np.sin(a), np.cos(a)
    m = np.zeros(a.shape + (3, 3))
    i, j = [(1, 2), (2, 0), (0, 1)][axis]
    m[..., axis, axis] = 1.0
    m[..., i, i] = c
    m[..., j, j] = c
    m[..., i, j] = -s
    m[..., j, i] = s
    return m


def _rodrigues(axis, angle):
    # rotation by angle about unit axis, axis (..., 3)
    k = np.asarray(axis, float)
    a = np.asarray(angle, float)[..., None, None]
    kx = np.zeros(k.shape[:-1] + (3, 3))
    kx[..., 0, 1], kx[..., 0, 2] = -k[..., 2], k[..., 1]
    kx[..., 1, 0], kx[..., 1, 2] = k[..., 2], -k[..., 0]
    kx[..., 2, 0], kx[..., 2, 1] = -k[..., 1], k[..., 0]
    return np.eye(3) + np.sin(a) * kx + (1 - np.cos(a)) * (kx @ kx)


def _min_rotation(u, v):
    """Smallest rotation taking unit vector u onto unit vector v."""
    k = np.cross(u, v)
    s = np.linalg.norm(k, axis=-1)
    c = np.sum(u * v, axis=-1)
    ang = np.arctan2(s, c)
    safe = s > 0
    axis = np.where(safe[..., None], k / np.where(safe, s, 1.0)[..., None], _E[0])
    return _rodrigues(axis, np.where(safe, ang, 0.0))


def _hamilton(a, b):
    aw, ax, ay, az = np.moveaxis(a, -1, 0)
    bw, bx, by, bz = np.moveaxis(b, -1, 0)
    return np.stack(
        [
            aw * bw - ax * bx - ay * by - az * bz,
            aw * bx + ax * bw + ay * bz - az * by,
            aw * by - ax * bz + ay * bw + az * bx,
            aw * bz + ax * by - ay * bx + az * bw,
        ],
        -1,
    )


def _sandwich(q, v):
    """Rotate vector v by quaternion q as q (0, v) q*."""
    pv = np.concatenate([np.zeros(v.shape[:-1] + (1,)), v], -1)
    qc = q * np.array([1.0, -1.0, -1.0, -1.0])
    return _hamilton(_hamilton(q, pv), qc)[..., 1:]


def oracle_matrix(r) -> np.ndarray:
    """Rotation matrix (..., 3, 3) of any representation, built geometrically."""
    if isinstance(r, RotationMatrix):
        return np.array(r.r)
    if isinstance(r, Quaternion):
        q = r.as_array()
        qb = np.broadcast_to(q[..., None, :], q.shape[:-1] + (3, 4))
        cols = _sandwich(qb, np.broadcast_to(_E, q.shape[:-1] + (3, 3)))
        return np.swapaxes(cols, -1, -2)
    if isinstance(r, EulerZYX):
        return _elemental(2, r.psi_e) @ _elemental(1, r.theta_e) @ _elemental(0, r.phi_e)
    if isinstance(r, EulerZXY):
        return _elemental(2, r.psi_et) @ _elemental(0, r.phi_et) @ _elemental(1, r.theta_et)
    if isinstance(r, TiltAngles):
        g = np.asarray(r.gamma, float)
        axis = np.stack([np.cos(g), np.sin(g), np.zeros_like(g)], -1)
        return _elemental(2, r.psi) @ _rodrigues(axis, r.alpha)
    if isinstance(r, FusedAngles):
        # global z seen from the body: x_B component -sin(theta), y_B component sin(phi)
        sth, sph = np.sin(r.theta), np.sin(r.phi)
        zc = np.asarray(r.h) * np.sqrt(np.maximum(1 - sth**2 - sph**2, 0.0))
        v = np.stack(np.broadcast_arrays(-sth, sph, zc), -1)
        tilt_t = _min_rotation(np.broadcast_to(_E[2], v.shape), v)
        return _elemental(2, r.psi) @ np.swapaxes(tilt_t, -1, -2)
    raise TypeError(f"not a rotation value: {type(r).__name__}")


def _tilt_geometry(m):
    z_b = m[..., :, 2]
    zg = np.broadcast_to(_E[2], z_b.shape)
    axis = np.cross(zg, z_b)  # tilt axis (A -> B) in global coordinates
    s = np.linalg.norm(axis, axis=-1)
    alpha = np.arctan2(s, z_b[..., 2])
    to_a = _min_rotation(z_b, zg)
    x_a = np.einsum("...ij,...j->...i", to_a, m[..., :, 0])
    psi = np.arctan2(x_a[..., 1], x_a[..., 0])
    delta = np.arctan2(axis[..., 1], axis[..., 0])
    gamma = np.where(alpha <= TILT_AXIS_TOL, 0.0, _wrap(delta - psi))
    return _wrap(psi), gamma, alpha


def _fused_geometry(m):
    zg_b = m[..., 2, :]  # global z in body coordinates
    theta = np.arctan2(-zg_b[..., 0], np.hypot(zg_b[..., 1], zg_b[..., 2]))
    phi = np.arctan2(zg_b[..., 1], np.hypot(zg_b[..., 0], zg_b[..., 2]))
    h = np.where(zg_b[..., 2] >= 0, 1, -1)
    psi, _, _ = _tilt_geometry(m)
    return psi, theta, phi, h


def _euler_zyx_geometry(m):
    x_b = m[..., :, 0]
    psi = np.arctan2(x_b[..., 1], x_b[..., 0])
    theta = np.arctan2(-x_b[..., 2], np.hypot(x_b[..., 0], x_b[..., 1]))
    rest = np.swapaxes(_elemental(2, psi) @ _elemental(1, theta), -1, -2) @ m
    phi = np.arctan2(rest[..., 2, 1], rest[..., 1, 1])
    return _wrap(psi), theta, _wrap(phi)


def _euler_zxy_geometry(m):
    y_b = m[..., :, 1]
    psi = np.arctan2(-y_b[..., 0], y_b[..., 1])
    phi = np.arctan2(y_b[..., 2], np.hypot(y_b[..., 0], y_b[..., 1]))
    rest = np.swapaxes(_elemental(2, psi) @ _elemental(0, phi), -1, -2) @ m
    theta = np.arctan2(rest[..., 0, 2], rest[..., 0, 0])
    return _wrap(psi), phi, _wrap(theta)


def _quat_geometry(m):
    # rotation axis = null vector of (R - I); angle measured on a perpendicular vector
    _, _, vh = np.linalg.svd(m - np.eye(3))
    axis = vh[..., 2, :]
    helper = np.where((np.abs(axis[..., 0]) < 0.9)[..., None], _E[0], _E[1])
    p = np.cross(axis, helper)
    p = p / np.linalg.norm(p, axis=-1, keepdims=True)
    rp = np.einsum("...ij,...j->...i", m, p)
    ang = np.arctan2(np.sum(axis * np.cross(p, rp), -1), np.sum(p * rp, -1))
    q = np.concatenate([np.cos(ang / 2)[..., None], np.sin(ang / 2)[..., None] * axis], -1)
    return q * np.where(q[..., :1] < 0, -1.0, 1.0)


def oracle_convert(r, target):
    """Convert ``r`` to ``target`` along the geometric path.

    Refuses (``ValueError``) rotations within 1e-6 of the singularity that
    matters for the target: tilt angle pi for fused/tilt output, gimbal lock
    for Euler output.
    """
    dst = representation(target)
    m = oracle_matrix(r)
    if dst is RotationMatrix:
        return RotationMatrix(m)
    if dst is Quaternion:
        return Quaternion.from_array(_quat_geometry(m))
    if dst in (TiltAngles, FusedAngles):
        alpha = np.arctan2(np.hypot(m[..., 0, 2], m[..., 1, 2]), m[..., 2, 2])
        if np.any(alpha > PI - ORACLE_MARGIN):
            raise ValueError("oracle refuses rotations this close to the fused yaw singularity")
        if dst is TiltAngles:
            psi, gamma, alpha = _tilt_geometry(m)
            return TiltAngles(_out(psi), _out(gamma), _out(alpha))
        psi, theta, phi, h = _fused_geometry(m)
        return FusedAngles(_out(psi), _out(theta), _out(phi), h if np.ndim(h) else int(h))
    if dst is EulerZYX:
        if np.any(np.abs(m[..., 2, 0]) > np.cos(ORACLE_MARGIN)):
            raise ValueError("oracle refuses rotations this close to ZYX gimbal lock")
        return EulerZYX(*(_out(v) for v in _euler_zyx_geometry(m)))
    if np.any(np.abs(m[..., 2, 1]) > np.cos(ORACLE_MARGIN)):
        raise ValueError("oracle refuses rotations this close to ZXY gimbal lock")
    return EulerZXY(*(_out(v) for v in _euler_zxy_geometry(m)))


# ---------------------------------------------------------------------------
# Random rotations


def tilt_angle_of(q):
    """Tilt angle of quaternion components, 2 atan2(|(x, y)|, |(w, z)|)."""
    q = np.asarray(q, float)
    return 2 * np.arctan2(np.hypot(q[..., 1], q[..., 2]), np.hypot(q[..., 0], q[..., 3]))


class RandomRotationStream:
    """Reproducible stream of uniformly distributed unit quaternions.

    Identical seeds give identical sequences. A stream has one consumer;
    use ``spawn`` for independent parallel streams.
    """

    _chunk = 4096

    def __init__(self, seed: int, _seq: np.random.SeedSequence | None = None):
        self.seed = int(seed)
        self._seq = _seq if _seq is not None else np.random.SeedSequence(self.seed)
        self._rng = np.random.Generator(np.random.PCG64(self._seq))

    def spawn(self, n: int) -> list:
        return [RandomRotationStream(self.seed, s) for s in self._seq.spawn(n)]

    def draw(self, n: int, alpha_cap: float = PI, gimbal_margin: float = 0.0) -> np.ndarray:
        """``n`` quaternions as an (n, 4) array, tilt angle <= alpha_cap.

        ``gimbal_margin`` additionally rejects samples whose ZYX or ZXY Euler
        pitch lies within that angle of +-pi/2.
        """
        if n < 1:
            raise ValueError("n must be >= 1")
        if not 0 < alpha_cap <= PI:
            raise ValueError("alpha_cap must lie in (0, pi]")
        out, have = [], 0
        lim = np.cos(gimbal_margin) if gimbal_margin > 0 else np.inf
        while have < n:
            q = self._rng.standard_normal((self._chunk, 4))
            q /= np.linalg.norm(q, axis=1, keepdims=True)
            keep = tilt_angle_of(q) <= alpha_cap
            if gimbal_margin > 0:
                w, x, y, z = q.T
                keep &= np.abs(2 * (x * z - w * y)) <= lim  # |sin| of ZYX pitch
                keep &= np.abs(2 * (y * z + w * x)) <= lim  # |sin| of ZXY roll
            q = q[keep]
            out.append(q)
            have += len(q)
        return np.concatenate(out)[:n]

    def quaternions(self, n: int, alpha_cap: float = PI, gimbal_margin: float = 0.0) -> Quaternion:
        """Batched ``Quaternion`` of ``n`` draws."""
        return Quaternion.from_array(self.draw(n, alpha_cap, gimbal_margin))


def random_rotations(seed: int, n: int, alpha_cap: float = PI, gimbal_margin: float = 0.0) -> list:
    """List of ``n`` seeded uniform random unit quaternions with tilt angle <= alpha_cap."""
    return RandomRotationStream(seed).quaternions(n, alpha_cap, gimbal_margin).unbatch()


def oracle_alpha(r):
    m = oracle_matrix(r)
    return _out(np.arctan2(np.hypot(m[..., 2, 0], m[..., 2, 1]), m[..., 2, 2]))


__all__ = [
    "RandomRotationStream",
    "random_rotations",
    "oracle_matrix",
    "oracle_convert",
    "oracle_alpha",
    "tilt_angle_of",
]
