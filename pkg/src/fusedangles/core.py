"""Rotation value types, angle wrapping and domain validation.

Every value type is a frozen dataclass. Fields are either plain Python numbers
(a single rotation) or equally shaped numpy arrays (a batch of rotations); all
conversions in the package broadcast over the batch form, which is what the
sweeps and the large randomised checks use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields
from typing import Any, Union

import numpy as np

PI = math.pi
HALF_PI = 0.5 * math.pi
TWO_PI = 2.0 * math.pi

# Tolerances (IEEE double throughout)
UNIT_NORM_TOL = 1e-12
RENORM_TOL = 1e-6
# norms this close to 1 are left alone, so renormalising is idempotent and sign-symmetric
_ULP_NORM = 4e-16
ORTHONORMAL_TOL = 1e-12
SINE_SUM_TOL = 1e-12
ANGLE_SUM_TOL = 1e-9
CLAMP_TOL = 1e-9
YAW_SINGULAR_TOL = 1e-24  # on w^2 + z^2
TILT_AXIS_TOL = 1e-12  # alpha at or below which gamma := 0
GIMBAL_LOCK_TOL = 1e-12  # on 1 - |sin(Euler pitch)|

Real = Union[float, np.ndarray]


class RotationDomainError(ValueError):
    """Raised when a rotation value lies outside its parameter domain."""

    def __init__(self, what: str, report: "ValidationReport"):
        self.report = report
        super().__init__(f"invalid {what}: {report}")


def _out(a):
    """Return a Python float for 0-d input, the array otherwise; -0.0 becomes 0.0."""
    if np.ndim(a) == 0:
        return float(a) + 0.0
    return a + 0.0


def _wrap(a):
    # array kernel for wrap(); no finiteness check
    a = np.asarray(a, dtype=float)
    inside = (a > -PI) & (a <= PI)
    out = np.where(inside, a, PI - np.mod(PI - a, TWO_PI))
    return np.where(out <= -PI, PI, out)


def wrap(a: Real) -> Real:
    """Wrap an angle (or array of angles) to the half-open interval (-pi, pi].

    Values already inside the interval are returned unchanged, which makes
    the function exactly idempotent. ``wrap(-pi)`` is ``pi``.
    """
    arr = np.asarray(a, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"cannot wrap non-finite angle {a!r}")
    return _out(_wrap(arr))


def angle_diff(a: Real, b: Real) -> Real:
    """Absolute wrapped difference min(|a - b|, 2pi - |a - b|) of two angles."""
    d = np.abs(np.mod(np.asarray(a, float) - np.asarray(b, float), TWO_PI))
    return _out(np.minimum(d, TWO_PI - d))


def clamp_unit(v):
    """Clamp a sine/cosine argument to [-1, 1].

    Rounding excursions up to ``CLAMP_TOL`` are absorbed; anything larger
    signals an upstream bug and raises ``ArithmeticError``.
    """
    v = np.asarray(v, dtype=float)
    if np.any(np.abs(v) > 1.0 + CLAMP_TOL):
        raise ArithmeticError(f"inverse trig argument out of range: max |v| = {np.max(np.abs(v))!r}")
    return np.clip(v, -1.0, 1.0)


def sincos(a):
    """sin and cos of ``a``, exact at integer multiples of pi/2."""
    a = np.asarray(a, dtype=float)
    s, c = np.sin(a), np.cos(a)
    k = a / HALF_PI
    quarter = np.isfinite(k) & (k == np.round(k))
    if np.any(quarter):
        m = np.mod(np.round(k), 4.0)
        s = np.where(quarter, np.choose(m.astype(int) % 4, [0.0, 1.0, 0.0, -1.0]), s)
        c = np.where(quarter, np.choose(m.astype(int) % 4, [1.0, 0.0, -1.0, 0.0]), c)
    return s, c


# ---------------------------------------------------------------------------
# Value types

def _coerce(obj, names, dtypes=None):
    """Normalise numeric fields to floats or broadcast float arrays."""
    vals = [getattr(obj, n) for n in names]
    if all(np.ndim(v) == 0 for v in vals):
        for n, v in zip(names, vals):
            kind = (dtypes or {}).get(n, float)
            object.__setattr__(obj, n, kind(v))
        return
    arrs = np.broadcast_arrays(*[np.asarray(v) for v in vals])
    for n, a in zip(names, arrs):
        kind = (dtypes or {}).get(n, float)
        a = np.array(a, dtype=kind)
        a.setflags(write=False)
        object.__setattr__(obj, n, a)


def _coerce_flag(obj, name="singular"):
    v = getattr(obj, name)
    if np.ndim(v) == 0:
        object.__setattr__(obj, name, bool(v))
    else:
        a = np.array(v, dtype=bool)
        a.setflags(write=False)
        object.__setattr__(obj, name, a)


class _Batchable:
    """Shared helpers for the parameter dataclasses."""

    _params: tuple = ()

    @property
    def params(self) -> tuple:
        """The rotation parameters in their conventional order (no flags)."""
        return tuple(getattr(self, n) for n in self._params)

    @property
    def shape(self) -> tuple:
        return np.shape(getattr(self, self._params[0]))

    def __len__(self) -> int:
        if not self.shape:
            raise TypeError(f"unbatched {type(self).__name__} has no len()")
        return self.shape[0]

    def __getitem__(self, idx):
        if not self.shape:
            raise TypeError(f"unbatched {type(self).__name__} is not indexable")
        kw = {}
        for f in fields(self):
            v = getattr(self, f.name)
            kw[f.name] = v[idx] if np.ndim(v) else v
        return type(self)(**kw)

    def unbatch(self) -> list:
        """Split a batch into a list of single values (a scalar value gives [self])."""
        if not self.shape:
            return [self]
        n = self.shape[0]
        cols = {f.name: getattr(self, f.name) for f in fields(self)}
        lists = {k: (v.tolist() if isinstance(v, np.ndarray) else [v] * n) for k, v in cols.items()}
        cls = type(self)
        return [cls(**{k: lists[k][i] for k in cols}) for i in range(n)]


@dataclass(frozen=True)
class Quaternion(_Batchable):
    """Unit quaternion (w, x, y, z); q and -q are the same rotation.

    Norm deviations up to 1e-6 are silently renormalised; larger ones are kept
    as given so that ``validate`` can report them.
    """

    w: Real
    x: Real
    y: Real
    z: Real

    _params = ("w", "x", "y", "z")

    def __post_init__(self):
        _coerce(self, self._params)
        w, x, y, z = self.w, self.x, self.y, self.z
        if isinstance(w, float):
            n = math.sqrt(w * w + x * x + y * y + z * z)
            if _ULP_NORM < abs(n - 1.0) <= RENORM_TOL:
                for k, v in zip(self._params, (w, x, y, z)):
                    object.__setattr__(self, k, v / n)
            return
        n = np.sqrt(w * w + x * x + y * y + z * z)
        fix = (np.abs(n - 1.0) <= RENORM_TOL) & (np.abs(n - 1.0) > _ULP_NORM)
        if np.any(fix):
            scale = np.where(fix, n, 1.0)
            for k, v in zip(self._params, (w, x, y, z)):
                a = v / scale
                a.setflags(write=False)
                object.__setattr__(self, k, a)

    @classmethod
    def identity(cls) -> "Quaternion":
        return cls(1.0, 0.0, 0.0, 0.0)

    @classmethod
    def from_array(cls, a) -> "Quaternion":
        a = np.asarray(a, dtype=float)
        return cls(a[..., 0], a[..., 1], a[..., 2], a[..., 3])

    def as_array(self) -> np.ndarray:
        return np.stack(np.broadcast_arrays(self.w, self.x, self.y, self.z), axis=-1)

    def __neg__(self) -> "Quaternion":
        return Quaternion(-self.w, -self.x, -self.y, -self.z)


@dataclass(frozen=True)
class RotationMatrix:
    """3x3 rotation matrix, or a stack of them with shape (..., 3, 3).

    Entries are indexed ``r[i, j]`` with i the row; documentation uses the
    1-based R_ij notation.
    """

    r: Any

    def __post_init__(self):
        a = np.array(self.r, dtype=float)
        if a.shape[-2:] != (3, 3):
            raise ValueError(f"rotation matrix must have shape (..., 3, 3), got {a.shape}")
        a.setflags(write=False)
        object.__setattr__(self, "r", a)

    @property
    def shape(self) -> tuple:
        return self.r.shape[:-2]

    @property
    def params(self) -> tuple:
        if not self.shape:
            return tuple(float(v) for v in self.r.ravel())
        return tuple(np.moveaxis(self.r.reshape(self.shape + (9,)), -1, 0))

    def __len__(self) -> int:
        if not self.shape:
            raise TypeError("unbatched RotationMatrix has no len()")
        return self.shape[0]

    def __getitem__(self, idx) -> "RotationMatrix":
        if not self.shape:
            raise TypeError("unbatched RotationMatrix is not indexable")
        return RotationMatrix(self.r[idx])

    def unbatch(self) -> list:
        if not self.shape:
            return [self]
        return [RotationMatrix(m) for m in self.r]

    def __matmul__(self, other: "RotationMatrix") -> "RotationMatrix":
        return RotationMatrix(self.r @ other.r)

    @property
    def T(self) -> "RotationMatrix":
        return RotationMatrix(np.swapaxes(self.r, -1, -2))

    @classmethod
    def identity(cls) -> "RotationMatrix":
        return cls(np.eye(3))


@dataclass(frozen=True)
class EulerZYX(_Batchable):
    """Intrinsic ZYX Euler angles (yaw, pitch, roll).

    ``singular`` marks a gimbal-lock value that was canonicalised to zero roll.
    """

    psi_e: Real
    theta_e: Real
    phi_e: Real
    singular: Any = field(default=False, compare=False)

    _params = ("psi_e", "theta_e", "phi_e")

    def __post_init__(self):
        _coerce(self, self._params)
        _coerce_flag(self)


@dataclass(frozen=True)
class EulerZXY(_Batchable):
    """Intrinsic ZXY Euler angles (yaw, roll, pitch); note the field order."""

    psi_et: Real
    phi_et: Real
    theta_et: Real
    singular: Any = field(default=False, compare=False)

    _params = ("psi_et", "phi_et", "theta_et")

    def __post_init__(self):
        _coerce(self, self._params)
        _coerce_flag(self)


@dataclass(frozen=True)
class TiltAngles(_Batchable):
    """Tilt angles (fused yaw, tilt axis angle, tilt angle)."""

    psi: Real
    gamma: Real
    alpha: Real
    singular: Any = field(default=False, compare=False)

    _params = ("psi", "gamma", "alpha")

    def __post_init__(self):
        _coerce(self, self._params)
        _coerce_flag(self)


@dataclass(frozen=True)
class FusedAngles(_Batchable):
    """Fused angles (fused yaw, fused pitch, fused roll, hemisphere).

    ``singular`` is set on values extracted at the fused yaw singularity
    (tilt angle pi), where the yaw is reported as 0 by convention and the
    value need not reproduce the source rotation.
    """

    psi: Real
    theta: Real
    phi: Real
    h: Any = 1
    singular: Any = field(default=False, compare=False)

    _params = ("psi", "theta", "phi", "h")

    def __post_init__(self):
        _coerce(self, self._params, {"h": int})
        _coerce_flag(self)


@dataclass(frozen=True)
class YawResult:
    """Fused yaw of a rotation together with its singularity flag."""

    yaw: Real
    singular: Any = False


Rotation = Union[Quaternion, RotationMatrix, EulerZYX, EulerZXY, TiltAngles, FusedAngles]

REPRESENTATIONS = {
    "quat": Quaternion,
    "rotmat": RotationMatrix,
    "euler-zyx": EulerZYX,
    "euler-zxy": EulerZXY,
    "tilt": TiltAngles,
    "fused": FusedAngles,
}


def representation(kind) -> type:
    """Resolve a representation name (``"fused"``, ``"euler-zyx"``, ...) or class."""
    if isinstance(kind, type) and kind in REPRESENTATIONS.values():
        return kind
    try:
        return REPRESENTATIONS[str(kind).lower().replace("_", "-")]
    except KeyError:
        raise ValueError(f"unknown representation {kind!r}; expected one of {sorted(REPRESENTATIONS)}") from None


def representation_name(kind) -> str:
    cls = representation(kind)
    return next(k for k, v in REPRESENTATIONS.items() if v is cls)


# ---------------------------------------------------------------------------
# Elemental rotations


def rot_x(a: Real) -> RotationMatrix:
    s, c = sincos(a)
    o, z = np.ones_like(s), np.zeros_like(s)
    return RotationMatrix(np.stack([np.stack([o, z, z], -1), np.stack([z, c, -s], -1), np.stack([z, s, c], -1)], -2))


def rot_y(a: Real) -> RotationMatrix:
    s, c = sincos(a)
    o, z = np.ones_like(s), np.zeros_like(s)
    return RotationMatrix(np.stack([np.stack([c, z, s], -1), np.stack([z, o, z], -1), np.stack([-s, z, c], -1)], -2))


def rot_z(a: Real) -> RotationMatrix:
    s, c = sincos(a)
    o, z = np.ones_like(s), np.zeros_like(s)
    return RotationMatrix(np.stack([np.stack([c, -s, z], -1), np.stack([s, c, z], -1), np.stack([z, z, o], -1)], -2))


def quat_z(a: Real) -> Quaternion:
    """Quaternion of a pure z-rotation by ``a``."""
    s, c = sincos(np.asarray(a, float) / 2)
    z = np.zeros_like(s)
    return Quaternion(_out(c), _out(z), _out(z), _out(s))


# ---------------------------------------------------------------------------
# Validation


@dataclass(frozen=True)
class Violation:
    invariant: str
    residual: float
    count: int = 1

    def __str__(self) -> str:
        n = f" ({self.count} values)" if self.count > 1 else ""
        return f"{self.invariant}: residual {self.residual:.3g}{n}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        return "ok" if self.ok else "; ".join(str(v) for v in self.violations)


def _check(out, name, bad, residual):
    bad = np.asarray(bad, bool)
    if np.any(bad):
        res = np.asarray(residual, float)
        res = np.where(np.isfinite(res), res, np.inf)
        out.append(Violation(name, float(np.max(np.where(bad, res, 0.0))), int(np.count_nonzero(bad))))


def _check_finite(out, vals):
    bad = np.zeros(np.shape(vals[0]), bool)
    for v in vals:
        bad = bad | ~np.isfinite(np.asarray(v, float))
    _check(out, "finite values", bad, np.where(bad, np.inf, 0.0))
    return not np.any(bad)


def _half_open(out, name, a):
    a = np.asarray(a, float)
    _check(out, f"{name} in (-pi, pi]", ~((a > -PI) & (a <= PI)), np.maximum(a - PI, -PI - a))


def _closed(out, name, a, lo, hi, label):
    a = np.asarray(a, float)
    _check(out, f"{name} in {label}", (a < lo) | (a > hi), np.maximum(a - hi, lo - a))


def validate(r: Rotation) -> ValidationReport:
    """Check a rotation value against the invariants of its type.

    Violations are returned as data with the measured residual (for batches,
    the worst residual and the number of offending entries).
    """
    v: list = []
    if isinstance(r, Quaternion):
        if _check_finite(v, r.params):
            n2 = r.w * r.w + r.x * r.x + r.y * r.y + r.z * r.z
            res = np.abs(n2 - 1.0)
            _check(v, "unit norm", res > UNIT_NORM_TOL, res)
    elif isinstance(r, RotationMatrix):
        m = r.r
        if _check_finite(v, [np.max(np.where(np.isfinite(m), 0.0, np.nan), axis=(-1, -2))]):
            e = np.max(np.abs(np.swapaxes(m, -1, -2) @ m - np.eye(3)), axis=(-1, -2))
            _check(v, "orthonormality", e > ORTHONORMAL_TOL, e)
            d = np.abs(np.linalg.det(m) - 1.0)
            _check(v, "determinant +1", d > ORTHONORMAL_TOL, d)
    elif isinstance(r, EulerZYX):
        if _check_finite(v, r.params):
            _half_open(v, "psi_e", r.psi_e)
            _closed(v, "theta_e", r.theta_e, -HALF_PI, HALF_PI, "[-pi/2, pi/2]")
            _half_open(v, "phi_e", r.phi_e)
    elif isinstance(r, EulerZXY):
        if _check_finite(v, r.params):
            _half_open(v, "psi_et", r.psi_et)
            _closed(v, "phi_et", r.phi_et, -HALF_PI, HALF_PI, "[-pi/2, pi/2]")
            _half_open(v, "theta_et", r.theta_et)
    elif isinstance(r, TiltAngles):
        if _check_finite(v, r.params):
            _half_open(v, "psi", r.psi)
            _half_open(v, "gamma", r.gamma)
            _closed(v, "alpha", r.alpha, 0.0, PI, "[0, pi]")
    elif isinstance(r, FusedAngles):
        if _check_finite(v, r.params[:3]):
            _half_open(v, "psi", r.psi)
            _closed(v, "theta", r.theta, -HALF_PI, HALF_PI, "[-pi/2, pi/2]")
            _closed(v, "phi", r.phi, -HALF_PI, HALF_PI, "[-pi/2, pi/2]")
            h = np.asarray(r.h)
            _check(v, "h in {-1, 1}", (h != 1) & (h != -1), np.abs(np.abs(h) - 1.0))
            s = np.sin(r.theta) ** 2 + np.sin(r.phi) ** 2 - 1.0
            _check(v, "sine sum criterion", s > SINE_SUM_TOL, s)
            a = np.abs(r.theta) + np.abs(r.phi) - HALF_PI
            _check(v, "sine sum criterion (angle form)", a > ANGLE_SUM_TOL, a)
    else:
        raise TypeError(f"not a rotation value: {type(r).__name__}")
    return ValidationReport(tuple(v))


def require_valid(r: Rotation) -> None:
    """Raise ``RotationDomainError`` if ``validate(r)`` reports anything."""
    rep = validate(r)
    if not rep.ok:
        raise RotationDomainError(type(r).__name__, rep)
