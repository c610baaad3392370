import math

import numpy as np
import pytest

from fusedangles import Quaternion, RotationMatrix, angle_diff
from fusedangles.oracle import RandomRotationStream

# representations whose parameters are all angles except fused h
ANGLE_KINDS = ("euler-zyx", "euler-zxy", "tilt", "fused")
ALL_KINDS = ("quat", "rotmat", "euler-zyx", "euler-zxy", "tilt", "fused")


def wrapped(a, b):
    return np.asarray(angle_diff(a, b))


def param_error(a, b) -> float:
    """Worst per-parameter disagreement between two values of one representation.

    Quaternions are compared up to sign, matrices entrywise, angles with the
    wrapped metric, and fused hemispheres must match exactly (inf otherwise).
    """
    assert type(a) is type(b)
    if isinstance(a, Quaternion):
        qa, qb = a.as_array(), b.as_array()
        s = np.where(np.sum(qa * qb, -1, keepdims=True) < 0, -1.0, 1.0)
        return float(np.max(np.abs(qa - s * qb)))
    if isinstance(a, RotationMatrix):
        return float(np.max(np.abs(np.asarray(a.r) - np.asarray(b.r))))
    errs = [np.max(wrapped(x, y)) for x, y in zip(a.params, b.params)]
    if hasattr(a, "h") and np.any(np.asarray(a.h) != np.asarray(b.h)):
        return math.inf
    return float(max(errs))


@pytest.fixture(scope="session")
def random_quats():
    """10^4 seeded rotations, tilt angle <= pi - 1e-3, 1e-3 away from gimbal lock."""
    return RandomRotationStream(20240611).quaternions(10_000, math.pi - 1e-3, 1e-3)
