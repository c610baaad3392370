"""Fused angles, tilt angles and the usual rotation representations.

Every representation is a frozen dataclass whose fields are scalars or
broadcast numpy arrays, so a single value and a batch share one API.
"""

from .core import (
    EulerZXY,
    EulerZYX,
    FusedAngles,
    Quaternion,
    RotationDomainError,
    RotationMatrix,
    TiltAngles,
    ValidationReport,
    YawResult,
    angle_diff,
    quat_z,
    representation,
    representation_name,
    require_valid,
    rot_x,
    rot_y,
    rot_z,
    validate,
    wrap,
)
from .convert import *  # noqa: F401,F403
from .convert import convert, euler_fused_relations, to_quat, yaw_relation, yaw_relation_forms
from .ops import apply_z_post, apply_z_pre, compose, fused_yaw, geodesic_distance, inverse, quat_multiply

__version__ = "0.1.0"
