import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from fusedangles import (
    EulerZYX,
    FusedAngles,
    Quaternion,
    TiltAngles,
    apply_z_post,
    apply_z_pre,
    convert,
    euler_zyx_to_rotmat,
    fused_to_rotmat,
    fused_yaw,
    geodesic_distance,
    inverse,
    quat_to_fused,
    tilt_to_rotmat,
    validate,
    wrap,
)
from fusedangles.oracle import RandomRotationStream

from conftest import ALL_KINDS, param_error, wrapped

PI = math.pi
angles = st.floats(-PI, PI, allow_nan=False)
finite = st.floats(-1e6, 1e6, allow_nan=False)


@st.composite
def quaternions(draw):
    v = np.array([draw(st.floats(-1, 1)) for _ in range(4)])
    n = np.linalg.norm(v)
    assume(n > 1e-3)
    return Quaternion.from_array(v / n)


@st.composite
def fused_values(draw):
    # valid fused angles from a tilt parameterisation
    alpha = draw(st.floats(0, PI * (1 - 1e-6)))
    gamma = draw(angles)
    psi = draw(angles)
    return convert(TiltAngles(wrap(psi), wrap(gamma), alpha), "fused")


# wrap


@given(finite)
def test_wrap_range_and_congruence(a):
    w = wrap(a)
    assert -PI < w <= PI
    assert abs(math.remainder(a - w, 2 * PI)) <= 1e-9 * max(1.0, abs(a))


@given(finite)
def test_wrap_idempotent(a):
    assert wrap(wrap(a)) == wrap(a)


@given(st.floats(-100, 100), st.integers(-10, 10))
def test_wrap_periodic(a, k):
    assert wrapped(wrap(a + 2 * PI * k), wrap(a)) <= 1e-12


def test_sine_sum_forms_equivalent_on_valid_values():
    rng = np.random.default_rng(0)
    th = rng.uniform(-PI / 2, PI / 2, 40_000)
    ph = rng.uniform(-PI / 2, PI / 2, 40_000)
    keep = np.sin(th) ** 2 + np.sin(ph) ** 2 <= 1
    th, ph = th[keep][:10_000], ph[keep][:10_000]
    assert len(th) == 10_000
    assert np.max(np.abs(th) + np.abs(ph)) <= PI / 2 + 1e-9


# conversions


@settings(max_examples=300)
@given(quaternions())
def test_double_cover_invariance(q):
    assert quat_to_fused(q).params == quat_to_fused(-q).params
    for kind in ALL_KINDS[1:]:
        assert param_error(convert(q, kind), convert(-q, kind)) == 0.0


def cos_alpha(q):
    return q.w * q.w + q.z * q.z - q.x * q.x - q.y * q.y


@settings(max_examples=300)
@given(quaternions())
def test_extraction_round_trips(q):
    for kind in ALL_KINDS:
        r = convert(q, kind)
        if getattr(r, "singular", False):
            continue
        # fused (theta, phi, h) fixes cos(alpha) only through sqrt(1 - s^2 - s^2),
        # so within ~1e-6 of the equator one ulp of input moves the rotation ~1e-8
        if kind == "fused" and abs(cos_alpha(q)) < 1e-6:
            continue
        assert validate(r).ok
        assert geodesic_distance(convert(r, "quat"), q) <= 1e-9


@settings(max_examples=300)
@given(st.floats(-PI, PI), st.floats(-1e-6, 1e-6))
def test_fused_round_trip_near_equator_bounded(gamma, da):
    q = convert(TiltAngles(0.3, wrap(gamma), PI / 2 + da), "quat")
    assert geodesic_distance(convert(convert(q, "fused"), "quat"), q) <= 1e-7


@settings(max_examples=300)
@given(fused_values())
def test_fused_bottom_row(f):
    t = convert(f, "tilt")
    row = fused_to_rotmat(f).r[2]
    assert np.max(np.abs(row - [-math.sin(f.theta), math.sin(f.phi), math.cos(t.alpha)])) <= 1e-12
    sa, ca = math.sin(t.alpha), math.cos(t.alpha)
    row = tilt_to_rotmat(t).r[2]
    assert np.max(np.abs(row - [-sa * math.sin(t.gamma), sa * math.cos(t.gamma), ca])) <= 1e-12


@given(angles, st.floats(-PI / 2, PI / 2), angles)
def test_euler_bottom_row(psi, theta, phi):
    e = EulerZYX(wrap(psi), theta, wrap(phi))
    st_, ct = math.sin(theta), math.cos(theta)
    row = euler_zyx_to_rotmat(e).r[2]
    assert np.max(np.abs(row - [-st_, ct * math.sin(phi), ct * math.cos(phi)])) <= 1e-12


@given(angles, angles, st.floats(-10, 10), st.sampled_from([1.0, -1.0]))
def test_gimbal_lock_equivalence(psi, phi, lam, sign):
    a = euler_zyx_to_rotmat(EulerZYX(wrap(psi), sign * PI / 2, wrap(phi)))
    b = euler_zyx_to_rotmat(EulerZYX(wrap(psi - sign * lam), sign * PI / 2, wrap(phi - lam)))
    assert np.max(np.abs(a.r - b.r)) <= 1e-12


@settings(max_examples=300)
@given(angles, st.floats(0, PI * (1 - 1e-6)))
def test_zero_fused_yaw_iff_zero_z(gamma, alpha):
    t = TiltAngles(0.0, wrap(gamma), alpha)
    q = convert(t, "quat")
    assert abs(q.z) <= 1e-15
    assert abs(fused_yaw(q).yaw) <= 1e-15
    # and back: a zero z component gives zero extracted yaw
    assert quat_to_fused(Quaternion(q.w, q.x, q.y, 0.0)).psi == 0.0


@settings(max_examples=200)
@given(angles, st.floats(1e-3, PI - 1e-3))
def test_nonzero_z_gives_nonzero_yaw(psi, alpha):
    assume(abs(wrap(psi)) > 1e-6)
    q = convert(TiltAngles(wrap(psi), 0.3, alpha), "quat")
    assert abs(q.z) > 0 and abs(quat_to_fused(q).psi) > 0


# operations


@settings(max_examples=300)
@given(quaternions(), angles)
def test_yaw_additivity(q, z):
    assume(not fused_yaw(q).singular)
    base = fused_yaw(q).yaw
    for op in (apply_z_pre, apply_z_post):
        assert wrapped(fused_yaw(op(q, z)).yaw, wrap(base + z)) <= 1e-10


@settings(max_examples=300)
@given(fused_values(), angles)
def test_pre_rotation_keeps_fused_tilt(f, z):
    g = apply_z_pre(f, z)
    assert (g.theta, g.phi, g.h) == (f.theta, f.phi, f.h)
    via_quat = convert(apply_z_pre(convert(f, "quat"), z), "fused")
    assert abs(via_quat.theta - f.theta) <= 1e-12 and abs(via_quat.phi - f.phi) <= 1e-12


@settings(max_examples=300)
@given(quaternions())
def test_inverse_negates_fused_yaw(q):
    assume(w2z2(q) > 1e-12)
    assert wrapped(fused_yaw(inverse(q)).yaw, -fused_yaw(q).yaw) <= 1e-10


def w2z2(q):
    return q.w * q.w + q.z * q.z


@settings(max_examples=300)
@given(angles, st.floats(0, PI * (1 - 1e-6)))
def test_zero_yaw_inverse_negates_pitch_roll(gamma, alpha):
    f = convert(TiltAngles(0.0, wrap(gamma), alpha), "fused")
    inv = inverse(f)
    assert abs(inv.psi) <= 1e-10
    assert abs(inv.theta + f.theta) <= 1e-10 and abs(inv.phi + f.phi) <= 1e-10 and inv.h == f.h
    # the same through the matrix transpose
    back = convert(inverse(convert(f, "rotmat")), "fused")
    assert param_error(back, FusedAngles(0.0, -f.theta, -f.phi, f.h)) <= 1e-10


@settings(max_examples=300)
@given(angles, st.floats(-PI / 2 + 1e-3, PI / 2 - 1e-3), angles)
def test_euler_inverse_matches_transpose(psi, theta, phi):
    e = EulerZYX(wrap(psi), theta, wrap(phi))
    oracle = convert(inverse(convert(e, "rotmat")), "euler-zyx")
    assert param_error(inverse(e), oracle) <= 1e-9


def test_axis_purity_zero_fused_yaw():
    q = RandomRotationStream(31).quaternions(10_000, PI - 1e-3)
    t = convert(q, "tilt")
    pure = convert(TiltAngles(np.zeros(len(t)), t.gamma, t.alpha), "quat")
    f = convert(pure, "fused")
    v = pure.as_array()[:, 1:]
    line = np.stack([np.sin(f.phi), np.sin(f.theta), np.zeros(len(t))], -1)
    assert np.max(np.linalg.norm(np.cross(v, line), axis=-1)) <= 1e-10


def test_axis_purity_zero_euler_yaw():
    rng = np.random.default_rng(8)
    th = rng.uniform(-PI / 2 + 1e-3, PI / 2 - 1e-3, 10_000)
    ph = rng.uniform(-PI, PI, 10_000)
    q = convert(EulerZYX(np.zeros_like(th), th, ph), "quat").as_array()
    # half-angle vector part of Ry(theta) Rx(phi), canonical sign as the library's
    sp, cp, s_t, c_t = np.sin(ph / 2), np.cos(ph / 2), np.sin(th / 2), np.cos(th / 2)
    expected = np.stack([sp * c_t, cp * s_t, -sp * s_t], -1) * np.where(cp * c_t < 0, -1, 1)[:, None]
    assert np.max(np.abs(q[:, 1:] - expected)) <= 1e-10
    assert np.max(np.abs(expected[:, 2])) > 0.1  # the z term is really there


def test_round_trip_q_f_q_large_sample():
    q = RandomRotationStream(12).quaternions(100_000, PI - 0.1)
    back = convert(convert(q, "fused"), "quat")
    assert np.max(geodesic_distance(back, q)) <= 1e-9


def test_fused_yaw_negation_large_sample():
    q = RandomRotationStream(13).quaternions(100_000, PI - 1e-3)
    err = wrapped(fused_yaw(inverse(q)).yaw, -np.asarray(fused_yaw(q).yaw))
    assert np.max(err) <= 1e-10


def test_sampled_fused_values_satisfy_both_sine_sum_forms():
    q = RandomRotationStream(14).quaternions(100_000)
    assert validate(convert(q, "fused")).ok
    assert validate(convert(convert(q, "rotmat"), "fused")).ok
