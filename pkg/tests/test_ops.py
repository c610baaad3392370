import math

import numpy as np
import pytest

from fusedangles import (
    EulerZXY,
    EulerZYX,
    FusedAngles,
    Quaternion,
    RotationMatrix,
    TiltAngles,
    apply_z_post,
    apply_z_pre,
    compose,
    convert,
    fused_yaw,
    geodesic_distance,
    inverse,
    quat_z,
    rot_x,
    rot_z,
)
from fusedangles.ops import fused_inverse_tilt_form
from fusedangles.oracle import oracle_matrix

from conftest import ALL_KINDS, param_error, wrapped

PI = math.pi


def q_x(a):
    return Quaternion(math.cos(a / 2), math.sin(a / 2), 0, 0)


def test_compose_identity():
    q = Quaternion.from_array(np.array([0.5, 0.5, -0.5, 0.5]))
    assert param_error(compose(q, Quaternion.identity()), q) == 0.0


def test_compose_z_rotations():
    assert param_error(compose(quat_z(2.5), quat_z(1.5)), quat_z(float(np.angle(np.exp(4j))))) < 1e-15


def test_compose_counterexample_chain():
    q = compose(compose(quat_z(-PI / 2), q_x(3 * PI / 4)), quat_z(PI / 2))
    assert param_error(q, convert(EulerZYX(PI, -PI / 4, PI), "quat")) < 1e-15
    e = convert(q, "euler-zyx")
    assert param_error(e, EulerZYX(PI, -PI / 4, PI)) < 1e-12


def test_compose_unit_and_matches_matrix_product(random_quats):
    a, b = random_quats[:200], random_quats[200:400]
    c = compose(a, b)
    n = np.linalg.norm(c.as_array(), axis=-1)
    assert np.max(np.abs(n - 1)) <= 1e-12
    np.testing.assert_allclose(oracle_matrix(c), oracle_matrix(a) @ oracle_matrix(b), atol=1e-12)


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_compose_returns_left_representation(kind, random_quats):
    a, b = convert(random_quats[0], kind), convert(random_quats[1], "fused")
    c = compose(a, b)
    assert type(c) is type(a)
    assert geodesic_distance(c, compose(random_quats[0], random_quats[1])) < 1e-9


def test_fused_yaw_examples():
    assert fused_yaw(rot_x(3 * PI / 4)).yaw == 0.0
    assert fused_yaw(rot_z(2.0)).yaw == pytest.approx(2.0, abs=1e-15)
    counter = rot_z(-PI / 2) @ rot_x(3 * PI / 4) @ rot_z(PI / 2)
    assert fused_yaw(EulerZYX(PI, -PI / 4, PI)).yaw == pytest.approx(fused_yaw(counter).yaw, abs=1e-15)
    assert abs(fused_yaw(counter).yaw) <= 1e-12


def test_fused_yaw_singular():
    res = fused_yaw(Quaternion(0, 0, 1, 0))
    assert res.singular and res.yaw == 0.0
    assert fused_yaw(TiltAngles(1.0, 0.3, PI)).singular
    assert fused_yaw(FusedAngles(1.0, 0, 0, -1)).singular
    assert not fused_yaw(FusedAngles(1.0, 0, 0, 1)).singular


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_fused_yaw_representation_invariant(kind, random_quats):
    q = random_quats[:300]
    assert np.max(wrapped(fused_yaw(convert(q, kind)).yaw, fused_yaw(q).yaw)) <= 1e-9


def test_apply_z_examples():
    assert apply_z_pre(FusedAngles(0.2, 0.3, -0.1, 1), 0.5) == FusedAngles(0.7, 0.3, -0.1, 1)
    assert fused_yaw(apply_z_post(rot_x(1.0), 0.4)).yaw == pytest.approx(0.4, abs=1e-15)
    r = apply_z_pre(apply_z_pre(Quaternion.identity(), PI), PI)
    assert abs(fused_yaw(r).yaw) <= 1e-15


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_apply_z_pre_matches_matrix_product(kind, random_quats):
    r = convert(random_quats[:100], kind)
    z = np.linspace(-3, 3, 100)
    out = apply_z_pre(r, z)
    assert type(out) is type(r)
    np.testing.assert_allclose(oracle_matrix(out), rot_z(z).r @ oracle_matrix(r), atol=1e-9)


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_apply_z_post_matches_matrix_product(kind, random_quats):
    r = convert(random_quats[:100], kind)
    z = np.linspace(-3, 3, 100)
    np.testing.assert_allclose(oracle_matrix(apply_z_post(r, z)), oracle_matrix(r) @ rot_z(z).r, atol=1e-9)


def test_apply_z_pre_keeps_tilt_component():
    t = TiltAngles(0.1, -2.0, 1.9)
    out = apply_z_pre(t, 1.0)
    assert (out.gamma, out.alpha) == (t.gamma, t.alpha)


def test_inverse_examples():
    assert param_error(inverse(FusedAngles(0, 0, PI / 4, -1)), FusedAngles(0, 0, -PI / 4, -1)) <= 1e-15
    assert param_error(inverse(EulerZYX(0, 0, 1.3)), EulerZYX(0, 0, -1.3)) <= 1e-15
    assert param_error(inverse(EulerZYX(0, PI / 4, PI / 2)), EulerZYX(PI / 4, 0, -PI / 2)) <= 1e-12


def test_inverse_tilt_formula():
    t = TiltAngles(0.4, 2.9, 1.2)
    assert param_error(inverse(t), TiltAngles(-0.4, float(np.angle(np.exp(1j * (0.4 + 2.9 - PI)))), 1.2)) < 1e-15


def test_inverse_tilt_identity_keeps_gamma_zero():
    assert inverse(TiltAngles(0.5, 0.0, 0.0)) == TiltAngles(-0.5, 0.0, 0.0)


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_inverse_composes_to_identity(kind, random_quats):
    r = convert(random_quats[:300], kind)
    inv = inverse(r)
    assert type(inv) is type(r)
    assert np.max(geodesic_distance(compose(r, inv), Quaternion.identity())) <= 1e-9


def test_fused_inverse_forms_agree(random_quats):
    f = convert(random_quats[:1000], "fused")
    inv = inverse(f)
    th, ph = fused_inverse_tilt_form(f)
    assert np.max(np.abs(inv.theta - th)) <= 1e-12
    assert np.max(np.abs(inv.phi - ph)) <= 1e-12


def test_euler_inverse_at_gimbal_lock_is_finite_and_canonical():
    e = EulerZYX(0.3, PI / 2, 0.2)
    np.testing.assert_allclose(oracle_matrix(inverse(e)), oracle_matrix(e).T, atol=1e-12)
    locked = inverse(EulerZYX(0.0, -PI / 2, 0.0))
    assert locked.singular and locked.phi_e == 0.0
    assert param_error(locked, EulerZYX(0, PI / 2, 0)) <= 1e-15


def test_zxy_inverse():
    e = EulerZXY(0.4, 0.3, -0.2)
    np.testing.assert_allclose(oracle_matrix(inverse(e)), oracle_matrix(e).T, atol=1e-12)


def test_matrix_inverse_is_transpose():
    m = rot_x(0.3) @ rot_z(1.0)
    assert isinstance(inverse(m), RotationMatrix)
    np.testing.assert_array_equal(inverse(m).r, m.r.T)


def test_geodesic_distance():
    assert geodesic_distance(quat_z(0.3), quat_z(-0.2)) == pytest.approx(0.5)
    assert geodesic_distance(Quaternion(1, 0, 0, 0), Quaternion(-1, 0, 0, 0)) == 0.0
    assert geodesic_distance(quat_z(1e-10), quat_z(0.0)) == pytest.approx(1e-10, rel=1e-9)
    assert geodesic_distance(q_x(PI), Quaternion.identity()) == pytest.approx(PI)
