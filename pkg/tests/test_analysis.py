import math

import numpy as np
import pytest

from fusedangles import FusedAngles, Quaternion, TiltAngles, convert, rot_x
from fusedangles.analysis import (
    alpha_for_margin,
    axisym_arrays,
    axisym_scan,
    check_axisymmetry,
    circle_grid,
    divergence_scan,
    euler_sensitivity_probe,
    level_sets,
    tilt_sample,
    tilt_sweep,
    tilt_sweep_arrays,
)
from fusedangles.oracle import RandomRotationStream, oracle_convert

from conftest import param_error, wrapped

PI = math.pi
BASE = FusedAngles(-1.2, 0.2, -1.3, -1)


def test_circle_grid():
    g = circle_grid(8)
    assert g[-1] == PI and g[3] == 0.0 and g[1] == -PI / 2 and g[5] == PI / 2
    assert np.all(g > -PI)


# tilt sweep


def test_tilt_sample_pure_roll():
    s = tilt_sample(0.0, 0.5)
    assert param_error(s.fused, FusedAngles(0, 0, 0.5, 1)) < 1e-15
    assert (s.x, s.y) == (0.5, 0.0)


def test_tilt_sample_pure_pitch():
    s = tilt_sample(PI / 2, 0.5)
    assert param_error(s.fused, FusedAngles(0, 0.5, 0, 1)) < 1e-15
    assert s.euler.psi_e == pytest.approx(0, abs=1e-15) and s.euler.theta_e == pytest.approx(0.5, abs=1e-15)


def test_tilt_sweep_layout_and_zero_yaw():
    samples = tilt_sweep(alpha_max=1.0, n_radial=3, n_angular=8)
    assert len(samples) == 24
    assert [s.alpha for s in samples[:8]] == [1 / 3] * 8
    assert [s.gamma for s in samples[:8]] == list(circle_grid(8))
    assert all(abs(s.fused.psi) <= 1e-12 for s in samples)
    for s in samples:
        assert (s.x, s.y) == pytest.approx((s.alpha * math.cos(s.gamma), s.alpha * math.sin(s.gamma)))


@pytest.mark.parametrize("kw", [dict(alpha_max=0.0), dict(alpha_max=PI), dict(n_radial=0), dict(n_angular=2.5)])
def test_tilt_sweep_rejects_bad_grids(kw):
    with pytest.raises(ValueError):
        tilt_sweep(**kw)


def test_default_sweep_fused_yaw_zero_and_matches_oracle():
    g, a, fused, euler = tilt_sweep_arrays()
    assert len(g) == 96 * 256
    assert np.max(np.abs(fused.psi)) <= 1e-12
    t = TiltAngles(np.zeros_like(g), g, a)
    assert param_error(oracle_convert(t, "fused"), fused) <= 1e-8


def test_fused_pitch_roll_exchange_symmetry():
    g, a, fused, _ = tilt_sweep_arrays(alpha_max=1.4, n_radial=10, n_angular=64)
    swapped = TiltAngles(np.zeros_like(g), np.angle(np.exp(1j * (PI / 2 - g))), a)
    other = convert(swapped, "fused")
    assert np.max(np.abs(fused.theta - other.phi)) <= 1e-12


def test_euler_pitch_roll_exchange_symmetry_fails():
    g, a, _, euler = tilt_sweep_arrays(alpha_max=1.0, n_radial=10, n_angular=64)
    swapped = TiltAngles(np.zeros_like(g), np.angle(np.exp(1j * (PI / 2 - g))), a)
    other = convert(swapped, "euler-zyx")
    assert np.max(np.abs(euler.theta_e - other.phi_e)) > 0.01


# probes


def test_probe_at_65_degrees():
    p = euler_sensitivity_probe(math.radians(65), PI / 2, 0.01)
    assert p.slope_euler_psi > 1.0
    assert p.slope_fused_psi == 0.0
    assert p.slope_euler_psi > p.slope_fused_theta
    # analytic slope |1 - 1/cos(alpha)| of the yaw relation at gamma = pi/2
    assert p.slope_euler_psi == pytest.approx(abs(1 - 1 / math.cos(math.radians(65))), rel=1e-3)


def test_probe_far_from_singularity():
    p = euler_sensitivity_probe(0.1, 0.0, 0.01)
    slopes = [p.slope_euler_psi, p.slope_euler_phi, p.slope_fused_theta, p.slope_fused_phi]
    assert all(math.isfinite(s) and s < 2 for s in slopes)
    assert not p.near_gimbal_lock


def test_probe_flags_gimbal_lock():
    assert euler_sensitivity_probe(PI / 2, PI / 2, 0.01).near_gimbal_lock


@pytest.mark.parametrize("args", [(0.0, 0.0, 0.01), (PI, 0.0, 0.01), (1.0, 0.0, 0.0), (1.0, 0.0, 0.2)])
def test_probe_preconditions(args):
    with pytest.raises(ValueError):
        euler_sensitivity_probe(*args)


def test_divergence_is_monotone():
    probes = divergence_scan()
    assert [p.margin for p in probes] == pytest.approx([1e-2, 1e-3, 1e-4], rel=1e-6)
    psi = [p.slope_euler_psi for p in probes]
    phi = [p.slope_euler_phi for p in probes]
    assert psi[0] < psi[1] < psi[2] and phi[0] < phi[1] < phi[2]
    assert all(p.slope_fused_psi == 0 for p in probes)
    assert all(max(p.slope_fused_theta, p.slope_fused_phi) <= 1 + 1e-9 for p in probes)


def test_alpha_for_margin_unreachable():
    with pytest.raises(ValueError):
        alpha_for_margin(0.1, 0.0)


# axisymmetry


def test_axisym_base_yaw_invariant():
    for s in axisym_scan(BASE, 36):
        assert wrapped(s.fused.psi, -1.2) <= 1e-10


def test_axisym_counterexample_row():
    samples = axisym_scan(rot_x(3 * PI / 4), 360)
    s = next(s for s in samples if s.beta == PI / 2)
    assert s.euler.params == pytest.approx((PI, -PI / 4, PI), abs=1e-12)
    assert s.fused.psi == 0.0


def test_axisym_sine_quadrature_example():
    base = FusedAngles(0.0, 0.6, 0.4, 1)
    s = next(s for s in axisym_scan(base, 4) if s.beta == PI / 2)
    assert s.fused_sines == pytest.approx((math.sin(0.6), -math.sin(0.4)), abs=1e-12)
    assert s.fused_sines == pytest.approx((0.5646, -0.3894), abs=1e-4)


def test_axisym_beta_zero_is_base():
    s = next(s for s in axisym_scan(BASE, 8) if s.beta == 0.0)
    assert param_error(s.fused, BASE) <= 1e-12


def test_axisym_matrix_construction():
    rep = check_axisymmetry(axisym_arrays(BASE))
    assert rep.matrix_residual <= 1e-12


def test_axisym_rejects_singular_base():
    with pytest.raises(ValueError):
        axisym_scan(Quaternion(0, 1, 0, 0))


def test_axisym_identity_base_skips_gamma():
    rep = check_axisymmetry(axisym_arrays(Quaternion.identity(), 16))
    assert math.isnan(rep.gamma_residual) and rep.holds()


def test_axisym_random_bases():
    qs = RandomRotationStream(77).quaternions(8, PI - 1e-3)
    for q in qs.unbatch():
        rep = check_axisymmetry(axisym_arrays(q, 90))
        assert rep.holds(1e-10), rep
        assert rep.fused_radius_variation <= 1e-10


def test_fused_locus_uniformly_spaced():
    scan = axisym_arrays(BASE)
    ang = np.unwrap(np.arctan2(scan.fused_sines[:, 1], scan.fused_sines[:, 0]))
    assert np.max(np.abs(np.diff(ang) - np.mean(np.diff(ang)))) <= 1e-9


def test_euler_non_axisymmetry_witness():
    rep = check_axisymmetry(axisym_arrays(BASE))
    assert rep.euler_yaw_range > 1.0
    assert rep.euler_radius_variation > 0.05


def test_axisym_matches_oracle():
    scan = axisym_arrays(BASE, 72)
    assert param_error(oracle_convert(scan.rotmat, "euler-zyx"), scan.euler) <= 1e-8
    assert param_error(oracle_convert(scan.rotmat, "fused"), scan.fused) <= 1e-8


# level sets


def test_fused_level_set_is_circle():
    (c,) = level_sets("fused", [PI / 6])
    assert np.max(np.abs(c.radii - 0.5)) <= 1e-12


def test_euler_level_set_pure_roll_point():
    (c,) = level_sets("euler", [PI / 6], n_gamma=360)
    i = int(np.flatnonzero(c.gammas == 0.0)[0])
    assert c.points[i] == pytest.approx((0.5, 0.0), abs=1e-15)


def test_euler_level_set_not_circle():
    (c,) = level_sets("euler", [PI / 3], n_gamma=8)
    i = int(np.flatnonzero(np.isclose(c.gammas, PI / 4))[0])
    assert c.radii[i] - math.sin(PI / 3) > 0.01


def test_euler_level_set_satisfies_tilt_relation():
    a = 1.1
    (c,) = level_sets("euler", [a], n_gamma=100)
    sp2, st2 = c.points[:, 0] ** 2, c.points[:, 1] ** 2
    assert np.max(np.abs(math.sin(a) ** 2 - (st2 + sp2 - st2 * sp2))) <= 1e-12


def test_level_set_preconditions():
    with pytest.raises(ValueError):
        level_sets("fused", [2.0])
    with pytest.raises(ValueError):
        level_sets("matrix", [0.5])
