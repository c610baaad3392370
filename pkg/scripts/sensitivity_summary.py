"""Print how Euler and fused slopes behave as gimbal lock is approached.

    python3 scripts/sensitivity_summary.py
"""

import math

from fusedangles.analysis import divergence_scan, euler_sensitivity_probe


def main() -> None:
    p = euler_sensitivity_probe(math.radians(65), math.pi / 2)
    print(f"alpha = 65 deg, gamma = 90 deg: Euler yaw slope {p.slope_euler_psi:.4f}, roll slope {p.slope_euler_phi:.4f}")
    print()
    print(f"{'margin':>8} {'alpha':>10} {'euler psi':>11} {'euler phi':>11} {'fused psi':>10} {'fused sines':>12}")
    for p in divergence_scan((1e-1, 1e-2, 1e-3, 1e-4, 1e-5)):
        fused = max(p.slope_fused_theta, p.slope_fused_phi)
        print(f"{p.margin:8.0e} {p.alpha:10.6f} {p.slope_euler_psi:11.2f} {p.slope_euler_phi:11.2f} "
              f"{p.slope_fused_psi:10.2g} {fused:12.8f}")


if __name__ == "__main__":
    main()
