"""Write every figure dataset as CSV into one directory.

    python3 scripts/figure_datasets.py [OUTDIR]

Runs the same code paths as the ``fusedangles`` command line, so the files
are byte-identical to what the CLI produces with the same options.
"""

import sys
from pathlib import Path

from fusedangles.cli import main

RUNS = {
    "tilt_sweep.csv": ["tilt-sweep"],
    "axisym_identity.csv": ["axisym", "--base", "quat", "1", "0", "0", "0"],
    "axisym_rx_3pi4.csv": ["axisym", "--base", "tilt", "0", "0", "2.356194490192345"],
    "axisym_base_rotation.csv": ["axisym", "--base", "fused", "-1.2", "0.2", "-1.3", "-1"],
    "axisym_random.csv": ["axisym", "--seed", "0"],
    "level_sets.csv": ["levels"],
    "probe_65deg.csv": ["--degrees", "probe", "--alpha", "65"],
    "probe_margins.csv": ["probe", "--margins", "1e-2", "1e-3", "1e-4"],
}


def run(outdir: Path) -> None:
    outdir.mkdir(parents=True, exist_ok=True)
    for name, argv in RUNS.items():
        code = main([*argv, "--output", str(outdir / name)])
        if code != 0:
            raise SystemExit(f"{name}: exit code {code}")
        print(outdir / name)


if __name__ == "__main__":
    run(Path(sys.argv[1] if len(sys.argv) > 1 else "figures"))
