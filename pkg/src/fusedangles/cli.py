"""Command-line front end.

Subcommands::

    convert     one-shot conversion, printed to stdout
    tilt-sweep  fused/Euler parameters over a polar grid of tilt rotations
    axisym      parameters of Rz(-beta) R0 Rz(beta) over a beta grid
    levels      curves of constant tilt angle in sine-ratio coordinates
    probe       finite-difference sensitivity of Euler vs fused parameters

Exit codes: 0 ok, 2 usage or domain error, 3 singular input, 4 I/O error.
Relative ``--output`` paths are resolved against $FUSEDANGLES_OUTPUT_DIR
when that variable is set.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import analysis
from .convert import convert
from .core import (
    HALF_PI,
    PI,
    REPRESENTATIONS,
    FusedAngles,
    RotationDomainError,
    RotationMatrix,
    TiltAngles,
    validate,
)
from .oracle import RandomRotationStream

EXIT_OK, EXIT_USAGE, EXIT_SINGULAR, EXIT_IO = 0, 2, 3, 4
OUTPUT_DIR_ENV = "FUSEDANGLES_OUTPUT_DIR"

# number of values per representation and which of them are angles
_ARITY = {
    "quat": (4, ()),
    "rotmat": (9, ()),
    "euler-zyx": (3, (0, 1, 2)),
    "euler-zxy": (3, (0, 1, 2)),
    "tilt": (3, (0, 1, 2)),
    "fused": (4, (0, 1, 2)),
}

TILT_SWEEP_COLUMNS = [
    "x", "y", "gamma", "alpha",
    "fused_psi", "fused_theta", "fused_phi", "fused_h",
    "euler_psi", "euler_theta", "euler_phi",
]  # fmt: skip
AXISYM_COLUMNS = [
    "beta", "fused_psi", "sin_fused_phi", "sin_fused_theta", "gamma", "alpha", "h",
    "euler_psi", "sin_euler_phi", "sin_euler_theta",
]  # fmt: skip
LEVELS_COLUMNS = ["alpha", "gamma", "sin_phi", "sin_theta", "repr"]
PROBE_COLUMNS = [
    "alpha", "gamma_center", "margin",
    "slope_euler_psi", "slope_euler_phi", "slope_fused_theta", "slope_fused_phi",
]  # fmt: skip


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_USAGE):
        super().__init__(message)
        self.code = code


@dataclass
class RunConfig:
    command: str
    degrees: bool = False
    fmt: str = "csv"
    output: str | None = None
    seed: int = 0
    options: dict = field(default_factory=dict)

    @classmethod
    def from_args(cls, ns: argparse.Namespace) -> "RunConfig":
        common = {"command", "degrees", "format", "output", "seed", "func"}
        opts = {k: v for k, v in vars(ns).items() if k not in common}
        return cls(ns.command, ns.degrees, getattr(ns, "format", "csv"), getattr(ns, "output", None), getattr(ns, "seed", 0), opts)

    def angle(self, v: float) -> float:
        return math.radians(v) if self.degrees else v

    def angle_or(self, v, default: float) -> float:
        """Angle input, or ``default`` (already in radians) when not given."""
        return default if v is None else self.angle(v)


# ---------------------------------------------------------------------------
# Formatting


def fmt_number(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    s = f"{float(v):.12g}"
    return "0" if s == "-0" else s


def _values(r) -> list:
    if isinstance(r, RotationMatrix):
        return [float(x) for x in np.asarray(r.r).ravel()]
    return list(r.params)


def _json_value(s: str):
    try:
        return int(s)
    except ValueError:
        pass
    try:
        return float(s)
    except ValueError:
        return s


def render(rows: list, columns: list, fmt: str) -> str:
    cells = [[v if isinstance(v, str) else fmt_number(v) for v in row] for row in rows]
    if fmt == "json":
        objs = [dict(zip(columns, (_json_value(c) for c in row))) for row in cells]
        return json.dumps(objs, indent=1) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    w.writerows(cells)
    return buf.getvalue()


def _output_path(path: str) -> Path:
    p = Path(path)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not p.is_absolute():
        p = Path(base) / p
    return p


def emit(text: str, cfg: RunConfig) -> None:
    if cfg.output in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        with open(_output_path(cfg.output), "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(f"cannot write {cfg.output}: {exc.strerror or exc}", EXIT_IO) from None


# ---------------------------------------------------------------------------
# Parsing rotation values


def parse_rotation(kind: str, raw: list, cfg: RunConfig):
    try:
        cls = REPRESENTATIONS[kind]
    except KeyError:
        raise CliError(f"unknown representation {kind!r}; choose from {', '.join(REPRESENTATIONS)}") from None
    n, angles = _ARITY[kind]
    if len(raw) != n:
        raise CliError(f"{kind} takes {n} values, got {len(raw)}")
    try:
        vals = [float(v) for v in raw]
    except ValueError as exc:
        raise CliError(f"cannot parse value: {exc}") from None
    vals = [cfg.angle(v) if i in angles else v for i, v in enumerate(vals)]
    if cls is FusedAngles:
        if vals[3] not in (1.0, -1.0):
            raise CliError("fused hemisphere h must be 1 or -1")
        vals[3] = int(vals[3])
    try:
        if cls is RotationMatrix:
            r = RotationMatrix(np.array(vals).reshape(3, 3))
        else:
            r = cls(*vals)
    except (ValueError, ArithmeticError) as exc:
        raise CliError(str(exc)) from None
    report = validate(r)
    if not report.ok:
        raise CliError(f"invalid {kind}:\n{report}")
    return r


def _singular(r) -> bool:
    return bool(getattr(r, "singular", False))


def _singular_warning(r) -> str:
    if isinstance(r, (FusedAngles, TiltAngles)):
        return "warning: singular: tilt angle is pi, fused yaw is undefined and reported as 0"
    return "warning: singular: gimbal lock, Euler yaw and roll are not unique"


# ---------------------------------------------------------------------------
# Commands


def cmd_convert(cfg: RunConfig) -> int:
    r = parse_rotation(cfg.options["from_"], cfg.options["values"], cfg)
    try:
        out = convert(r, cfg.options["to"])
    except RotationDomainError as exc:
        raise CliError(str(exc)) from None
    except ValueError as exc:
        raise CliError(str(exc)) from None
    print(" ".join(fmt_number(v) for v in _values(out)))
    if _singular(out):
        print(_singular_warning(out), file=sys.stderr)
        return EXIT_SINGULAR
    return EXIT_OK


def tilt_sweep_rows(alpha_max: float, n_radial: int, n_angular: int) -> list:
    g, a, f, e = analysis.tilt_sweep_arrays(alpha_max, n_radial, n_angular)
    cols = [a * np.cos(g), a * np.sin(g), g, a, f.psi, f.theta, f.phi, f.h, e.psi_e, e.theta_e, e.phi_e]
    cols = [np.broadcast_to(c, g.shape) for c in cols]
    return [list(row) for row in zip(*cols)]


def cmd_tilt_sweep(cfg: RunConfig) -> int:
    o = cfg.options
    try:
        rows = tilt_sweep_rows(cfg.angle_or(o["alpha_max"], 0.95 * PI), o["n_radial"], o["n_angular"])
    except ValueError as exc:
        raise CliError(str(exc)) from None
    emit(render(rows, TILT_SWEEP_COLUMNS, cfg.fmt), cfg)
    return EXIT_OK


def axisym_rows(base, n_beta: int) -> list:
    scan = analysis.axisym_arrays(base, n_beta)
    fs, es = scan.fused_sines, scan.euler_sines
    f, t, e = scan.fused, scan.tilt, scan.euler
    cols = [scan.betas, f.psi, fs[:, 0], fs[:, 1], t.gamma, t.alpha, f.h, e.psi_e, es[:, 0], es[:, 1]]
    cols = [np.broadcast_to(c, scan.betas.shape) for c in cols]
    return [list(row) for row in zip(*cols)]


def cmd_axisym(cfg: RunConfig) -> int:
    o = cfg.options
    if o["base"]:
        base = parse_rotation(o["base"][0], o["base"][1:], cfg)
    else:
        base = RandomRotationStream(cfg.seed).quaternions(1, PI - 1e-3)
    try:
        rows = axisym_rows(base, o["n_beta"])
    except RotationDomainError as exc:
        raise CliError(str(exc)) from None
    except ValueError as exc:
        code = EXIT_SINGULAR if "singular" in str(exc) else EXIT_USAGE
        raise CliError(str(exc), code) from None
    emit(render(rows, AXISYM_COLUMNS, cfg.fmt), cfg)
    return EXIT_OK


def levels_rows(representation: str, alphas, n_gamma: int) -> list:
    rows = []
    for c in analysis.level_sets(representation, alphas, n_gamma):
        for g, (sp, st) in zip(c.gammas, c.points):
            rows.append([c.alpha, g, sp, st, representation])
    return rows


def cmd_levels(cfg: RunConfig) -> int:
    o = cfg.options
    alphas = [cfg.angle(a) for a in o["alphas"]] if o["alphas"] else [k * PI / 12 for k in range(1, 6)]
    reps = ["fused", "euler"] if o["repr"] == "both" else [o["repr"]]
    try:
        rows = [row for rep in reps for row in levels_rows(rep, alphas, o["n_gamma"])]
    except ValueError as exc:
        raise CliError(str(exc)) from None
    emit(render(rows, LEVELS_COLUMNS, cfg.fmt), cfg)
    return EXIT_OK


def _probe_row(p: analysis.ProbeResult) -> list:
    return [p.alpha, p.gamma_center, p.margin, p.slope_euler_psi, p.slope_euler_phi, p.slope_fused_theta, p.slope_fused_phi]


def cmd_probe(cfg: RunConfig) -> int:
    o = cfg.options
    gc = cfg.angle_or(o["gamma_center"], HALF_PI)
    delta = None if o["delta"] is None else cfg.angle(o["delta"])
    try:
        if o["margins"]:
            margins = [cfg.angle(m) for m in o["margins"]]
            if any(m <= 0 for m in margins):
                raise ValueError("margins must be > 0")
            probes = []
            for m in margins:
                d = delta if delta is not None else min(0.01, m / 10)
                probes.append(analysis.euler_sensitivity_probe(analysis.alpha_for_margin(m, gc), gc, d))
        else:
            alphas = [cfg.angle(a) for a in (o["alpha"] or [math.radians(65.0)])]
            probes = [analysis.euler_sensitivity_probe(a, gc, 0.01 if delta is None else delta) for a in alphas]
    except ValueError as exc:
        raise CliError(str(exc)) from None
    emit(render([_probe_row(p) for p in probes], PROBE_COLUMNS, cfg.fmt), cfg)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise CliError(f"{self.prog}: error: {message}")


def _add_output(p):
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("-o", "--output", help="output file (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fusedangles", description="Fused angles and rotation conversions.")
    parser.add_argument("--degrees", action="store_true", help="read angle inputs in degrees")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    names = ", ".join(REPRESENTATIONS)

    p = sub.add_parser("convert", help="convert one rotation")
    p.add_argument("--from", dest="from_", required=True, metavar="REPR", help=names)
    p.add_argument("values", nargs="+", type=str)
    p.add_argument("--to", required=True, metavar="REPR", choices=list(REPRESENTATIONS))
    p.add_argument("--degrees", action="store_true", default=argparse.SUPPRESS)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("tilt-sweep", help="polar grid of pure tilt rotations")
    p.add_argument("--alpha-max", type=float, default=None, help="default 0.95 pi")
    p.add_argument("--n-radial", type=int, default=96)
    p.add_argument("--n-angular", type=int, default=256)
    _add_output(p)
    p.add_argument("--degrees", action="store_true", default=argparse.SUPPRESS)
    p.set_defaults(func=cmd_tilt_sweep)

    p = sub.add_parser("axisym", help="conjugate a base rotation by z-rotations")
    p.add_argument("--base", nargs="+", metavar="REPR V", help="base rotation; random from --seed if omitted")
    p.add_argument("--n-beta", type=int, default=360)
    p.add_argument("--seed", type=int, default=0)
    _add_output(p)
    p.add_argument("--degrees", action="store_true", default=argparse.SUPPRESS)
    p.set_defaults(func=cmd_axisym)

    p = sub.add_parser("levels", help="curves of constant tilt angle")
    p.add_argument("--repr", choices=("fused", "euler", "both"), default="both")
    p.add_argument("--alphas", type=float, nargs="+", default=None, help="default pi/12, pi/6, ..., 5 pi/12")
    p.add_argument("--n-gamma", type=int, default=360)
    _add_output(p)
    p.add_argument("--degrees", action="store_true", default=argparse.SUPPRESS)
    p.set_defaults(func=cmd_levels)

    p = sub.add_parser("probe", help="Euler vs fused sensitivity to the tilt axis angle")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--alpha", type=float, nargs="+", help="tilt angles to probe (default 65 degrees)")
    g.add_argument("--margins", type=float, nargs="+", help="distances from gimbal lock to probe")
    p.add_argument("--gamma-center", type=float, default=None, help="default pi/2")
    p.add_argument("--delta", type=float, default=None, help="stencil half-width (default min(0.01, margin/10))")
    _add_output(p)
    p.add_argument("--degrees", action="store_true", default=argparse.SUPPRESS)
    p.set_defaults(func=cmd_probe)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        return ns.func(RunConfig.from_args(ns))
    except CliError as exc:
        print(str(exc), file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
