"""Command-line entry point: deterministic, machine-readable outputs.

Subcommands map one-to-one onto the library layers:

    spectrum  --b --d --a --n-max        eigenvalue table, both parities
    instants  --b --d --m-max [--with-heun]   degeneracy instants (+crosscheck)
    branch    --b --d --m --a-max        branch dump plus an asymptotics row
    census    --b --d --a                solution census at fixed elongation
    strip     --b --d                    limit-strip period table

Every command writes CSV (and JSON where noted) under --out and prints the
file paths; reruns are byte-identical.  Failures exit nonzero with the
originating error text on stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import branches as br
from . import heun
from . import shooter as sh
from . import strip as stmod
from . import sturm_liouville as slmod
from .geometry import Semiaxes, planar_sphere_area_crosscheck


def _fmt(x) -> str:
    import numpy as _np

    if isinstance(x, (float, _np.floating)):
        return repr(float(x))
    return str(x)


def _write(path: Path, text: str, quiet: bool = False):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    if not quiet:
        print(path)


def _csv(rows, header) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def cmd_spectrum(args) -> int:
    rows = slmod.spectrum_rows(args.b, args.d, args.a, args.n_max)
    out = Path(args.out) / "spectrum.csv"
    _write(out, _csv(rows, ["parity", "n", "a", "lambda", "zero_count"]))
    ax = Semiaxes(args.a, args.b, args.d)
    neg = {p: slmod.count_negative(ax, p) for p in ("even", "odd")}
    _write(Path(args.out) / "spectrum_negative_counts.json",
           json.dumps(neg, indent=2, sort_keys=True) + "\n")
    return 0


def cmd_instants(args) -> int:
    inst = slmod.instants(args.b, args.d, args.m_max)
    rows = [(i.m, i.parity, i.n, i.a) for i in inst]
    _write(Path(args.out) / "instants.csv", _csv(rows, ["m", "parity", "n", "a_m"]))
    # conjecture-proximity diagnostic for the round cross-section case
    if abs(args.b - 1.0) < 1e-12 and abs(args.d - 1.0) < 1e-12:
        diag = {f"a_{i.m}": i.a for i in inst}
        diag["max_abs_a_m_minus_m"] = max(abs(i.a - i.m) for i in inst)
        _write(Path(args.out) / "instants_integer_proximity.json",
               json.dumps(diag, indent=2, sort_keys=True) + "\n")
    if args.with_heun:
        report = heun.crosscheck(args.b, args.d, args.m_max, sl_instants=inst)
        _write(Path(args.out) / "heun_crosscheck.json",
               json.dumps(report, indent=2, sort_keys=True) + "\n")
    return 0


def cmd_branch(args) -> int:
    cfg = sh.ShooterConfig(s_margin=args.s_margin, r_min=args.r_min,
                           rk_rel_tol=args.tol if args.tol else 1e-11)
    branch = br.trace(args.b, args.d, args.m, args.a_max, cfg=cfg,
                      decorate=True)
    rows = [(branch.m, branch.parity, p.a, p.s, p.z_count, p.area, p.residual,
             p.turn_count) for p in branch.points]
    _write(Path(args.out) / f"branch_m{args.m}.csv",
           _csv(rows, ["m", "parity", "a", "s", "z_count", "area",
                       "residual", "turn_count"]))
    diag = br.asymptotics(branch, min(args.a_max, branch.points[-1].a), cfg)
    _write(Path(args.out) / f"branch_m{args.m}_asymptotics.json",
           json.dumps(diag, indent=2, sort_keys=True) + "\n")
    return 0


def cmd_census(args) -> int:
    report = br.census(args.b, args.d, args.a, jobs=max(1, args.jobs))
    _write(Path(args.out) / "census.json",
           json.dumps(report, indent=2, sort_keys=True) + "\n")
    return 0


def cmd_strip(args) -> int:
    rows = stmod.period_table(args.b, args.d)
    _write(Path(args.out) / "strip_periods.csv",
           _csv(rows, ["c_over_max", "w", "Delta"]))
    # known-discrepancy ledger: two candidate constants for the planar
    # vertical sphere area; downstream ratios use the Pappus value
    _write(Path(args.out) / "area_constants.json",
           json.dumps(planar_sphere_area_crosscheck(args.b, args.d),
                      indent=2, sort_keys=True) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="ellipsoid-spheres",
        description="Minimal 2-spheres of revolution in elongated ellipsoids: "
                    "spectra, bifurcation instants, branches, and the "
                    "infinite-elongation limit.")
    ap.add_argument("--out", default="out", help="output directory")
    ap.add_argument("--jobs", type=int, default=1,
                    help="worker cap for embarrassingly parallel sweeps")
    ap.add_argument("--format", choices=("csv", "json"), default="csv",
                    help="kept for interface stability; commands emit both")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, need_a=False):
        p.add_argument("--b", type=float, required=True)
        p.add_argument("--d", type=float, required=True)
        if need_a:
            p.add_argument("--a", type=float, required=True)

    p = sub.add_parser("spectrum", help="eigenvalue table at fixed semiaxes")
    common(p, need_a=True)
    p.add_argument("--n-max", type=int, default=3)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("instants", help="degeneracy instants a_1..a_m")
    common(p)
    p.add_argument("--m-max", type=int, default=4)
    p.add_argument("--with-heun", action="store_true",
                   help="append the continued-fraction crosscheck")
    p.set_defaults(func=cmd_instants)

    p = sub.add_parser("branch", help="trace one bifurcation branch")
    common(p)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--a-max", type=float, required=True)
    p.add_argument("--tol", type=float, default=None,
                   help="integrator relative tolerance override")
    p.add_argument("--s-margin", type=float, default=1e-7,
                   help="launch support margin below pi/2")
    p.add_argument("--r-min", type=float, default=1e-6,
                   help="boundary proximity cutoff")
    p.set_defaults(func=cmd_branch)

    p = sub.add_parser("census", help="count solution branches at fixed a")
    common(p, need_a=True)
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("strip", help="limit-strip period table")
    common(p)
    p.set_defaults(func=cmd_strip)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
