"""Command-line front end: ``compute``, ``sweep`` and ``verify``.

Exit codes: 0 success, 1 invalid arguments, 2 internal-consistency or
verification failure. Data goes to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from typing import Sequence

from . import verification
from .bounds import BoundReport, evaluate, r0_grid
from .errors import ConsistencyError, PreconditionError
from .horizon import RINDLER_MAX_R0, HorizonParams, RindlerRangeWarning

CSV_COLUMNS = [
    "state", "omega", "r0", "q_d", "lhs", "u1", "u2", "delta1", "delta2", "h_a",
    "mutual_info", "holevo_m1", "holevo_m2", "h_m1", "h_m2", "c1",
]

EXIT_OK, EXIT_INVALID, EXIT_INTERNAL = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_INVALID)


def _fmt(x: float) -> str:
    return format(float(x), ".12g")


def csv_row(rep: BoundReport) -> list[str]:
    values = {
        "state": rep.state_label,
        "omega": _fmt(rep.params.omega_ratio),
        "r0": _fmt(rep.params.r_ratio),
        "q_d": _fmt(rep.q_d),
    }
    for name in CSV_COLUMNS[4:]:
        values[name] = _fmt(getattr(rep, name))
    return [values[c] for c in CSV_COLUMNS]


def write_csv(reports: Sequence[BoundReport], out) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for rep in reports:
        writer.writerow(csv_row(rep))


def _parse_bases(text: str) -> tuple[str, str]:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2 or any(p not in ("x", "y", "z") for p in parts):
        raise argparse.ArgumentTypeError("bases must be two labels from x,y,z, e.g. 'x,y'")
    return parts[0], parts[1]


def _evaluate_quiet(point: tuple[float, float], state: str, bases) -> BoundReport:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RindlerRangeWarning)
        return evaluate(state, HorizonParams(*point), bases)


def _rindler_warning(r0_max: float) -> None:
    print(f"warning: R0 = {r0_max:g} exceeds {RINDLER_MAX_R0}; "
          "the near-horizon approximation may not hold", file=sys.stderr)


def _physical_omega(args) -> float | None:
    given = [args.mass is not None, args.frequency is not None]
    if any(given) and not all(given):
        raise UsageError("--mass and --frequency must be given together")
    if all(given):
        if args.mass <= 0 or args.frequency <= 0:
            raise UsageError("mass and frequency must be positive")
        return 8 * math.pi * args.frequency * args.mass
    return None


def cmd_compute(args) -> int:
    omega = _physical_omega(args)
    if omega is not None:
        if args.radius is None:
            raise UsageError("--radius is required with --mass/--frequency")
        if args.radius <= 0:
            raise UsageError("radius must be positive")
        omega, r0 = omega, args.radius / (2 * args.mass)
    else:
        if args.omega is None or args.r0 is None:
            raise UsageError("give --omega and --r0, or --mass, --frequency and --radius")
        omega, r0 = args.omega, args.r0
    if not r0 >= 1:
        raise UsageError("R0 must be >= 1")
    if not omega > 0:
        raise UsageError("Omega must be > 0")
    if r0 > RINDLER_MAX_R0:
        _rindler_warning(r0)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RindlerRangeWarning)
        if args.mass is not None:
            params = HorizonParams.from_physical(args.mass, args.frequency, args.radius)
        else:
            params = HorizonParams(omega, r0)
        rep = evaluate(args.state, params, args.bases)
    json.dump(rep.as_dict(), sys.stdout, indent=2)
    sys.stdout.write("\n")
    return EXIT_OK


def cmd_sweep(args) -> int:
    omega = _physical_omega(args)
    omegas = [omega] if omega is not None else list(args.omega)
    if not omegas or any(not om > 0 for om in omegas):
        raise UsageError("Omega values must be > 0")
    if args.steps < 1:
        raise UsageError("steps must be >= 1")
    if not args.r0_min >= 1:
        raise UsageError("R0 must be >= 1")
    if args.r0_min > args.r0_max:
        raise UsageError("r0-min must not exceed r0-max")

    r0s = r0_grid(args.r0_min, args.r0_max, args.steps)
    if r0s.max() > RINDLER_MAX_R0:
        _rindler_warning(float(r0s.max()))

    points = [(float(om), float(r0)) for om in sorted(omegas) for r0 in r0s]
    work = partial(_evaluate_quiet, state=args.state, bases=args.bases)
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            reports = list(pool.map(work, points))
    else:
        reports = [work(p) for p in points]

    if args.format == "json":
        json.dump([r.as_dict() for r in reports], sys.stdout, indent=2)
        sys.stdout.write("\n")
    else:
        write_csv(reports, sys.stdout)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.replay:
        with open(args.replay) as fh:
            case = json.load(fh)
        ok, error = verification.replay(case, args.tolerance if args.tolerance_given else None)
        print(f"replay {case['suite']} case {case['case']}: {'PASS' if ok else 'FAIL'}")
        if error:
            print(error, file=sys.stderr)
        return EXIT_OK if ok else EXIT_INTERNAL

    if args.trials < 1:
        raise UsageError("trials must be >= 1")
    outcome = verification.run_suites(args.seed, args.trials, args.tolerance, args.inject_fault)
    sys.stdout.write(verification.format_outcome(outcome))
    if outcome.ok:
        return EXIT_OK
    for r in outcome.results:
        if r.counterexample is not None:
            text = json.dumps(r.counterexample)
            print(f"counterexample: {text}", file=sys.stderr)
            if args.counterexample_dir:
                path = f"{args.counterexample_dir}/{r.name}.json"
                with open(path, "w") as fh:
                    fh.write(text + "\n")
    return EXIT_INTERNAL


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="horizon-eur", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_common(p):
        p.add_argument("--state", choices=["bell", "w"], default="bell")
        p.add_argument("--bases", type=_parse_bases, default=("x", "y"),
                       help="measurement pair as two of x,y,z (default x,y)")
        p.add_argument("--mass", type=float, help="black-hole mass M (geometric units)")
        p.add_argument("--frequency", type=float, help="mode frequency measured by the static observer")

    p = sub.add_parser("compute", help="all quantities at one (Omega, R0) point, as JSON")
    add_common(p)
    p.add_argument("--omega", type=float, help="Omega = omega / T_H")
    p.add_argument("--r0", type=float, help="R0 = r0 / 2M")
    p.add_argument("--radius", type=float, help="observer radius r0 (with --mass, --frequency)")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("sweep", help="table over an (Omega, R0) grid")
    add_common(p)
    p.add_argument("--omega", type=float, nargs="+", default=[10.0, 30.0])
    p.add_argument("--r0-min", type=float, default=1.001)
    p.add_argument("--r0-max", type=float, default=1.05)
    p.add_argument("--steps", type=int, default=50)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--jobs", type=int, default=1, help="worker processes (row order is unaffected)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run the invariant suites")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--tolerance", type=float, default=None)
    p.add_argument("--inject-fault", action="store_true",
                   help="add a non-positive 'state' to exercise the failure path")
    p.add_argument("--replay", metavar="FILE", help="re-run one serialized counterexample")
    p.add_argument("--counterexample-dir", metavar="DIR",
                   help="also write failing cases to DIR/<suite>.json")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "verify":
        args.tolerance_given = args.tolerance is not None
        if args.tolerance is None:
            args.tolerance = 1e-9
    try:
        return args.func(args)
    except (UsageError, PreconditionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ConsistencyError as exc:
        print(f"internal consistency error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
