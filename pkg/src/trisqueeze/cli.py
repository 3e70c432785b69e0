"""Command-line driver.

Exit codes: 0 success, 1 usage error, 2 verification failure (including a
closed-form mismatch during a scan), 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .classify import DEFAULT_EPSILON
from .linalg import ContractError
from .scan import (
    FIELDS,
    ClosedFormMismatch,
    TABLE_COLUMNS,
    ScanIOError,
    find_extremum,
    run_scan,
    squeeze_threshold,
    table_one,
)
from .states import AmplitudeMode, Family, Measure, SamplerConfig

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on bad usage; this tool reserves 2 for failed verification."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _family(text):
    try:
        return Family.parse(text)
    except (ValueError, KeyError):
        raise argparse.ArgumentTypeError(f"unknown family {text!r}") from None


def _positive_int(text):
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _pin(text):
    ket, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError("expected KET=PROBABILITY, e.g. 000=0")
    return ket.strip(), float(value)


def _override(text):
    number, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError("expected CRITERION=TOLERANCE, e.g. 1=-1")
    return int(number), float(value)


def _add_globals(p, suppress):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--seed", type=int, default=d(SamplerConfig.seed), help="sampler seed")
    p.add_argument("--count", type=_positive_int, default=d(None), help="samples per family (default: per-family)")
    p.add_argument(
        "--measure", choices=[m.value for m in Measure], default=d(Measure.SPHERE_UNIFORM.value)
    )
    p.add_argument(
        "--amplitude-mode", choices=[m.value for m in AmplitudeMode], default=d(AmplitudeMode.REAL_NONNEGATIVE.value)
    )
    p.add_argument("--out", default=d(None), help="output file or directory")
    p.add_argument("--epsilon", type=float, default=d(DEFAULT_EPSILON), help="negativity / squeezing margin")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="trisqueeze", description="Negativity and principal squeeze variance of three-qubit states.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _add_globals(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _add_globals(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("scan", parents=[common], help="sample a family and write one CSV row per state")
    p.add_argument("--family", type=_family, required=True)
    p.add_argument("--pivot", choices="ijk", default="i")
    p.add_argument("--workers", type=_positive_int, default=1)

    from .figures import FIGURE_IDS

    p = sub.add_parser("figure", parents=[common], help="scatter and boundary-curve data for one figure panel")
    p.add_argument("figure_id", choices=FIGURE_IDS, metavar="FIGURE", help=", ".join(FIGURE_IDS))
    p.add_argument("--points", type=_positive_int, default=1000, help="grid points per boundary curve")

    p = sub.add_parser("extremum", parents=[common], help="grid search plus refinement over a family")
    p.add_argument("--family", type=_family, required=True)
    p.add_argument("--objective", choices=FIELDS, required=True)
    p.add_argument("--pin", type=_pin, action="append", default=[], metavar="KET=P", help="fix a ket probability")
    p.add_argument("--resolution", type=_positive_int, default=201)
    p.add_argument("--maximize", action="store_true")
    p.add_argument("--pivot", choices="ijk", default="i")

    p = sub.add_parser("threshold", parents=[common], help="largest N_ijk among three-mode squeezed states")
    p.add_argument("--family", type=_family, required=True)

    sub.add_parser("table1", parents=[common], help="yes/no witness matrix for the studied families")

    p = sub.add_parser("verify", parents=[common], help="run the acceptance suite")
    p.add_argument("--only", type=lambda s: [int(x) for x in s.split(",")], default=None, help="e.g. 1,2,12")
    p.add_argument(
        "--tolerance-override",
        type=_override,
        action="append",
        default=[],
        metavar="N=TOL",
        help="replace the tolerances of criterion N (for exercising the failure path)",
    )
    return parser


def _config(args) -> SamplerConfig:
    return SamplerConfig(
        seed=args.seed,
        count=args.count,
        amplitude_mode=AmplitudeMode(args.amplitude_mode),
        measure=Measure(args.measure),
    )


def _emit(payload, out):
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out:
        try:
            os.makedirs(os.path.dirname(os.path.abspath(out)), exist_ok=True)
            with open(out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise ScanIOError(f"cannot write {out}: {exc.strerror or exc}") from exc
    sys.stdout.write(text)


def cmd_scan(args, cfg):
    out = args.out or f"scan_{args.family.value}.csv"
    summary = run_scan(args.family, cfg, out, args.pivot, args.epsilon, args.workers)
    _emit(summary, None)
    return EXIT_OK


def cmd_figure(args, cfg):
    from .figures import figure_dataset

    out = args.out or os.path.join("figures", args.figure_id)
    for path in figure_dataset(args.figure_id, cfg, out, args.epsilon, args.points):
        print(path)
    return EXIT_OK


def cmd_extremum(args, cfg):
    result = find_extremum(
        args.family, args.objective, dict(args.pin), args.resolution, args.maximize, args.pivot
    )
    _emit(
        {
            "family": result.family.value,
            "objective": result.objective,
            "maximize": result.maximize,
            "value": result.value,
            "constraint": result.constraint,
            "arg": json.loads(result.arg.dumps()),
            "probabilities": result.probabilities(),
            "fields": result.fields(),
        },
        args.out,
    )
    return EXIT_OK


def cmd_threshold(args, cfg):
    result = squeeze_threshold(args.family, cfg, epsilon=args.epsilon)
    _emit(
        {
            "family": result.family.value,
            "threshold": result.value,
            "found": result.found,
            "witness": json.loads(result.witness.dumps()) if result.witness else None,
            "seed": cfg.seed,
        },
        args.out,
    )
    return EXIT_OK


def cmd_table1(args, cfg):
    table = table_one(cfg, args.epsilon)
    sys.stdout.write(table.format() + "\n")
    mismatches = table.mismatches()
    if args.out:
        payload = {
            "seed": cfg.seed,
            "matrix": {row: dict(zip([f.value for f in TABLE_COLUMNS], cells)) for row, cells in table.matrix().items()},
            "mismatches": [list(m) for m in mismatches],
        }
        _emit(payload, args.out)
    if mismatches:
        print(f"{len(mismatches)} cell(s) differ from the reference matrix", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def cmd_verify(args, cfg):
    from .acceptance import CRITERIA, run_acceptance

    overrides = dict(args.tolerance_override)
    for n in list(overrides) + list(args.only or []):
        if not 1 <= n <= len(CRITERIA):
            raise UsageError(f"no criterion {n}")
    report = run_acceptance(cfg, args.epsilon, overrides, args.only, progress=lambda r: print(r.line(), flush=True))
    report.write(args.out or "verify")
    n = sum(r.passed for r in report.results)
    print(f"{n}/{len(report.results)} criteria passed")
    return EXIT_OK if report.passed else EXIT_VERIFY


COMMANDS = {
    "scan": cmd_scan,
    "figure": cmd_figure,
    "extremum": cmd_extremum,
    "threshold": cmd_threshold,
    "table1": cmd_table1,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.epsilon <= 0:
            raise UsageError("--epsilon must be positive")
        return COMMANDS[args.command](args, _config(args))
    except (UsageError, ContractError) as exc:
        print(f"trisqueeze: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ClosedFormMismatch as exc:
        print(f"trisqueeze: verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (ScanIOError, OSError) as exc:
        print(f"trisqueeze: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
