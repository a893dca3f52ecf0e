"""Command-line interface: ``scriptometrics {check,runtest,fit,report,parse}``.

Exit codes: 0 ok, 1 check found discrepancies, 2 I/O, load or usage
error, 3 statistical precondition violated.
"""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional

from . import __version__
from .exceptions import ScriptometricsError, StatisticalPreconditionError
from .fitting import ExpectedConvention, calibrate_convention, fit_hyper_poisson, fit_poisson
from .frequency import histogram, run_test
from .model import component_count, connection_count, get_weight_scheme
from .notation import Context, bundled_path, dataset_consistency_report, format_expression, load_dataset, parse_expression
from .report import (
    DEFAULT_PRECISION,
    build_report,
    complexity_values,
    render_calibration,
    render_discrepancies,
    render_fit,
    render_runtest,
    write_report,
)

EXIT_OK, EXIT_CHECK_FAILED, EXIT_IO, EXIT_STATS = 0, 1, 2, 3


def _load(path):
    return load_dataset(path if path else bundled_path("vai_table1.tsv"), name=None if path else "vai")


def _add_dataset(p):
    p.add_argument("dataset", nargs="?", help="decomposition TSV (default: bundled Vai table)")


def _add_weights(p):
    p.add_argument("--weights", default="default", choices=["default", "altmann2004"])


def _add_precision(p):
    p.add_argument("--precision", type=int, default=DEFAULT_PRECISION, help="decimal places printed")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="scriptometrics", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="list rows whose stated complexity disagrees with the computed one")
    _add_dataset(p)
    _add_weights(p)

    p = sub.add_parser("runtest", help="runs test for uniformity of the complexity distribution")
    _add_dataset(p)
    _add_weights(p)
    p.add_argument("--column", choices=["stated", "computed"], default="stated")
    p.add_argument("--tie-policy", choices=["error", "exclude"], default="error",
                   help="'exclude' drops classes whose count equals E (extension)")
    _add_precision(p)

    p = sub.add_parser("fit", help="fit a count model to component or connection numbers")
    _add_dataset(p)
    p.add_argument("--model", choices=["poisson", "hyper-poisson"], required=True)
    p.add_argument("--target", choices=["components", "connections"], required=True)
    p.add_argument("--shift", default=None, help="'auto' or a non-negative integer (Poisson only)")
    p.add_argument("--convention", default="auto", choices=["auto"] + [c.value for c in ExpectedConvention])
    _add_precision(p)

    p = sub.add_parser("report", help="write text/TSV/SVG renditions of the whole analysis")
    _add_dataset(p)
    _add_weights(p)
    p.add_argument("--column", choices=["stated", "computed"], default="stated")
    p.add_argument("--format", dest="formats", action="append", choices=["text", "tsv", "svg"],
                   help="repeatable; default writes all three")
    p.add_argument("--out", default="", help="output directory (default ./report)")
    p.add_argument("--tie-policy", choices=["error", "exclude"], default="error")
    p.add_argument("--convention", default="auto", choices=["auto"] + [c.value for c in ExpectedConvention])
    _add_precision(p)

    p = sub.add_parser("parse", help="parse one decomposition expression")
    p.add_argument("expression")
    p.add_argument("--context", choices=[c.value for c in Context], default="components")
    return parser


def cmd_check(args, out) -> int:
    dataset = _load(args.dataset)
    reports = dataset_consistency_report(dataset, get_weight_scheme(args.weights))
    out.write(render_discrepancies(reports))
    return EXIT_CHECK_FAILED if reports else EXIT_OK


def cmd_runtest(args, out) -> int:
    dataset = _load(args.dataset)
    table = histogram(complexity_values(dataset, args.column, args.weights))
    out.write(render_runtest(run_test(table, tie_policy=args.tie_policy), args.precision))
    return EXIT_OK


def cmd_fit(args, out, parser) -> int:
    if args.model == "hyper-poisson" and args.shift is not None:
        parser.error("--shift applies to the Poisson model only")
    shift = args.shift or "auto"
    if shift != "auto":
        try:
            shift = int(shift)
        except ValueError:
            parser.error(f"--shift must be 'auto' or an integer, got {shift!r}")
    dataset = _load(args.dataset)
    comps = histogram(component_count(r) for r in dataset)
    conns = histogram(connection_count(r) for r in dataset)
    table = comps if args.target == "components" else conns

    if args.convention == "auto":
        cal = calibrate_convention(comps, conns)
        out.write(render_calibration(cal, args.precision))
        convention = cal.selected
    else:
        convention = ExpectedConvention(args.convention)
    if args.model == "poisson":
        fit = fit_poisson(table, shift=shift, convention=convention)
    else:
        fit = fit_hyper_poisson(table, convention=convention)
    out.write(f"target: {args.target}\n")
    out.write(render_fit(fit, args.precision))
    return EXIT_OK


def cmd_report(args, out) -> int:
    dataset = _load(args.dataset)
    bundle = build_report(dataset, column=args.column, weights=args.weights,
                          tie_policy=args.tie_policy, convention=args.convention)
    paths = write_report(bundle, args.out or "report", args.formats or ("text", "tsv", "svg"), args.precision)
    for path in paths:
        out.write(f"{path}\n")
    return EXIT_OK


def cmd_parse(args, out) -> int:
    counts = parse_expression(args.expression, args.context)
    for kind, n in counts.items():
        out.write(f"{kind.value}\t{n}\n")
    out.write(f"canonical\t{format_expression(counts, args.context)}\n")
    return EXIT_OK


def main(argv: Optional[List[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "check":
            return cmd_check(args, out)
        if args.command == "runtest":
            return cmd_runtest(args, out)
        if args.command == "fit":
            return cmd_fit(args, out, parser)
        if args.command == "report":
            return cmd_report(args, out)
        return cmd_parse(args, out)
    except StatisticalPreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_STATS
    except (OSError, ScriptometricsError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
