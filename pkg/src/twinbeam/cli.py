"""Command-line front end.

Four subcommands: ``estimate`` inverts a measurement file into source
parameters, ``scan-eps`` repeats the estimate across assumed probe
thermal fractions, ``sweep`` tabulates model curves along one axis, and
``eval`` runs a circuit file.  Outputs are deterministic: floats are
written with 9 significant digits, files are composed in memory and
written whole, and JSON documents carry ``"schema": 1``.

Exit codes: 0 success, 2 input problem, 3 infeasible estimation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

from . import circuit
from .estimate import (
    EstimateSummary,
    InsufficientDataError,
    aggregate,
    epsilon_scan,
    invert_point,
)
from .measurements import MeasurementFormatError, load_measurements
from .model import ModelParams
from .sweeps import AXES, OBSERVABLES, SweepSpec, sweep

__all__ = ["main"]

SCHEMA_VERSION = 1
_FIGURE_SUFFIXES = (".png", ".pdf", ".svg")


def _fmt(value: float) -> str:
    return format(value, ".9g")


def _round9(value: float | None) -> float | None:
    if value is None:
        return None
    return float(format(value, ".9g"))


def _csv_text(header: list[str], rows: list[list[str]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def _json_text(document: dict) -> str:
    return json.dumps(document, indent=2) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _check_figure_path(path: str | None) -> None:
    # Validated before any output is written so a bad figure target
    # cannot leave a half-finished report behind.
    if path is None:
        return
    target = Path(path)
    if target.suffix.lower() not in _FIGURE_SUFFIXES:
        raise ValueError(
            f"figure path must end in one of {', '.join(_FIGURE_SUFFIXES)}: {path}"
        )
    if not target.parent.exists():
        raise ValueError(f"figure directory does not exist: {target.parent}")


class _ReportedError(Exception):
    """Failure whose details already went to stderr."""


def _load_points(path: str):
    points, problems = load_measurements(path)
    if problems:
        for problem in problems:
            label = f" ({problem.label})" if problem.label else ""
            print(f"error: row {problem.row}{label}: {problem.message}", file=sys.stderr)
        raise _ReportedError
    if not points:
        raise MeasurementFormatError(f"{path}: no data rows")
    return points


def _summary_dict(summary: EstimateSummary) -> dict:
    return {
        "n_points": summary.n_points,
        "n_feasible": summary.n_feasible,
        "n_infeasible": summary.n_infeasible,
        "gain_mean": _round9(summary.gain_mean),
        "gain_std": _round9(summary.gain_std),
        "eta_p_mean": _round9(summary.eta_p_mean),
        "eta_p_std": _round9(summary.eta_p_std),
        "eta_c_mean": _round9(summary.eta_c_mean),
        "eta_c_std": _round9(summary.eta_c_std),
    }


def _cmd_estimate(args: argparse.Namespace) -> int:
    points = _load_points(args.input)
    results = [invert_point(p, args.eps_p, args.eps_c) for p in points]
    summary = aggregate(results)

    if args.format == "json":
        document = {
            "schema": SCHEMA_VERSION,
            "command": "estimate",
            "eps_p": _round9(args.eps_p),
            "eps_c": _round9(args.eps_c),
            "summary": _summary_dict(summary),
            "points": [
                {
                    "label": r.label,
                    "feasible": r.feasible,
                    "gain": _round9(r.gain),
                    "eta_p": _round9(r.eta_p),
                    "eta_c": _round9(r.eta_c),
                    "antisqueezed_predicted_db": _round9(r.antisqueezed_predicted_db),
                    "antisqueezed_residual_db": _round9(r.antisqueezed_residual_db),
                    "diagnostics": list(r.diagnostics),
                }
                for r in results
            ],
        }
        _emit(_json_text(document), args.out)
    else:
        header = [
            "label",
            "feasible",
            "gain",
            "eta_p",
            "eta_c",
            "antisqueezed_predicted_db",
            "antisqueezed_residual_db",
            "diagnostics",
        ]
        rows = []
        for r in results:
            if r.feasible:
                rows.append(
                    [
                        r.label,
                        "yes",
                        _fmt(r.gain),
                        _fmt(r.eta_p),
                        _fmt(r.eta_c),
                        _fmt(r.antisqueezed_predicted_db),
                        _fmt(r.antisqueezed_residual_db),
                        "",
                    ]
                )
            else:
                rows.append([r.label, "no", "", "", "", "", "", "; ".join(r.diagnostics)])
        rows.append(
            [
                "(mean)",
                "",
                _fmt(summary.gain_mean),
                _fmt(summary.eta_p_mean),
                _fmt(summary.eta_c_mean),
                "",
                "",
                f"{summary.n_feasible} feasible of {summary.n_points}",
            ]
        )
        rows.append(
            [
                "(std)",
                "",
                _fmt(summary.gain_std),
                _fmt(summary.eta_p_std),
                _fmt(summary.eta_c_std),
                "",
                "",
                "",
            ]
        )
        _emit(_csv_text(header, rows), args.out)
    return 0


def _cmd_scan_eps(args: argparse.Namespace) -> int:
    _check_figure_path(args.figure)
    points = _load_points(args.input)
    try:
        grid = [float(v) for v in args.grid.split(",") if v.strip()]
    except ValueError:
        raise ValueError(f"--grid must be a comma-separated list of numbers: {args.grid!r}")
    entries = epsilon_scan(points, grid, eps_c=args.eps_c)

    if args.format == "json":
        document = {
            "schema": SCHEMA_VERSION,
            "command": "scan-eps",
            "eps_c": _round9(args.eps_c),
            "entries": [
                {"eps_p": _round9(eps_p), **_summary_dict(summary)}
                for eps_p, summary in entries
            ],
        }
        _emit(_json_text(document), args.out)
    else:
        header = [
            "eps_p",
            "n_points",
            "n_feasible",
            "n_infeasible",
            "gain_mean",
            "gain_std",
            "eta_p_mean",
            "eta_p_std",
            "eta_c_mean",
            "eta_c_std",
        ]
        rows = [
            [
                _fmt(eps_p),
                str(s.n_points),
                str(s.n_feasible),
                str(s.n_infeasible),
                _fmt(s.gain_mean),
                _fmt(s.gain_std),
                _fmt(s.eta_p_mean),
                _fmt(s.eta_p_std),
                _fmt(s.eta_c_mean),
                _fmt(s.eta_c_std),
            ]
            for eps_p, s in entries
        ]
        _emit(_csv_text(header, rows), args.out)

    if args.figure:
        from .plots import render_scan_figure

        render_scan_figure(entries, args.figure)
    return 0


def _parse_range(text: str) -> tuple[float, float]:
    lo_text, sep, hi_text = text.partition(":")
    if not sep:
        raise ValueError(f"--range must look like lo:hi, got {text!r}")
    try:
        return float(lo_text), float(hi_text)
    except ValueError:
        raise ValueError(f"--range must look like lo:hi with numbers, got {text!r}") from None


def _cmd_sweep(args: argparse.Namespace) -> int:
    _check_figure_path(args.figure)
    lo, hi = _parse_range(args.range)
    observables = tuple(o.strip() for o in args.observables.split(",") if o.strip())
    base = ModelParams(
        gain=args.gain,
        eta_p=args.eta_p,
        eta_c=args.eta_c,
        v_p=args.v_p,
        v_c=args.v_c,
        eps_p=args.eps_p,
        eps_c=args.eps_c,
    )
    spec = SweepSpec(
        base=base,
        axis=args.axis,
        lo=lo,
        hi=hi,
        n_points=args.points,
        observables=observables,
        output_units=args.units,
    )
    result = sweep(spec)

    if args.format == "json":
        document = {
            "schema": SCHEMA_VERSION,
            "command": "sweep",
            "axis": spec.axis,
            "base": {
                "gain": _round9(base.gain),
                "eta_p": _round9(base.eta_p),
                "eta_c": _round9(base.eta_c),
                "v_p": _round9(base.v_p),
                "v_c": _round9(base.v_c),
                "eps_p": _round9(base.eps_p),
                "eps_c": _round9(base.eps_c),
            },
            "rows": [
                {
                    spec.axis: _round9(float(result.axis_values[i])),
                    **{
                        f"{name}_linear": _round9(float(result.linear[name][i]))
                        for name in observables
                    },
                    **{
                        f"{name}_db": _round9(float(result.db[name][i]))
                        for name in observables
                    },
                }
                for i in range(spec.n_points)
            ],
        }
        _emit(_json_text(document), args.out)
    else:
        header = [spec.axis]
        for name in observables:
            header.extend([f"{name}_linear", f"{name}_db"])
        rows = []
        for i in range(spec.n_points):
            row = [_fmt(float(result.axis_values[i]))]
            for name in observables:
                row.append(_fmt(float(result.linear[name][i])))
                row.append(_fmt(float(result.db[name][i])))
            rows.append(row)
        _emit(_csv_text(header, rows), args.out)

    if args.figure:
        from .plots import render_sweep_figure

        render_sweep_figure(result, args.figure)
    return 0


def _cmd_eval(args: argparse.Namespace) -> int:
    text = Path(args.circuit).read_text()
    parsed = circuit.parse(text)
    if not parsed.ok:
        for diag in parsed.diagnostics:
            where = f"line {diag.line}" if diag.line else "file"
            print(f"{args.circuit}: {where}: {diag.kind}: {diag.message}", file=sys.stderr)
        return 2
    spec = circuit.apply_overrides(parsed.spec, args.set or [])
    variances = circuit.evaluate(spec)
    measures = [
        e
        for e in spec.elements
        if isinstance(e, (circuit.MeasureSingle, circuit.MeasureJoint))
    ]

    if args.format == "json":
        document = {
            "schema": SCHEMA_VERSION,
            "command": "eval",
            "results": [
                {
                    "index": i + 1,
                    "statement": circuit.render_element(m),
                    "variance_linear": _round9(v),
                    "variance_db": _round9(10.0 * math.log10(v)),
                }
                for i, (m, v) in enumerate(zip(measures, variances))
            ],
        }
        _emit(_json_text(document), args.out)
    else:
        header = ["index", "statement", "variance_linear", "variance_db"]
        rows = []
        for i, (m, v) in enumerate(zip(measures, variances)):
            rows.append(
                [
                    str(i + 1),
                    circuit.render_element(m),
                    _fmt(v),
                    _fmt(10.0 * math.log10(v)),
                ]
            )
        _emit(_csv_text(header, rows), args.out)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twinbeam",
        description="Model, simulate, and invert twin-beam squeezing noise measurements.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_est = sub.add_parser(
        "estimate",
        help="invert a measurement CSV into gain and transmissions",
    )
    p_est.add_argument("input", help="measurement CSV file")
    p_est.add_argument(
        "--eps-p",
        type=float,
        required=True,
        help="assumed thermal fraction of probe mode mismatch",
    )
    p_est.add_argument(
        "--eps-c",
        type=float,
        default=1.0,
        help="assumed thermal fraction of conjugate mode mismatch (default 1)",
    )
    p_est.add_argument("--out", help="output file (default: stdout)")
    p_est.add_argument("--format", choices=("json", "csv"), default="json")
    p_est.set_defaults(handler=_cmd_estimate)

    p_scan = sub.add_parser(
        "scan-eps",
        help="re-estimate across a grid of assumed probe thermal fractions",
    )
    p_scan.add_argument("input", help="measurement CSV file")
    p_scan.add_argument(
        "--grid",
        required=True,
        help="comma-separated eps_p values, e.g. 0,0.5,0.9",
    )
    p_scan.add_argument("--eps-c", type=float, default=1.0)
    p_scan.add_argument("--out", help="output file (default: stdout)")
    p_scan.add_argument("--format", choices=("csv", "json"), default="csv")
    p_scan.add_argument("--figure", help="also render the scan to this image file")
    p_scan.set_defaults(handler=_cmd_scan_eps)

    p_sweep = sub.add_parser(
        "sweep",
        help="tabulate model noise curves along one axis",
    )
    p_sweep.add_argument("--axis", choices=AXES, required=True)
    p_sweep.add_argument("--range", required=True, help="axis range as lo:hi")
    p_sweep.add_argument("--points", type=int, default=200)
    p_sweep.add_argument("--gain", type=float, default=2.0, help="base gain (ignored when axis=gain)")
    p_sweep.add_argument("--eta-p", type=float, default=1.0)
    p_sweep.add_argument("--eta-c", type=float, default=1.0)
    p_sweep.add_argument("--v-p", type=float, default=1.0)
    p_sweep.add_argument("--v-c", type=float, default=1.0)
    p_sweep.add_argument("--eps-p", type=float, default=0.0)
    p_sweep.add_argument("--eps-c", type=float, default=0.0)
    p_sweep.add_argument(
        "--observables",
        default=",".join(OBSERVABLES),
        help="comma-separated subset of: " + ", ".join(OBSERVABLES),
    )
    p_sweep.add_argument("--units", choices=("db", "linear"), default="db")
    p_sweep.add_argument("--out", help="output file (default: stdout)")
    p_sweep.add_argument("--format", choices=("csv", "json"), default="csv")
    p_sweep.add_argument("--figure", help="also render the sweep to this image file")
    p_sweep.set_defaults(handler=_cmd_sweep)

    p_eval = sub.add_parser("eval", help="evaluate a circuit file")
    p_eval.add_argument("circuit", help="circuit file (.qnet)")
    p_eval.add_argument(
        "--set",
        action="append",
        metavar="SELECTOR=VALUE",
        help="override an element parameter, e.g. squeeze2.gain=2.5 or loss@p.t=0.8",
    )
    p_eval.add_argument("--out", help="output file (default: stdout)")
    p_eval.add_argument("--format", choices=("csv", "json"), default="csv")
    p_eval.set_defaults(handler=_cmd_eval)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except InsufficientDataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except _ReportedError:
        return 2
    except (MeasurementFormatError, FileNotFoundError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
