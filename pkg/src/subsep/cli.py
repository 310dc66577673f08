"""Command-line front end.

Examples
--------
::

    subsep --function exponential --dim 4 --separation on
    subsep --function styblinski_tang --dim 4 --compare --output json
    subsep --function shubert --dim 2 --domain 0:6.283185307179586 \\
        --min-width 0.1 --trace boxes.csv

Exit codes: 0 success, 1 usage error, 2 node budget exhausted, 3 trace or
I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import logging
import os
import sys
from dataclasses import dataclass

from ._validation import check_box, parse_domain
from .exceptions import BudgetExhausted, TraceUnavailable
from .functions import BENCHMARKS, make
from .solver import Exploration, SolveReport, SolverConfig, Status, solve

__all__ = ["RunConfig", "build_parser", "dump_trace", "run", "main"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_BUDGET = 2
EXIT_IO = 3


class UsageError(Exception):

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message)
        self.field = field


@dataclass(frozen=True)
class RunConfig:
    """Validated command-line settings."""

    function: str
    dim: int
    domain: tuple | None = None
    separation: bool = True
    separators: object = "all"
    compare: bool = False
    min_width: float | None = None
    f_tolerance: float = 1e-6
    max_nodes: int = 10**7
    exploration: str = "best_first"
    rounding: bool = True
    workers: int = 1
    output: str = "text"
    trace_path: str | None = None

    def solver_config(self, separation: bool | None = None) -> SolverConfig:
        return SolverConfig(
            min_width=self.min_width,
            f_tolerance=self.f_tolerance,
            max_nodes=self.max_nodes,
            separation=self.separation if separation is None else separation,
            exploration=self.exploration,
            rounding=self.rounding,
            workers=self.workers,
            record_trace=self.trace_path is not None,
        )


_FIELDS = {f.name for f in dataclasses.fields(RunConfig)}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _on_off(text: str) -> bool:
    value = text.strip().lower()
    if value in ("on", "true", "yes", "1"):
        return True
    if value in ("off", "false", "no", "0"):
        return False
    raise argparse.ArgumentTypeError(f"expected on or off, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(
        prog="subsep",
        description="Interval branch and bound with structural separator decomposition.",
        epilog="benchmarks: " + ", ".join(BENCHMARKS),
    )
    p.add_argument("--function", help="benchmark id")
    p.add_argument("--dim", type=int, help="problem dimension")
    p.add_argument("--domain", help="lo:hi per dimension, or one lo:hi for all")
    p.add_argument("--separation", type=_on_off, help="on or off (default on)")
    p.add_argument("--separators", help="comma-separated labels, or 'all'")
    p.add_argument("--compare", action="store_true", default=None,
                   help="run with and without separation")
    p.add_argument("--min-width", type=float, dest="min_width")
    p.add_argument("--f-tol", type=float, dest="f_tolerance")
    p.add_argument("--max-nodes", type=int, dest="max_nodes")
    p.add_argument("--exploration", choices=[e.value for e in Exploration])
    p.add_argument("--rounding", type=_on_off, help="outward rounding on or off")
    p.add_argument("--workers", type=int)
    p.add_argument("--output", choices=["text", "json"])
    p.add_argument("--trace", dest="trace_path", metavar="FILE", help="write the box trace as CSV")
    p.add_argument("--seed-config", metavar="FILE", help="JSON file with RunConfig fields")
    p.add_argument("-v", "--verbose", action="store_true", help="log separator warnings")
    return p


def _load_seed(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read seed config {path!r}: {exc}", "seed_config") from None
    if not isinstance(data, dict):
        raise UsageError("seed config must be a JSON object", "seed_config")
    unknown = set(data) - _FIELDS
    if unknown:
        name = sorted(unknown)[0]
        raise UsageError(f"unknown seed config field {name!r}", name)
    return data


def _resolve(ns: argparse.Namespace) -> RunConfig:
    values = {}
    if ns.seed_config:
        values.update(_load_seed(ns.seed_config))
    explicit = {k: v for k, v in vars(ns).items() if k in _FIELDS and v is not None}
    if explicit.get("compare") and "separation" in explicit:
        raise UsageError("--separation cannot be combined with --compare", "separation")
    values.update(explicit)

    function = values.get("function")
    if function is None:
        raise UsageError("--function is required", "function")
    if function not in BENCHMARKS:
        raise UsageError(
            f"unknown function {function!r}; valid ids: {', '.join(BENCHMARKS)}", "function"
        )
    dim = values.get("dim")
    if dim is None:
        raise UsageError("--dim is required", "dim")
    try:
        program = make(function, dim)
    except (ValueError, TypeError) as exc:
        raise UsageError(f"invalid dim: {exc}", "dim") from None

    domain = values.get("domain")
    try:
        if isinstance(domain, str):
            domain = parse_domain(domain, program.dim)
        elif domain is not None:
            domain = check_box(domain, program.dim)
    except ValueError as exc:
        raise UsageError(f"invalid domain: {exc}", "domain") from None

    separators = values.get("separators", "all")
    if isinstance(separators, str):
        separators = "all" if separators.strip() == "all" else [
            s.strip() for s in separators.split(",") if s.strip()
        ]
    if separators != "all":
        for label in separators:
            if label not in program.graph.marks:
                raise UsageError(
                    f"unknown separator {label!r}; marked: {', '.join(program.separator_labels)}",
                    "separators",
                )

    if values.get("output", "text") not in ("text", "json"):
        raise UsageError("output must be text or json", "output")
    if values.get("compare") and "separation" in values and "separation" not in explicit:
        values.pop("separation")
    try:
        config = RunConfig(
            function=function,
            dim=int(dim),
            domain=domain,
            separation=bool(values.get("separation", True)),
            separators=separators,
            compare=bool(values.get("compare", False)),
            min_width=values.get("min_width"),
            f_tolerance=float(values.get("f_tolerance", 1e-6)),
            max_nodes=int(values.get("max_nodes", 10**7)),
            exploration=values.get("exploration", "best_first"),
            rounding=bool(values.get("rounding", True)),
            workers=int(values.get("workers", 1)),
            output=values.get("output", "text"),
            trace_path=values.get("trace_path"),
        )
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    fields = {
        "min_width": config.min_width is None or config.min_width > 0,
        "f_tolerance": config.f_tolerance > 0,
        "max_nodes": config.max_nodes >= 1,
        "workers": config.workers >= 1,
        "exploration": config.exploration in {e.value for e in Exploration},
    }
    for name, ok in fields.items():
        if not ok:
            raise UsageError(f"invalid value for {name}", name)
    return config


# ----------------------------------------------------------------------------
# Output
# ----------------------------------------------------------------------------


def dump_trace(report: SolveReport, path) -> None:
    """Write the box trace as CSV, one row per final box disposition.

    Raises
    ------
    TraceUnavailable
        If the report was produced without trace recording.
    OSError
        On write failure.
    """
    if report.trace is None:
        raise TraceUnavailable("the report holds no trace; enable trace recording")
    if report.trace:
        n = len(report.trace[0].box)
    else:
        n = len(report.incumbent or ())
    header = [f"dim{i}_{end}" for i in range(n) for end in ("lo", "hi")] + ["status"]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for rec in report.trace:
            if rec.status is Status.BISECTED:
                continue
            row = []
            for iv in rec.box:
                row.extend((repr(iv.lo), repr(iv.hi)))
            row.append(rec.status.value)
            writer.writerow(row)


def _suffixed(path: str, suffix: str) -> str:
    root, ext = os.path.splitext(path)
    return f"{root}_{suffix}{ext or '.csv'}"


def _fmt_point(point) -> str:
    if point is None:
        return "none"
    return "(" + ", ".join(f"{v:.10g}" for v in point) + ")"


def format_text(report: SolveReport, title: str) -> str:
    c = report.counts
    lines = [
        title,
        f"  best_value      [{report.best_value.lo!r}, {report.best_value.hi!r}]",
        f"  incumbent       {report.incumbent_value!r} at {_fmt_point(report.incumbent)}",
        f"  termination     {report.termination}",
        f"  nodes           {report.total_nodes} "
        f"({c['generated']} outer + {c['inner_generated']} inner)",
    ]
    for key in ("bisected", "value_eliminated", "optimality_eliminated",
                "boundary_fixed", "separated", "active_at_exit"):
        lines.append(f"  {key:<15} {c[key]}")
    for s in report.separators:
        state = "verified" if s.verified else f"rejected (witness {s.witness})"
        lines.append(f"  separator {s.label}: {state}, X1={list(s.X1)}, X2={list(s.X2)}")
    if report.degenerate:
        lines.append("  note: a separator had a zero adjoint; its variables were fixed at midpoints")
    return "\n".join(lines)


def _solve_one(program, cfg: RunConfig, separation: bool):
    try:
        return solve(program, cfg.domain, cfg.separators, cfg.solver_config(separation)), False
    except BudgetExhausted as exc:
        return exc.report, True


def run(argv=None) -> int:
    """Parse ``argv``, run, print the report; returns the exit code."""
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        cfg = _resolve(ns)
    except UsageError as exc:
        field = f" [{exc.field}]" if exc.field else ""
        print(f"subsep: error{field}: {exc}", file=sys.stderr)
        print(parser.format_usage().rstrip(), file=sys.stderr)
        print("valid functions: " + ", ".join(BENCHMARKS), file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)

    logging.basicConfig(level=logging.INFO if ns.verbose else logging.ERROR,
                        format="%(levelname)s %(name)s: %(message)s")
    program = make(cfg.function, cfg.dim)
    runs = [("with_separation", True), ("without_separation", False)] if cfg.compare \
        else [("report", cfg.separation)]
    results = []
    exhausted = False
    for name, sep in runs:
        report, hit = _solve_one(program, cfg, sep)
        exhausted = exhausted or hit
        results.append((name, sep, report))

    if cfg.output == "json":
        if cfg.compare:
            payload = {name: report.to_dict() for name, _, report in results}
        else:
            payload = results[0][2].to_dict()
        print(json.dumps(payload))
    else:
        for name, sep, report in results:
            title = f"{cfg.function} n={cfg.dim} separation={'on' if sep else 'off'}"
            if report.termination == "budget_exhausted":
                title += " (node budget exhausted, partial result)"
            print(format_text(report, title))
        if cfg.compare:
            with_sep, without = results[0][2], results[1][2]
            print(f"nodes with separation {with_sep.total_nodes}, without {without.total_nodes}")

    if cfg.trace_path is not None:
        try:
            if cfg.compare:
                dump_trace(results[0][2], _suffixed(cfg.trace_path, "sep"))
                dump_trace(results[1][2], _suffixed(cfg.trace_path, "nosep"))
            else:
                dump_trace(results[0][2], cfg.trace_path)
        except (OSError, TraceUnavailable) as exc:
            print(f"subsep: trace error: {exc}", file=sys.stderr)
            return EXIT_IO
    return EXIT_BUDGET if exhausted else EXIT_OK


def main() -> int:
    return run(sys.argv[1:])
