"""Command line entry point: run scenarios, check expectations, explain.

Exit codes are a contract: 0 for successful evaluation (run) or a full
expectation match (check), 1 for an expectation mismatch, 2 for usage,
parse, or validation errors.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, replace as dc_replace
from pathlib import Path

from .dsl import THEORY_NAMES, Scenario, parse_scenario
from .judge import Mechanism, judge
from .logic import DEFAULT_BUDGET_BITS, FelicityError
from .report import build_report, render_report, render_traces
from .sexpr import ParseError

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_ERROR = 2


@dataclass(frozen=True)
class RunConfig:
    format: str = "table"
    explain: bool = False
    theories: tuple[str, ...] | None = None
    bound: int | None = None
    fail_fast: bool = False


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="felicity",
        description="Evaluate oddness scenarios over finite models.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format", choices=("table", "json"), default="table",
        help="report format (default: table)",
    )
    common.add_argument(
        "--explain", action="store_true", help="append derivation traces to each report"
    )
    common.add_argument(
        "--theories",
        help="comma-separated theory subset to enable: " + ", ".join(THEORY_NAMES),
    )
    common.add_argument(
        "--bound", type=int, help="override the model-size bound of every scenario"
    )
    common.add_argument(
        "--fail-fast", action="store_true", help="stop at the first failure"
    )
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", parents=[common], help="evaluate scenarios and print reports")
    run.add_argument("paths", nargs="+")
    check = sub.add_parser(
        "check", parents=[common], help="compare aggregates against (expect ...) clauses"
    )
    check.add_argument("paths", nargs="+")
    explain = sub.add_parser(
        "explain", parents=[common], help="print the derivation trace of one scenario"
    )
    explain.add_argument("path")
    return parser


def _config(args: argparse.Namespace) -> RunConfig:
    theories = None
    if args.theories:
        theories = tuple(t.strip() for t in args.theories.split(",") if t.strip())
        unknown = [t for t in theories if t not in THEORY_NAMES]
        if unknown:
            raise FelicityError(
                f"unknown theories {unknown}; pick from {', '.join(THEORY_NAMES)}"
            )
        if not theories:
            raise FelicityError("--theories needs at least one name")
    if args.bound is not None and args.bound < 1:
        raise FelicityError("--bound must be >= 1")
    return RunConfig(
        format=args.format,
        explain=args.explain,
        theories=theories,
        bound=args.bound,
        fail_fast=args.fail_fast,
    )


def _load(path: str, config: RunConfig) -> Scenario:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FelicityError(f"{path}: {exc}") from None
    try:
        scenario = parse_scenario(text, source=path)
    except ParseError as exc:
        raise FelicityError(f"{path}: {exc}") from None
    if config.theories is not None:
        scenario = dc_replace(scenario, enabled_theories=config.theories)
    if config.bound is not None:
        if config.bound * len(scenario.preds) > DEFAULT_BUDGET_BITS:
            raise FelicityError(
                f"{path}: bound {config.bound} x {len(scenario.preds)} predicates"
                f" exceeds the {DEFAULT_BUDGET_BITS}-bit enumeration budget"
            )
        scenario = dc_replace(scenario, max_universe=config.bound)
    return scenario


def cmd_run(paths: list[str], config: RunConfig, out=None) -> int:
    out = out if out is not None else sys.stdout
    reports = []
    for path in paths:
        scenario = _load(path, config)
        report = build_report(scenario.name, judge(scenario))
        reports.append(report)
    for i, report in enumerate(reports):
        if i and config.format == "table":
            print(file=out)
        print(render_report(report, config.format), file=out)
        if config.explain and config.format == "table":
            print(render_traces(report), file=out)
    return EXIT_OK


def cmd_check(paths: list[str], config: RunConfig, out=None) -> int:
    out = out if out is not None else sys.stdout
    mismatches = []
    for path in paths:
        scenario = _load(path, config)
        if scenario.expect is None:
            raise FelicityError(f"{path}: scenario {scenario.name!r} has no (expect ...) clause")
        judgment = judge(scenario)
        got = judgment.aggregate
        fired = [
            v.mechanism.value for v in judgment.theories if v.mechanism is not Mechanism.NONE
        ]
        fired_note = ", ".join(fired) if fired else "none"
        if got == scenario.expect:
            print(f"ok {scenario.name}: {got.value} (fired: {fired_note})", file=out)
        else:
            mismatches.append(scenario.name)
            print(
                f"MISMATCH {scenario.name}: expected {scenario.expect.value},"
                f" got {got.value} (fired: {fired_note})",
                file=out,
            )
            if config.fail_fast:
                break
    if mismatches:
        print(f"{len(mismatches)} mismatch(es): {', '.join(mismatches)}", file=out)
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_explain(path: str, config: RunConfig, out=None) -> int:
    out = out if out is not None else sys.stdout
    scenario = _load(path, config)
    report = build_report(scenario.name, judge(scenario))
    if config.format == "json":
        print(render_report(report, "json"), file=out)
        return EXIT_OK
    print(render_report(report, "table"), file=out)
    print(render_traces(report), file=out)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        config = _config(args)
        if args.command == "run":
            return cmd_run(args.paths, config)
        if args.command == "check":
            return cmd_check(args.paths, config)
        return cmd_explain(args.path, config)
    except FelicityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
