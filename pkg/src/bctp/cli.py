"""Command-line entry point.

Exit codes: 0 success, 1 validation findings or unknown references,
2 parse/config errors (argparse usage errors also exit 2).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict
from typing import Optional, Sequence

from . import analysis, io, reporting, ucp
from .engine import FunctionEvaluation, evaluate_all
from .model import BctpError, ConfigError, FactorId, PROFILES, ValidationError

EXIT_OK = 0
EXIT_FINDINGS = 1
EXIT_PARSE = 2


class _Exit(Exception):
    def __init__(self, code: int, message: str = ""):
        super().__init__(message)
        self.code = code
        self.message = message


def _common(parser: argparse.ArgumentParser, portfolio: bool = True) -> None:
    parser.add_argument("-i", "--input", required=True,
                        help="portfolio JSON file" if portfolio else "UCP project JSON file")
    parser.add_argument("-c", "--config", help="method config JSON file")
    parser.add_argument("--format", choices=("text", "machine"), default="text")
    parser.add_argument("--profile", choices=PROFILES, help="coefficient profile (overrides config files)")
    if portfolio:
        parser.add_argument("--full-eval", action="store_true",
                            help="run the adjusted pipeline for non-MBCO functions too")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bctp", description="Business Continuity Testing Points calculator")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evaluate", help="score every function and render the BIA report")
    _common(p)

    p = sub.add_parser("validate", help="list validation findings only")
    _common(p)

    p = sub.add_parser("whatif", help="re-evaluate one function with a single rating changed")
    _common(p)
    p.add_argument("--function", required=True)
    p.add_argument("--factor", required=True, help="factor id such as URF3 or ERF7")
    p.add_argument("--delta", type=int, required=True)

    p = sub.add_parser("simulate", help="Monte Carlo over unexpected recovery factor ratings")
    _common(p)
    p.add_argument("--function", required=True)
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--ranges", help="JSON file of URF ranges, e.g. {\"URF1\": [0, 5]}")

    p = sub.add_parser("ucp", help="classic Use Case Points estimate for a project file")
    _common(p, portfolio=False)
    return parser


def _load(args) -> tuple[io.PortfolioFile, "io.MethodConfig"]:
    portfolio = io.load_portfolio(args.input)
    file_overrides = io.load_config_overrides(args.config) if args.config else {}
    cfg = io.effective_config(file_overrides, portfolio.config_overrides,
                              profile_flag=args.profile, full_evaluation=args.full_eval)
    return portfolio, cfg


def _find_function(portfolio: io.PortfolioFile, function_id: str):
    for function in portfolio.functions:
        if function.id == function_id:
            return function
    raise _Exit(EXIT_FINDINGS, f"unknown function id {function_id!r}")


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, default=_json_default) + "\n"


def _json_default(value):
    if isinstance(value, FactorId):
        return str(value)
    if hasattr(value, "name") and hasattr(value, "value"):
        # Enums: impact levels by name (L1), everything else by value.
        return value.name if type(value).__name__ == "ImpactLevel" else value.value
    raise TypeError(f"cannot serialize {type(value).__name__}")


def evaluation_to_dict(ev: FunctionEvaluation) -> dict:
    out = asdict(ev)
    out["routing"] = {
        "in_mbco": ev.routing.in_mbco,
        "level": ev.routing.level.name,
        "exercise": ev.routing.exercise.value,
    }
    out["compliance"] = ev.compliance.value
    return out


def _fmt(value, digits=4) -> str:
    return "-" if value is None else f"{value:.{digits}f}"


def cmd_evaluate(args) -> int:
    portfolio, cfg = _load(args)
    findings = reporting.validate_portfolio(portfolio.functions, cfg)
    if findings:
        for finding in findings:
            print(finding, file=sys.stderr)
        return EXIT_FINDINGS
    evaluations = evaluate_all(portfolio.functions, cfg)
    report = reporting.build_report(portfolio.functions, cfg, evaluations)
    sys.stdout.write(reporting.render(report, args.format).decode("utf-8"))
    return EXIT_OK


def cmd_validate(args) -> int:
    portfolio, cfg = _load(args)
    findings = reporting.validate_portfolio(portfolio.functions, cfg)
    if args.format == "machine":
        sys.stdout.write(_dumps([asdict(f) for f in findings]))
    else:
        for finding in findings:
            print(finding)
        if not findings:
            print("no findings")
    return EXIT_FINDINGS if findings else EXIT_OK


def cmd_whatif(args) -> int:
    portfolio, cfg = _load(args)
    function = _find_function(portfolio, args.function)
    try:
        factor = FactorId.parse(args.factor)
    except ValidationError as exc:
        raise _Exit(EXIT_FINDINGS, f"unknown factor {args.factor!r}: {exc}") from None
    result = analysis.whatif(function, cfg, factor, args.delta)
    if args.format == "machine":
        data = asdict(result)
        data["before"] = evaluation_to_dict(result.before)
        data["after"] = evaluation_to_dict(result.after)
        sys.stdout.write(_dumps(data))
        return EXIT_OK
    lines = [
        f"function: {function.id}",
        f"factor: {factor} ({factor.description})",
        f"rating: {result.old_rating} -> {result.new_rating}",
        f"abfrp: {_fmt(result.before.abfrp)} -> {_fmt(result.after.abfrp)} (delta {_fmt(result.delta_abfrp)})",
        f"rte_hours: {_fmt(result.before.rte_hours)} -> {_fmt(result.after.rte_hours)}"
        f" (delta {_fmt(result.delta_rte_hours)})",
        f"level: {result.level_before.name} -> {result.level_after.name}",
        f"compliance: {result.compliance_before.value} -> {result.compliance_after.value}",
    ]
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_simulate(args) -> int:
    portfolio, cfg = _load(args)
    function = _find_function(portfolio, args.function)
    ranges = io.load_ranges(args.ranges) if args.ranges else None
    summary = analysis.simulate_urf(function, cfg, samples=args.samples, seed=args.seed, ranges=ranges)
    if args.format == "machine":
        sys.stdout.write(_dumps({"function_id": function.id, **asdict(summary)}))
        return EXIT_OK
    lines = [
        f"function: {function.id}",
        f"samples: {summary.samples}",
        f"seed: {summary.seed}",
        f"rte_mean_hours: {_fmt(summary.rte_mean)}",
        f"rte_p95_hours: {_fmt(summary.rte_p95)}",
        f"rte_range_hours: {_fmt(summary.rte_min)} .. {_fmt(summary.rte_max)}",
        f"prob_meets_rto: {_fmt(summary.prob_meets_rto)}",
        f"prob_meets_mao_only: {_fmt(summary.prob_meets_mao_only)}",
        f"prob_reengineer: {_fmt(summary.prob_reengineer)}",
    ]
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_ucp(args) -> int:
    project = io.load_ucp_project(args.input)
    file_overrides = io.load_config_overrides(args.config) if args.config else {}
    cfg = io.effective_config(file_overrides, profile_flag=args.profile)
    result = ucp.estimate(project.actors, project.use_cases, project.ratings, cfg)
    if args.format == "machine":
        sys.stdout.write(_dumps(asdict(result)))
        return EXIT_OK
    rows = [
        ("UAW", result.uaw), ("UUCW", result.uucw), ("UUCP", result.uucp),
        ("TFactor", result.tfactor), ("TCF", result.tcf),
        ("EFactor", result.efactor), ("EF", result.ef),
        ("UCP", result.ucp), ("Effort (man-hours)", result.effort_hours),
    ]
    sys.stdout.write("".join(f"{name:<20}{value:.4f}\n" for name, value in rows))
    return EXIT_OK


COMMANDS = {
    "evaluate": cmd_evaluate,
    "validate": cmd_validate,
    "whatif": cmd_whatif,
    "simulate": cmd_simulate,
    "ucp": cmd_ucp,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_PARSE
    try:
        return COMMANDS[args.command](args)
    except _Exit as exc:
        print(f"error: {exc.message}", file=sys.stderr)
        return exc.code
    except (io.ParseError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except BctpError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FINDINGS


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
