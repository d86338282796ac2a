"""BIA records, portfolio validation and document rendering."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import asdict, dataclass, fields
from typing import Any, Iterable, Optional, Sequence

from .engine import FunctionEvaluation, evaluate
from .model import (
    EXERCISE_FOR_LEVEL,
    BctpError,
    BusinessFunctionSpec,
    Compliance,
    ExerciseCategory,
    Finding,
    ImpactLevel,
    MethodConfig,
    function_findings,
)

FORMAT_TAG = "bctp-bia-report"
FORMAT_VERSION = 1


class ConsistencyError(BctpError):
    """A record was built from an evaluation of a different function."""


class ReportParseError(BctpError, ValueError):
    pass


@dataclass(frozen=True)
class BiaRecord:
    function_id: str
    function_name: str
    uhw: float
    uapw: float
    tuaw: float
    ubpw: float
    ubfrp: float
    trf: Optional[float]
    erf: Optional[float]
    urf: Optional[float]
    abfrp: Optional[float]
    rte_hours: Optional[float]
    impact_level: ImpactLevel
    exercise_category: ExerciseCategory
    in_mbco: bool
    budget_rto_hours: float
    budget_mao_hours: float
    desired_rto_hours: Optional[float]
    desired_mao_hours: Optional[float]
    level_mao_hours: float
    compliance: Compliance
    reengineer_flag: bool
    config_fingerprint: str

    def __post_init__(self):
        if self.reengineer_flag != (self.compliance is Compliance.REENGINEER):
            raise ConsistencyError(f"{self.function_id}: reengineer_flag disagrees with compliance")
        if self.level_mao_hours != self.impact_level.mao_hours:
            raise ConsistencyError(f"{self.function_id}: level_mao_hours does not match {self.impact_level.name}")
        if EXERCISE_FOR_LEVEL[self.impact_level] is not self.exercise_category:
            raise ConsistencyError(f"{self.function_id}: exercise category does not match impact level")


def build_record(function: BusinessFunctionSpec, evaluation: FunctionEvaluation, cfg: MethodConfig) -> BiaRecord:
    if function.id != evaluation.function_id:
        raise ConsistencyError(
            f"evaluation of {evaluation.function_id!r} cannot describe function {function.id!r}"
        )
    aw = evaluation.actor_weights
    level = evaluation.level
    return BiaRecord(
        function_id=function.id,
        function_name=function.name,
        uhw=aw.uhw,
        uapw=aw.uapw,
        tuaw=aw.tuaw,
        ubpw=evaluation.ubpw,
        ubfrp=evaluation.ubfrp,
        trf=evaluation.trf,
        erf=evaluation.erf,
        urf=evaluation.urf,
        abfrp=evaluation.abfrp,
        rte_hours=evaluation.rte_hours,
        impact_level=level,
        exercise_category=evaluation.routing.exercise,
        in_mbco=evaluation.routing.in_mbco,
        budget_rto_hours=evaluation.budget_rto_hours,
        budget_mao_hours=evaluation.budget_mao_hours,
        desired_rto_hours=function.desired_rto_hours,
        desired_mao_hours=function.desired_mao_hours,
        level_mao_hours=level.mao_hours,
        compliance=evaluation.compliance,
        reengineer_flag=evaluation.compliance is Compliance.REENGINEER,
        config_fingerprint=cfg.fingerprint(),
    )


def _sort_key(record: BiaRecord):
    # Most urgent first; function_id makes the order total.
    return (int(record.impact_level), -record.ubfrp, record.function_id)


@dataclass(frozen=True)
class PortfolioReport:
    records: tuple[BiaRecord, ...]

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(sorted(self.records, key=_sort_key)))

    @property
    def totals(self) -> dict[str, dict[str, int]]:
        levels = Counter(r.impact_level for r in self.records)
        exercises = Counter(r.exercise_category for r in self.records)
        statuses = Counter(r.compliance for r in self.records)
        return {
            "by_level": {lvl.name: levels[lvl] for lvl in ImpactLevel},
            "by_exercise": {ex.value: exercises[ex] for ex in ExerciseCategory},
            "by_compliance": {st.value: statuses[st] for st in Compliance},
        }


def build_report(functions: Sequence[BusinessFunctionSpec], cfg: MethodConfig,
                 evaluations: Optional[Sequence[FunctionEvaluation]] = None) -> PortfolioReport:
    if evaluations is None:
        evaluations = [evaluate(f, cfg) for f in functions]
    return PortfolioReport(tuple(build_record(f, e, cfg) for f, e in zip(functions, evaluations)))


def validate_portfolio(functions: Iterable[BusinessFunctionSpec], cfg: MethodConfig) -> list[Finding]:
    """Every problem in the portfolio as data; an empty list means valid."""
    functions = list(functions)
    findings: list[Finding] = []
    counts = Counter(f.id for f in functions)
    for fid, n in counts.items():
        if n > 1:
            findings.append(Finding(fid, "duplicate-id", f"function id used {n} times"))
    for function in functions:
        structural = function_findings(function)
        findings.extend(structural)
        if structural:
            continue
        try:
            level = evaluate(function, cfg).level
        except BctpError as exc:
            findings.append(Finding(function.id, "evaluation-error", str(exc)))
            continue
        rto, mao = function.desired_rto_hours, function.desired_mao_hours
        if mao is not None and mao > level.mao_hours:
            findings.append(Finding(
                function.id, "level-bounds",
                f"desired MAO {mao} h exceeds the {level.name} MAO of {level.mao_hours:g} h"))
        if rto is not None and rto >= level.rto_bound_hours:
            findings.append(Finding(
                function.id, "level-bounds",
                f"desired RTO {rto} h must be below the {level.name} bound of {level.rto_bound_hours:g} h"))
    return findings


# --------------------------------------------------------------------------
# Rendering
# --------------------------------------------------------------------------

_ENUM_FIELDS = {
    "impact_level": (lambda v: v.name, lambda s: ImpactLevel[s]),
    "exercise_category": (lambda v: v.value, ExerciseCategory),
    "compliance": (lambda v: v.value, Compliance),
}


def record_to_dict(record: BiaRecord) -> dict[str, Any]:
    out = asdict(record)
    for name, (dump, _) in _ENUM_FIELDS.items():
        out[name] = dump(getattr(record, name))
    return out


def record_from_dict(data: dict[str, Any]) -> BiaRecord:
    names = [f.name for f in fields(BiaRecord)]
    missing = [n for n in names if n not in data]
    if missing:
        raise ReportParseError(f"record is missing field(s): {', '.join(missing)}")
    kwargs = {n: data[n] for n in names}
    for name, (_, load) in _ENUM_FIELDS.items():
        kwargs[name] = load(kwargs[name])
    return BiaRecord(**kwargs)


def report_to_dict(report: PortfolioReport) -> dict[str, Any]:
    return {
        "format": FORMAT_TAG,
        "version": FORMAT_VERSION,
        "records": [record_to_dict(r) for r in report.records],
        "totals": report.totals,
    }


def parse_report(document: "bytes | str") -> PortfolioReport:
    try:
        data = json.loads(document)
        if data.get("format") != FORMAT_TAG:
            raise ReportParseError(f"not a {FORMAT_TAG} document")
        report = PortfolioReport(tuple(record_from_dict(r) for r in data["records"]))
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        if isinstance(exc, ReportParseError):
            raise
        raise ReportParseError(str(exc)) from exc
    if data.get("totals") != report.totals:
        raise ReportParseError("totals do not match the records")
    return report


def _hours(value: Optional[float]) -> str:
    return "-" if value is None else f"{value:.4f}"


def _points(value: Optional[float]) -> str:
    return "-" if value is None else f"{value:.4f}"


_TEXT_COLUMNS = (
    ("ID", 10), ("NAME", 24), ("LEVEL", 5), ("EXERCISE", 8), ("MBCO", 4),
    ("UBFRP", 9), ("ABFRP", 9), ("RTE_H", 9), ("RTO_H", 9), ("MAO_H", 9), ("STATUS", 12),
)


def _row(cells: Sequence[str]) -> str:
    parts = []
    for (_, width), cell in zip(_TEXT_COLUMNS, cells):
        cell = cell if len(cell) <= width else cell[: width - 1] + "~"
        parts.append(cell.ljust(width))
    return "  ".join(parts).rstrip()


def render_text(report: PortfolioReport) -> str:
    lines = ["BUSINESS IMPACT ANALYSIS", _row([c for c, _ in _TEXT_COLUMNS])]
    for r in report.records:
        lines.append(_row([
            r.function_id, r.function_name, r.impact_level.name, r.exercise_category.value,
            "yes" if r.in_mbco else "no", _points(r.ubfrp), _points(r.abfrp),
            _hours(r.rte_hours), _hours(r.budget_rto_hours), _hours(r.budget_mao_hours),
            r.compliance.value,
        ]))
    totals = report.totals
    lines.append("")
    lines.append(f"records: {len(report.records)}")
    for key in ("by_level", "by_exercise", "by_compliance"):
        lines.append(f"{key}: " + " ".join(f"{k}={v}" for k, v in totals[key].items()))
    fingerprints = sorted({r.config_fingerprint for r in report.records})
    if fingerprints:
        lines.append("config: " + ", ".join(fingerprints))
    return "\n".join(lines) + "\n"


def render_machine(report: PortfolioReport) -> str:
    return json.dumps(report_to_dict(report), indent=2) + "\n"


def render(report: PortfolioReport, fmt: str = "text") -> bytes:
    if fmt == "text":
        return render_text(report).encode("utf-8")
    if fmt == "machine":
        return render_machine(report).encode("utf-8")
    raise ValueError(f"unknown format {fmt!r}; expected 'text' or 'machine'")
