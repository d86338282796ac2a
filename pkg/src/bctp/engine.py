"""The BCTP pipeline: unadjusted points, MBCO routing, adjusted points, effort.

Threshold comparisons are inclusive throughout: a value equal to a threshold
passes it.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from . import factors
from .model import (
    EXERCISE_FOR_LEVEL,
    MBCO_LEVELS,
    ApplicationActor,
    BctpError,
    BusinessFunctionSpec,
    BusinessProcess,
    Compliance,
    EvaluationError,
    ExerciseCategory,
    FactorRatingSet,
    HumanActor,
    ImpactLevel,
    MethodConfig,
    ValidationError,
    validate_function,
)
from .ucp import classify_count


@dataclass(frozen=True)
class ActorWeights:
    uhw: float
    uapw: float
    tuaw: float


@dataclass(frozen=True)
class Routing:
    """Where a function lands in Table 8.

    ``level`` is ``None`` only for an MBCO candidate whose L1/L2 split has not
    been decided yet.
    """

    in_mbco: bool
    level: Optional[ImpactLevel]
    exercise: ExerciseCategory

    def __post_init__(self):
        if self.in_mbco != (self.exercise is ExerciseCategory.COMPLEX):
            raise EvaluationError(f"inconsistent routing: in_mbco={self.in_mbco}, exercise={self.exercise}")
        if self.level is not None:
            if EXERCISE_FOR_LEVEL[self.level] is not self.exercise or (self.level in MBCO_LEVELS) != self.in_mbco:
                raise EvaluationError(f"routing violates level/exercise mapping: {self.level!r}, {self.exercise!r}")


@dataclass(frozen=True)
class FunctionEvaluation:
    function_id: str
    actor_weights: ActorWeights
    ubpw: float
    ubfrp: float
    trf: Optional[float]
    erf: Optional[float]
    urf: Optional[float]
    abfrp: Optional[float]
    rte_hours: Optional[float]
    routing: Routing
    budget_rto_hours: float
    budget_mao_hours: float
    compliance: Compliance

    @property
    def level(self) -> ImpactLevel:
        return self.routing.level

    @property
    def adjusted(self) -> bool:
        return self.abfrp is not None


def actor_weights(humans: Iterable[HumanActor], apps: Iterable[ApplicationActor], cfg: MethodConfig) -> ActorWeights:
    uhw = sum((cfg.weight_of(h.responsibility) for h in humans), 0.0)
    uapw = sum((cfg.weight_of(a.task_complexity) for a in apps), 0.0)
    return ActorWeights(uhw=uhw, uapw=uapw, tuaw=uhw + uapw)


def process_weights(processes: Iterable[BusinessProcess], cfg: MethodConfig) -> float:
    total = 0.0
    for proc in processes:
        if proc.step_count < 1:
            raise ValidationError(f"process {proc.id!r} has step_count {proc.step_count}; must be >= 1")
        total += cfg.weight_of(classify_count(proc.step_count, cfg.transaction_bounds))
    return total


def unadjusted_points(aw: ActorWeights, ubpw: float) -> float:
    return aw.tuaw + ubpw


def route(ubfrp: float, cfg: MethodConfig) -> Routing:
    if ubfrp >= cfg.theta_mbco:
        return Routing(in_mbco=True, level=None, exercise=ExerciseCategory.COMPLEX)
    level = ImpactLevel.L3 if ubfrp >= cfg.theta_34 else ImpactLevel.L4
    return Routing(in_mbco=False, level=level, exercise=EXERCISE_FOR_LEVEL[level])


def adjusted_points(ubfrp: float, trf: float, erf: float, urf: float) -> float:
    for name, value in (("TRF", trf), ("ERF", erf), ("URF", urf)):
        if not math.isfinite(value) or value <= 0:
            raise EvaluationError(f"{name} factor must be positive and finite, got {value!r}")
    return ubfrp * trf * erf * urf


def recovery_effort(abfrp: float, cfg: MethodConfig) -> float:
    return cfg.effort_rate_hours_per_point * abfrp


def assign_mbco_level(abfrp: float, cfg: MethodConfig) -> ImpactLevel:
    return ImpactLevel.L1 if abfrp >= cfg.theta_12 else ImpactLevel.L2


def compliance(rte_hours: float, budget_rto_hours: float, budget_mao_hours: float) -> Compliance:
    if not budget_rto_hours > 0 or not budget_mao_hours > 0:
        raise ValidationError(f"budgets must be positive, got RTO {budget_rto_hours!r} h, MAO {budget_mao_hours!r} h")
    if budget_rto_hours > budget_mao_hours:
        raise ValidationError(f"RTO budget {budget_rto_hours} h exceeds MAO budget {budget_mao_hours} h")
    if rte_hours <= budget_rto_hours:
        return Compliance.MEETS_RTO
    if rte_hours <= budget_mao_hours:
        return Compliance.MEETS_MAO_ONLY
    return Compliance.REENGINEER


def budgets(function: BusinessFunctionSpec, level: ImpactLevel) -> tuple[float, float]:
    """Desired RTO/MAO where given, otherwise the level's outage bound."""
    rto = function.desired_rto_hours if function.desired_rto_hours is not None else level.rto_bound_hours
    mao = function.desired_mao_hours if function.desired_mao_hours is not None else level.mao_hours
    return float(rto), float(mao)


@dataclass(frozen=True)
class AdjustedOutcome:
    trf: float
    erf: float
    urf: float
    abfrp: float
    rte_hours: float
    level: ImpactLevel
    budget_rto_hours: float
    budget_mao_hours: float
    compliance: Compliance


def adjusted_outcome(function: BusinessFunctionSpec, ratings: FactorRatingSet, ubfrp: float,
                     candidate: Routing, cfg: MethodConfig,
                     trf: Optional[float] = None, erf: Optional[float] = None) -> AdjustedOutcome:
    """Second-level evaluation for one rating set.

    ``trf``/``erf`` may be passed precomputed when only URF ratings vary.
    """
    trf = factors.trf(ratings, cfg) if trf is None else trf
    erf = factors.erf(ratings, cfg) if erf is None else erf
    urf = factors.urf(ratings, cfg)
    abfrp = adjusted_points(ubfrp, trf, erf, urf)
    rte = recovery_effort(abfrp, cfg)
    level = assign_mbco_level(abfrp, cfg) if candidate.in_mbco else candidate.level
    rto, mao = budgets(function, level)
    return AdjustedOutcome(trf, erf, urf, abfrp, rte, level, rto, mao, compliance(rte, rto, mao))


def evaluate(function: BusinessFunctionSpec, cfg: MethodConfig) -> FunctionEvaluation:
    try:
        validate_function(function)
        aw = actor_weights(function.humans, function.applications, cfg)
        ubpw = process_weights(function.processes, cfg)
        ubfrp = unadjusted_points(aw, ubpw)
        candidate = route(ubfrp, cfg)
        if candidate.in_mbco or cfg.full_evaluation:
            out = adjusted_outcome(function, function.ratings, ubfrp, candidate, cfg)
            return FunctionEvaluation(
                function_id=function.id, actor_weights=aw, ubpw=ubpw, ubfrp=ubfrp,
                trf=out.trf, erf=out.erf, urf=out.urf, abfrp=out.abfrp, rte_hours=out.rte_hours,
                routing=Routing(candidate.in_mbco, out.level, candidate.exercise),
                budget_rto_hours=out.budget_rto_hours, budget_mao_hours=out.budget_mao_hours,
                compliance=out.compliance,
            )
        rto, mao = budgets(function, candidate.level)
        return FunctionEvaluation(
            function_id=function.id, actor_weights=aw, ubpw=ubpw, ubfrp=ubfrp,
            trf=None, erf=None, urf=None, abfrp=None, rte_hours=None,
            routing=candidate, budget_rto_hours=rto, budget_mao_hours=mao,
            compliance=Compliance.NOT_ASSESSED,
        )
    except BctpError as exc:
        raise type(exc)(f"function {function.id!r}: {exc}") from exc


def evaluate_all(functions: Sequence[BusinessFunctionSpec], cfg: MethodConfig,
                 workers: Optional[int] = None) -> list[FunctionEvaluation]:
    """Evaluate in input order; ``workers > 1`` fans out over a thread pool."""
    if not workers or workers <= 1:
        return [evaluate(f, cfg) for f in functions]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda f: evaluate(f, cfg), functions))
