"""Classic Use Case Points calculator (Karner).

Kept as a reference baseline: the BCTP engine reuses the same classification
and weighting machinery, so this module doubles as a sanity check on it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .model import (
    ENVIRONMENTAL_WEIGHTS,
    TECHNICAL_WEIGHTS,
    ComplexityClass,
    MethodConfig,
    ValidationError,
)

TECHNICAL_FACTORS = {f"T{i}": w for i, w in enumerate(TECHNICAL_WEIGHTS, start=1)}
ENVIRONMENTAL_FACTORS = {f"F{i}": w for i, w in enumerate(ENVIRONMENTAL_WEIGHTS, start=1)}


@dataclass(frozen=True)
class UcpActor:
    id: str
    cls: ComplexityClass


@dataclass(frozen=True)
class UseCase:
    id: str
    transaction_count: int


@dataclass(frozen=True)
class UcpRatings:
    technical: Mapping[str, int] = field(default_factory=lambda: dict.fromkeys(TECHNICAL_FACTORS, 0))
    environmental: Mapping[str, int] = field(default_factory=lambda: dict.fromkeys(ENVIRONMENTAL_FACTORS, 0))


@dataclass(frozen=True)
class UcpResult:
    uaw: float
    uucw: float
    uucp: float
    tfactor: float
    tcf: float
    efactor: float
    ef: float
    ucp: float
    effort_hours: float


def classify_count(count: int, bounds: tuple[int, int]) -> ComplexityClass:
    """Map a transaction/step count onto simple/average/complex."""
    simple_max, average_max = bounds
    if count <= simple_max:
        return ComplexityClass.SIMPLE
    if count <= average_max:
        return ComplexityClass.AVERAGE
    return ComplexityClass.COMPLEX


def uaw(actors: Iterable[UcpActor], cfg: MethodConfig) -> float:
    return sum((cfg.weight_of(a.cls) for a in actors), 0.0)


def uucw(use_cases: Iterable[UseCase], cfg: MethodConfig) -> float:
    total = 0.0
    for uc in use_cases:
        if uc.transaction_count < 0:
            raise ValidationError(f"use case {uc.id!r} has negative transaction count")
        total += cfg.weight_of(classify_count(uc.transaction_count, cfg.transaction_bounds))
    return total


def uucp(uaw_points: float, uucw_points: float) -> float:
    return uaw_points + uucw_points


def _weighted(ratings: Mapping[str, int], table: Mapping[str, float]) -> float:
    total = 0.0
    for key, weight in table.items():
        if key not in ratings:
            raise ValidationError(f"missing rating for factor {key}")
        value = ratings[key]
        if isinstance(value, bool) or not isinstance(value, int) or not 0 <= value <= 5:
            raise ValidationError(f"rating for {key} must be an integer in [0, 5], got {value!r}")
        total += weight * value
    return total


def tfactor(technical: Mapping[str, int]) -> float:
    return _weighted(technical, TECHNICAL_FACTORS)


def efactor(environmental: Mapping[str, int]) -> float:
    return _weighted(environmental, ENVIRONMENTAL_FACTORS)


def tcf(technical: Mapping[str, int], cfg: MethodConfig) -> float:
    intercept, slope = cfg.trf_coefficients
    return intercept + slope * tfactor(technical)


def ef(environmental: Mapping[str, int], cfg: MethodConfig) -> float:
    intercept, slope = cfg.erf_coefficients
    return intercept + slope * efactor(environmental)


def ucp(uucp_points: float, tcf_value: float, ef_value: float) -> float:
    return uucp_points * tcf_value * ef_value


def ucp_effort(ucp_points: float, cfg: MethodConfig) -> float:
    return ucp_points * cfg.ucp_hours_per_point


def estimate(actors: Iterable[UcpActor], use_cases: Iterable[UseCase], ratings: UcpRatings,
             cfg: MethodConfig) -> UcpResult:
    """Run the whole chain and keep every intermediate value."""
    a = uaw(actors, cfg)
    u = uucw(use_cases, cfg)
    unadjusted = uucp(a, u)
    t_sum = tfactor(ratings.technical)
    e_sum = efactor(ratings.environmental)
    t = tcf(ratings.technical, cfg)
    e = ef(ratings.environmental, cfg)
    points = ucp(unadjusted, t, e)
    return UcpResult(
        uaw=a, uucw=u, uucp=unadjusted, tfactor=t_sum, tcf=t,
        efactor=e_sum, ef=e, ucp=points, effort_hours=ucp_effort(points, cfg),
    )
