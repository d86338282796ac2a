"""What-if sensitivity and Monte Carlo over unexpected recovery factors."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Mapping, Optional

import numpy as np

from . import factors
from .engine import (
    FunctionEvaluation,
    actor_weights,
    adjusted_outcome,
    evaluate,
    process_weights,
    route,
    unadjusted_points,
)
from .model import (
    RATING_MAX,
    RATING_MIN,
    BusinessFunctionSpec,
    Compliance,
    FactorFamily,
    FactorId,
    FactorRatingSet,
    ImpactLevel,
    MethodConfig,
    ValidationError,
    family_ids,
    validate_function,
)

URF_IDS = family_ids(FactorFamily.URF)
# Each draw consumes two Philox counter steps (8 doubles, 6 used), which makes
# draw i addressable directly by advancing the counter 2*i steps.
_COUNTER_STEPS_PER_DRAW = 2
_DOUBLES_PER_DRAW = 4 * _COUNTER_STEPS_PER_DRAW


@dataclass(frozen=True)
class WhatIfResult:
    factor: FactorId
    old_rating: int
    new_rating: int
    delta_abfrp: Optional[float]
    delta_rte_hours: Optional[float]
    level_before: ImpactLevel
    level_after: ImpactLevel
    compliance_before: Compliance
    compliance_after: Compliance
    before: FunctionEvaluation
    after: FunctionEvaluation


def clamp_rating(value: int) -> int:
    return max(RATING_MIN, min(RATING_MAX, value))


def perturb(function: BusinessFunctionSpec, factor: "str | FactorId", delta: int) -> BusinessFunctionSpec:
    """Copy of ``function`` with one rating shifted by ``delta`` and clamped to 0..5."""
    fid = FactorId.parse(factor)
    old = function.ratings.get(fid)
    if old is None:
        raise ValidationError(f"function {function.id!r} has no rating for {fid}")
    return replace(function, ratings=function.ratings.with_rating(fid, clamp_rating(old + delta)))


def _delta(a: Optional[float], b: Optional[float]) -> Optional[float]:
    if a is None or b is None:
        return None
    return b - a


def whatif(function: BusinessFunctionSpec, cfg: MethodConfig, factor: "str | FactorId", delta: int) -> WhatIfResult:
    fid = FactorId.parse(factor)
    changed = perturb(function, fid, delta)
    before = evaluate(function, cfg)
    after = evaluate(changed, cfg)
    return WhatIfResult(
        factor=fid,
        old_rating=function.ratings[fid],
        new_rating=changed.ratings[fid],
        delta_abfrp=_delta(before.abfrp, after.abfrp),
        delta_rte_hours=_delta(before.rte_hours, after.rte_hours),
        level_before=before.level,
        level_after=after.level,
        compliance_before=before.compliance,
        compliance_after=after.compliance,
        before=before,
        after=after,
    )


@dataclass(frozen=True)
class SimulationSummary:
    samples: int
    seed: int
    rte_mean: float
    rte_p95: float
    rte_min: float
    rte_max: float
    prob_meets_rto: float
    prob_meets_mao_only: float
    prob_reengineer: float


def normalize_ranges(ranges: Optional[Mapping[str, "tuple[int, int] | list[int]"]]) -> dict[str, tuple[int, int]]:
    """Fill unspecified URF factors with the full 0..5 range and check bounds."""
    out = {fid: (RATING_MIN, RATING_MAX) for fid in URF_IDS}
    for key, bounds in (ranges or {}).items():
        fid = FactorId.parse(key)
        if fid.family is not FactorFamily.URF:
            raise ValidationError(f"simulation ranges only cover URF factors, got {fid}")
        try:
            lo, hi = bounds
        except (TypeError, ValueError):
            raise ValidationError(f"range for {fid} must be a [low, high] pair, got {bounds!r}") from None
        if any(isinstance(v, bool) or not isinstance(v, int) for v in (lo, hi)):
            raise ValidationError(f"range for {fid} must hold integers, got {bounds!r}")
        if lo > hi:
            raise ValidationError(f"range for {fid} is empty: [{lo}, {hi}]")
        if lo < RATING_MIN or hi > RATING_MAX:
            raise ValidationError(f"range for {fid} must lie within [0, 5], got [{lo}, {hi}]")
        out[str(fid)] = (lo, hi)
    return out


def draw_urf_block(seed: int, start: int, count: int, ranges: Mapping[str, tuple[int, int]]) -> np.ndarray:
    """URF ratings for draws ``start .. start+count-1`` as an int array (count, 6).

    Row ``i`` depends only on ``(seed, start + i)``, so blocks drawn separately
    concatenate to exactly the serial stream.
    """
    bitgen = np.random.Philox(key=seed)
    bitgen.advance(_COUNTER_STEPS_PER_DRAW * start)
    u = np.random.Generator(bitgen).random((count, _DOUBLES_PER_DRAW))[:, : len(URF_IDS)]
    lo = np.array([ranges[fid][0] for fid in URF_IDS])
    width = np.array([ranges[fid][1] - ranges[fid][0] + 1 for fid in URF_IDS])
    return lo + np.minimum(np.floor(u * width).astype(np.int64), width - 1)


def nearest_rank(sorted_values: np.ndarray, q: float) -> float:
    rank = max(1, math.ceil(q * len(sorted_values)))
    return float(sorted_values[rank - 1])


def simulate_urf(function: BusinessFunctionSpec, cfg: MethodConfig, samples: int, seed: int,
                 ranges: Optional[Mapping[str, "tuple[int, int]"]] = None,
                 workers: Optional[int] = None, block_size: int = 4096) -> SimulationSummary:
    """Sample URF ratings uniformly per factor and summarize effort/compliance.

    Draws are independent per factor and uniform over each integer range.
    The generator is Philox keyed by ``seed``; see :func:`draw_urf_block`.
    """
    if isinstance(samples, bool) or not isinstance(samples, int) or samples < 1:
        raise ValidationError(f"samples must be a positive integer, got {samples!r}")
    bounds = normalize_ranges(ranges)
    validate_function(function)
    aw = actor_weights(function.humans, function.applications, cfg)
    ubfrp = unadjusted_points(aw, process_weights(function.processes, cfg))
    candidate = route(ubfrp, cfg)
    if not (candidate.in_mbco or cfg.full_evaluation):
        raise ValidationError(
            f"function {function.id!r} is outside the MBCO; enable full evaluation to simulate it"
        )
    trf = factors.trf(function.ratings, cfg)
    erf = factors.erf(function.ratings, cfg)

    def run_block(start: int) -> tuple[np.ndarray, list[Compliance]]:
        count = min(block_size, samples - start)
        draws = draw_urf_block(seed, start, count, bounds)
        rte = np.empty(count)
        statuses = []
        base = dict(function.ratings.ratings)
        for i, row in enumerate(draws.tolist()):
            current = dict(base)
            current.update(zip(URF_IDS, row))
            ratings = FactorRatingSet._canonical(current)
            out = adjusted_outcome(function, ratings, ubfrp, candidate, cfg, trf=trf, erf=erf)
            rte[i] = out.rte_hours
            statuses.append(out.compliance)
        return rte, statuses

    starts = list(range(0, samples, block_size))
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            blocks = list(pool.map(run_block, starts))
    else:
        blocks = [run_block(s) for s in starts]

    rte_all = np.concatenate([b[0] for b in blocks])
    statuses = [s for b in blocks for s in b[1]]
    meets_rto = sum(s is Compliance.MEETS_RTO for s in statuses)
    reengineer = sum(s is Compliance.REENGINEER for s in statuses)
    meets_mao = samples - meets_rto - reengineer
    ordered = np.sort(rte_all)
    if ordered[0] == ordered[-1]:
        mean = float(ordered[0])
    else:
        mean = math.fsum(rte_all.tolist()) / samples
    return SimulationSummary(
        samples=samples,
        seed=seed,
        rte_mean=mean,
        rte_p95=nearest_rank(ordered, 0.95),
        rte_min=float(ordered[0]),
        rte_max=float(ordered[-1]),
        prob_meets_rto=meets_rto / samples,
        prob_meets_mao_only=meets_mao / samples,
        prob_reengineer=reengineer / samples,
    )
