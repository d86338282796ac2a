"""Technical, environmental and unexpected recovery factors.

Each family reduces to a weighted sum of 0..5 ratings, and the sum feeds an
affine adjustment ``intercept + slope * sum``. The TRF/ERF forms mirror the
classic TCF/EF formulas; the URF form is identity-at-zero so that a calm
scenario leaves the score untouched.
"""

from __future__ import annotations

from typing import Mapping

from .model import (
    FactorFamily,
    FactorId,
    FactorRatingSet,
    MethodConfig,
    ValidationError,
    family_ids,
)


def factor_sum(ratings: FactorRatingSet, family: FactorFamily, weights: Mapping[str, float]) -> float:
    total = 0.0
    for fid in family_ids(family):
        value = ratings.get(fid)
        if value is None:
            raise ValidationError(f"missing rating for factor {fid}")
        if fid not in weights:
            raise ValidationError(f"missing weight for factor {fid}")
        total += weights[fid] * value
    return total


def _affine(coefficients: tuple[float, float], total: float) -> float:
    intercept, slope = coefficients
    return intercept + slope * total


def trf(ratings: FactorRatingSet, cfg: MethodConfig) -> float:
    return _affine(cfg.trf_coefficients, factor_sum(ratings, FactorFamily.TRF, cfg.trf_weights))


def erf(ratings: FactorRatingSet, cfg: MethodConfig) -> float:
    return _affine(cfg.erf_coefficients, factor_sum(ratings, FactorFamily.ERF, cfg.erf_weights))


def urf(ratings: FactorRatingSet, cfg: MethodConfig) -> float:
    # MethodConfig already rejects negative URF weights; re-check for tables
    # that bypassed construction.
    negative = [k for k, v in cfg.urf_weights.items() if v < 0]
    if negative:
        raise ValidationError(f"urf weights must be nonnegative: {', '.join(negative)}")
    return _affine(cfg.urf_coefficients, factor_sum(ratings, FactorFamily.URF, cfg.urf_weights))


def factor_value(family: FactorFamily, ratings: FactorRatingSet, cfg: MethodConfig) -> float:
    return {FactorFamily.TRF: trf, FactorFamily.ERF: erf, FactorFamily.URF: urf}[FactorFamily(family)](ratings, cfg)


def factor_slope(factor: "str | FactorId", cfg: MethodConfig) -> float:
    """Change of the family factor per one-point increase of ``factor``'s rating."""
    fid = FactorId.parse(factor)
    coefficients = {
        FactorFamily.TRF: cfg.trf_coefficients,
        FactorFamily.ERF: cfg.erf_coefficients,
        FactorFamily.URF: cfg.urf_coefficients,
    }[fid.family]
    return cfg.weights_for(fid.family)[str(fid)] * coefficients[1]
