"""Business Continuity Testing Points: criticality scoring for IT business functions."""

from .analysis import SimulationSummary, WhatIfResult, perturb, simulate_urf, whatif
from .engine import (
    ActorWeights,
    FunctionEvaluation,
    Routing,
    actor_weights,
    adjusted_points,
    assign_mbco_level,
    compliance,
    evaluate,
    evaluate_all,
    process_weights,
    recovery_effort,
    route,
    unadjusted_points,
)
from .factors import erf, factor_sum, trf, urf
from .model import (
    ApplicationActor,
    BctpError,
    BusinessFunctionSpec,
    BusinessProcess,
    Compliance,
    ComplexityClass,
    ConfigError,
    EvaluationError,
    ExerciseCategory,
    FactorFamily,
    FactorId,
    FactorRatingSet,
    Finding,
    HumanActor,
    ImpactLevel,
    MethodConfig,
    ValidationError,
    level_bounds,
)
from .reporting import BiaRecord, PortfolioReport, build_record, build_report, render, validate_portfolio

__version__ = "0.1.0"
