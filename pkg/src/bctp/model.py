"""Domain types shared across the BCTP engine.

Everything here is an immutable value. Structural checks that the portfolio
validator reports as findings (rating ranges, step counts, RTO/MAO ordering)
are *not* enforced at construction time so that malformed inputs can still be
represented and reported; :func:`validate_function` is the strict gate.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, fields, replace
from enum import Enum, IntEnum
from typing import Any, Mapping, Optional


class BctpError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(BctpError, ValueError):
    """Input data violates a structural invariant."""


class ConfigError(BctpError, ValueError):
    """A MethodConfig is internally inconsistent."""


class EvaluationError(BctpError, ArithmeticError):
    """The pipeline hit a degenerate value (e.g. a nonpositive factor)."""


class ComplexityClass(str, Enum):
    SIMPLE = "simple"
    AVERAGE = "average"
    COMPLEX = "complex"

    @classmethod
    def parse(cls, text: str) -> "ComplexityClass":
        # Human actors use "basic responsibility" for the lowest class.
        key = text.strip().lower()
        if key == "basic":
            return cls.SIMPLE
        return cls(key)


class ImpactLevel(IntEnum):
    L1 = 1
    L2 = 2
    L3 = 3
    L4 = 4

    @property
    def mao_hours(self) -> float:
        return _LEVEL_MAO_HOURS[self]

    @property
    def rto_bound_hours(self) -> float:
        # RTO must be strictly below this bound.
        return _LEVEL_MAO_HOURS[self]


_LEVEL_MAO_HOURS = {
    ImpactLevel.L1: 2.0,
    ImpactLevel.L2: 24.0,
    ImpactLevel.L3: 72.0,
    ImpactLevel.L4: 168.0,
}


def level_bounds(level: ImpactLevel) -> tuple[float, float]:
    """Return ``(mao_hours, rto_bound_hours)`` for an impact level."""
    level = ImpactLevel(level)
    return level.mao_hours, level.rto_bound_hours


class ExerciseCategory(str, Enum):
    TABLETOP = "Tabletop"
    MEDIUM = "Medium"
    COMPLEX = "Complex"


class Compliance(str, Enum):
    MEETS_RTO = "MeetsRto"
    MEETS_MAO_ONLY = "MeetsMaoOnly"
    REENGINEER = "Reengineer"
    NOT_ASSESSED = "NotAssessed"


# Table 8: impact level -> exercise category.
EXERCISE_FOR_LEVEL = {
    ImpactLevel.L1: ExerciseCategory.COMPLEX,
    ImpactLevel.L2: ExerciseCategory.COMPLEX,
    ImpactLevel.L3: ExerciseCategory.MEDIUM,
    ImpactLevel.L4: ExerciseCategory.TABLETOP,
}
MBCO_LEVELS = frozenset({ImpactLevel.L1, ImpactLevel.L2})


# --------------------------------------------------------------------------
# Factor catalogs
# --------------------------------------------------------------------------

class FactorFamily(str, Enum):
    TRF = "TRF"
    ERF = "ERF"
    URF = "URF"


FAMILY_SIZES = {FactorFamily.TRF: 13, FactorFamily.ERF: 8, FactorFamily.URF: 6}

FACTOR_DESCRIPTIONS = {
    FactorFamily.TRF: (
        "Application's communication with other systems",
        "Function Type",
        "User's skills",
        "Complex functions",
        "Routine functions",
        "Easy to restore",
        "Easy to process",
        "Installed locally or in remote server",
        "Exists alternative application (i.e. older)",
        "Functional Area",
        "Security features",
        "Utilized by third users",
        "Extreme and special knowledge required",
    ),
    FactorFamily.ERF: (
        "Familiar with Business Recovery procedures",
        "Users' application experience",
        "Users' recovery task knowledge",
        "Leader's capability",
        "Team's motivation",
        "Stable requirements of system's recovery level (Stable MBCO)",
        "Part - time personnel",
        "Customers' needs direct effect",
    ),
    FactorFamily.URF: (
        "Weather conditions",
        "Disaster Type",
        "Timely Information Distribution of Crisis event",
        "Urban conditions",
        "Staff availability",
        "Network availability",
    ),
}

RATING_MIN = 0
RATING_MAX = 5


@dataclass(frozen=True, order=True)
class FactorId:
    family: FactorFamily
    index: int

    def __post_init__(self):
        family = FactorFamily(self.family)
        object.__setattr__(self, "family", family)
        if not 1 <= self.index <= FAMILY_SIZES[family]:
            raise ValidationError(
                f"{family.value} index must be in 1..{FAMILY_SIZES[family]}, got {self.index}"
            )

    @classmethod
    def parse(cls, text: "str | FactorId") -> "FactorId":
        if isinstance(text, FactorId):
            return text
        raw = str(text).strip().upper()
        for family in FactorFamily:
            if raw.startswith(family.value) and raw[len(family.value):].isdigit():
                return cls(family, int(raw[len(family.value):]))
        raise ValidationError(f"unknown factor id {text!r}")

    @property
    def description(self) -> str:
        return FACTOR_DESCRIPTIONS[self.family][self.index - 1]

    def __str__(self) -> str:
        return f"{self.family.value}{self.index}"


def family_ids(family: FactorFamily) -> tuple[str, ...]:
    family = FactorFamily(family)
    return tuple(f"{family.value}{i}" for i in range(1, FAMILY_SIZES[family] + 1))


ALL_FACTOR_IDS = family_ids(FactorFamily.TRF) + family_ids(FactorFamily.ERF) + family_ids(FactorFamily.URF)


@dataclass(frozen=True)
class FactorRatingSet:
    """Ratings keyed by factor id string (``"TRF1"`` .. ``"URF6"``)."""

    ratings: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "ratings", {str(FactorId.parse(k)): v for k, v in self.ratings.items()})

    @classmethod
    def _canonical(cls, ratings: dict) -> "FactorRatingSet":
        # Keys already in canonical "TRF1" form; skips re-parsing on hot paths.
        obj = object.__new__(cls)
        object.__setattr__(obj, "ratings", ratings)
        return obj

    @classmethod
    def uniform(cls, value: int = 0) -> "FactorRatingSet":
        return cls({fid: value for fid in ALL_FACTOR_IDS})

    def __getitem__(self, factor: "str | FactorId") -> int:
        return self.ratings[str(FactorId.parse(factor))]

    def get(self, factor: "str | FactorId", default=None):
        return self.ratings.get(str(FactorId.parse(factor)), default)

    def with_rating(self, factor: "str | FactorId", value: int) -> "FactorRatingSet":
        updated = dict(self.ratings)
        updated[str(FactorId.parse(factor))] = value
        return FactorRatingSet._canonical(updated)

    def missing(self) -> list[str]:
        return [fid for fid in ALL_FACTOR_IDS if fid not in self.ratings]


# --------------------------------------------------------------------------
# Business function inputs
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class HumanActor:
    id: str
    responsibility: ComplexityClass


@dataclass(frozen=True)
class ApplicationActor:
    id: str
    task_complexity: ComplexityClass


@dataclass(frozen=True)
class BusinessProcess:
    id: str
    step_count: int


@dataclass(frozen=True)
class BusinessFunctionSpec:
    id: str
    name: str
    humans: tuple[HumanActor, ...] = ()
    applications: tuple[ApplicationActor, ...] = ()
    processes: tuple[BusinessProcess, ...] = ()
    ratings: FactorRatingSet = field(default_factory=FactorRatingSet.uniform)
    desired_rto_hours: Optional[float] = None
    desired_mao_hours: Optional[float] = None

    def __post_init__(self):
        for name in ("humans", "applications", "processes"):
            object.__setattr__(self, name, tuple(getattr(self, name)))


@dataclass(frozen=True)
class Finding:
    """One validation problem; ``code`` is a stable machine-readable tag."""

    function_id: str
    code: str
    message: str

    def __str__(self) -> str:
        return f"[{self.code}] {self.function_id}: {self.message}"


def function_findings(function: BusinessFunctionSpec) -> list[Finding]:
    """Structural problems of a single function (no evaluation involved)."""
    fid = function.id
    out: list[Finding] = []

    def add(code, message):
        out.append(Finding(fid, code, message))

    if not str(fid).strip():
        add("empty-id", "function id must be non-empty")
    for kind, items in (("human", function.humans), ("application", function.applications),
                        ("process", function.processes)):
        seen = set()
        for item in items:
            if not str(item.id).strip():
                add("empty-id", f"{kind} actor/process id must be non-empty")
            elif item.id in seen:
                add("duplicate-member-id", f"duplicate {kind} id {item.id!r}")
            seen.add(item.id)
    if not function.processes:
        add("no-process", "at least one business process is required")
    for proc in function.processes:
        if isinstance(proc.step_count, bool) or not isinstance(proc.step_count, int) or proc.step_count < 1:
            add("step-count", f"process {proc.id!r} has step_count {proc.step_count!r}; must be an integer >= 1")
    for fid_missing in function.ratings.missing():
        add("missing-factor", f"rating for {fid_missing} is missing")
    for key, value in function.ratings.ratings.items():
        if isinstance(value, bool) or not isinstance(value, int) or not RATING_MIN <= value <= RATING_MAX:
            add("rating-range", f"{key} rating {value!r} outside integer range [0, 5]")
    rto, mao = function.desired_rto_hours, function.desired_mao_hours
    for label, value in (("desired_rto_hours", rto), ("desired_mao_hours", mao)):
        if value is not None and not value > 0:
            add("nonpositive-budget", f"{label} must be positive, got {value!r}")
    if rto is not None and mao is not None and rto >= mao:
        add("rto-mao-order", f"desired RTO {rto} h must be strictly below desired MAO {mao} h")
    return out


def validate_function(function: BusinessFunctionSpec) -> None:
    findings = function_findings(function)
    if findings:
        raise ValidationError("; ".join(str(f) for f in findings))


# --------------------------------------------------------------------------
# Method configuration
# --------------------------------------------------------------------------

# Table 3 / Table 4 weights, reused positionally as TRF / ERF defaults.
TECHNICAL_WEIGHTS = (2.0, 2.0, 1.0, 1.0, 1.0, 0.5, 0.5, 2.0, 1.0, 1.0, 1.0, 1.0, 1.0)
ENVIRONMENTAL_WEIGHTS = (1.5, 0.5, 1.0, 0.5, 1.0, 2.0, -1.0, 2.0)

PROFILES = ("paper-literal", "karner-classic")


def _default_class_weights():
    return {ComplexityClass.SIMPLE: 1.0, ComplexityClass.AVERAGE: 2.0, ComplexityClass.COMPLEX: 3.0}


def _table(family, weights):
    return dict(zip(family_ids(family), weights))


@dataclass(frozen=True)
class MethodConfig:
    class_weights: Mapping[ComplexityClass, float] = field(default_factory=_default_class_weights)
    transaction_bounds: tuple[int, int] = (3, 7)
    trf_coefficients: tuple[float, float] = (0.6, 0.001)
    erf_coefficients: tuple[float, float] = (1.4, -0.03)
    urf_coefficients: tuple[float, float] = (1.0, 0.02)
    trf_weights: Mapping[str, float] = field(default_factory=lambda: _table(FactorFamily.TRF, TECHNICAL_WEIGHTS))
    erf_weights: Mapping[str, float] = field(default_factory=lambda: _table(FactorFamily.ERF, ENVIRONMENTAL_WEIGHTS))
    urf_weights: Mapping[str, float] = field(default_factory=lambda: _table(FactorFamily.URF, (1.0,) * 6))
    theta_mbco: float = 20.0
    theta_34: float = 10.0
    theta_12: float = 25.0
    effort_rate_hours_per_point: float = 0.05
    ucp_hours_per_point: float = 20.0
    full_evaluation: bool = False
    profile_name: str = "paper-literal"

    def __post_init__(self):
        cw = {ComplexityClass.parse(k) if isinstance(k, str) else ComplexityClass(k): float(v)
              for k, v in self.class_weights.items()}
        object.__setattr__(self, "class_weights", cw)
        for name in ("transaction_bounds", "trf_coefficients", "erf_coefficients", "urf_coefficients"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        for name in ("trf_weights", "erf_weights", "urf_weights"):
            try:
                table = {str(FactorId.parse(k)): float(v) for k, v in getattr(self, name).items()}
            except (ValidationError, TypeError, ValueError) as exc:
                raise ConfigError(f"{name}: {exc}") from None
            object.__setattr__(self, name, table)
        self._check()

    def _check(self):
        cw = self.class_weights
        if set(cw) != set(ComplexityClass):
            raise ConfigError("class_weights must define simple, average and complex")
        if not cw[ComplexityClass.SIMPLE] < cw[ComplexityClass.AVERAGE] < cw[ComplexityClass.COMPLEX]:
            raise ConfigError("class_weights must be strictly increasing simple < average < complex")
        lo, hi = self.transaction_bounds
        if not 0 <= lo < hi:
            raise ConfigError(f"transaction_bounds must satisfy 0 <= simple_max < average_max, got {self.transaction_bounds}")
        for name in ("trf_coefficients", "erf_coefficients", "urf_coefficients"):
            if len(getattr(self, name)) != 2:
                raise ConfigError(f"{name} must be an (intercept, slope) pair")
        for family, name in ((FactorFamily.TRF, "trf_weights"), (FactorFamily.ERF, "erf_weights"),
                             (FactorFamily.URF, "urf_weights")):
            table = getattr(self, name)
            expected = set(family_ids(family))
            if set(table) != expected:
                missing = sorted(expected - set(table))
                extra = sorted(set(table) - expected)
                raise ConfigError(f"{name} must cover exactly {family.value}1..; missing {missing}, extra {extra}")
        negative = [k for k, v in self.urf_weights.items() if v < 0]
        if negative:
            raise ConfigError(f"urf_weights must be nonnegative: {', '.join(negative)}")
        if not self.effort_rate_hours_per_point > 0:
            raise ConfigError("effort_rate_hours_per_point must be positive")
        if not self.ucp_hours_per_point > 0:
            raise ConfigError("ucp_hours_per_point must be positive")
        if not self.theta_34 <= self.theta_mbco:
            raise ConfigError("theta_34 must not exceed theta_mbco")

    @classmethod
    def profile(cls, name: str = "paper-literal") -> "MethodConfig":
        if name == "paper-literal":
            return cls()
        if name == "karner-classic":
            return cls(trf_coefficients=(0.6, 0.01), profile_name="karner-classic")
        raise ConfigError(f"unknown profile {name!r}; expected one of {', '.join(PROFILES)}")

    def weight_of(self, cls_: ComplexityClass) -> float:
        return self.class_weights[cls_]

    def weights_for(self, family: FactorFamily) -> Mapping[str, float]:
        return {
            FactorFamily.TRF: self.trf_weights,
            FactorFamily.ERF: self.erf_weights,
            FactorFamily.URF: self.urf_weights,
        }[FactorFamily(family)]

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if f.name == "class_weights":
                value = {k.value: v for k, v in value.items()}
            elif isinstance(value, tuple):
                value = list(value)
            elif isinstance(value, Mapping):
                value = dict(value)
            out[f.name] = value
        return out

    @classmethod
    def from_dict(cls, data: Mapping[str, Any], base: Optional["MethodConfig"] = None) -> "MethodConfig":
        """Overlay ``data`` on ``base`` (defaults when omitted).

        Mapping-valued fields merge key by key, so a file may override a
        single factor weight without restating the whole table.
        """
        base = base or cls()
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown config field(s): {', '.join(unknown)}")
        current = base.to_dict()
        for key, value in data.items():
            if isinstance(current[key], dict) and isinstance(value, Mapping):
                merged = dict(current[key])
                merged.update(value)
                current[key] = merged
            else:
                current[key] = value
        try:
            return cls(**current)
        except (TypeError, ValueError, KeyError) as exc:
            if isinstance(exc, BctpError):
                raise
            raise ConfigError(str(exc)) from exc

    def fingerprint(self) -> str:
        """Stable short hash of the effective configuration."""
        canonical = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]

    def with_overrides(self, **changes) -> "MethodConfig":
        return replace(self, **changes)
