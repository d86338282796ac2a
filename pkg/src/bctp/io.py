"""JSON readers for portfolio, config, range and UCP project files.

Parse errors carry the JSON path of the offending value, e.g.
``functions[1].humans[0].responsibility``. Values that are well-typed but
out of range (a rating of 7, a zero-step process) are *not* parse errors:
they load fine and surface later as validation findings.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any, Mapping, Optional

from .model import (
    ALL_FACTOR_IDS,
    ApplicationActor,
    BctpError,
    BusinessFunctionSpec,
    BusinessProcess,
    ComplexityClass,
    FactorRatingSet,
    HumanActor,
    MethodConfig,
    PROFILES,
)
from .ucp import ENVIRONMENTAL_FACTORS, TECHNICAL_FACTORS, UcpActor, UcpRatings, UseCase


class ParseError(BctpError, ValueError):
    def __init__(self, message: str, path: str = "", source: Optional[str] = None):
        self.path = path
        self.source = source
        self.detail = message
        super().__init__(self._format())

    def _format(self) -> str:
        where = ":".join(p for p in (self.source, self.path or "<root>") if p)
        return f"{where}: {self.detail}"

    def with_source(self, source: str) -> "ParseError":
        return ParseError(self.detail, self.path, source)


def _join(path: str, key) -> str:
    if isinstance(key, int):
        return f"{path}[{key}]"
    return f"{path}.{key}" if path else str(key)


def _expect(value, kind, path, what):
    if kind is float:
        ok = isinstance(value, (int, float)) and not isinstance(value, bool)
    elif kind is int:
        ok = isinstance(value, int) and not isinstance(value, bool)
    else:
        ok = isinstance(value, kind)
    if not ok:
        raise ParseError(f"expected {what}, got {type(value).__name__}", path)
    return value


def _field(obj: Mapping, key: str, path: str, kind, what: str, required: bool = True, default=None):
    if key not in obj:
        if required:
            raise ParseError(f"missing required field {key!r}", path)
        return default
    return _expect(obj[key], kind, _join(path, key), what)


def _check_keys(obj: Mapping, allowed: set, path: str) -> None:
    extra = sorted(set(obj) - allowed)
    if extra:
        raise ParseError(f"unknown field {extra[0]!r}", _join(path, extra[0]))


def _complexity(value, path) -> ComplexityClass:
    _expect(value, str, path, "a complexity class string")
    try:
        return ComplexityClass.parse(value)
    except ValueError:
        raise ParseError(f"unknown complexity class {value!r}; expected simple/basic, average or complex",
                         path) from None


def _ratings(obj, path) -> FactorRatingSet:
    _expect(obj, dict, path, "an object of factor ratings")
    out = {}
    for key, value in obj.items():
        canonical = str(key).strip().upper()
        if canonical not in ALL_FACTOR_IDS:
            raise ParseError(f"unknown factor id {key!r}", _join(path, key))
        out[canonical] = _expect(value, int, _join(path, key), "an integer rating")
    return FactorRatingSet(out)


_FUNCTION_KEYS = {"id", "name", "humans", "applications", "processes", "ratings",
                  "desired_rto_hours", "desired_mao_hours"}


def function_from_dict(obj: Any, path: str = "") -> BusinessFunctionSpec:
    _expect(obj, dict, path, "a business function object")
    _check_keys(obj, _FUNCTION_KEYS, path)
    fid = _field(obj, "id", path, str, "a string id")
    name = _field(obj, "name", path, str, "a string name", required=False, default=fid)

    humans = []
    for i, h in enumerate(_field(obj, "humans", path, list, "a list", required=False, default=[])):
        hp = _join(_join(path, "humans"), i)
        _expect(h, dict, hp, "a human actor object")
        _check_keys(h, {"id", "responsibility"}, hp)
        humans.append(HumanActor(
            _field(h, "id", hp, str, "a string id"),
            _complexity(_field(h, "responsibility", hp, str, "a string"), _join(hp, "responsibility")),
        ))
    apps = []
    for i, a in enumerate(_field(obj, "applications", path, list, "a list", required=False, default=[])):
        ap = _join(_join(path, "applications"), i)
        _expect(a, dict, ap, "an application actor object")
        _check_keys(a, {"id", "task_complexity"}, ap)
        apps.append(ApplicationActor(
            _field(a, "id", ap, str, "a string id"),
            _complexity(_field(a, "task_complexity", ap, str, "a string"), _join(ap, "task_complexity")),
        ))
    procs = []
    for i, p in enumerate(_field(obj, "processes", path, list, "a list")):
        pp = _join(_join(path, "processes"), i)
        _expect(p, dict, pp, "a business process object")
        _check_keys(p, {"id", "steps"}, pp)
        procs.append(BusinessProcess(_field(p, "id", pp, str, "a string id"),
                                     _field(p, "steps", pp, int, "an integer step count")))
    ratings = _ratings(_field(obj, "ratings", path, dict, "an object"), _join(path, "ratings"))
    rto = _field(obj, "desired_rto_hours", path, (int, float, type(None)), "a number", required=False)
    mao = _field(obj, "desired_mao_hours", path, (int, float, type(None)), "a number", required=False)
    for key, value in (("desired_rto_hours", rto), ("desired_mao_hours", mao)):
        if isinstance(value, bool):
            raise ParseError("expected a number, got bool", _join(path, key))
    return BusinessFunctionSpec(
        id=fid, name=name, humans=tuple(humans), applications=tuple(apps), processes=tuple(procs),
        ratings=ratings,
        desired_rto_hours=None if rto is None else float(rto),
        desired_mao_hours=None if mao is None else float(mao),
    )


def function_to_dict(function: BusinessFunctionSpec) -> dict[str, Any]:
    out: dict[str, Any] = {
        "id": function.id,
        "name": function.name,
        "humans": [{"id": h.id, "responsibility": h.responsibility.value} for h in function.humans],
        "applications": [{"id": a.id, "task_complexity": a.task_complexity.value} for a in function.applications],
        "processes": [{"id": p.id, "steps": p.step_count} for p in function.processes],
        "ratings": dict(function.ratings.ratings),
    }
    if function.desired_rto_hours is not None:
        out["desired_rto_hours"] = function.desired_rto_hours
    if function.desired_mao_hours is not None:
        out["desired_mao_hours"] = function.desired_mao_hours
    return out


@dataclass(frozen=True)
class PortfolioFile:
    functions: tuple[BusinessFunctionSpec, ...]
    config_overrides: Mapping[str, Any]


_CONFIG_KEYS = {f.name for f in fields(MethodConfig)}


def _config_overrides(obj: Any, path: str) -> dict[str, Any]:
    _expect(obj, dict, path, "a config object")
    # Value checks wait until all layers are merged (see effective_config).
    _check_keys(obj, _CONFIG_KEYS | {"profile"}, path)
    if "profile" in obj and obj["profile"] not in PROFILES:
        raise ParseError(f"unknown profile {obj['profile']!r}", _join(path, "profile"))
    return dict(obj)


def portfolio_from_dict(obj: Any) -> PortfolioFile:
    _expect(obj, dict, "", "a portfolio object")
    _check_keys(obj, {"config", "functions"}, "")
    overrides = _config_overrides(obj["config"], "config") if "config" in obj else {}
    raw = _field(obj, "functions", "", list, "a list of functions")
    return PortfolioFile(tuple(function_from_dict(f, _join("functions", i)) for i, f in enumerate(raw)),
                         overrides)


def portfolio_to_dict(portfolio: PortfolioFile) -> dict[str, Any]:
    out: dict[str, Any] = {}
    if portfolio.config_overrides:
        out["config"] = dict(portfolio.config_overrides)
    out["functions"] = [function_to_dict(f) for f in portfolio.functions]
    return out


def _load_json(path: "str | Path") -> Any:
    path = str(path)
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc.strerror}", "", path) from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}", "", path) from None


def _with_source(fn, data, source):
    try:
        return fn(data)
    except ParseError as exc:
        raise exc.with_source(source) from None


def load_portfolio(path: "str | Path") -> PortfolioFile:
    return _with_source(portfolio_from_dict, _load_json(path), str(path))


def load_config_overrides(path: "str | Path") -> dict[str, Any]:
    return _with_source(lambda d: _config_overrides(d, ""), _load_json(path), str(path))


def effective_config(file_overrides: Optional[Mapping[str, Any]] = None,
                     portfolio_overrides: Optional[Mapping[str, Any]] = None,
                     profile_flag: Optional[str] = None,
                     full_evaluation: Optional[bool] = None) -> MethodConfig:
    """Layer defaults <- config file <- portfolio overrides <- command-line flags.

    A ``profile`` key inside either file picks the base profile; the
    ``--profile`` flag, being last, re-applies its coefficients on top.
    """
    file_overrides = dict(file_overrides or {})
    portfolio_overrides = dict(portfolio_overrides or {})
    base_name = "paper-literal"
    for layer in (file_overrides, portfolio_overrides):
        base_name = layer.pop("profile", base_name)
    merged = dict(file_overrides)
    for key, value in portfolio_overrides.items():
        if isinstance(merged.get(key), Mapping) and isinstance(value, Mapping):
            merged[key] = {**merged[key], **value}
        else:
            merged[key] = value
    # Values are checked once, after every layer is in place.
    cfg = MethodConfig.from_dict(merged, base=MethodConfig.profile(base_name))
    if profile_flag is not None:
        chosen = MethodConfig.profile(profile_flag)
        cfg = cfg.with_overrides(trf_coefficients=chosen.trf_coefficients, profile_name=chosen.profile_name)
    if full_evaluation:
        cfg = cfg.with_overrides(full_evaluation=True)
    return cfg


def load_ranges(path: "str | Path") -> dict[str, tuple[int, int]]:
    """Read URF ranges, either bare (``{"URF1": [0, 5]}``) or under ``urf_ranges``."""
    def parse(obj):
        _expect(obj, dict, "", "an object mapping URF ids to [low, high]")
        prefix = ""
        if "urf_ranges" in obj:
            _check_keys(obj, {"urf_ranges"}, "")
            prefix = "urf_ranges"
            obj = _expect(obj["urf_ranges"], dict, prefix, "an object")
        out = {}
        for key, bounds in obj.items():
            p = _join(prefix, key)
            _expect(bounds, list, p, "a [low, high] list")
            if len(bounds) != 2:
                raise ParseError("expected exactly two integers", p)
            out[key] = (_expect(bounds[0], int, _join(p, 0), "an integer"),
                        _expect(bounds[1], int, _join(p, 1), "an integer"))
        return out
    return _with_source(parse, _load_json(path), str(path))


@dataclass(frozen=True)
class UcpProject:
    actors: tuple[UcpActor, ...]
    use_cases: tuple[UseCase, ...]
    ratings: UcpRatings


def ucp_project_from_dict(obj: Any) -> UcpProject:
    _expect(obj, dict, "", "a UCP project object")
    _check_keys(obj, {"actors", "use_cases", "technical", "environmental"}, "")
    actors = []
    for i, a in enumerate(_field(obj, "actors", "", list, "a list", required=False, default=[])):
        ap = _join("actors", i)
        _expect(a, dict, ap, "an actor object")
        _check_keys(a, {"id", "class"}, ap)
        actors.append(UcpActor(_field(a, "id", ap, str, "a string id"),
                               _complexity(_field(a, "class", ap, str, "a string"), _join(ap, "class"))))
    use_cases = []
    for i, u in enumerate(_field(obj, "use_cases", "", list, "a list", required=False, default=[])):
        up = _join("use_cases", i)
        _expect(u, dict, up, "a use case object")
        _check_keys(u, {"id", "transactions"}, up)
        count = _field(u, "transactions", up, int, "an integer transaction count")
        if count < 0:
            raise ParseError("transaction count must be nonnegative", _join(up, "transactions"))
        use_cases.append(UseCase(_field(u, "id", up, str, "a string id"), count))
    tables = {}
    for key, catalog in (("technical", TECHNICAL_FACTORS), ("environmental", ENVIRONMENTAL_FACTORS)):
        raw = _field(obj, key, "", dict, "an object of factor ratings")
        table = {}
        for name in catalog:
            if name not in raw:
                raise ParseError(f"missing rating for factor {name}", key)
            value = _expect(raw[name], int, _join(key, name), "an integer rating")
            if not 0 <= value <= 5:
                raise ParseError("rating must be in [0, 5]", _join(key, name))
            table[name] = value
        extra = sorted(set(raw) - set(catalog))
        if extra:
            raise ParseError(f"unknown factor id {extra[0]!r}", _join(key, extra[0]))
        tables[key] = table
    return UcpProject(tuple(actors), tuple(use_cases), UcpRatings(tables["technical"], tables["environmental"]))


def load_ucp_project(path: "str | Path") -> UcpProject:
    return _with_source(ucp_project_from_dict, _load_json(path), str(path))
