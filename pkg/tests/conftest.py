from __future__ import annotations

import contextlib
from pathlib import Path

import pytest

from bctp.model import (
    ApplicationActor,
    BusinessFunctionSpec,
    BusinessProcess,
    ComplexityClass,
    FactorRatingSet,
    HumanActor,
    MethodConfig,
)

DATA = Path(__file__).parent / "data"

S, A, C = ComplexityClass.SIMPLE, ComplexityClass.AVERAGE, ComplexityClass.COMPLEX

_acceptance_lines: list[str] = []


def make_function(fid="F1", humans=(), apps=(), steps=(1,), ratings=None, rto=None, mao=None, name=None):
    return BusinessFunctionSpec(
        id=fid,
        name=name or f"{fid} function",
        humans=tuple(HumanActor(f"h{i}", c) for i, c in enumerate(humans)),
        applications=tuple(ApplicationActor(f"a{i}", c) for i, c in enumerate(apps)),
        processes=tuple(BusinessProcess(f"p{i}", n) for i, n in enumerate(steps)),
        ratings=ratings if ratings is not None else FactorRatingSet.uniform(0),
        desired_rto_hours=rto,
        desired_mao_hours=mao,
    )


@pytest.fixture
def cfg():
    return MethodConfig()


@pytest.fixture
def desk_function():
    """humans [Basic, Complex], apps [Average], steps [3, 4, 8]: ubfrp 12."""
    return make_function("DESK", humans=(S, C), apps=(A,), steps=(3, 4, 8))


@pytest.fixture
def mbco_function():
    """Desk function plus five complex applications: ubfrp 27, in the MBCO."""
    return make_function("MBCO", humans=(S, C), apps=(A,) + (C,) * 5, steps=(3, 4, 8))


@pytest.fixture
def criterion(request):
    """Context manager that records a PASS/FAIL line for the terminal summary."""

    @contextlib.contextmanager
    def record(label: str):
        try:
            yield
        except BaseException:
            _acceptance_lines.append(f"FAIL  {label}")
            raise
        _acceptance_lines.append(f"PASS  {label}")

    return record


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
