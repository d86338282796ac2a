"""Independent brute-force recomposition of the BCTP pipeline.

Deliberately shares no code with ``bctp.engine`` / ``bctp.factors``: weight
tables, classification bounds and thresholds are restated here independently
so that a regression in the package cannot hide itself.
"""

from __future__ import annotations

import random

from bctp.model import (
    ApplicationActor,
    BusinessFunctionSpec,
    BusinessProcess,
    ComplexityClass,
    FactorRatingSet,
    HumanActor,
)

CLASS_WEIGHT = {"simple": 1, "average": 2, "complex": 3}
TRF_W = [2, 2, 1, 1, 1, 0.5, 0.5, 2, 1, 1, 1, 1, 1]
ERF_W = [1.5, 0.5, 1, 0.5, 1, 2, -1, 2]
URF_W = [1] * 6
LEVEL_HOURS = {"L1": 2, "L2": 24, "L3": 72, "L4": 168}
EXERCISE = {"L1": "Complex", "L2": "Complex", "L3": "Medium", "L4": "Tabletop"}


def steps_weight(steps: int) -> int:
    if steps <= 3:
        return 1
    if steps <= 7:
        return 2
    return 3


def oracle_evaluate(f: BusinessFunctionSpec, full: bool = False, theta_mbco=20, theta_34=10, theta_12=25,
                    rho=0.05, trf_slope=0.001) -> dict:
    r = f.ratings.ratings
    uhw = sum(CLASS_WEIGHT[h.responsibility.value] for h in f.humans)
    uapw = sum(CLASS_WEIGHT[a.task_complexity.value] for a in f.applications)
    ubpw = sum(steps_weight(p.step_count) for p in f.processes)
    ubfrp = uhw + uapw + ubpw
    in_mbco = ubfrp >= theta_mbco
    out = {"uhw": uhw, "uapw": uapw, "tuaw": uhw + uapw, "ubpw": ubpw, "ubfrp": ubfrp, "in_mbco": in_mbco,
           "trf": None, "erf": None, "urf": None, "abfrp": None, "rte_hours": None}
    level = None if in_mbco else ("L3" if ubfrp >= theta_34 else "L4")
    if in_mbco or full:
        t = 0.6 + trf_slope * sum(w * r[f"TRF{i + 1}"] for i, w in enumerate(TRF_W))
        e = 1.4 - 0.03 * sum(w * r[f"ERF{i + 1}"] for i, w in enumerate(ERF_W))
        u = 1.0 + 0.02 * sum(w * r[f"URF{i + 1}"] for i, w in enumerate(URF_W))
        abfrp = ubfrp * t * e * u
        rte = rho * abfrp
        if in_mbco:
            level = "L1" if abfrp >= theta_12 else "L2"
        rto = f.desired_rto_hours if f.desired_rto_hours is not None else LEVEL_HOURS[level]
        mao = f.desired_mao_hours if f.desired_mao_hours is not None else LEVEL_HOURS[level]
        if rte <= rto:
            status = "MeetsRto"
        elif rte <= mao:
            status = "MeetsMaoOnly"
        else:
            status = "Reengineer"
        out.update(trf=t, erf=e, urf=u, abfrp=abfrp, rte_hours=rte)
    else:
        status = "NotAssessed"
    out.update(level=level, exercise=EXERCISE[level], compliance=status)
    return out


_CLASSES = list(ComplexityClass)


def random_ratings(rng: random.Random, urf_zero: bool = False) -> FactorRatingSet:
    ratings = {}
    for fam, n in (("TRF", 13), ("ERF", 8), ("URF", 6)):
        for i in range(1, n + 1):
            ratings[f"{fam}{i}"] = 0 if (urf_zero and fam == "URF") else rng.randint(0, 5)
    return FactorRatingSet(ratings)


def random_function(rng: random.Random, idx: int = 0, max_actors: int = 10, max_processes: int = 10,
                    max_steps: int = 20, ratings: FactorRatingSet | None = None) -> BusinessFunctionSpec:
    """Random valid function: 0..max_actors of each actor type, 1..max_processes processes."""
    humans = [HumanActor(f"h{i}", rng.choice(_CLASSES)) for i in range(rng.randint(0, max_actors))]
    apps = [ApplicationActor(f"a{i}", rng.choice(_CLASSES)) for i in range(rng.randint(0, max_actors))]
    procs = [BusinessProcess(f"p{i}", rng.randint(1, max_steps)) for i in range(rng.randint(1, max_processes))]
    return BusinessFunctionSpec(
        id=f"F{idx:04d}", name=f"function {idx}", humans=tuple(humans), applications=tuple(apps),
        processes=tuple(procs), ratings=ratings if ratings is not None else random_ratings(rng),
    )
