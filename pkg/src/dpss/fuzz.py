"""Seeded property campaigns over random well-formed ensembles."""

from __future__ import annotations

import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

from gmpy2 import mpq

from dpss import events
from dpss.ensemble import Ensemble, reflect, wf_ensemble
from dpss.errors import FuelExhausted, SimulationFault
from dpss.invariants import location_convergence_p
from dpss.oracle import GeneratorConfig, enumerate_events_small, random_wf_ensemble, triangle_trajectory
from dpss.scenario import Scenario
from dpss.stepper import iter_landings, step_time

PROPERTIES = (
    "wf-preservation",
    "composition",
    "reflection",
    "quiescence",
    "existence",
    "convergence",
    "oracle",
)


@dataclass
class CaseResult:
    seed: int
    scenario: dict
    failed: list = field(default_factory=list)
    detail: str = ""


def _random_time(rng, limit):
    q = rng.randint(1, 64)
    return mpq(rng.randint(0, limit * q), q)


def engine_event_sequence(ens: Ensemble, horizon):
    """``(time, uav, location)`` for every flip the engine performs up to ``horizon``."""
    out = []
    for landing in iter_landings(ens, horizon):
        state = landing.state
        for i in range(state.n):
            if events.event_for_uav(i, state):
                out.append((landing.time, i, state.uavs[i].location))
    return out


def _check(name, ens, rng):
    n = ens.n
    if name == "wf-preservation":
        return wf_ensemble(step_time(_random_time(rng, 2 * n), ens))
    if name == "composition":
        a, b = _random_time(rng, n), _random_time(rng, n)
        return step_time(b, step_time(a, ens)) == step_time(a + b, ens)
    if name == "reflection":
        dt = _random_time(rng, 2 * n)
        return reflect(step_time(dt, ens)) == step_time(dt, reflect(ens))
    if name == "quiescence":
        later = step_time(_random_time(rng, n), ens)
        return all(
            not any(events.events(events.flip_on_events(s))) for s in (ens, later)
        )
    if name == "existence":
        return all(
            any(events.impending_impact_event_for_uav(i, s) for i in range(n))
            for s in (ens, events.flip_on_events(ens))
        )
    if name == "convergence":
        return location_convergence_p(step_time(2 * n - 1, ens))
    if name == "oracle":
        if n > 3:
            return True
        horizon = 2 * n + 2
        if engine_event_sequence(ens, horizon) != enumerate_events_small(ens, horizon):
            return False
        if n == 1:
            t = _random_time(rng, 4)
            u = step_time(t, ens).uavs[0]
            first = ens.uavs[0]
            return (u.location, u.direction) == triangle_trajectory(
                first.location, first.direction, t, ens.perimeter
            )
        return True
    raise ValueError(name)


def run_case(cfg: GeneratorConfig) -> CaseResult:
    ens = random_wf_ensemble(cfg)
    result = CaseResult(cfg.seed, Scenario.from_ensemble(ens).to_json())
    rng = random.Random(cfg.seed ^ 0x5EED)
    for name in PROPERTIES:
        try:
            ok = _check(name, ens, rng)
        except FuelExhausted as exc:
            ok, result.detail = False, f"{name}: {exc}"
        except (SimulationFault, RuntimeError) as exc:
            ok, result.detail = False, f"{name}: {type(exc).__name__}: {exc}"
        if not ok:
            result.failed.append(name)
    return result


def case_seeds(seed: int, cases: int) -> list[int]:
    rng = random.Random(seed)
    return [rng.getrandbits(64) for _ in range(cases)]


def run_campaign(cfg: GeneratorConfig, cases: int, workers: int = 1) -> dict:
    """Run ``cases`` seeded cases; results are aggregated in seed order whatever ``workers`` is."""
    configs = [replace(cfg, seed=s) for s in case_seeds(cfg.seed, cases)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_case, configs, chunksize=8))
    else:
        results = [run_case(c) for c in configs]
    fails = Counter()
    first = None
    for r in results:
        fails.update(r.failed)
        if r.failed and first is None:
            first = r
    summary = {
        "command": "fuzz",
        "cases": cases,
        "seed": cfg.seed,
        "failing_cases": sum(1 for r in results if r.failed),
        "failures_by_property": {p: fails.get(p, 0) for p in PROPERTIES},
        "first_counterexample": None,
    }
    if first is not None:
        summary["first_counterexample"] = {
            "seed": first.seed,
            "failed": first.failed,
            "detail": first.detail,
            "scenario": first.scenario,
        }
    return summary
