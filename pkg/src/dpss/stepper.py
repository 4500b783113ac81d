"""Advancing an ensemble through continuous time, one event at a time."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Optional

from dpss.ensemble import ZERO, Ensemble, Scalar, UavState, scalar, wf_ensemble
from dpss.errors import FuelExhausted, SimulationFault
from dpss.events import always_smallest_min_time_to_impending_impact, flip_on_events

FUEL_PER_UNIT = 10_000


@dataclass(frozen=True)
class StepBudget:
    """Upper bound on ``next_step`` iterations for one stepping call."""

    fuel: int

    def __post_init__(self):
        if self.fuel < 1:
            raise ValueError("fuel must be at least 1")

    @classmethod
    def default(cls, dt, n: int) -> "StepBudget":
        return cls(FUEL_PER_UNIT * n * max(1, int(math.ceil(scalar(dt)))))


class StepOutcome(NamedTuple):
    remaining: Scalar
    state: Ensemble


def update_location_all(dt, ens: Ensemble) -> Ensemble:
    """Move every UAV ``direction * S * dt``; a malformed result is a fault, never clamped."""
    dt = scalar(dt)
    if dt < 0:
        raise ValueError(f"negative time increment {dt}")
    if dt == 0:
        return ens
    dx = ens.seg * dt
    uavs = tuple(UavState(u.id, u.location + u.direction * dx, u.direction) for u in ens.uavs)
    out = Ensemble(ens.perimeter, ens.n, uavs)
    if not wf_ensemble(out):
        raise SimulationFault(f"advancing by {dt} overshot an event: {out!r}")
    return out


def _gap_after_flip(ens: Ensemble) -> tuple[Scalar, Ensemble]:
    """Flip, then time to the next event; zero means the flip left events behind."""
    quiet = flip_on_events(ens)
    gap = always_smallest_min_time_to_impending_impact(quiet)
    if gap <= 0:
        raise SimulationFault(f"no progress: state still has events right after flipping: {quiet!r}")
    return gap, quiet


def next_step(dt, ens: Ensemble) -> StepOutcome:
    dt = scalar(dt)
    if dt <= 0:
        raise ValueError(f"next_step needs a positive increment, got {dt}")
    gap, quiet = _gap_after_flip(ens)
    step = min(dt, gap)
    return StepOutcome(dt - step, update_location_all(step, quiet))


def step_time(dt, ens: Ensemble, budget: Optional[StepBudget] = None) -> Ensemble:
    """Advance ``ens`` by ``dt``.

    A zero increment returns ``ens`` untouched, pending flips included, so a
    state that lands exactly on an event instant comes back pre-flip.
    """
    dt = scalar(dt)
    if dt < 0:
        raise ValueError(f"negative time increment {dt}")
    if budget is None:
        budget = StepBudget.default(dt, ens.n)
    fuel = budget.fuel
    remaining = dt
    while remaining != 0:
        if fuel == 0:
            raise FuelExhausted(budget.fuel, remaining)
        fuel -= 1
        remaining, ens = next_step(remaining, ens)
    return ens


def step_to_next_event(ens: Ensemble) -> tuple[Scalar, Ensemble]:
    """Return ``(t, state)`` where ``state`` is the pre-flip ensemble at the next event."""
    t, quiet = _gap_after_flip(ens)
    return t, update_location_all(t, quiet)


class Landing(NamedTuple):
    time: Scalar
    state: Ensemble
    kind: str  # "initial", "event", "checkpoint" or "final"


def iter_landings(
    ens: Ensemble, horizon, budget: Optional[StepBudget] = None, stops=()
) -> Iterator[Landing]:
    """Yield the initial state, the pre-flip state at every event up to ``horizon``,
    a state at each time in ``stops`` that falls between events, and the
    mid-flight state at ``horizon`` if that is not itself an event instant.

    The last state yielded equals ``step_time(horizon, ens)``.
    """
    horizon = scalar(horizon)
    if budget is None:
        budget = StepBudget.default(horizon, ens.n)
    pending = sorted({scalar(s) for s in stops if 0 < scalar(s) < horizon})
    fuel = budget.fuel
    t = ZERO
    yield Landing(t, ens, "initial")
    while t < horizon:
        if fuel == 0:
            raise FuelExhausted(budget.fuel, horizon - t)
        fuel -= 1
        gap, quiet = _gap_after_flip(ens)
        while pending and pending[0] <= t:
            pending.pop(0)
        if pending and t + gap > pending[0]:
            ens = update_location_all(pending[0] - t, quiet)
            t = pending.pop(0)
            yield Landing(t, ens, "checkpoint")
            continue
        if t + gap > horizon:
            ens = update_location_all(horizon - t, quiet)
            t = horizon
            yield Landing(t, ens, "final")
            return
        ens = update_location_all(gap, quiet)
        t = t + gap
        yield Landing(t, ens, "event")
