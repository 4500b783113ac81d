"""Have-met and synchronized predicates, convergence, and runtime monitors.

The left-hand predicates are transcribed clause by clause; the right-hand
ones are the left ones read on the mirrored ensemble.  Monitors only look
at flip-quiescent states, since at an un-flipped event instant a UAV's
heading is ambiguous.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from dpss.ensemble import Ensemble, Scalar, average, check_index, format_rational, reflect
from dpss.events import event_for_uav, flip_on_events
from dpss.stepper import StepBudget, iter_landings, step_time

PREDICATES = ("have_met_left", "have_met_right", "left_synchronized", "right_synchronized")


def have_met_left_p(i: int, ens: Ensemble) -> bool:
    check_index(i, ens)
    return _have_met_left(i, ens)


def _have_met_left(i, ens):
    if not i < ens.n - 1:
        return True
    me, right = ens.uavs[i], ens.uavs[i + 1]
    if not me.direction < 0:
        return True
    loc = me.location
    lb, rb = i * ens.seg, (i + 1) * ens.seg
    if rb < loc:
        if not (right.direction < 0 and loc == right.location):
            return False
    if loc <= rb and lb < loc:
        if loc < rb and not 0 < right.direction:
            return False
        if average(loc, right.location) != rb:
            return False
    return True


def left_synchronized_p(j: int, ens: Ensemble) -> bool:
    check_index(j, ens)
    return _left_synchronized(j, ens)


def _left_synchronized(j, ens):
    if not 0 < j:
        return True
    me, left = ens.uavs[j], ens.uavs[j - 1]
    if not j * ens.seg <= average(left.location, me.location):
        return False
    if me.direction < 0 and me.location != left.location:
        return 0 < left.direction
    return True


def have_met_right_p(i: int, ens: Ensemble) -> bool:
    check_index(i, ens)
    return _have_met_left(ens.n - 1 - i, reflect(ens))


def right_synchronized_p(j: int, ens: Ensemble) -> bool:
    check_index(j, ens)
    return _left_synchronized(ens.n - 1 - j, reflect(ens))


def predicate_table(ens: Ensemble) -> dict[str, list[bool]]:
    """All four predicates for every UAV, reflecting the ensemble once."""
    n = ens.n
    mirror = reflect(ens)
    return {
        "have_met_left": [_have_met_left(i, ens) for i in range(n)],
        "have_met_right": [_have_met_left(n - 1 - i, mirror) for i in range(n)],
        "left_synchronized": [_left_synchronized(j, ens) for j in range(n)],
        "right_synchronized": [_left_synchronized(n - 1 - j, mirror) for j in range(n)],
    }


def all_have_met_p(ens: Ensemble) -> bool:
    table = predicate_table(ens)
    return all(table["have_met_left"]) and all(table["have_met_right"])


def all_synchronized_p(ens: Ensemble) -> bool:
    table = predicate_table(ens)
    return all(table["left_synchronized"]) and all(table["right_synchronized"])


def segment_containment_p(i: int, ens: Ensemble) -> bool:
    check_index(i, ens)
    return i * ens.seg <= ens.uavs[i].location <= (i + 1) * ens.seg


def location_convergence_p(ens: Ensemble, budget: Optional[StepBudget] = None) -> bool:
    """Every UAV is back at the same spot two time units later."""
    later = step_time(2, ens, budget)
    return later.locations == ens.locations


@dataclass
class Violation:
    time: Scalar
    uav: int
    predicate: str

    def to_json(self):
        return {"time": format_rational(self.time), "uav": self.uav, "predicate": self.predicate}


def _opt(t):
    return None if t is None else format_rational(t)


@dataclass
class MonitorReport:
    n: int
    horizon: Scalar
    first_event: list = field(default_factory=list)
    first_impact: list = field(default_factory=list)
    first_true: dict = field(default_factory=dict)
    all_have_met_time: Optional[Scalar] = None
    all_synchronized_time: Optional[Scalar] = None
    initial: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)
    # failures of "a UAV has met once it has had an event", under two readings
    event_have_met_failures: dict = field(default_factory=dict)
    # latest quiescent time at which the conjunction failed
    all_have_met_last_false: Optional[Scalar] = None
    all_synchronized_last_false: Optional[Scalar] = None
    landings: int = 0
    max_steps_per_unit: int = 0

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "horizon": format_rational(self.horizon),
            "first_event_time": [_opt(t) for t in self.first_event],
            "first_impact_time": [_opt(t) for t in self.first_impact],
            "predicates_first_true": {k: [_opt(t) for t in v] for k, v in self.first_true.items()},
            "initial_predicates": self.initial,
            "all_have_met_time": _opt(self.all_have_met_time),
            "all_synchronized_time": _opt(self.all_synchronized_time),
            "all_have_met_last_false": _opt(self.all_have_met_last_false),
            "all_synchronized_last_false": _opt(self.all_synchronized_last_false),
            "violations": [v.to_json() for v in self.violations],
            "event_have_met_failures": {
                k: [{"time": format_rational(t), "uav": i} for t, i in v]
                for k, v in self.event_have_met_failures.items()
            },
            "landings": self.landings,
            "max_steps_per_unit": self.max_steps_per_unit,
        }


def run_monitors(
    ens: Ensemble,
    horizon,
    budget: Optional[StepBudget] = None,
    predicates=PREDICATES,
) -> MonitorReport:
    """Simulate event to event up to ``horizon`` and watch the predicate lemma chain.

    Recorded per UAV: first own flip, first impact (own flip or co-located
    with a flipping neighbour), and the first time each predicate holds.
    A violation is logged when have-met turns false between consecutive
    quiescent states, or when a synchronized predicate turns false although
    every UAV had met and the neighbour it depends on was synchronized too.
    """
    n = ens.n
    report = MonitorReport(n=n, horizon=horizon)
    report.first_event = [None] * n
    report.first_impact = [None] * n
    report.first_true = {p: [None] * n for p in predicates}
    report.event_have_met_failures = {"own-flip": [], "participation": []}
    steps_in_unit: dict[int, int] = {}
    prev = None

    stops = (n, 2 * n - 1)
    for landing in iter_landings(ens, horizon, budget, stops=stops):
        t, state = landing.time, landing.state
        report.landings += 1
        if landing.kind in ("event", "final"):
            unit = int(math.ceil(t)) - 1
            steps_in_unit[unit] = steps_in_unit.get(unit, 0) + 1
        flags = [event_for_uav(i, state) for i in range(n)]
        quiet = flip_on_events(state)
        table = predicate_table(quiet)
        if landing.kind == "initial":
            report.initial = {p: table[p] for p in predicates}

        for i in range(n):
            impact = flags[i] or (
                (i > 0 and flags[i - 1] and state.uavs[i - 1].location == state.uavs[i].location)
                or (i < n - 1 and flags[i + 1] and state.uavs[i + 1].location == state.uavs[i].location)
            )
            if flags[i] and report.first_event[i] is None:
                report.first_event[i] = t
            if impact and report.first_impact[i] is None:
                report.first_impact[i] = t
            met = table["have_met_left"][i] and table["have_met_right"][i]
            if flags[i] and not met:
                report.event_have_met_failures["own-flip"].append((t, i))
            elif impact and not met:
                report.event_have_met_failures["participation"].append((t, i))
            for p in predicates:
                if table[p][i] and report.first_true[p][i] is None:
                    report.first_true[p][i] = t

        all_met = all(table["have_met_left"]) and all(table["have_met_right"])
        if not all_met:
            report.all_have_met_last_false = t
        elif report.all_have_met_time is None:
            report.all_have_met_time = t
        if not (all(table["left_synchronized"]) and all(table["right_synchronized"])):
            report.all_synchronized_last_false = t
        elif report.all_synchronized_time is None:
            report.all_synchronized_time = t

        if prev is not None:
            report.violations.extend(_invariance_breaches(t, prev, table, predicates))
        prev = table

    report.max_steps_per_unit = max(steps_in_unit.values(), default=0)
    return report


def _invariance_breaches(t, before, after, predicates):
    # Synchronization only persists while the neighbour it leans on (left
    # neighbour for the left variant) is synchronized as well; UAV 0's left
    # variant and UAV N-1's right variant are vacuous, which seeds the chain.
    out = []
    for side, lean in (("left", -1), ("right", 1)):
        met = f"have_met_{side}"
        sync = f"{side}_synchronized"
        all_met_before = all(before[met])
        n = len(after[met])
        for i in range(n):
            if met in predicates and before[met][i] and not after[met][i]:
                out.append(Violation(t, i, met))
            if sync not in predicates or not (all_met_before and before[sync][i]):
                continue
            k = i + lean
            if 0 <= k < n and not before[sync][k]:
                continue
            if not after[sync][i]:
                out.append(Violation(t, i, sync))
    return out
