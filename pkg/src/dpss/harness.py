"""What the ``simulate``, ``converge`` and ``check`` commands compute."""

from __future__ import annotations

from typing import Optional

from dpss.ensemble import Ensemble, format_rational, scalar
from dpss.events import event_for_uav, flip_on_events
from dpss.invariants import PREDICATES, location_convergence_p, run_monitors
from dpss.scenario import TraceRecord
from dpss.stepper import StepBudget, iter_landings, step_time

SPOT_CHECKS = (4, 6)


def _rows(t, ens: Ensemble, flags):
    return [TraceRecord(t, u.id, u.location, u.direction, int(f)) for u, f in zip(ens.uavs, flags)]


def build_trace(
    ens: Ensemble, duration, budget: Optional[StepBudget] = None, sample=None
) -> list[TraceRecord]:
    """Event-aligned trace: initial rows, pre- and post-flip rows at each event, final rows.

    At the final instant only the pre-flip rows appear, matching what
    ``step_time`` returns.  With ``sample`` the rows are instead taken every
    ``sample`` time units (plus the final instant).
    """
    duration = scalar(duration)
    if sample is not None:
        return _sampled_trace(ens, duration, scalar(sample), budget)
    rows = []
    for landing in iter_landings(ens, duration, budget):
        t, state = landing.time, landing.state
        flags = [event_for_uav(i, state) for i in range(state.n)]
        rows.extend(_rows(t, state, flags))
        if t < duration and any(flags):
            rows.extend(_rows(t, flip_on_events(state), [0] * state.n))
    return rows


def _sampled_trace(ens, duration, every, budget):
    if every <= 0:
        raise ValueError("sample interval must be positive")
    rows = []
    t, state = scalar(0), ens
    while True:
        rows.extend(_rows(t, state, [event_for_uav(i, state) for i in range(state.n)]))
        if t >= duration:
            return rows
        dt = min(every, duration - t)
        state = step_time(dt, state, budget)
        t += dt


def converge_report(ens: Ensemble, budget: Optional[StepBudget] = None) -> dict:
    """Check periodicity at ``2N-1`` plus the later spot checks."""
    n = ens.n
    bound = 2 * n - 1
    settled = step_time(bound, ens, budget)
    converged = location_convergence_p(settled, budget)
    spots = {}
    for extra in SPOT_CHECKS:
        spots[str(extra)] = location_convergence_p(step_time(extra, settled, budget), budget)
    first = None
    for landing in iter_landings(ens, bound, budget):
        if location_convergence_p(landing.state, budget):
            first = landing.time
            break
    return {
        "command": "converge",
        "n": n,
        "bound": format_rational(bound),
        "converged": converged,
        "spot_checks": spots,
        "first_periodic_time": None if first is None else format_rational(first),
        "passed": converged and all(spots.values()),
    }


def check_report(
    ens: Ensemble, horizon, predicates=PREDICATES, budget: Optional[StepBudget] = None
) -> dict:
    """Run the monitors and turn the proof's time bounds into pass/fail assertions."""
    horizon = scalar(horizon)
    n = ens.n
    report = run_monitors(ens, horizon, budget, predicates)
    failures = []
    for i, t in enumerate(report.first_event):
        if (t is None and horizon >= n) or (t is not None and t > n):
            failures.append(f"uav {i} first event later than {n}")
    met_last = report.all_have_met_last_false
    if horizon >= n and met_last is not None and met_last >= n:
        failures.append(f"not all UAVs have met at t={format_rational(met_last)} >= {n}")
    sync_last = report.all_synchronized_last_false
    bound = 2 * n - 1
    if horizon >= bound and sync_last is not None and sync_last >= bound:
        failures.append(f"not all UAVs synchronized at t={format_rational(sync_last)} >= {bound}")
    for v in report.violations:
        failures.append(f"{v.predicate} invariance broken for uav {v.uav} at t={format_rational(v.time)}")
    doc = {"command": "check", **report.to_json(), "failures": failures, "passed": not failures}
    return doc
