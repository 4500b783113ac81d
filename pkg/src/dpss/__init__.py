"""Exact-rational event-driven simulator and checker for the DPSS-A patrolling protocol."""

from dpss.ensemble import (
    LEFT,
    ONE,
    RIGHT,
    Direction,
    Ensemble,
    Scalar,
    UavState,
    average,
    format_rational,
    parse_rational,
    reflect,
    scalar,
    seg_length,
    uav_left_boundary,
    uav_right_boundary,
    wf_ensemble,
)
from dpss.errors import DpssError, FuelExhausted, ScenarioError, SimulationFault, UavIndexError
from dpss.events import (
    always_smallest_min_time_to_impending_impact,
    event_for_uav,
    flip_on_events,
    impending_impact_event_for_uav,
    min_time_to_impact_for_uav,
)
from dpss.invariants import (
    all_have_met_p,
    all_synchronized_p,
    have_met_left_p,
    have_met_right_p,
    left_synchronized_p,
    location_convergence_p,
    right_synchronized_p,
    run_monitors,
    segment_containment_p,
)
from dpss.stepper import StepBudget, StepOutcome, next_step, step_time, step_to_next_event, update_location_all

__version__ = "0.1.0"
