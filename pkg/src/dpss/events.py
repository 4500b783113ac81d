"""Event detection, simultaneous flips and exact times to the next impact.

A UAV flips when it reaches the perimeter endpoint it is heading for, or
when it is co-located with the neighbour it is heading towards while
standing at or beyond their shared segment boundary.  That single rule
covers head-on meetings, the end of an escort, and separation at the
boundary.
"""

from __future__ import annotations

from typing import Optional

from dpss.ensemble import LEFT, RIGHT, Ensemble, Scalar, UavState, check_index
from dpss.errors import SimulationFault


def event_for_uav(i: int, ens: Ensemble) -> bool:
    check_index(i, ens)
    uavs = ens.uavs
    loc = uavs[i].location
    if uavs[i].direction is LEFT:
        if i == 0:
            return loc == 0
        return loc == uavs[i - 1].location and loc <= i * ens.seg
    if i == ens.n - 1:
        return loc == ens.perimeter
    return loc == uavs[i + 1].location and loc >= (i + 1) * ens.seg


def events(ens: Ensemble) -> list[bool]:
    return [event_for_uav(i, ens) for i in range(ens.n)]


def flip_on_events(ens: Ensemble) -> Ensemble:
    """Reverse every UAV that has an event, all judged against the input snapshot."""
    flags = events(ens)
    if not any(flags):
        return ens
    uavs = tuple(
        UavState(u.id, u.location, -u.direction) if f else u for u, f in zip(ens.uavs, flags)
    )
    return Ensemble(ens.perimeter, ens.n, uavs)


def impending_impact_event_for_uav(i: int, ens: Ensemble) -> bool:
    """False exactly when UAV ``i`` is chasing a neighbour that moves away at the same speed."""
    check_index(i, ens)
    uavs = ens.uavs
    me = uavs[i]
    if me.direction is LEFT:
        if i == 0:
            return True
        other = uavs[i - 1]
        return other.direction is RIGHT or other.location == me.location
    if i == ens.n - 1:
        return True
    other = uavs[i + 1]
    return other.direction is LEFT or other.location == me.location


def min_time_to_impact_for_uav(i: int, ens: Ensemble) -> Optional[Scalar]:
    """Time until UAV ``i`` or an adjacent UAV flips, or None while ``i`` is chasing.

    Uses only UAVs ``i-1..i+1``, the segment length and the perimeter.
    """
    if not impending_impact_event_for_uav(i, ens):
        return None
    uavs, s = ens.uavs, ens.seg
    me = uavs[i]
    if me.direction is LEFT:
        if i == 0:
            return me.location / s
        other = uavs[i - 1]
        if other.direction is RIGHT:
            return (me.location - other.location) / (2 * s)
        # an escort already at or past the boundary has its event now
        return max(me.location - i * s, 0) / s
    if i == ens.n - 1:
        return (ens.perimeter - me.location) / s
    other = uavs[i + 1]
    if other.direction is LEFT:
        return (other.location - me.location) / (2 * s)
    return max((i + 1) * s - me.location, 0) / s


def always_smallest_min_time_to_impending_impact(ens: Ensemble) -> Scalar:
    best = None
    for i in range(ens.n):
        t = min_time_to_impact_for_uav(i, ens)
        if t is not None and (best is None or t < best):
            best = t
    if best is None:
        raise SimulationFault(f"no UAV has an impending impact in {ens!r}")
    return best
