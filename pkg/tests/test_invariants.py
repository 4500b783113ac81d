import pytest
from gmpy2 import mpq
from hypothesis import given, settings

from conftest import E, ensembles, times
from dpss.ensemble import LEFT, RIGHT, average
from dpss.errors import UavIndexError
from dpss.events import flip_on_events
from dpss.invariants import (
    all_have_met_p,
    all_synchronized_p,
    have_met_left_p,
    have_met_right_p,
    left_synchronized_p,
    location_convergence_p,
    predicate_table,
    right_synchronized_p,
    run_monitors,
    segment_containment_p,
)
from dpss.stepper import iter_landings, step_time

HEAD_ON = E(2, ("1/2", RIGHT), ("3/2", LEFT))
STRAY = E(2, ("3/2", LEFT), ("7/4", LEFT))


def have_met_right_by_hand(i, ens):
    n, s = ens.n, ens.seg
    if not (0 < i and ens[i].direction > 0):
        return True
    me, left = ens[i], ens[i - 1]
    lb, rb = i * s, (i + 1) * s
    if me.location < lb and not (left.direction > 0 and left.location == me.location):
        return False
    if lb <= me.location < rb:
        if lb < me.location and not left.direction < 0:
            return False
        if average(me.location, left.location) != lb:
            return False
    return True


def right_synchronized_by_hand(j, ens):
    if not j < ens.n - 1:
        return True
    me, right = ens[j], ens[j + 1]
    if not average(me.location, right.location) <= (j + 1) * ens.seg:
        return False
    if me.direction > 0 and me.location != right.location:
        return right.direction < 0
    return True


class TestHaveMetLeft:
    def test_moving_right_is_vacuous(self):
        assert have_met_left_p(0, HEAD_ON)

    def test_rightmost_is_vacuous(self):
        assert have_met_left_p(1, STRAY)

    def test_right_of_own_segment_without_escort(self):
        assert not have_met_left_p(0, STRAY)

    def test_escorted_back(self):
        assert have_met_left_p(0, E(2, ("3/2", LEFT), ("3/2", LEFT)))

    def test_mirror_partner_inside_segment(self):
        assert have_met_left_p(0, E(2, ("3/4", LEFT), ("5/4", RIGHT)))
        assert not have_met_left_p(0, E(2, ("3/4", LEFT), ("3/2", RIGHT)))
        assert not have_met_left_p(0, E(2, ("3/4", LEFT), ("5/4", LEFT)))

    def test_index_checked(self):
        with pytest.raises(UavIndexError):
            have_met_left_p(5, HEAD_ON)


class TestLeftSynchronized:
    def test_leftmost_is_vacuous(self):
        assert left_synchronized_p(0, STRAY)

    def test_head_on_pair(self):
        assert left_synchronized_p(1, HEAD_ON)

    def test_moving_away_unmatched(self):
        assert not left_synchronized_p(1, E(2, ("1/2", LEFT), ("3/2", LEFT)))

    def test_average_below_boundary(self):
        assert not left_synchronized_p(1, E(2, ("1/4", RIGHT), ("3/2", RIGHT)))


class TestRightPredicates:
    def test_leftmost_have_met_right_vacuous(self):
        assert have_met_right_p(0, STRAY)

    def test_rightmost_moving_left_vacuous(self):
        assert have_met_right_p(1, E(2, (0, RIGHT), ("1/2", LEFT)))

    def test_mirror_of_stray(self):
        assert not have_met_right_p(1, E(2, ("1/4", RIGHT), ("1/2", RIGHT)))

    def test_rightmost_right_synchronized_vacuous(self):
        assert right_synchronized_p(1, STRAY)

    @given(ensembles(max_den=6))
    def test_reflection_matches_hand_mirror(self, ens):
        for i in range(ens.n):
            assert have_met_right_p(i, ens) == have_met_right_by_hand(i, ens)
            assert right_synchronized_p(i, ens) == right_synchronized_by_hand(i, ens)

    @given(ensembles(max_den=6))
    def test_table_matches_pointwise(self, ens):
        table = predicate_table(ens)
        for i in range(ens.n):
            assert table["have_met_left"][i] == have_met_left_p(i, ens)
            assert table["have_met_right"][i] == have_met_right_p(i, ens)
            assert table["left_synchronized"][i] == left_synchronized_p(i, ens)
            assert table["right_synchronized"][i] == right_synchronized_p(i, ens)


@given(ensembles(max_den=6))
def test_vacuous_ends(ens):
    assert left_synchronized_p(0, ens)
    assert have_met_left_p(ens.n - 1, ens)
    assert right_synchronized_p(ens.n - 1, ens)
    assert have_met_right_p(0, ens)


def test_all_predicates_examples():
    assert all_have_met_p(E(1, ("1/3", LEFT)))
    assert all_synchronized_p(E(1, ("1/3", LEFT)))
    assert all_have_met_p(HEAD_ON) and all_synchronized_p(HEAD_ON)
    assert not all_have_met_p(STRAY)


class TestConvergence:
    def test_bounce_and_return(self):
        assert location_convergence_p(E(2, (1, LEFT), (1, RIGHT)))

    def test_not_yet_periodic(self):
        assert not location_convergence_p(E(2, (0, RIGHT), ("1/4", LEFT)))

    def test_single_uav_full_traverse(self):
        assert location_convergence_p(E(1, (0, RIGHT)))

    @settings(max_examples=40, deadline=None)
    @given(ensembles(max_den=8))
    def test_periodic_after_bound(self, ens):
        assert location_convergence_p(step_time(2 * ens.n - 1, ens))


class TestContainment:
    def test_inside(self):
        assert segment_containment_p(0, E(2, ("1/2", RIGHT), (2, LEFT)))

    def test_outside(self):
        assert not segment_containment_p(0, E(2, ("3/2", RIGHT), (2, LEFT)))

    def test_boundary_counts(self):
        assert segment_containment_p(1, E(2, (0, RIGHT), (1, LEFT)))

    @settings(max_examples=40, deadline=None)
    @given(ensembles(max_den=8))
    def test_contained_after_convergence(self, ens):
        settled = step_time(2 * ens.n - 1, ens)
        for landing in iter_landings(settled, 4):
            assert all(segment_containment_p(i, landing.state) for i in range(ens.n))


@settings(max_examples=40, deadline=None)
@given(ensembles(max_den=8), times(limit=6))
def test_have_met_invariant_over_step_time(ens, dt):
    before = predicate_table(flip_on_events(ens))
    after = predicate_table(flip_on_events(step_time(dt, ens)))
    for side in ("have_met_left", "have_met_right"):
        for i in range(ens.n):
            assert not before[side][i] or after[side][i]


@settings(max_examples=40, deadline=None)
@given(ensembles(max_den=8))
def test_all_have_met_by_tee(ens):
    assert all_have_met_p(flip_on_events(step_time(ens.n, ens)))


@settings(max_examples=40, deadline=None)
@given(ensembles(max_den=8), times(limit=4))
def test_synchronization_propagates_within_one_unit(ens, extra):
    start = flip_on_events(step_time(ens.n + extra, ens))
    table = predicate_table(start)
    later = predicate_table(flip_on_events(step_time(1, start)))
    for j in range(1, ens.n):
        if table["left_synchronized"][j - 1]:
            assert later["left_synchronized"][j]
    for j in range(ens.n - 1):
        if table["right_synchronized"][j + 1]:
            assert later["right_synchronized"][j]


class TestMonitors:
    def test_head_on_first_events(self):
        report = run_monitors(HEAD_ON, 2)
        assert report.first_event == [mpq(1, 2), mpq(1, 2)]
        assert report.all_have_met_time == 0
        assert not report.violations

    def test_horizon_zero(self):
        report = run_monitors(E(1, ("1/3", LEFT)), 0)
        assert report.violations == []
        assert report.landings == 1
        assert report.first_event == [None]

    def test_stray_gets_have_met(self):
        report = run_monitors(STRAY, 4)
        assert report.initial["have_met_left"][0] is False
        assert report.first_true["have_met_left"][0] is not None
        assert not report.violations

    @settings(max_examples=40, deadline=None)
    @given(ensembles(max_den=8))
    def test_every_uav_has_an_event_within_tee(self, ens):
        report = run_monitors(ens, ens.n)
        assert all(t is not None and t <= ens.n for t in report.first_event)

    def test_report_serializes(self):
        doc = run_monitors(STRAY, 4).to_json()
        assert doc["horizon"] == "4"
        assert doc["first_event_time"][1] is not None
        assert set(doc["predicates_first_true"]) == {
            "have_met_left",
            "have_met_right",
            "left_synchronized",
            "right_synchronized",
        }
