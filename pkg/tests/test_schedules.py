from __future__ import annotations

from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from patrol.errors import ConditionsFail, EmptyS00, InfeasibleCertified
from patrol.generators import gen_theorem1_feasible, gen_tight_alg1, gen_tight_alg2, sample_admissible
from patrol.model import PufInstance, critical_points, mirror
from patrol.schedules import (
    alg1_schedule,
    alg2_schedule,
    analytic_waiting_alg1,
    analytic_waiting_alg2,
    best_schedule,
    build,
    nested4_schedule,
    partition_schedule,
    partition_split,
)
from patrol.simulator import observation_checks, waiting_times

SPLIT_EXAMPLE = PufInstance.from_pairs([(0, 1), (F(1, 4), 1), (1, F(3, 2))])


# --- split schedule ----------------------------------------------------------

def test_partition_seam_point_served_by_the_left_robot():
    assert partition_split(SPLIT_EXAMPLE) == (F(1, 4), F(1, 4))
    sp = partition_schedule(SPLIT_EXAMPLE)
    assert waiting_times(sp, SPLIT_EXAMPLE).simulated() == [F(1, 2), F(1, 2), F(3, 2)]


def test_partition_two_points():
    inst = PufInstance.from_pairs([(0, 2), (1, 2)])
    sp = partition_schedule(inst)
    assert waiting_times(sp, inst).simulated() == [0, 2]


def test_partition_refuses_infeasible():
    inst = PufInstance.from_pairs([(0, F(1, 2)), (F(1, 2), F(6, 5)), (1, F(1, 2))])
    with pytest.raises(ConditionsFail) as err:
        partition_schedule(inst)
    assert err.value.report.condition("Thm1-cond3").certificate["position"] == F(1, 2)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 10_000), st.integers(3, 12))
def test_partition_is_feasible(seed, n):
    inst = gen_theorem1_feasible(seed, n)
    sp = partition_schedule(inst)
    rep = waiting_times(sp, inst)
    assert all(r.simulated_w <= r.idleness for r in rep.rows)
    assert observation_checks(sp, inst, rep).ok


# --- nested schedule ---------------------------------------------------------

def test_nested_one_robot_case():
    inst = PufInstance.from_pairs([(0, 2), (F(1, 2), 2), (1, 2)])
    assert waiting_times(nested4_schedule(inst), inst).simulated() == [0, 1, 2]


def test_nested_a1(a1):
    sp = nested4_schedule(a1)
    w = waiting_times(sp, a1).simulated()
    assert w[0] == 2 and w[2] == 2
    assert w[1] <= F(2, 3)
    assert observation_checks(sp, a1).ordering_ok


# --- split-at-x3 schedule ----------------------------------------------------

def test_alg1_a1(a1):
    sp = alg1_schedule(a1)
    assert [x for _, x in sp.r1.waypoints] == [F(1, 2), 0, F(1, 2)]
    assert [x for _, x in sp.r2.waypoints] == [F(1, 2), 1, F(1, 2)]
    assert sp.r1.period == sp.r2.period == 1
    ana = analytic_waiting_alg1(a1)
    assert [r.analytic_w for r in ana.rows] == [1, 1, 1]
    assert waiting_times(sp, a1).simulated() == [1, 1, 1]


def test_alg1_half_expansion():
    inst = gen_tight_alg1(F(1, 2))
    assert inst == PufInstance.from_pairs([(0, F(3, 2)), (F(1, 2), F(1, 2)), (1, F(3, 2))])
    row = analytic_waiting_alg1(inst).row(1)
    assert row.analytic_w == 1 and row.analytic_w / row.idleness == 2


def test_alg1_needs_an_inner_point():
    with pytest.raises(EmptyS00):
        alg1_schedule(PufInstance.from_pairs([(0, 2), (1, 2)]))


def test_alg1_shared_point_off_center():
    inst = PufInstance.from_pairs([(0, 2), (F(2, 5), F(1, 2)), (1, 2)])
    cp = critical_points(inst)
    ana = [r.analytic_w for r in analytic_waiting_alg1(inst, cp).rows]
    assert ana == waiting_times(alg1_schedule(inst, cp), inst).simulated()


# --- coordinated schedule ----------------------------------------------------

def test_alg2_a1(a1):
    ana = analytic_waiting_alg2(a1)
    assert ana.row(1).analytic_w == F(1, 2) and ana.row(1).analytic_is_bound
    assert ana.row(0).analytic_w == F(5, 3) and not ana.row(0).analytic_is_bound
    sim = waiting_times(alg2_schedule(a1), a1).simulated()
    assert sim[0] == sim[2] == F(5, 3)
    assert sim[1] <= F(1, 2)


def test_alg2_tight_point():
    inst = gen_tight_alg2(F(1, 2))
    row = analytic_waiting_alg2(inst).row(2)
    assert row.position == F(4, 5)
    assert row.analytic_w == F(4, 3) and row.idleness == F(4, 5)


def test_mirrored_instance_gives_mirrored_waiting():
    inst = sample_admissible(11, 7).instance
    for algo in ("alg1", "alg2", "nested4"):
        _, rep = build(inst, algo)
        _, mrep = build(mirror(inst), algo)
        assert rep.simulated() == mrep.simulated()[::-1]


# --- best of both ------------------------------------------------------------

def test_best_a1(a1):
    sp, rep = best_schedule(a1)
    assert sp.kind == "alg2"
    assert rep.max_ratio <= F(3, 2)


def test_best_uses_split_when_possible():
    sp, rep = best_schedule(SPLIT_EXAMPLE)
    assert sp.kind == "partition" and rep.max_ratio <= 1


def test_best_refuses_certified_infeasible():
    inst = PufInstance.from_pairs([(0, 1), (F(1, 2), F(1, 3)), (1, F(5, 3))])
    with pytest.raises(InfeasibleCertified):
        best_schedule(inst)


def test_build_rejects_unknown_name(a1):
    with pytest.raises(ValueError):
        build(a1, "greedy")


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 10_000), st.integers(4, 12))
def test_random_schedules_meet_their_guarantees(seed, n):
    inst = sample_admissible(seed, n).instance
    cp = critical_points(inst)
    s1 = alg1_schedule(inst, cp)
    r1 = waiting_times(s1, inst)
    assert r1.simulated() == [r.analytic_w for r in analytic_waiting_alg1(inst, cp).rows]
    assert r1.max_ratio <= 1 + 2 * cp.alpha
    r4 = waiting_times(nested4_schedule(inst), inst)
    assert r4.max_ratio <= 4
