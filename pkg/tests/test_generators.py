from __future__ import annotations

from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from patrol.errors import BadEpsilon, NotApplicable
from patrol.generators import (
    Lcg64,
    gen_admissible_random,
    gen_theorem1_feasible,
    gen_theorem1_violating,
    gen_tight_alg1,
    gen_tight_alg2,
    sample_admissible,
    witness_tight_alg1,
    witness_tight_alg2,
)
from patrol.model import FEASIBLE, INFEASIBLE, UNKNOWN, PufInstance, check_necessary, classify, critical_points
from patrol.simulator import observation_checks, waiting_times


def test_lcg_matches_its_definition():
    state = 1
    state = (state * 6364136223846793005 + 1442695040888963407) % 2**64
    expected = []
    for _ in range(3):
        state = (state * 6364136223846793005 + 1442695040888963407) % 2**64
        expected.append(state >> 32)
    rng = Lcg64(1)
    assert [rng.next32() for _ in range(3)] == expected


def test_lcg_helpers():
    rng = Lcg64(7)
    assert all(3 <= rng.randint(3, 5) <= 5 for _ in range(100))
    assert sorted(Lcg64(7).sample(range(10), 10)) == list(range(10))
    with pytest.raises(ValueError):
        rng.randint(2, 1)


def test_tight_alg1_examples(a1):
    assert gen_tight_alg1(1) == a1
    assert gen_tight_alg1(F(1, 2)) == PufInstance.from_pairs(
        [(0, F(3, 2)), (F(1, 2), F(1, 2)), (1, F(3, 2))])


@pytest.mark.parametrize("alpha", [F(1, 4), F(1, 2), F(1), F(2), F(7, 3)])
def test_tight_alg1_round_trip_and_witness(alpha):
    inst = gen_tight_alg1(alpha)
    assert critical_points(inst).alpha == alpha
    x1 = alpha / (2 * alpha + 1)
    sp = witness_tight_alg1(alpha)
    rep = waiting_times(sp, inst)
    assert rep.simulated() == [4 * x1 + x1 / alpha, x1 / (2 * alpha), 4 * x1 + x1 / alpha]
    assert observation_checks(sp, inst, rep).ok


def test_tight_alg2_examples():
    assert gen_tight_alg2(F(1, 2)) == PufInstance.from_pairs(
        [(0, F(8, 5)), (F(2, 5), F(2, 5)), (F(4, 5), F(4, 5)), (1, F(8, 5))])
    assert gen_tight_alg2(1, F(1, 20)) == PufInstance.from_pairs(
        [(0, F(4, 3)), (F(17, 60), F(23, 30)), (F(1, 2), F(1, 3)), (1, F(4, 3))])
    with pytest.raises(BadEpsilon):
        gen_tight_alg2(1, F(1, 2))
    with pytest.raises(BadEpsilon):
        gen_tight_alg2(2)
    with pytest.raises(ValueError):
        gen_tight_alg2(0)


@pytest.mark.parametrize("alpha", [F(1, 4), F(1, 2), F(3, 4), F(1), F(2)])
def test_tight_alg2_round_trip(alpha):
    inst = gen_tight_alg2(alpha, F(1, 100) if alpha >= 1 else None)
    assert critical_points(inst).alpha == alpha


@pytest.mark.parametrize("alpha", [F(1, 2), F(2, 3), F(3, 4), F(99, 100)])
def test_tight_alg2_witness_small_alpha(alpha):
    inst = gen_tight_alg2(alpha)
    sp = witness_tight_alg2(alpha)
    rep = waiting_times(sp, inst)
    assert [r.simulated_w for r in rep.rows] == list(inst.idleness)
    assert observation_checks(sp, inst, rep).ok


def test_tight_alg2_witness_values():
    rep = waiting_times(witness_tight_alg2(F(1, 2)), gen_tight_alg2(F(1, 2)))
    assert rep.simulated() == [F(8, 5), F(2, 5), F(4, 5), F(8, 5)]
    e = F(1, 20)
    rep = waiting_times(witness_tight_alg2(1, e), gen_tight_alg2(1, e))
    assert rep.row(0).simulated_w == rep.row(3).simulated_w == F(4, 3)
    assert rep.max_ratio <= 1


def test_tight_alg2_witness_outside_its_range():
    # these instances break a necessary condition, so no witness exists
    with pytest.raises(NotApplicable):
        witness_tight_alg2(F(1, 4))
    assert check_necessary(gen_tight_alg2(F(1, 4))).verdict == INFEASIBLE
    with pytest.raises(NotApplicable):
        witness_tight_alg2(2, F(1, 10))
    assert check_necessary(gen_tight_alg2(2, F(1, 10))).verdict == INFEASIBLE


def test_random_examples():
    assert gen_admissible_random(1, 5) == gen_admissible_random(1, 5)
    assert check_necessary(gen_admissible_random(1, 5)).verdict == UNKNOWN
    s = sample_admissible(2, 8)
    cp = critical_points(s.instance)
    assert (cp.x1, cp.x4) == (s.x1, s.x4)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**64 - 1), st.integers(3, 14))
def test_random_instances_are_admissible(seed, n):
    s = sample_admissible(seed, n)
    assert s.instance.n == n
    assert check_necessary(s.instance).verdict == UNKNOWN
    cp = critical_points(s.instance)
    assert (cp.x1, cp.x4) == (s.x1, s.x4)
    assert cp.x1 < cp.x4


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32), st.integers(3, 12))
def test_split_feasible_family(seed, n):
    inst = gen_theorem1_feasible(seed, n)
    assert inst.n == n and not classify(inst).s00
    assert check_necessary(inst).verdict == FEASIBLE


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32))
def test_split_violating_family(seed):
    v = gen_theorem1_violating(seed)
    report = check_necessary(v.instance)
    assert report.verdict == INFEASIBLE
    failed = report.failed()
    assert len(failed) == 1
    assert failed[0].name == v.condition
    assert failed[0].certificate["index"] == v.index
    assert v.instance.positions[v.index] == v.position
