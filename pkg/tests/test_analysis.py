from __future__ import annotations

from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from patrol.analysis import bounds, ratio, worst_alpha
from patrol.errors import Unbounded
from patrol.schedules import alg1_schedule, alg2_schedule, build
from patrol.simulator import waiting_times
from patrol.trajectory import SchedulePair, dwell


def test_bounds_at_one():
    c = bounds(1)
    assert (c.bound_alg1, c.bound_alg2, c.combined) == (3, F(3, 2), F(3, 2))


def test_which_bound_wins():
    assert bounds(F(3, 10)).combined == bounds(F(3, 10)).bound_alg1
    assert bounds(F(2, 5)).combined == bounds(F(2, 5)).bound_alg2


def test_bounds_reject_non_positive():
    with pytest.raises(ValueError):
        bounds(0)


@given(st.fractions(min_value=F(1, 1000), max_value=100))
def test_combined_bound_never_exceeds_sqrt3(alpha):
    c = bounds(alpha)
    assert c.combined == min(c.bound_alg1, c.bound_alg2)
    assert c.combined ** 2 <= 3


@given(st.fractions(min_value=F(1, 1000), max_value=100),
       st.fractions(min_value=F(1, 1000), max_value=100))
def test_bounds_monotone(a, b):
    lo, hi = sorted((a, b))
    assert bounds(lo).bound_alg1 <= bounds(hi).bound_alg1
    assert bounds(lo).bound_alg2 >= bounds(hi).bound_alg2


def test_worst_alpha():
    root = worst_alpha()
    assert abs(root - (mpmath.sqrt(3) - 1) / 2) < mpmath.mpf("1e-12")
    c = bounds(root)
    assert abs(c.combined - mpmath.sqrt(3)) < mpmath.mpf("1e-12")


def test_ratio_examples(a1):
    assert ratio(waiting_times(alg1_schedule(a1), a1), a1) == 3
    assert ratio(waiting_times(alg2_schedule(a1), a1), a1) <= F(3, 2)
    _, rep = build(a1, "alg2")
    assert ratio(rep, a1) == F(3, 2)  # the inner bound counts when combined


def test_ratio_unbounded(a1):
    sp = SchedulePair(dwell(F(1, 2)), dwell(F(1, 2)), "witness")
    with pytest.raises(Unbounded):
        ratio(waiting_times(sp, a1), a1)
