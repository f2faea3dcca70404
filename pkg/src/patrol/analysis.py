"""Approximation ratios and the per-expansion bound algebra."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .errors import Unbounded
from .model import PufInstance
from .simulator import WaitingReport

TOLERANCE = mpmath.mpf("1e-12")


@dataclass(frozen=True)
class BoundCurve:
    alpha: object
    bound_alg1: object
    bound_alg2: object
    combined: object


def bounds(alpha) -> BoundCurve:
    """Guarantees of the split and the coordinated schedule at expansion alpha.

    Exact for rationals; an ``mpmath.mpf`` input gives mpf results.
    """
    if not isinstance(alpha, (Fraction, mpmath.mpf)):
        alpha = Fraction(alpha)
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    b1 = 1 + 2 * alpha
    b2 = (2 + alpha) / (1 + alpha)
    return BoundCurve(alpha, b1, b2, min(b1, b2))


def ratio(report: WaitingReport, inst: PufInstance) -> Fraction:
    """Largest w / I over the instance's points."""
    if len(report.rows) != inst.n:
        raise ValueError("report does not cover every point")
    if report.never_visited:
        raise Unbounded(f"points {list(report.never_visited)} are never visited")
    return max(r.w / p.idleness for r, p in zip(report.rows, inst.points))


def worst_alpha(dps: int = 30):
    """Expansion where both guarantees coincide, found by bisection.

    The difference of the two bounds is increasing in alpha, negative at 0
    and positive at 1, so bisection on [0, 1] converges to the crossing.
    The result is checked against the closed form (sqrt(3) - 1) / 2.
    """
    with mpmath.workdps(dps):
        def diff(a):
            c = bounds(a)
            return c.bound_alg1 - c.bound_alg2

        lo, hi = mpmath.mpf(0), mpmath.mpf(1)
        for _ in range(4 * dps):
            mid = (lo + hi) / 2
            if diff(mid) < 0:
                lo = mid
            else:
                hi = mid
        root = (lo + hi) / 2
        closed = (mpmath.sqrt(3) - 1) / 2
        if abs(root - closed) > TOLERANCE:
            raise ArithmeticError("bisection disagrees with the closed form")
        return +root
