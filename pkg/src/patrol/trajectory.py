"""Eventually-periodic piecewise-linear robot motions."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

from .errors import ValidationError
from .model import as_fraction

KINDS = ("partition", "nested4", "alg1", "alg2", "witness")


def frac_lcm(a: Fraction, b: Fraction) -> Fraction:
    """Least common multiple of two positive rationals."""
    den = math.lcm(a.denominator, b.denominator)
    return Fraction(math.lcm(a.numerator * (den // a.denominator),
                             b.numerator * (den // b.denominator)), den)


@dataclass(frozen=True)
class Trajectory:
    """Waypoints ``(t, x)`` joined linearly; the suffix from ``cycle_start``
    repeats forever with ``period`` = t_last - t[cycle_start]."""

    waypoints: tuple
    cycle_start: int = 0

    def __post_init__(self):
        wps = tuple((as_fraction(t), as_fraction(x)) for t, x in self.waypoints)
        object.__setattr__(self, "waypoints", wps)
        if len(wps) < 2:
            raise ValidationError("a trajectory needs at least two waypoints")
        if wps[0][0] != 0:
            raise ValidationError("trajectories start at t = 0")
        if not 0 <= self.cycle_start < len(wps) - 1:
            raise ValidationError("cycle_start out of range")
        for (t0, x0), (t1, x1) in zip(wps, wps[1:]):
            if t1 <= t0:
                raise ValidationError("waypoint times must be strictly increasing")
            if abs(x1 - x0) > t1 - t0:
                raise ValidationError(f"speed above 1 between t={t0} and t={t1}")
        for _, x in wps:
            if not 0 <= x <= 1:
                raise ValidationError(f"position {x} outside [0, 1]")
        if wps[self.cycle_start][1] != wps[-1][1]:
            raise ValidationError("cycle does not close")

    @property
    def period(self) -> Fraction:
        return self.waypoints[-1][0] - self.waypoints[self.cycle_start][0]

    @property
    def cycle_time(self) -> Fraction:
        """Time at which the periodic regime begins."""
        return self.waypoints[self.cycle_start][0]

    def position_at(self, t) -> Fraction:
        t = as_fraction(t)
        if t < 0:
            raise ValueError("t must be non-negative")
        wps = self.waypoints
        if t > wps[-1][0]:
            t0 = self.cycle_time
            t = t0 + (t - t0) % self.period
        lo, hi = 0, len(wps) - 1
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if wps[mid][0] <= t:
                lo = mid
            else:
                hi = mid
        (ta, xa), (tb, xb) = wps[lo], wps[hi]
        if t == tb:
            return xb
        return xa + (xb - xa) * (t - ta) / (tb - ta)

    def segments(self, t_end) -> Iterator[tuple]:
        """Yield ``(t0, x0, t1, x1)`` legs covering [0, t_end]."""
        wps = self.waypoints
        for (ta, xa), (tb, xb) in zip(wps, wps[1:]):
            if ta >= t_end:
                return
            yield ta, xa, tb, xb
        cyc = wps[self.cycle_start:]
        shift = self.period
        while True:
            for (ta, xa), (tb, xb) in zip(cyc, cyc[1:]):
                if ta + shift >= t_end:
                    return
                yield ta + shift, xa, tb + shift, xb
            shift += self.period

    def breakpoints(self, t_end) -> list:
        out = [Fraction(0)]
        for _, _, t1, _ in self.segments(t_end):
            out.append(t1)
        return out

    def mirrored(self) -> "Trajectory":
        return Trajectory(tuple((t, 1 - x) for t, x in self.waypoints), self.cycle_start)


def zigzag(lo, hi, start=None, direction: int = 1) -> Trajectory:
    """Full-speed back-and-forth motion on [lo, hi].

    ``start`` defaults to the end the robot leaves from.  A degenerate
    interval gives a robot dwelling at ``lo`` (period 1).
    """
    lo, hi = as_fraction(lo), as_fraction(hi)
    if lo == hi:
        return dwell(lo)
    if start is None:
        start = lo if direction > 0 else hi
    s = as_fraction(start)
    if direction > 0:
        far, back = hi, lo
    else:
        far, back = lo, hi
    t1 = abs(far - s)
    t2 = t1 + (hi - lo)
    t3 = t2 + abs(s - back)
    wps = [(0, s)]
    if t1 > 0:
        wps.append((t1, far))
    wps.append((t2, back))
    if t3 > t2:
        wps.append((t3, s))
    return Trajectory(tuple(wps), 0)


def dwell(x, period=1) -> Trajectory:
    return Trajectory(((0, x), (period, x)), 0)


@dataclass(frozen=True)
class SchedulePair:
    r1: Trajectory
    r2: Trajectory
    kind: str

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError(f"unknown schedule kind {self.kind!r}")

    @property
    def cycle_time(self) -> Fraction:
        return max(self.r1.cycle_time, self.r2.cycle_time)

    @property
    def period(self) -> Fraction:
        return frac_lcm(self.r1.period, self.r2.period)

    def mirrored(self) -> "SchedulePair":
        return SchedulePair(self.r2.mirrored(), self.r1.mirrored(), self.kind)

    def merged_breakpoints(self, t_end) -> list:
        return sorted(set(self.r1.breakpoints(t_end)) | set(self.r2.breakpoints(t_end)) | {as_fraction(t_end)})


def relabel(a: Trajectory, b: Trajectory, kind: str) -> SchedulePair:
    """Pair two crossing motions so r1 is always the leftmost robot.

    Positions are swapped whenever the robots meet, which leaves the set of
    occupied positions (and so every visit time) unchanged.
    """
    t0 = max(a.cycle_time, b.cycle_time)
    period = frac_lcm(a.period, b.period)
    end = t0 + period
    times = sorted(set(a.breakpoints(end)) | set(b.breakpoints(end)) | {end})
    times = [t for t in times if t <= end]
    pts = []
    prev = None
    for t in times:
        xa, xb = a.position_at(t), b.position_at(t)
        if prev is not None:
            tp, pa, pb = prev
            da, db = pa - pb, xa - xb
            if da * db < 0:
                tc = tp + (t - tp) * da / (da - db)
                xc = a.position_at(tc)
                pts.append((tc, xc, xc))
        pts.append((t, min(xa, xb), max(xa, xb)))
        prev = (t, xa, xb)
    start = next(i for i, p in enumerate(pts) if p[0] == t0)
    r1 = Trajectory(tuple((t, lo) for t, lo, _ in pts), start)
    r2 = Trajectory(tuple((t, hi) for t, _, hi in pts), start)
    return SchedulePair(r1, r2, kind)
