"""Exact event-driven engine and visit/waiting-time extraction.

The reactive controller drives the distance-triggered two-robot protocol:
robots in zigzag mode patrol [x1, x4]; when their separation drops to ``d``
while shrinking, the robot whose zigzag session is older leaves to patrol
its own end of the path (0 for r1, 1 for r2) and then comes back.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional

from .errors import NeverVisited, NoCycle
from .model import CriticalPoints, Interval, PufInstance, as_fraction, range_of
from .trajectory import SchedulePair, Trajectory

ZIG, OUT, BACK = "zigzag", "excursion-outbound", "excursion-return"
STEADY, TRANSIENT = "steady-state", "transient-inclusive"

DEFAULT_HORIZON = Fraction(100)


def position_at(tr: Trajectory, t) -> Fraction:
    return tr.position_at(t)


# --- reactive controller -----------------------------------------------------

@dataclass
class RobotState:
    pos: Fraction
    direction: int
    mode: str
    session_start: Optional[Fraction] = None


@dataclass
class SimState:
    r1: RobotState
    r2: RobotState
    clock: Fraction = Fraction(0)

    def key(self):
        zig = [r.mode == ZIG for r in (self.r1, self.r2)]
        if all(zig):
            s1, s2 = self.r1.session_start, self.r2.session_start
            order = (s1 > s2) - (s1 < s2)
        else:
            order = None
        return (self.r1.pos, self.r1.direction, self.r1.mode,
                self.r2.pos, self.r2.direction, self.r2.mode, order)


@dataclass(frozen=True)
class ControllerConfig:
    d: Optional[Fraction] = None
    horizon: Fraction = DEFAULT_HORIZON


@dataclass(frozen=True)
class ReactiveRun:
    schedule: SchedulePair
    states: tuple
    min_zig_distance: Optional[Fraction]


def _target(r: RobotState, left: bool, x1, x4):
    """Next turning point for a robot, or None for a standing robot."""
    if r.mode == ZIG:
        if r.direction == 0:
            return None
        return x4 if r.direction > 0 else x1
    if r.mode == OUT:
        return Fraction(0) if left else Fraction(1)
    return x1 if left else x4


def _arrive(r: RobotState, left: bool, x1, x4, now):
    """Apply turning/mode rules to a robot sitting on its target."""
    if r.mode == ZIG:
        if x1 == x4:
            r.direction = 0
        elif r.pos == x4 and r.direction > 0:
            r.direction = -1
        elif r.pos == x1 and r.direction < 0:
            r.direction = 1
    elif r.mode == OUT:
        end = Fraction(0) if left else Fraction(1)
        if r.pos == end:
            r.mode, r.direction = BACK, (1 if left else -1)
    else:
        entry = x1 if left else x4
        if r.pos == entry:
            r.mode, r.session_start = ZIG, now
            if x1 == x4:
                r.direction = 0
            else:
                r.direction = 1 if left else -1


def _trigger(state: SimState, d):
    """Exit the older zigzagging robot if separation is d and shrinking."""
    r1, r2 = state.r1, state.r2
    gap = r2.pos - r1.pos
    rate = r2.direction - r1.direction
    if gap != d or rate >= 0:
        return
    cands = [r for r in (r1, r2) if r.mode == ZIG]
    if not cands:
        return
    if len(cands) == 2:
        leaving = r1 if r1.session_start <= r2.session_start else r2
    else:
        leaving = cands[0]
    leaving.mode = OUT
    leaving.session_start = None
    leaving.direction = -1 if leaving is r1 else 1


def simulate_reactive(inst: PufInstance, cp: CriticalPoints,
                      config: ControllerConfig = ControllerConfig()) -> ReactiveRun:
    """Run the protocol until an exact state recurrence.

    ``cp`` must be normalized (x1 <= 1 - x4); trajectories are in that frame.
    """
    x1, x4 = cp.x1, cp.x4
    d = cp.d if config.d is None else as_fraction(config.d)
    horizon = as_fraction(config.horizon)
    state = SimState(
        RobotState(x1 - d, -1, OUT),
        RobotState(x1, 0 if x1 == x4 else 1, ZIG, Fraction(0)),
    )
    w1, w2 = [(Fraction(0), state.r1.pos)], [(Fraction(0), state.r2.pos)]
    seen = {}
    states = []
    min_gap = None

    while True:
        now = state.clock
        if now > 0:
            # separation reached d along the motion that just ended
            _trigger(state, d)
        for r, left in ((state.r1, True), (state.r2, False)):
            tgt = _target(r, left, x1, x4)
            if tgt is not None and r.pos == tgt:
                _arrive(r, left, x1, x4, now)
        _trigger(state, d)

        key = state.key()
        if key in seen:
            i = seen[key]
            r1 = Trajectory(tuple(w1), i)
            r2 = Trajectory(tuple(w2), i)
            return ReactiveRun(SchedulePair(r1, r2, "alg2"), tuple(states), min_gap)
        seen[key] = len(states)
        states.append(SimState(replace(state.r1), replace(state.r2), now))
        if now > horizon:
            raise NoCycle(f"no state recurrence before t = {horizon}")

        dt = None
        for r, left in ((state.r1, True), (state.r2, False)):
            tgt = _target(r, left, x1, x4)
            if tgt is not None and r.direction != 0:
                step = (tgt - r.pos) / r.direction
                if dt is None or step < dt:
                    dt = step
        gap = state.r2.pos - state.r1.pos
        rate = state.r2.direction - state.r1.direction
        if rate < 0 and gap > d and (state.r1.mode == ZIG or state.r2.mode == ZIG):
            step = (gap - d) / -rate
            if dt is None or step < dt:
                dt = step
        if dt is None or dt <= 0:
            raise NoCycle(f"controller stalled at t = {now}")

        both_zig_before = state.r1.mode == ZIG and state.r2.mode == ZIG
        for r in (state.r1, state.r2):
            r.pos += r.direction * dt
        state.clock = now + dt
        if both_zig_before:
            end_gap = state.r2.pos - state.r1.pos
            lo = min(gap, end_gap)
            min_gap = lo if min_gap is None else min(min_gap, lo)
        w1.append((state.clock, state.r1.pos))
        w2.append((state.clock, state.r2.pos))


# --- visits and waiting times ------------------------------------------------

def _merge(intervals):
    out = []
    for a, b in sorted(intervals):
        if out and a <= out[-1][1]:
            if b > out[-1][1]:
                out[-1][1] = b
        else:
            out.append([a, b])
    return [tuple(iv) for iv in out]


def _leg_times_in(t0, x0, t1, x1, lo, hi):
    """Sub-interval of [t0, t1] during which the leg's position is in [lo, hi]."""
    if x0 == x1:
        return (t0, t1) if lo <= x0 <= hi else None
    slope = (x1 - x0) / (t1 - t0)
    ta = t0 + (lo - x0) / slope
    tb = t0 + (hi - x0) / slope
    if ta > tb:
        ta, tb = tb, ta
    ta, tb = max(ta, t0), min(tb, t1)
    if ta > tb:
        return None
    return (ta, tb)


def legs(sp: SchedulePair, t_start, t_end) -> list:
    """Legs ``(t0, x0, t1, x1)`` of both robots overlapping [t_start, t_end]."""
    out = []
    for tr in (sp.r1, sp.r2):
        out.extend(leg for leg in tr.segments(t_end) if leg[2] >= t_start)
    return out


class Timeline:
    """Both robots' legs over a window, prepared for repeated queries.

    Queries answer in the timeline's own units: when every leg is a dwell or
    a full-speed move, all values are scaled by a common denominator and the
    work is done on integers; otherwise the units are plain Fractions.  Use
    :meth:`unit` / :meth:`value` to convert.
    """

    def __init__(self, sp: SchedulePair, t_start, t_end, values=()):
        self.sp = sp
        self.t_start, self.t_end = as_fraction(t_start), as_fraction(t_end)
        unit = all(x0 == x1 or abs(x1 - x0) == t1 - t0
                   for tr in (sp.r1, sp.r2)
                   for (t0, x0), (t1, x1) in zip(tr.waypoints, tr.waypoints[1:]))
        self.scale = None
        if unit:
            wps = sp.r1.waypoints + sp.r2.waypoints
            self.scale = math.lcm(self.t_start.denominator, self.t_end.denominator,
                                  *(as_fraction(v).denominator for v in values),
                                  *(v.denominator for wp in wps for v in wp))
        self.ts, self.te = self.unit(self.t_start), self.unit(self.t_end)
        self.robots = [self._unroll(tr) for tr in (sp.r1, sp.r2)]
        self.legs = self.robots[0] + self.robots[1]

    def unit(self, v):
        v = as_fraction(v)
        if self.scale is None:
            return v
        if self.scale % v.denominator:
            raise ValueError(f"{v} is not on the timeline grid")
        return v.numerator * (self.scale // v.denominator)

    def value(self, u) -> Fraction:
        return u if self.scale is None else Fraction(u, self.scale)

    def _unroll(self, tr):
        pts = [(self.unit(t), self.unit(x)) for t, x in tr.waypoints]
        out = [(a[0], a[1], b[0], b[1]) for a, b in zip(pts, pts[1:])]
        cyc = out[tr.cycle_start:]
        period = pts[-1][0] - pts[tr.cycle_start][0]
        shift = period
        while pts[-1][0] + shift - period < self.te:
            out.extend((t0 + shift, x0, t1 + shift, x1) for t0, x0, t1, x1 in cyc)
            shift += period
        return [leg for leg in out if leg[2] >= self.ts and leg[0] < self.te]

    def presence(self, lo, hi) -> list:
        """Merged intervals (timeline units) when some robot is in [lo, hi]."""
        L, H = self.unit(lo), self.unit(hi)
        found = []
        for t0, x0, t1, x1 in self.legs:
            if max(x0, x1) < L or min(x0, x1) > H:
                continue
            if self.scale is None:
                iv = _leg_times_in(t0, x0, t1, x1, L, H)
                if iv is None:
                    continue
                a, b = iv
            elif x0 == x1:
                a, b = t0, t1
            elif x1 > x0:
                a, b = max(t0, t0 + L - x0), min(t1, t0 + H - x0)
            else:
                a, b = max(t0, t0 + x0 - H), min(t1, t0 + x0 - L)
            a, b = max(a, self.ts), min(b, self.te)
            if a <= b:
                found.append((a, b))
        return _merge(found)

    def ordering_violation(self):
        """First breakpoint (timeline units) where r1 is right of r2, or None."""
        def at(legs, times):
            out, i = [], 0
            for t in times:
                while i < len(legs) - 1 and legs[i][2] < t:
                    i += 1
                t0, x0, t1, x1 = legs[i]
                if t <= t0:
                    out.append(x0)
                elif t >= t1:
                    out.append(x1)
                else:
                    out.append(x0 + (x1 - x0) * (t - t0) / (t1 - t0))
            return out

        times = sorted({t for leg in self.legs for t in (leg[0], leg[2])
                        if self.ts <= t <= self.te})
        for t, a, b in zip(times, at(self.robots[0], times), at(self.robots[1], times)):
            if a > b:
                return t
        return None


def presence(sp: Optional[SchedulePair], lo, hi, t_start, t_end, cached=None):
    """Merged time intervals within [t_start, t_end] when some robot is in [lo, hi].

    ``cached`` may hold the result of :func:`legs` for the same window.
    """
    found = []
    for t0, x0, t1, x1 in (cached if cached is not None else legs(sp, t_start, t_end)):
        if max(x0, x1) < lo or min(x0, x1) > hi:
            continue
        iv = _leg_times_in(t0, x0, t1, x1, lo, hi)
        if iv is None:
            continue
        a, b = max(iv[0], t_start), min(iv[1], t_end)
        if a <= b:
            found.append((a, b))
    return _merge(found)


@dataclass(frozen=True)
class VisitLog:
    """Per point: merged visit intervals (a touch is a zero-length interval)."""

    window: tuple
    visits: tuple


def visit_log(sp: SchedulePair, inst: PufInstance, t_start=0, t_end=None) -> VisitLog:
    if t_end is None:
        t_end = sp.cycle_time + 2 * sp.period
    t_start, t_end = as_fraction(t_start), as_fraction(t_end)
    tl = Timeline(sp, t_start, t_end, inst.positions)
    vis = tuple(tuple((tl.value(a), tl.value(b)) for a, b in tl.presence(p.position, p.position))
                for p in inst.points)
    return VisitLog((t_start, t_end), vis)


def _max_gap(ivs, gap_start_limit=None):
    best = 0
    for (a0, b0), (a1, _) in zip(ivs, ivs[1:]):
        if gap_start_limit is not None and b0 >= gap_start_limit:
            continue
        best = max(best, a1 - b0)
    return best


@dataclass(frozen=True)
class PointWaiting:
    index: int
    position: Fraction
    idleness: Fraction
    analytic_w: Optional[Fraction] = None
    analytic_is_bound: bool = False
    simulated_w: Optional[Fraction] = None
    never_visited: bool = False

    @property
    def w(self) -> Optional[Fraction]:
        vals = [v for v in (self.analytic_w, self.simulated_w) if v is not None]
        return max(vals) if vals else None

    @property
    def ratio(self) -> Optional[Fraction]:
        w = self.w
        return None if w is None or self.never_visited else w / self.idleness


@dataclass(frozen=True)
class WaitingReport:
    rows: tuple
    mode: str = STEADY

    @property
    def never_visited(self):
        return tuple(r.index for r in self.rows if r.never_visited)

    @property
    def max_ratio(self) -> Optional[Fraction]:
        if self.never_visited:
            return None
        ratios = [r.ratio for r in self.rows if r.ratio is not None]
        return max(ratios) if ratios else None

    def row(self, i: int) -> PointWaiting:
        return self.rows[i]

    def simulated(self):
        return [r.simulated_w for r in self.rows]


def waiting_times(sp: SchedulePair, inst: PufInstance, mode: str = STEADY,
                  strict: bool = False, periods: int = 2) -> WaitingReport:
    """Longest gap between consecutive visits of every instance point.

    Steady-state mode looks only at the periodic regime (gaps opening in
    [T0, T0 + P), P the joint period); transient mode also counts gaps that
    open before T0.  A point never visited in a full period gets
    ``simulated_w=None`` and ``never_visited=True`` (or raises with
    ``strict``).  ``periods`` sets how many joint periods are unrolled; any
    value from 2 on gives the same answer.
    """
    if periods < 2:
        raise ValueError("need at least two periods")
    t0, period = sp.cycle_time, sp.period
    start = t0 if mode == STEADY else Fraction(0)
    end = t0 + periods * period
    rows, missing = [], []
    tl = Timeline(sp, start, end, inst.positions)
    cyc0, cyc1 = tl.unit(t0), tl.unit(t0 + (periods - 1) * period)
    for i, p in enumerate(inst.points):
        ivs = tl.presence(p.position, p.position)
        if not any(b >= cyc0 and a < cyc1 for a, b in ivs):
            missing.append(i)
            rows.append(PointWaiting(i, p.position, p.idleness, never_visited=True))
            continue
        w = tl.value(_max_gap(ivs, cyc1))
        rows.append(PointWaiting(i, p.position, p.idleness, simulated_w=w))
    if missing and strict:
        raise NeverVisited(f"points {missing} are never visited", missing)
    return WaitingReport(tuple(rows), mode)


# --- diagnostics -------------------------------------------------------------

@dataclass(frozen=True)
class ObservationReport:
    ordering_ok: bool
    ordering_violation: Optional[Fraction]
    window_ok: bool
    window_violations: tuple
    speed_ok: bool

    @property
    def ok(self) -> bool:
        return self.ordering_ok and self.window_ok and self.speed_ok


def observation_checks(sp: SchedulePair, inst: PufInstance,
                       report: Optional[WaitingReport] = None) -> ObservationReport:
    """Check robot ordering and that points meeting their idleness always
    have a robot inside their range within every window of length I/2."""
    t0, period = sp.cycle_time, sp.period
    end = t0 + 2 * period
    bounds = [range_of(p) for p in inst.points]
    values = [v for r in bounds for v in (r.lo, r.hi)] + [p.idleness / 2 for p in inst.points]
    tl = Timeline(sp, 0, end, values)
    bad = tl.ordering_violation()
    bad_t = None if bad is None else tl.value(bad)

    speed_ok = True
    for tr in (sp.r1, sp.r2):
        for (ta, xa), (tb, xb) in zip(tr.waypoints, tr.waypoints[1:]):
            if abs(xb - xa) > tb - ta:
                speed_ok = False

    if report is None:
        report = waiting_times(sp, inst)
    violations = []
    start, stop = tl.unit(t0), tl.unit(t0 + period)
    for row in report.rows:
        if row.simulated_w is None or row.simulated_w > row.idleness:
            continue
        r = bounds[row.index]
        ivs = [(a, b) for a, b in tl.presence(r.lo, r.hi) if b >= start]
        limit = tl.unit(row.idleness / 2)
        if not ivs or ivs[0][0] > start + limit:
            violations.append(row.index)
            continue
        for (a0, b0), (a1, _) in zip(ivs, ivs[1:]):
            if b0 < stop and a1 - b0 > limit:
                violations.append(row.index)
                break
    return ObservationReport(bad_t is None, bad_t, not violations, tuple(violations), speed_ok)


def min_inside_distance(sp: SchedulePair, lo, hi) -> Optional[Fraction]:
    """Smallest r2 - r1 over one joint period (after the transient) while
    both robots are inside [lo, hi]; None if they never are together.

    The gap is linear between merged breakpoints, so it is enough to look
    at the ends of each stretch where both robots stay inside.
    """
    lo, hi = as_fraction(lo), as_fraction(hi)
    end = sp.cycle_time + sp.period
    times = sp.merged_breakpoints(end)
    best = None
    for ta, tb in zip(times, times[1:]):
        if tb > end:
            break
        a1, b1 = sp.r1.position_at(ta), sp.r1.position_at(tb)
        a2, b2 = sp.r2.position_at(ta), sp.r2.position_at(tb)
        s1 = _leg_times_in(ta, a1, tb, b1, lo, hi)
        s2 = _leg_times_in(ta, a2, tb, b2, lo, hi)
        if s1 is None or s2 is None:
            continue
        u, v = max(s1[0], s2[0]), min(s1[1], s2[1])
        if u > v:
            continue
        for t in (u, v):
            gap = sp.r2.position_at(t) - sp.r1.position_at(t)
            best = gap if best is None else min(best, gap)
    return best
