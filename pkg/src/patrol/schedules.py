"""Patrolling schedules and their closed-form waiting times.

Every constructor returns a :class:`SchedulePair` in the caller's frame.
Schedules that depend on critical points are built for the normalized
instance (x1 <= 1 - x4) and reflected back when the instance was flipped.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

from .errors import ConditionsFail, DegenerateIntersection, InfeasibleCertified
from .model import (
    FEASIBLE,
    INFEASIBLE,
    CriticalPoints,
    PufInstance,
    check_necessary,
    classify,
    critical_points,
    range_of,
    theorem1_check,
)
from .simulator import (
    STEADY,
    ControllerConfig,
    PointWaiting,
    WaitingReport,
    simulate_reactive,
    waiting_times,
)
from .trajectory import SchedulePair, dwell, relabel, zigzag

HALF = Fraction(1, 2)


def _in_frame(sp: SchedulePair, cp: CriticalPoints) -> SchedulePair:
    return sp.mirrored() if cp.flipped else sp


def _norm_pos(y, cp: CriticalPoints):
    return 1 - y if cp.flipped else y


def partition_split(inst: PufInstance):
    """(c1, c2): r1 patrols [0, c1], r2 patrols [c2, 1]."""
    report, x10, x01 = theorem1_check(inst)
    if report.verdict != FEASIBLE:
        raise ConditionsFail("split conditions fail", report)
    a, b = x10.hi, x01.lo
    if a < b:
        return a, b
    cls = classify(inst)
    s = max([b] + [inst.points[i].position for i in cls.s10])
    return s, s


def partition_schedule(inst: PufInstance) -> SchedulePair:
    """Each robot zigzags its own part of the path; no coordination."""
    c1, c2 = partition_split(inst)
    r2 = zigzag(c2, 1)
    r1 = zigzag(0, c1) if c1 > 0 else dwell(0, r2.period)
    return SchedulePair(r1, r2, "partition")


def nested4_schedule(inst: PufInstance) -> SchedulePair:
    """One robot sweeps [0, 1]; the other sweeps the range of the most
    demanding point (or stays home when every idleness is at least 1/2)."""
    k = min(range(inst.n), key=lambda i: (inst.points[i].idleness, i))
    if inst.points[k].idleness >= HALF:
        return SchedulePair(dwell(0, 2), zigzag(0, 1), "nested4")
    ball = range_of(inst.points[k])
    inner = zigzag(ball.lo, ball.hi)
    outer = zigzag(0, 1)
    return relabel(inner, outer, "nested4")


def alg1_schedule(inst: PufInstance, cp: Optional[CriticalPoints] = None) -> SchedulePair:
    """r1 zigzags [0, x3], r2 zigzags [x3, 1]; both leave x3 at t = 0."""
    cp = cp or critical_points(inst)
    x3 = cp.x3
    sp = SchedulePair(zigzag(0, x3, start=x3, direction=-1), zigzag(x3, 1), "alg1")
    return _in_frame(sp, cp)


def analytic_waiting_alg1(inst: PufInstance, cp: Optional[CriticalPoints] = None) -> WaitingReport:
    cp = cp or critical_points(inst)
    x3 = cp.x3
    rows = []
    for i, p in enumerate(inst.points):
        x = _norm_pos(p.position, cp)
        if x < x3:
            w = 2 * max(x, x3 - x)
        elif x > x3:
            w = 2 * max(x - x3, 1 - x)
        else:
            # both robots pass x3; the first revisit comes from the faster loop
            w = min(2 * x3, 2 * (1 - x3))
        rows.append(PointWaiting(i, p.position, p.idleness, analytic_w=w))
    return WaitingReport(tuple(rows), STEADY)


def alg2_schedule(inst: PufInstance, cp: Optional[CriticalPoints] = None,
                  d=None, horizon=None, allow_degenerate: bool = False) -> SchedulePair:
    """Distance-triggered hand-off protocol, simulated until it cycles.

    ``d`` overrides the coordination distance (e.g. 0); ``allow_degenerate``
    admits a single-point S00 intersection, which requires ``d = 0``.
    """
    if cp is None:
        cp = critical_points(inst, allow_degenerate=allow_degenerate)
    if cp.alpha is None and (d is None or d != 0):
        raise DegenerateIntersection("degenerate intersection needs d = 0", x=cp.x1)
    cfg = ControllerConfig(d=d) if horizon is None else ControllerConfig(d=d, horizon=Fraction(horizon))
    run = simulate_reactive(inst, cp, cfg)
    return _in_frame(run.schedule, cp)


def analytic_waiting_alg2(inst: PufInstance, cp: Optional[CriticalPoints] = None) -> WaitingReport:
    """Exact outside [x1, x4]; an upper bound (flagged) inside it."""
    cp = cp or critical_points(inst)
    x1, x4, d = cp.x1, cp.x4, cp.d
    rows = []
    for i, p in enumerate(inst.points):
        x = _norm_pos(p.position, cp)
        bound = False
        if x < x1:
            w = 2 * max(x, 1 - x - d)
        elif x > x4:
            w = 2 * max(1 - x, x - d)
        else:
            w = 2 * max(x - x1, x4 - x) + d
            bound = True
        rows.append(PointWaiting(i, p.position, p.idleness, analytic_w=w, analytic_is_bound=bound))
    return WaitingReport(tuple(rows), STEADY)


def combine(analytic: Optional[WaitingReport], simulated: WaitingReport) -> WaitingReport:
    """Merge an analytic report into a simulated one, row by row."""
    if analytic is None:
        return simulated
    rows = []
    for a, s in zip(analytic.rows, simulated.rows):
        rows.append(PointWaiting(s.index, s.position, s.idleness, a.analytic_w,
                                 a.analytic_is_bound, s.simulated_w, s.never_visited))
    return WaitingReport(tuple(rows), simulated.mode)


def build(inst: PufInstance, algo: str, mode: str = STEADY, horizon=None):
    """Construct a schedule by name and return ``(schedule, report)``."""
    if algo == "best":
        return best_schedule(inst, mode=mode, horizon=horizon)
    if algo == "partition":
        sp, analytic = partition_schedule(inst), None
    elif algo == "nested4":
        sp, analytic = nested4_schedule(inst), None
    elif algo == "alg1":
        cp = critical_points(inst)
        sp, analytic = alg1_schedule(inst, cp), analytic_waiting_alg1(inst, cp)
    elif algo == "alg2":
        cp = critical_points(inst)
        sp, analytic = alg2_schedule(inst, cp, horizon=horizon), analytic_waiting_alg2(inst, cp)
    else:
        raise ValueError(f"unknown algorithm {algo!r}")
    return sp, combine(analytic, waiting_times(sp, inst, mode))


def best_schedule(inst: PufInstance, mode: str = STEADY, horizon=None):
    """Partition schedule when the split test passes, else the better of the
    two expansion-dependent schedules (ties go to the coordinated one)."""
    report = check_necessary(inst)
    if report.verdict == INFEASIBLE:
        raise InfeasibleCertified("necessary conditions fail", report)
    if report.verdict == FEASIBLE:
        sp = partition_schedule(inst)
        return sp, waiting_times(sp, inst, mode)
    try:
        cp = critical_points(inst)
    except DegenerateIntersection:
        sp = nested4_schedule(inst)
        return sp, waiting_times(sp, inst, mode)
    s1 = alg1_schedule(inst, cp)
    w1 = combine(analytic_waiting_alg1(inst, cp), waiting_times(s1, inst, mode))
    s2 = alg2_schedule(inst, cp, horizon=horizon)
    w2 = combine(analytic_waiting_alg2(inst, cp), waiting_times(s2, inst, mode))
    if _sim_max(w1) < _sim_max(w2):
        return s1, w1
    return s2, w2


def _sim_max(report: WaitingReport):
    return max(r.simulated_w / r.idleness for r in report.rows)
