"""Instances, ranges, point classes, critical points and feasibility checks.

All quantities are exact :class:`fractions.Fraction` values.  Positions live
on the unit path [0, 1]; an idleness is the longest tolerated gap between two
visits of a point by either robot.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import (
    DegenerateIntersection,
    EmptyIntersection,
    EmptyS00,
    NotApplicable,
    ValidationError,
)

ZERO = Fraction(0)
ONE = Fraction(1)


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        # floats go through their repr so 0.1 means 1/10
        return Fraction(repr(value))
    return Fraction(value)


@dataclass(frozen=True)
class PointRequirement:
    position: Fraction
    idleness: Fraction

    def __post_init__(self):
        object.__setattr__(self, "position", as_fraction(self.position))
        object.__setattr__(self, "idleness", as_fraction(self.idleness))
        if not ZERO <= self.position <= ONE:
            raise ValidationError(f"position {self.position} outside [0, 1]")
        if self.idleness <= 0:
            raise ValidationError(f"idleness must be positive, got {self.idleness}")


@dataclass(frozen=True)
class PufInstance:
    points: tuple

    def __post_init__(self):
        pts = tuple(p if isinstance(p, PointRequirement) else PointRequirement(*p)
                    for p in self.points)
        object.__setattr__(self, "points", pts)
        if len(pts) < 2:
            raise ValidationError("an instance needs at least two points")
        for a, b in zip(pts, pts[1:]):
            if a.position == b.position:
                raise ValidationError(f"duplicate position {a.position}")
            if a.position > b.position:
                raise ValidationError("positions must be strictly increasing")
        if pts[0].position != 0:
            raise ValidationError("first point must be at position 0")
        if pts[-1].position != 1:
            raise ValidationError("last point must be at position 1")

    @classmethod
    def from_pairs(cls, pairs: Iterable) -> "PufInstance":
        return cls(tuple(PointRequirement(y, i) for y, i in pairs))

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def positions(self):
        return [p.position for p in self.points]

    @property
    def idleness(self):
        return [p.idleness for p in self.points]

    def scaled(self, c) -> "PufInstance":
        c = as_fraction(c)
        return PufInstance(tuple(PointRequirement(p.position, p.idleness * c)
                                 for p in self.points))


def mirror(inst: PufInstance) -> PufInstance:
    """Reflect the instance: x -> 1 - x, order reversed."""
    return PufInstance(tuple(PointRequirement(1 - p.position, p.idleness)
                             for p in reversed(inst.points)))


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi

    def contains(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo


FULL = Interval(ZERO, ONE)


def range_of(p: PointRequirement) -> Interval:
    """The closed ball of radius I/2 around the point, clipped to [0, 1]."""
    half = p.idleness / 2
    return Interval(max(ZERO, p.position - half), min(ONE, p.position + half))


def intersect(intervals: Iterable[Interval]) -> Optional[Interval]:
    """Intersection of a family; [0, 1] for the empty family, None if empty."""
    lo, hi = ZERO, ONE
    for iv in intervals:
        lo, hi = max(lo, iv.lo), min(hi, iv.hi)
    if lo > hi:
        return None
    return Interval(lo, hi)


@dataclass(frozen=True)
class Classification:
    s00: frozenset
    s01: frozenset
    s10: frozenset
    s11: frozenset


def classify(inst: PufInstance) -> Classification:
    """Split point indices (0-based) by which path ends lie in their range."""
    groups = {(False, False): set(), (False, True): set(),
              (True, False): set(), (True, True): set()}
    for i, p in enumerate(inst.points):
        r = range_of(p)
        groups[(ZERO in r, ONE in r)].add(i)
    return Classification(
        s00=frozenset(groups[(False, False)]),
        s01=frozenset(groups[(False, True)]),
        s10=frozenset(groups[(True, False)]),
        s11=frozenset(groups[(True, True)]),
    )


@dataclass(frozen=True)
class CriticalPoints:
    x1: Fraction
    x2: Fraction
    x3: Fraction
    x4: Fraction
    alpha: Optional[Fraction]
    d: Fraction
    flipped: bool = False


def coordination_distance(x1, x4, alpha) -> Fraction:
    return min(x1, x4 - x1) / (1 + alpha)


def _s00_hull(inst: PufInstance, cls: Classification):
    """(x1, x2, x3, x4) in the instance's own orientation, or None."""
    if not cls.s00:
        return None
    idx = sorted(cls.s00)
    inter = intersect(range_of(inst.points[i]) for i in idx)
    if inter is None:
        return None
    return (inter.lo, inst.points[idx[0]].position,
            inst.points[idx[-1]].position, inter.hi)


def critical_points(inst: PufInstance, allow_degenerate: bool = False) -> CriticalPoints:
    """x1..x4, expansion and coordination distance, after normalization.

    If x1 > 1 - x4 the values are those of the mirrored instance and
    ``flipped`` is set.  With ``allow_degenerate`` a single-point
    intersection yields ``alpha=None`` and ``d=0`` instead of raising.
    """
    cls = classify(inst)
    if not cls.s00:
        raise EmptyS00("instance has no S00 point")
    idx = sorted(cls.s00)
    inter = intersect(range_of(inst.points[i]) for i in idx)
    if inter is None:
        raise EmptyIntersection("ranges of S00 points do not intersect",
                                certificate=_containment_certificate(inst, cls))
    x1, x4 = inter.lo, inter.hi
    x2, x3 = inst.points[idx[0]].position, inst.points[idx[-1]].position
    flipped = x1 > 1 - x4
    if flipped:
        x1, x2, x3, x4 = 1 - x4, 1 - x3, 1 - x2, 1 - x1
    if x1 == x4:
        if not allow_degenerate:
            raise DegenerateIntersection(
                "S00 ranges meet in a single point; the split-at-x3 bound is "
                "unbounded and the hand-off schedule needs d = 0", x=x1)
        return CriticalPoints(x1, x2, x3, x4, None, ZERO, flipped)
    alpha = x1 / (x4 - x1)
    return CriticalPoints(x1, x2, x3, x4, alpha,
                          coordination_distance(x1, x4, alpha), flipped)


def normalized(inst: PufInstance, cp: CriticalPoints) -> PufInstance:
    return mirror(inst) if cp.flipped else inst


def lower_bound(x, cp: CriticalPoints) -> Fraction:
    """Idleness lower bound any feasible instance must satisfy at x."""
    x = as_fraction(x)
    x1, x4 = cp.x1, cp.x4
    if x < x1:
        return max(2 * x, 2 * (1 - x - x4 + x1), x4 - x1)
    if x <= x4:
        return 2 * max(x4 - x, x - x1)
    return max(2 * (1 - x), 2 * (x - x4 + x1), x4 - x1)


# --- admissibility -----------------------------------------------------------

PASS, FAIL, NA = "pass", "fail", "not-applicable"
INFEASIBLE, UNKNOWN, FEASIBLE = "infeasible-certified", "unknown", "feasible-with-schedule"


@dataclass(frozen=True)
class ConditionResult:
    name: str
    status: str
    certificate: Optional[dict] = None


@dataclass(frozen=True)
class AdmissibilityReport:
    conditions: tuple
    verdict: str

    def failed(self):
        return [c for c in self.conditions if c.status == FAIL]

    def condition(self, name: str) -> ConditionResult:
        for c in self.conditions:
            if c.name == name:
                return c
        raise KeyError(name)


def _cert(inst, i, **extra):
    return {"index": i, "position": inst.points[i].position, **extra}


def _containment_certificate(inst, cls):
    for j in sorted(cls.s00):
        x = inst.points[j].position
        for i, p in enumerate(inst.points):
            if x not in range_of(p):
                return _cert(inst, i, s00_index=j, s00_position=x)
    return None


def _split_conditions(inst: PufInstance, cls: Classification):
    x10 = intersect(range_of(inst.points[i]) for i in sorted(cls.s10))
    x01 = intersect(range_of(inst.points[i]) for i in sorted(cls.s01))
    results = []

    def side(name, members, inter, end):
        if inter is None:
            results.append(ConditionResult(name, FAIL, _cert(inst, min(members), reason="empty intersection")))
            return
        for i in sorted(members):
            if inst.points[i].position not in inter:
                results.append(ConditionResult(name, FAIL, _cert(inst, i)))
                return
        if end not in inter:
            results.append(ConditionResult(name, FAIL, {"index": None, "position": end}))
            return
        results.append(ConditionResult(name, PASS))

    side("Thm1-cond1", cls.s10, x10, ZERO)
    side("Thm1-cond2", cls.s01, x01, ONE)
    if x10 is None or x01 is None:
        results.append(ConditionResult("Thm1-cond3", NA))
    else:
        for i, p in enumerate(inst.points):
            if p.position not in x10 and p.position not in x01:
                results.append(ConditionResult("Thm1-cond3", FAIL, _cert(inst, i)))
                break
        else:
            results.append(ConditionResult("Thm1-cond3", PASS))
    return results, x10, x01


def theorem1_check(inst: PufInstance):
    """Exact feasibility test for instances without S00 points.

    Returns ``(report, X10, X01)``.  Raises :class:`NotApplicable` when S00
    is non-empty.
    """
    cls = classify(inst)
    if cls.s00:
        raise NotApplicable("the split test needs S00 to be empty")
    results, x10, x01 = _split_conditions(inst, cls)
    verdict = FEASIBLE if all(r.status == PASS for r in results) else INFEASIBLE
    return AdmissibilityReport(tuple(results), verdict), x10, x01


def check_necessary(inst: PufInstance) -> AdmissibilityReport:
    """Evaluate every necessary feasibility condition exactly."""
    cls = classify(inst)
    if not cls.s00:
        return theorem1_check(inst)[0]

    results = []
    cert = _containment_certificate(inst, cls)
    results.append(ConditionResult("Lemma5-containment", FAIL if cert else PASS, cert))

    hull = _s00_hull(inst, cls)
    if hull is None:
        for name in ("Lemma4-3-ends", "Lemma4-4-left", "Lemma4-4-right", "Lemma6-lowerbound"):
            results.append(ConditionResult(name, NA))
    else:
        x1, x2, x3, x4 = hull
        bad = None
        for i, p in enumerate(inst.points):
            r = range_of(p)
            if (p.position < x1 and ZERO not in r) or (p.position > x4 and ONE not in r):
                bad = _cert(inst, i)
                break
        results.append(ConditionResult("Lemma4-3-ends", FAIL if bad else PASS, bad))

        ok = x4 - x3 <= x3 - x1 and x2 - x1 <= x4 - x1
        results.append(ConditionResult(
            "Lemma4-4-left", PASS if ok else FAIL,
            None if ok else {"x1": x1, "x2": x2, "x3": x3, "x4": x4}))
        ok = x2 - x1 <= x4 - x2
        results.append(ConditionResult(
            "Lemma4-4-right", PASS if ok else FAIL,
            None if ok else {"x1": x1, "x2": x2, "x3": x3, "x4": x4}))

        cp = CriticalPoints(x1, x2, x3, x4, None, ZERO)
        bad = None
        for i, p in enumerate(inst.points):
            lb = lower_bound(p.position, cp)
            if p.idleness < lb:
                bad = _cert(inst, i, bound=lb)
                break
        results.append(ConditionResult("Lemma6-lowerbound", FAIL if bad else PASS, bad))

    verdict = INFEASIBLE if any(r.status == FAIL for r in results) else UNKNOWN
    return AdmissibilityReport(tuple(results), verdict)
