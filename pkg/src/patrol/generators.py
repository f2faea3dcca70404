"""Tightness instances, their feasible witness schedules, and random families.

Random families draw from :class:`Lcg64`, a 64-bit linear congruential
generator spelled out here so instances are reproducible in any language:

    state <- (state * 6364136223846793005 + 1442695040888963407) mod 2**64

seeded with ``state = seed`` followed by one step.  ``next32`` returns the
high 32 bits of the new state, and ``randint(lo, hi)`` (inclusive) is
``lo + next32() % (hi - lo + 1)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import BadEpsilon, NotApplicable
from .model import PufInstance, as_fraction, mirror
from .trajectory import SchedulePair, Trajectory

MASK = (1 << 64) - 1
MUL = 6364136223846793005
INC = 1442695040888963407


class Lcg64:
    def __init__(self, seed: int):
        self.state = seed & MASK
        self.next32()

    def next32(self) -> int:
        self.state = (self.state * MUL + INC) & MASK
        return self.state >> 32

    def randint(self, lo: int, hi: int) -> int:
        if hi < lo:
            raise ValueError("empty range")
        return lo + self.next32() % (hi - lo + 1)

    def choice(self, seq):
        return seq[self.randint(0, len(seq) - 1)]

    def sample(self, seq, k: int) -> list:
        pool = list(seq)
        out = []
        for _ in range(k):
            out.append(pool.pop(self.randint(0, len(pool) - 1)))
        return out


def _alpha(alpha) -> Fraction:
    alpha = as_fraction(alpha)
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    return alpha


# --- split schedule tightness ------------------------------------------------

def gen_tight_alg1(alpha) -> PufInstance:
    """Three points where the split schedule loses exactly 1 + 2 alpha."""
    a = _alpha(alpha)
    x1 = a / (2 * a + 1)
    ends = 4 * x1 + x1 / a
    y1 = x1 * (1 + 1 / (2 * a))
    return PufInstance.from_pairs([(0, ends), (y1, x1 / a), (1, ends)])


def witness_tight_alg1(alpha) -> SchedulePair:
    """Feasible schedule for :func:`gen_tight_alg1`: each robot sweeps its
    half of the path and waits 2*x1 at the middle point."""
    a = _alpha(alpha)
    x1 = a / (2 * a + 1)
    y1 = Fraction(1, 2)  # x1 * (1 + 1/(2a)) simplifies to 1/2
    r1 = Trajectory(((0, x1), (y1 - x1, y1), (y1 + x1, y1),
                     (1 + x1, 0), (1 + 2 * x1, x1)))
    r2 = Trajectory(((0, y1), (y1, 1), (1, y1), (1 + 2 * x1, y1)))
    return SchedulePair(r1, r2, "witness")


# --- coordinated schedule tightness ------------------------------------------

def _case2_x1(a, epsilon):
    x1 = a / (2 * a + 1)
    if epsilon is None:
        raise BadEpsilon("alpha >= 1 needs epsilon in (0, x1)")
    eps = as_fraction(epsilon)
    if not 0 < eps < x1:
        raise BadEpsilon(f"epsilon must lie in (0, {x1}), got {eps}")
    return x1, eps


def gen_tight_alg2(alpha, epsilon=None) -> PufInstance:
    """Instances where the coordinated schedule approaches its bound.

    For alpha < 1 the ratio (2 + alpha)/(1 + alpha) is attained at the
    third point; for alpha >= 1 it is approached as epsilon -> 0.
    """
    a = _alpha(alpha)
    if a < 1:
        x1 = a / (a + 2)
        h = x1 / a
        ends = x1 * (2 + 3 / a)
        return PufInstance.from_pairs(
            [(0, ends), (x1 + h / 2, h), (2 * h, 2 * h), (1, ends)])
    x1, eps = _case2_x1(a, epsilon)
    h = x1 / a
    ends = 2 * (1 - x1)
    return PufInstance.from_pairs(
        [(0, ends), (x1 - eps, 2 * (x1 + eps)), (x1 + h / 2, h), (1, ends)])


def witness_tight_alg2(alpha, epsilon=None) -> SchedulePair:
    """Feasible schedule for :func:`gen_tight_alg2`.

    Needs 1/2 <= alpha < 1 or alpha = 1: outside that range the instance
    itself breaks a necessary condition, so no feasible schedule exists.
    """
    a = _alpha(alpha)
    if a < 1:
        if a < Fraction(1, 2):
            raise NotApplicable("for alpha < 1/2 the instance is infeasible")
        x1 = a / (a + 2)
        h = x1 / a
        y1, y2 = x1 + h / 2, 2 * h
        period = 3 * h + 2 * x1
        # r1 covers y1 on [h, 3h]; r2 covers it on [4h, period] and also
        # waits h at y2 on its way out so y2 never waits longer than 2h
        r1 = [(0, y1 - h), (h, y1), (3 * h, y1), (3 * h + y1, 0)]
        if period > 3 * h + y1:
            r1.append((period, y1 - h))
        leg = y2 - y1
        wps = [(0, y1), (leg, y2), (leg + h, y2), (leg + h + x1, 1),
               (leg + h + 2 * x1, y2), (4 * h, y1)]
        if period > 4 * h:
            wps.append((period, y1))
        return SchedulePair(Trajectory(tuple(r1)), Trajectory(tuple(wps)), "witness")
    x1, eps = _case2_x1(a, epsilon)
    if a != 1:
        raise NotApplicable("for alpha > 1 the instance is infeasible")
    h = x1 / a
    mid = x1 + h / 2
    period = 4 * x1
    # r1 leaves mid at 0 for 0, back at 2x1 + h; r2 holds mid on [h, 2x1]
    r1 = Trajectory(((0, mid), (mid, 0), (2 * mid, mid), (period, mid)))
    r2 = Trajectory(((0, mid + h), (h, mid), (2 * x1, mid),
                     (2 * x1 + 1 - mid, 1), (period, mid + h)))
    return SchedulePair(r1, r2, "witness")


# --- random families ---------------------------------------------------------

GRID = 240


@dataclass(frozen=True)
class RandomInstance:
    instance: PufInstance
    x1: Fraction
    x4: Fraction
    mirrored: bool


def sample_admissible(seed: int, n: int) -> RandomInstance:
    """Random instance passing every necessary condition, with its sampled
    (normalized) x1 and x4.

    Positions and idleness values sit on a grid of 1/240.  Points inside
    [x1, x4] get ranges covering that interval, one ending exactly at x1
    and one at x4, with the leftmost at or before the midpoint and the
    rightmost at or after it.  Outside points get the smallest idleness
    allowed by the lower bound, the end-containment rule and containment
    of the inside points, plus a random slack.
    """
    if n < 3:
        raise ValueError("n must be at least 3")
    rng = Lcg64(seed)
    D = GRID
    L = 2 * rng.randint(2, 50)
    a = rng.randint(3, (D - L) // 2)
    b = a + L
    mid = (a + b) // 2

    k = rng.randint(1, n - 2)
    if k == 1:
        inside = {mid: L}
    else:
        sb = rng.randint(max(a, b // 2 + 1), mid)
        hi_a = min(b, (D + a - 1) // 2)
        sa = rng.choice([s for s in range(mid, hi_a + 1) if s != sb])
        inside = {sb: 2 * (b - sb), sa: 2 * (sa - a)}
        lo, hi = min(sa, sb), max(sa, sb)
        free = list(range(lo + 1, hi))
        for s in rng.sample(free, min(k - 2, len(free))):
            m = max(s - a, b - s)
            e_max = min(s - m - 1, D - s - m - 1)
            inside[s] = 2 * (m + rng.randint(0, e_max))
    k = len(inside)

    x2, x3 = min(inside), max(inside)
    spots = [s for s in range(1, D) if s < a or s > b]
    outside = [0, D] + rng.sample(spots, n - 2 - k)
    points = dict(inside)
    for y in outside:
        if y < a:
            need = max(2 * y, 2 * (D - y - L), L, 2 * (x3 - y))
        else:
            need = max(2 * (D - y), 2 * (y - L), L, 2 * (y - x2))
        slack = 0 if rng.randint(0, 2) == 0 else rng.randint(1, 20)
        points[y] = need + slack

    pairs = sorted((Fraction(y, D), Fraction(i, D)) for y, i in points.items())
    inst = PufInstance.from_pairs(pairs)
    flip = rng.randint(0, 1) == 1
    if flip:
        inst = mirror(inst)
    return RandomInstance(inst, Fraction(a, D), Fraction(b, D), flip)


def gen_admissible_random(seed: int, n: int) -> PufInstance:
    return sample_admissible(seed, n).instance


def gen_theorem1_feasible(seed: int, n: int) -> PufInstance:
    """Instance without inside points that meets the split conditions."""
    rng = Lcg64(seed)
    D = GRID
    s = rng.randint(1, D - 1)
    ys = [0, D] + rng.sample(range(1, D), n - 2)
    pairs = []
    for y in sorted(ys):
        need = 2 * max(y, s - y) if y <= s else 2 * max(D - y, y - s)
        pairs.append((Fraction(y, D), Fraction(need + rng.randint(0, 30), D)))
    return PufInstance.from_pairs(pairs)


@dataclass(frozen=True)
class ViolatingInstance:
    instance: PufInstance
    condition: str
    index: int
    position: Fraction


def gen_theorem1_violating(seed: int) -> ViolatingInstance:
    """Instance without inside points that breaks exactly one of the three
    split conditions, with the point the checker must report."""
    rng = Lcg64(seed)
    D = GRID
    kind = rng.choice(["Thm1-cond1", "Thm1-cond2", "Thm1-cond3"])
    if kind == "Thm1-cond3":
        a = rng.randint(10, D // 2 - 20)
        b = rng.randint(a + 10, D - 10)
        pts = {0: 2 * a, D: 2 * (D - b)}
        gap = rng.sample(range(a + 1, b), rng.randint(1, 3))
        for z in gap:
            pts[z] = 2 * max(z, D - z)
        for y in rng.sample(range(1, a), rng.randint(0, 2)):
            pts[y] = 2 * max(y, a - y)
        for y in rng.sample(range(b + 1, D), rng.randint(0, 2)):
            pts[y] = 2 * max(D - y, y - b)
        bad = min(gap)
    else:
        # a left-reaching point beyond the reach of point 0, covered from
        # the right so only the left condition breaks
        a = rng.randint(5, D // 2 - 20)
        u = rng.randint(a + 1, D // 2 - 1)
        b = rng.randint(1, u)
        pts = {0: 2 * a, D: 2 * (D - b), u: 2 * u + rng.randint(0, 2 * (D - 2 * u) - 1)}
        bad = u
    pairs = sorted((Fraction(y, D), Fraction(i, D)) for y, i in pts.items())
    inst = PufInstance.from_pairs(pairs)
    index = sorted(pts).index(bad)
    position = Fraction(bad, D)
    if kind == "Thm1-cond2":
        inst = mirror(inst)
        index = inst.n - 1 - index
        position = 1 - position
    return ViolatingInstance(inst, kind, index, position)
