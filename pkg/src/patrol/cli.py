"""Command-line interface: instance files in, JSON/CSV reports out.

Instance files hold one ``<position> <idleness>`` pair per line; numbers
are decimals or ``p/q`` fractions and ``#`` starts a comment.

Exit codes: 0 success, 1 usage or input error, 2 instance certified
infeasible (``check``), 3 ratio above the guaranteed bound (``ratio``).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import analysis, generators, model, schedules, simulator
from .errors import ParseError, PatrolError, ValidationError
from .model import PointRequirement, PufInstance

ALGOS = ("partition", "nested4", "alg1", "alg2", "best")


# --- instance format ---------------------------------------------------------

def _number(token: str, line: int) -> Fraction:
    try:
        return Fraction(token)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"malformed number {token!r}", line) from None


def parse_instance(text: str) -> PufInstance:
    pairs = []
    for no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        parts = body.split()
        if len(parts) != 2:
            raise ParseError(f"expected '<position> <idleness>', got {body!r}", no)
        pairs.append((_number(parts[0], no), _number(parts[1], no)))
    pairs.sort(key=lambda p: p[0])
    for (a, _), (b, _) in zip(pairs, pairs[1:]):
        if a == b:
            raise ValidationError(f"duplicate position {a}")
    return PufInstance(tuple(PointRequirement(y, i) for y, i in pairs))


def format_instance(inst: PufInstance) -> str:
    return "".join(f"{p.position} {p.idleness}\n" for p in inst.points)


# --- rendering ---------------------------------------------------------------

def num(x):
    """Exact ``p/q`` string plus the shortest round-trip decimal."""
    if x is None:
        return None
    x = Fraction(x)
    return {"exact": str(x), "decimal": repr(float(x))}


def _interval(iv):
    return [str(iv.lo), str(iv.hi)]


def _critical(inst):
    try:
        cp = model.critical_points(inst)
    except PatrolError as exc:
        return None, {"error": type(exc).__name__, "message": str(exc)}
    return cp, {"x1": num(cp.x1), "x2": num(cp.x2), "x3": num(cp.x3), "x4": num(cp.x4),
                "alpha": num(cp.alpha), "d": num(cp.d), "flipped": cp.flipped}


def _classes(inst):
    cls = model.classify(inst)
    return {name: sorted(getattr(cls, name)) for name in ("s00", "s01", "s10", "s11")}


def _certificate(cert):
    if cert is None:
        return None
    return {k: (str(v) if isinstance(v, Fraction) else v) for k, v in cert.items()}


def admissibility(report):
    return {
        "verdict": report.verdict,
        "conditions": [{"name": c.name, "status": c.status,
                        "certificate": _certificate(c.certificate)}
                       for c in report.conditions],
    }


def waiting(report, inst):
    rows = []
    for row in report.rows:
        rows.append({
            "index": row.index,
            "position": num(row.position),
            "idleness": num(row.idleness),
            "analytic_w": num(row.analytic_w),
            "analytic_is_bound": row.analytic_is_bound,
            "simulated_w": num(row.simulated_w),
            "ratio": num(row.ratio),
            "never_visited": row.never_visited,
        })
    return {"mode": report.mode, "rows": rows, "max_ratio": num(report.max_ratio)}


def trajectory(tr):
    return {"waypoints": [[str(t), str(x)] for t, x in tr.waypoints],
            "cycle_start": tr.cycle_start, "period": str(tr.period)}


def bound_for(kind: str, inst: PufInstance):
    """Guaranteed ratio of a schedule kind on this instance, or None."""
    if kind == "partition":
        return Fraction(1)
    if kind == "nested4":
        return Fraction(4)
    try:
        cp = model.critical_points(inst)
    except PatrolError:
        return None
    curve = analysis.bounds(cp.alpha)
    return {"alg1": curve.bound_alg1, "alg2": curve.bound_alg2}.get(kind, curve.combined)


def run_report(inst, sp, report):
    cp, digest = _critical(inst)
    bound = bound_for(sp.kind, inst)
    max_ratio = analysis.ratio(report, inst)
    return {
        "instance": {"n": inst.n, "classes": _classes(inst), "critical_points": digest},
        "schedule_kind": sp.kind,
        "waiting": waiting(report, inst),
        "max_ratio": num(max_ratio),
        "bound": num(bound),
        "within_bound": None if bound is None else max_ratio <= bound,
        "admissibility": model.check_necessary(inst).verdict,
    }


def _dump(obj, out):
    out.write(json.dumps(obj, indent=2) + "\n")


# --- commands ----------------------------------------------------------------

def _read(path: str) -> PufInstance:
    if path == "-":
        return parse_instance(sys.stdin.read())
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())


def cmd_classify(args, out):
    inst = _read(args.file)
    _, digest = _critical(inst)
    _dump({"n": inst.n, "classes": _classes(inst),
           "ranges": [_interval(model.range_of(p)) for p in inst.points],
           "critical_points": digest}, out)
    return 0


def cmd_check(args, out):
    report = model.check_necessary(_read(args.file))
    _dump(admissibility(report), out)
    return 2 if report.verdict == model.INFEASIBLE else 0


def _build(args, inst):
    return schedules.build(inst, args.algo, mode=args.mode, horizon=args.horizon)


def cmd_schedule(args, out):
    inst = _read(args.file)
    sp, report = _build(args, inst)
    _dump({"schedule": {"kind": sp.kind, "r1": trajectory(sp.r1), "r2": trajectory(sp.r2),
                        "period": str(sp.period), "cycle_time": str(sp.cycle_time)},
           "report": run_report(inst, sp, report)}, out)
    return 0


def cmd_simulate(args, out):
    inst = _read(args.file)
    sp, report = _build(args, inst)
    _dump({"schedule_kind": sp.kind, "waiting": waiting(report, inst)}, out)
    return 0


def cmd_ratio(args, out):
    inst = _read(args.file)
    sp, report = _build(args, inst)
    value = analysis.ratio(report, inst)
    bound = bound_for(sp.kind, inst)
    ok = bound is None or value <= bound
    _dump({"schedule_kind": sp.kind, "max_ratio": num(value), "bound": num(bound),
           "within_bound": ok}, out)
    return 0 if ok else 3


def _gen(family, alpha, eps, seed, n):
    if family == "tight1":
        return generators.gen_tight_alg1(alpha)
    if family == "tight2":
        return generators.gen_tight_alg2(alpha, eps)
    return generators.gen_admissible_random(seed, n)


def cmd_gen(args, out):
    if args.family != "random" and args.alpha is None:
        raise ParseError("--alpha is required for tightness families")
    out.write(format_instance(_gen(args.family, args.alpha, args.eps, args.seed, args.n)))
    return 0


def cmd_sweep(args, out):
    family = args.family or ("tight1" if args.algo == "alg1" else "tight2")
    out.write("alpha,max_ratio,bound\n")
    for token in args.alphas.split(","):
        alpha = _number(token.strip(), None)
        eps = args.eps
        if family == "tight2" and alpha >= 1 and eps is None:
            eps = alpha / (2 * alpha + 1) / 100
        inst = _gen(family, alpha, eps, None, None)
        sp, report = schedules.build(inst, args.algo, horizon=args.horizon)
        bound = bound_for(sp.kind, inst)
        out.write(f"{alpha},{analysis.ratio(report, inst)},{'' if bound is None else bound}\n")
    return 0


# --- argument parsing --------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _fraction_arg(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="patrol", description="Two-robot path patrolling with idleness requirements.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_file(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("file", help="instance file, or - for standard input")
        return sp

    with_file("classify", "point classes, ranges and critical points").set_defaults(func=cmd_classify)
    with_file("check", "necessary feasibility conditions").set_defaults(func=cmd_check)
    for name, func, help_ in (("schedule", cmd_schedule, "build a schedule and report on it"),
                              ("simulate", cmd_simulate, "simulated waiting times"),
                              ("ratio", cmd_ratio, "max ratio against the guaranteed bound")):
        sp = with_file(name, help_)
        sp.add_argument("--algo", choices=ALGOS, default="best")
        sp.add_argument("--mode", choices=("steady", "transient"), default="steady")
        sp.add_argument("--horizon", type=_fraction_arg, default=None)
        sp.set_defaults(func=func)

    g = sub.add_parser("gen", help="write a generated instance to standard output")
    g.add_argument("family", choices=("tight1", "tight2", "random"))
    g.add_argument("--alpha", type=_fraction_arg)
    g.add_argument("--eps", type=_fraction_arg)
    g.add_argument("--seed", type=int, default=1)
    g.add_argument("--n", type=int, default=6)
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("sweep", help="CSV of max ratio and bound over expansions")
    s.add_argument("--algo", choices=ALGOS, default="best")
    s.add_argument("--alphas", required=True, help="comma-separated list, e.g. 1/4,1/2,1")
    s.add_argument("--family", choices=("tight1", "tight2"))
    s.add_argument("--eps", type=_fraction_arg)
    s.add_argument("--horizon", type=_fraction_arg, default=None)
    s.set_defaults(func=cmd_sweep)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    if hasattr(args, "mode"):
        args.mode = simulator.STEADY if args.mode == "steady" else simulator.TRANSIENT
    try:
        return args.func(args, out)
    except (PatrolError, OSError) as exc:
        sys.stderr.write(f"patrol: {type(exc).__name__}: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
