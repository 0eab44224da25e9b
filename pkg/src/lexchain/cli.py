"""Batch command-line front end.

Exit status: 0 on success, 2 for a decided negative (not solvable, or a
refutation witness was found), 1 on any error.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from . import chains, fixpoint, oracle, refuter, sampling
from .chains import ExtBool, Kind, MapElem, Nat, Omega, Pow
from .checks import check_order_preserving, check_round_trip
from .errors import CheckFailed, HypothesisFailed, LexChainError, NotSolvable
from .lexpower import Embedding, OneSelector
from .syntax import format_chain, format_elem, parse_chain, parse_elem

EXIT_OK, EXIT_ERROR, EXIT_NEGATIVE = 0, 1, 2
VERIFY_SAMPLES = 32


class UsageError(LexChainError):
    code = "USAGE"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # usage errors are errors, not decided negatives
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"error[{UsageError.code}]: {message}\n")


def _render(v):
    if isinstance(v, (list, tuple)):
        return [_render(x) for x in v]
    if isinstance(v, dict):
        return {k: _render(x) for k, x in v.items()}
    if v is None or isinstance(v, (bool, int, str)):
        return v
    return format_elem(v)


def _text(v) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_text(x) for x in v) + "]"
    return "none" if v is None else str(v)


class Output:
    def __init__(self, machine: bool, kind: str):
        self.machine = machine
        self.kind = kind

    def record(self, result, witness=None, trace=None, reason=None):
        print(json.dumps({"kind": self.kind, "result": result, "witness": witness,
                          "trace": trace, "reason": reason}, ensure_ascii=False))

    def line(self, text: str):
        print(text)


# -- commands ----------------------------------------------------------------


def cmd_cmp(args, out: Output) -> int:
    c = parse_chain(args.chain)
    result = chains.compare(c, parse_elem(args.a), parse_elem(args.b)).name
    if out.machine:
        out.record(result)
    else:
        out.line(result)
    return EXIT_OK


def _verify(sol, seed: int, depth: int) -> int:
    src = sampling.sample_many(sol.iso.to.source, VERIFY_SAMPLES, seed=seed, depth=depth)
    tgt = sampling.sample_many(sol.gamma, VERIFY_SAMPLES, seed=seed + 1, depth=depth)
    check_round_trip(sol.iso, src, tgt)
    return check_order_preserving(sol.iso.to, src)


def cmd_solve(args, out: Output) -> int:
    kind = Kind(args.kind)
    base, zero = parse_chain(args.chain), parse_elem(args.zero)
    try:
        sol = fixpoint.solve(kind, base, zero)
    except NotSolvable as exc:
        if out.machine:
            out.record("NOT_SOLVABLE", reason=exc.reason)
        else:
            out.line("NOT_SOLVABLE")
            out.line(f"reason: {exc.reason}")
        return EXIT_NEGATIVE
    top = chains.last(sol.gamma)
    try:
        fixpoint.simultaneous(base, zero)
        simult = "yes"
    except HypothesisFailed as exc:
        simult = f"no ({exc.reason})"
    checked = _verify(sol, args.seed, args.depth)
    summary = {
        "gamma": format_chain(sol.gamma),
        "finite": chains.is_finite(sol.gamma).name.lower(),
        "top": format_elem(top) if top is not None else "none",
        "trivial": "yes" if sol.trivial else "no",
        "simultaneous": simult,
        "verified": f"{checked} distinct samples",
    }
    if out.machine:
        out.record("SOLVABLE", reason="; ".join(f"{k}: {v}" for k, v in summary.items()))
    else:
        out.line("SOLVABLE")
        for k, v in summary.items():
            out.line(f"{k}: {v}")
    return EXIT_OK


def cmd_iso(args, out: Output) -> int:
    kind = Kind(args.kind)
    base, zero = parse_chain(args.chain), parse_elem(args.zero)
    fn = fixpoint.iso_to if args.command == "iso-to" else fixpoint.iso_from
    e = parse_elem(args.elem)
    if args.command == "iso-to" and not isinstance(e, MapElem):
        raise UsageError("iso-to expects a map element")
    if args.command == "iso-from" and not isinstance(e, chains.StageElem):
        raise UsageError("iso-from expects a stage element")
    result = format_elem(fn(kind, base, zero, e))
    if out.machine:
        out.record(result)
    else:
        out.line(result)
    return EXIT_OK


def _trace(steps) -> list:
    return [{"step": s.kind, "index": list(s.index), "values": _render(s.values)} for s in steps]


def _witness_fields(w) -> dict:
    match w:
        case refuter.ConvexityGap(a=a, b=b, c=c):
            return {"a": a, "b": b, "c": c}
        case refuter.OrderViolation(step=step, x=x, y=y, fx=fx, fy=fy):
            return {"step": step, "x": x, "y": y, "fx": fx, "fy": fy}
        case refuter.InverseMiss(elem=e):
            return {"elem": e}
        case refuter.BadInput(claim=claim, evidence=ev):
            return {"claim": claim, "evidence": list(ev)}
    raise TypeError(w)


def _report(w, out: Output) -> int:
    trace = _trace(w.trace)
    if isinstance(w, refuter.Exhausted):
        if out.machine:
            out.record("EXHAUSTED", trace=trace, reason=w.reason)
        else:
            out.line("EXHAUSTED")
            out.line(f"reason: {w.reason}")
            _print_trace(trace, out)
        return EXIT_OK
    fields = _render(_witness_fields(w))
    name = type(w).__name__
    if out.machine:
        out.record("WITNESS", witness={"type": name, **fields}, trace=trace)
    else:
        out.line(f"WITNESS {name}")
        for k, v in fields.items():
            out.line(f"{k}: {_text(v)}")
        _print_trace(trace, out)
    return EXIT_NEGATIVE


def _print_trace(trace: list, out: Output):
    out.line(f"trace: {len(trace)} steps")
    for step in trace:
        where = ",".join(str(i) for i in step["index"])
        vals = " ".join(f"{k}={_text(v)}" for k, v in step["values"].items())
        out.line(f"  {step['step']}[{where}] {vals}")


def _finite_elems(c) -> list:
    if chains.is_finite(c) is not ExtBool.TRUE:
        raise UsageError(f"{format_chain(c)} must be finite to list images")
    return list(chains.enumerate(c))


def _table_map(source, target, images: list) -> Embedding:
    elems = _finite_elems(source)
    if len(images) != len(elems):
        raise UsageError(f"expected {len(elems)} images, got {len(images)}")
    for y in images:
        if not chains.member(target, y):
            raise UsageError(f"image {format_elem(y)} is not an element of {format_chain(target)}")
    fwd = dict(zip(elems, images))
    back = {}
    for x, y in fwd.items():
        back.setdefault(y, x)
    return Embedding(source, target, fwd.__getitem__, back.get)


def cmd_refute_eq2(args, out: Output) -> int:
    base, zero = parse_chain(args.base), parse_elem(args.zero)
    gamma, one = parse_chain(args.gamma), parse_elem(args.one)
    images = [parse_elem(t) for t in args.images]
    claimed = _table_map(gamma, Pow(base, zero, gamma), images)
    return _report(refuter.refute_iso_second(base, zero, claimed, one, args.budget), out)


def _prefix_family(target: Pow, one) -> Embedding:
    """n_k -> characteristic map of {n0, ..., n(k-1)}."""

    def forward(n: Nat) -> MapElem:
        return MapElem(tuple((Nat(i), one) for i in range(n.i)))

    def inverse(m: MapElem) -> Optional[Nat]:
        ks = [k for k, _ in m.pairs]
        if all(v == one for _, v in m.pairs) and ks == [Nat(i) for i in range(len(ks))]:
            return Nat(len(ks))
        return None

    return Embedding(Omega(), target, forward, inverse)


def cmd_refute_convex(args, out: Output) -> int:
    base, zero = parse_chain(args.base), parse_elem(args.zero)
    exp, one = parse_chain(args.exp), parse_elem(args.one)
    target = Pow(base, zero, exp)
    if args.family == "prefix":
        if exp != Omega() or args.images:
            raise UsageError("--family prefix takes exponent omega and no images")
        iota = _prefix_family(target, one)
        succ = lambda n: Nat(n.i + 1)  # noqa: E731
    elif args.family is None:
        elems = _finite_elems(exp)
        iota = _table_map(exp, target, [parse_elem(t) for t in args.images])
        nxt = dict(zip(elems, elems[1:]))
        succ = nxt.get
    else:
        raise UsageError(f"unknown family {args.family!r}")
    inp = refuter.RefuterInput(target, iota, succ, lambda g: g, OneSelector.constant(one), args.budget)
    return _report(refuter.refute_convex(inp), out)


def cmd_oracle(args, out: Output) -> int:
    c = parse_chain(args.chain)
    if not isinstance(c, Pow):
        raise UsageError("oracle power expects a pow(...) chain")
    model = oracle.brute_power(c.base, c.zero, c.exp)
    elems = [format_elem(e) for e in model.elems]
    if out.machine:
        out.record(elems, reason=f"{len(elems)} elements")
    else:
        for e in elems:
            out.line(e)
    return EXIT_OK


def cmd_enumerate(args, out: Output) -> int:
    c = parse_chain(args.chain)
    it = chains.enumerate(c)
    if out.machine:
        out.record([format_elem(e) for e in it])
    else:
        for e in it:
            out.line(format_elem(e))
    return EXIT_OK


def cmd_sample(args, out: Output) -> int:
    c = parse_chain(args.chain)
    xs = [format_elem(e) for e in sampling.sample_many(c, args.count, seed=args.seed, depth=args.depth)]
    if out.machine:
        out.record(xs)
    else:
        for x in xs:
            out.line(x)
    return EXIT_OK


# -- argument parsing ----------------------------------------------------------


def _global_flags(p: argparse.ArgumentParser, defaults: bool):
    d = (lambda v: v) if defaults else (lambda v: argparse.SUPPRESS)
    p.add_argument("--budget", type=int, default=d(64), help="refuter step budget (default 64)")
    p.add_argument("--seed", type=int, default=d(0), help="sampling seed (default 0)")
    p.add_argument("--depth", type=int, default=d(4), help="max nesting of sampled maps (default 4)")
    p.add_argument("--machine", action="store_true", default=d(False),
                   help="one JSON record per result")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lexchain", description="Lexicographic powers of chains.")
    _global_flags(parser, True)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text):
        p = sub.add_parser(name, help=help_text)
        _global_flags(p, False)
        p.set_defaults(fn=fn)
        return p

    p = add("cmp", cmd_cmp, "compare two elements of a chain")
    p.add_argument("chain")
    p.add_argument("a")
    p.add_argument("b")

    p = add("solve", cmd_solve, "solve one of the three power equations")
    p.add_argument("kind", type=int, choices=(1, 2, 3))
    p.add_argument("chain")
    p.add_argument("zero")

    for name in ("iso-to", "iso-from"):
        p = add(name, cmd_iso, f"apply the solution isomorphism ({name})")
        p.add_argument("kind", type=int, choices=(1, 2, 3))
        p.add_argument("chain")
        p.add_argument("zero")
        p.add_argument("elem")

    p = add("refute-eq2", cmd_refute_eq2, "refute a claimed G ~ D^G given as an image table")
    p.add_argument("base")
    p.add_argument("zero")
    p.add_argument("gamma")
    p.add_argument("one")
    p.add_argument("images", nargs="+", help="image of each element of gamma, ascending")

    p = add("refute-convex", cmd_refute_convex, "refute a claimed convex embedding into a power")
    p.add_argument("base")
    p.add_argument("zero")
    p.add_argument("exp")
    p.add_argument("one")
    p.add_argument("images", nargs="*", help="image of each element of a finite exponent")
    p.add_argument("--family", choices=("prefix",), help="built-in embedding family")

    p = add("oracle", cmd_oracle, "brute-force ground truth")
    p.add_argument("what", choices=("power",))
    p.add_argument("chain")

    p = add("enumerate", cmd_enumerate, "list a finite chain in ascending order")
    p.add_argument("chain")

    p = add("sample", cmd_sample, "draw seeded random elements")
    p.add_argument("chain")
    p.add_argument("--count", type=int, default=10)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out = Output(args.machine, args.command)
    try:
        return args.fn(args, out)
    except LexChainError as exc:
        return _fail(out, exc.code, str(exc))
    except (ValueError, RecursionError) as exc:
        return _fail(out, "ERROR", str(exc) or type(exc).__name__)


def _fail(out: Output, code: str, message: str) -> int:
    if out.machine:
        out.record("ERROR", reason=f"{code}: {message}")
    else:
        print(f"error[{code}]: {message}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
