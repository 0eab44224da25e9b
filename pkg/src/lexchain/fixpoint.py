"""Fixed-point chains for the three lexicographic functional equations.

For a base chain D with designated zero the tower is

    G_0 = D^{<=0}   (EQ1, EQ2)     or   D^{<0}   (EQ3)
    G_n = (D^{G_{n-1}})^{<=0}       or   (D^{G_{n-1}})^{<0}

with G_{n-1} sitting inside G_n as a final segment.  An element of the union
is stored as ``StageElem(n, x)`` with ``x`` a raw element of G_n, normalized to
the least stage at which it occurs.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Optional

from .chains import (
    EMPTY_MAP,
    UNKNOWN,
    Chain,
    Elem,
    ExtBool,
    Fix,
    Kind,
    MapElem,
    OmegaStar,
    Ordering,
    Pow,
    SegLE,
    SegLT,
    StageElem,
    StarIdx,
    _cmp,
    has_last,
    is_last,
    is_least,
    last,
    member,
    predecessor,
)
from .errors import (
    CheckFailed,
    HypothesisFailed,
    InvariantError,
    NoTailWitness,
    NotAMember,
    NotSolvable,
    WrongSegment,
)
from .lexpower import Embedding, Iso, canon_map, embed_delta, lift


class Tower:
    """Stage chains, the embeddings between them, and the order on their union."""

    def __init__(self, kind: Kind, base: Chain, zero: Elem):
        self.kind = Kind(kind)
        self.base = base
        self.zero = zero
        self.strict = self.kind is Kind.EQ3
        self.top0 = predecessor(base, zero) if self.strict else zero
        seg = SegLT if self.strict else SegLE
        self._seg = seg
        self._stages = [seg(base, zero)]
        self._push: dict = {}
        self._pull: dict = {}

    def stage(self, n: int) -> Chain:
        while len(self._stages) <= n:
            prev = self._stages[-1]
            self._stages.append(self._seg(Pow(self.base, self.zero, prev), EMPTY_MAP))
        return self._stages[n]

    def push(self, x: Elem, n: int) -> Elem:
        """The final-segment embedding G_n -> G_{n+1}."""
        key = (x, n)
        hit = self._push.get(key)
        if hit is not None:
            return hit
        if n == 0:
            y = EMPTY_MAP if x == self.zero else MapElem(((self.top0, x),))
        else:
            y = MapElem(tuple((self.push(k, n - 1), v) for k, v in x.pairs))
        self._push[key] = y
        return y

    def pull(self, y: MapElem, n: int) -> Optional[Elem]:
        """Preimage of ``y`` in G_n under the embedding G_n -> G_{n+1}, or None."""
        key = (y, n)
        if key in self._pull:
            return self._pull[key]
        if n == 0:
            if not y.pairs:
                x = None if self.strict else self.zero
            elif len(y.pairs) == 1 and y.pairs[0][0] == self.top0:
                x = y.pairs[0][1]
            else:
                x = None
        else:
            pairs = []
            for k, v in y.pairs:
                pk = self.pull(k, n - 1)
                if pk is None:
                    pairs = None
                    break
                pairs.append((pk, v))
            x = None if pairs is None else MapElem(tuple(pairs))
        self._pull[key] = x
        return x

    def raise_to(self, x: Elem, m: int, k: int) -> Elem:
        for j in range(m, k):
            x = self.push(x, j)
        return x

    def normalize(self, g: StageElem) -> StageElem:
        n, x = g.n, g.inner
        while n > 0:
            p = self.pull(x, n - 1)
            if p is None:
                break
            n, x = n - 1, p
        return g if n == g.n else StageElem(n, x)

    def member(self, e) -> bool:
        if not isinstance(e, StageElem) or not isinstance(e.n, int) or isinstance(e.n, bool):
            return False
        if e.n < 0 or not member(self.stage(e.n), e.inner):
            return False
        return e.n == 0 or self.pull(e.inner, e.n - 1) is None

    def compare(self, a: StageElem, b: StageElem) -> Ordering:
        k = max(a.n, b.n)
        return _cmp(self.stage(k), self.raise_to(a.inner, a.n, k), self.raise_to(b.inner, b.n, k))

    def is_finite(self) -> ExtBool:
        # the union is finite iff G_0 is a single point; otherwise every stage grows
        return is_least(self.base, self.top0)

    def predecessor(self, g: StageElem):
        if self.is_finite() is ExtBool.TRUE:
            return None
        if g.n == 0:
            p = predecessor(self.stage(0), g.inner)
            if p is not None and p is not UNKNOWN:
                return StageElem(0, p)
        return UNKNOWN

    def enumerate(self):
        if self.is_finite() is not ExtBool.TRUE:
            raise InvariantError("fixed-point chain is not finite")
        yield StageElem(0, self.top0)


@functools.lru_cache(maxsize=None)
def tower(c: Fix) -> Tower:
    return Tower(c.kind, c.base, c.zero)


def _fix(kind, base, zero) -> Fix:
    try:
        return Fix(Kind(kind), base, zero)
    except InvariantError as exc:
        raise HypothesisFailed(str(exc)) from exc


# -- stage embeddings and normalization ----------------------------------------


def stage_chain(kind, base: Chain, zero: Elem, n: int) -> Chain:
    return tower(_fix(kind, base, zero)).stage(n)


def stage_embed(kind, base: Chain, zero: Elem, n: int) -> Embedding:
    t = tower(_fix(kind, base, zero))
    return Embedding(
        t.stage(n),
        t.stage(n + 1),
        lambda x: t.push(x, n),
        lambda y: t.pull(y, n),
        convex=True,
        final_segment=True,
    )


def normalize(kind, base: Chain, zero: Elem, e: StageElem) -> StageElem:
    return tower(_fix(kind, base, zero)).normalize(e)


# -- the isomorphism (D^G)^{<=0} ~ G and its variants ---------------------------


def iso_source(kind, base: Chain, zero: Elem, gamma: Chain) -> Chain:
    power = Pow(base, zero, gamma)
    kind = Kind(kind)
    if kind is Kind.EQ2:
        return power
    return (SegLT if kind is Kind.EQ3 else SegLE)(power, EMPTY_MAP)


def iso_to(kind, base: Chain, zero: Elem, s: MapElem) -> StageElem:
    gamma = _fix(kind, base, zero)
    t = tower(gamma)
    power = Pow(base, zero, gamma)
    if not member(power, s):
        raise NotAMember(f"{s!r} is not an element of {power!r}")
    sign = _cmp(power, s, EMPTY_MAP)
    if sign > 0 or (t.strict and sign == 0):
        raise WrongSegment(f"{s!r} lies outside the segment below zero")
    n = max((k.n for k, _ in s.pairs), default=0)
    raw = MapElem(tuple((t.raise_to(k.inner, k.n, n), v) for k, v in s.pairs))
    return t.normalize(StageElem(n + 1, raw))


def iso_from(kind, base: Chain, zero: Elem, g: StageElem) -> MapElem:
    gamma = _fix(kind, base, zero)
    t = tower(gamma)
    if not t.member(g):
        raise NotAMember(f"{g!r} is not an element of {gamma!r}")
    if g.n == 0:
        return MapElem(tuple((StageElem(0, k), v) for k, v in t.push(g.inner, 0).pairs))
    return MapElem(tuple((t.normalize(StageElem(g.n - 1, k)), v) for k, v in g.inner.pairs))


@dataclass(frozen=True, eq=False)
class Solution:
    kind: Kind
    base: Chain
    zero: Elem
    gamma: Chain
    iso: Iso  # iso.to: segment of Pow(base, zero, gamma) -> gamma
    trivial: bool = False


def _solution_iso(kind, base, zero, gamma: Fix, as_kind=None) -> Iso:
    as_kind = Kind(as_kind or kind)
    to = Embedding(
        iso_source(as_kind, base, zero, gamma),
        gamma,
        lambda s: iso_to(kind, base, zero, s),
        lambda g: iso_from(kind, base, zero, g),
    )
    return Iso.of(to)


def solution_as(sol: Solution, kind) -> Solution:
    """Reuse a solution's chain for another equation when the two sources coincide.

    With zero last, the empty map is last in D^G, so (D^G)^{<=0} is all of D^G
    and an EQ1 solution also solves EQ2 (and conversely).
    """
    kind = Kind(kind)
    if kind is Kind(sol.kind):
        return sol
    pair = {Kind(sol.kind), kind}
    if pair != {Kind.EQ1, Kind.EQ2}:
        raise HypothesisFailed("only EQ1 and EQ2 solutions are interchangeable")
    if is_last(sol.base, sol.zero) is not ExtBool.TRUE:
        raise HypothesisFailed("zero not last")
    if not isinstance(sol.gamma, Fix):
        raise HypothesisFailed("needs a constructed fixed-point chain")
    iso = _solution_iso(sol.gamma.kind, sol.base, sol.zero, sol.gamma, as_kind=kind)
    return Solution(kind, sol.base, sol.zero, sol.gamma, iso)


def solve(kind, base: Chain, zero: Elem) -> Solution:
    kind = Kind(kind)
    if not member(base, zero):
        raise NotAMember(f"{zero!r} is not an element of {base!r}")
    if kind is Kind.EQ2:
        flag = is_last(base, zero)
        if flag is ExtBool.FALSE:
            raise NotSolvable("zero not last")
        if flag is UNKNOWN:
            raise HypothesisFailed("cannot decide whether zero is last")
    elif kind is Kind.EQ3:
        p = predecessor(base, zero)
        if p is UNKNOWN:
            raise HypothesisFailed("cannot decide the last element below zero")
        if p is None:
            # the criterion covers zero not last; a least zero leaves nothing below it
            if is_least(base, zero) is ExtBool.TRUE or is_last(base, zero) is ExtBool.FALSE:
                raise NotSolvable("no last element below zero")
            raise HypothesisFailed("zero is last and nothing below it has a last element")
    gamma = Fix(kind, base, zero)
    trivial = kind is Kind.EQ1 and is_least(base, zero) is ExtBool.TRUE
    return Solution(kind, base, zero, gamma, _solution_iso(kind, base, zero, gamma), trivial)


# -- omega* tails and the shift isomorphism ------------------------------------------


def tail_witness(c: Chain) -> Optional[Embedding]:
    """An embedding of omega* onto a final segment of ``c``, when one is derivable."""
    match c:
        case OmegaStar():
            return Embedding(c, c, lambda x: x, lambda y: y, True, True)
        case SegLE(of=of, bound=b) | SegLT(of=of, bound=b):
            t = tail_witness(of)
            j = t.inverse(b) if t is not None else None
            if j is None:
                return None
            offset = j.k + (1 if isinstance(c, SegLT) else 0)

            def inverse(y, t=t, offset=offset):
                i = t.inverse(y)
                return None if i is None or i.k < offset else StarIdx(i.k - offset)

            return Embedding(
                OmegaStar(), c, lambda x, t=t, offset=offset: t.forward(StarIdx(x.k + offset)),
                inverse, True, True,
            )
        case Pow(base=base, zero=zero, exp=exp):
            if is_last(base, zero) is not ExtBool.TRUE or has_last(exp) is not ExtBool.TRUE:
                return None
            t = tail_witness(base)
            if t is None:
                return None
            return t.then(embed_delta(base, zero, exp))
        case Fix():
            tw = tower(c)
            t = tail_witness(tw.stage(0))
            if t is None:
                return None

            def inverse(g, t=t):
                return t.inverse(g.inner) if g.n == 0 else None

            return Embedding(
                OmegaStar(), c, lambda x, t=t: StageElem(0, t.forward(x)), inverse, True, True
            )
    return None


def shift_iso(gamma: Chain, tail: Optional[Embedding]) -> Iso:
    """gamma ~ gamma minus its last element, sliding the omega* tail down one step."""
    if tail is None or not tail.final_segment:
        raise NoTailWitness(f"no omega* tail witness for {gamma!r}")
    top = tail.forward(StarIdx(0))
    rest = SegLT(gamma, top)

    def down(x):
        i = tail.inverse(x)
        return x if i is None else tail.forward(StarIdx(i.k + 1))

    def up(y):
        i = tail.inverse(y)
        if i is None:
            return y
        return None if i.k == 0 else tail.forward(StarIdx(i.k - 1))

    return Iso(
        Embedding(gamma, rest, down, up, True, True),
        Embedding(rest, gamma, up, down, True, True),
    )


@dataclass(frozen=True, eq=False)
class SimultaneousSolution:
    base: Chain
    zero: Elem
    gamma: Chain
    iso1: Iso
    iso2: Iso
    iso3: Iso
    tail: Embedding
    shift: Iso


def simultaneous(base: Chain, zero: Elem) -> SimultaneousSolution:
    if not member(base, zero):
        raise NotAMember(f"{zero!r} is not an element of {base!r}")
    failed = []
    if is_last(base, zero) is not ExtBool.TRUE:
        failed.append("zero not last")
    if tail_witness(base) is None:
        failed.append("no ω* tail")
    if failed:
        raise HypothesisFailed("; ".join(failed))
    gamma = Fix(Kind.EQ1, base, zero)
    iso1 = _solution_iso(Kind.EQ1, base, zero, gamma)
    iso2 = _solution_iso(Kind.EQ1, base, zero, gamma, as_kind=Kind.EQ2)
    tail = tail_witness(gamma)
    shift = shift_iso(gamma, tail)
    to3 = Embedding(
        iso_source(Kind.EQ3, base, zero, gamma),
        gamma,
        lambda s: shift.from_.forward(iso2.to.forward(s)),
        lambda g: iso2.from_.forward(shift.to.forward(g)),
    )
    return SimultaneousSolution(base, zero, gamma, iso1, iso2, Iso.of(to3), tail, shift)


# -- special solutions and minimality ---------------------------------------------


def power_solution(sol: Solution) -> Solution:
    """Given G ~ D^G, the chain D^G solves the same equation (relabelled copy)."""
    if Kind(sol.kind) is not Kind.EQ2:
        raise HypothesisFailed("power_solution needs a solution of D^G ~ G")
    to = lift(sol.iso.to, sol.base, sol.zero)
    return Solution(Kind.EQ2, sol.base, sol.zero, to.target, Iso.of(to))


def _check_same_instance(base, zero, other: Solution) -> None:
    if is_last(base, zero) is not ExtBool.TRUE:
        raise HypothesisFailed("zero not last")
    if Kind(other.kind) is not Kind.EQ2:
        raise HypothesisFailed("other solution is not for D^G ~ G")
    if other.base != base or other.zero != zero:
        raise HypothesisFailed("other solution is over a different base or zero")


def minimal_embed(base: Chain, zero: Elem, other: Solution) -> Embedding:
    """Final-segment embedding of the constructed solution into ``other.gamma``."""
    _check_same_instance(base, zero, other)
    own = Fix(Kind.EQ2, base, zero)
    to_other = other.iso.to.forward
    from_other = other.iso.from_.forward

    @functools.lru_cache(maxsize=None)
    def forward(g: StageElem) -> Elem:
        # stage by stage: the keys of g's decomposition sit at lower stages
        s = iso_from(Kind.EQ2, base, zero, g)
        return to_other(MapElem(tuple((forward(k), v) for k, v in s.pairs)))

    @functools.lru_cache(maxsize=None)
    def inverse(y: Elem) -> Optional[StageElem]:
        s = from_other(y)
        pairs = []
        for k, v in s.pairs:
            x = inverse(k)
            if x is None:
                return None
            pairs.append((x, v))
        try:
            return iso_to(Kind.EQ2, base, zero, canon_map(base, zero, own, pairs))
        except NotAMember:
            return None

    def guarded(fn):
        def call(x):
            try:
                return fn(x)
            except RecursionError as exc:
                raise CheckFailed("decomposition did not terminate", x) from exc

        return call

    return Embedding(own, other.gamma, guarded(forward), guarded(inverse), True, True)


def verify_special(base: Chain, zero: Elem, sol: Solution, samples: int = 48, seed: int = 0,
                   depth: int = 3) -> Embedding:
    """Embed the base as a final segment of ``sol.gamma`` and check it on samples."""
    from . import checks, sampling

    _check_same_instance(base, zero, sol)
    top = last(sol.gamma)
    if top is None:
        raise HypothesisFailed("solution has no known last element")
    ed = embed_delta(base, zero, sol.gamma)
    emb = Embedding(
        base,
        sol.gamma,
        lambda d: sol.iso.to.forward(ed.forward(d)),
        lambda g: ed.inverse(sol.iso.from_.forward(g)),
        convex=True,
        final_segment=True,
    )
    xs = sampling.sample_many(base, samples, seed=seed, depth=depth)
    ys = sampling.sample_many(sol.gamma, samples, seed=seed + 1, depth=depth)
    checks.check_order_preserving(emb, xs)
    checks.check_final_segment(emb, xs, ys)
    return emb
