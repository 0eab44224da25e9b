"""Supports, the d + S operation, characteristic maps, lifting and truncation.

The functions here work on lexicographic powers (``Pow``) and, where it makes
sense, on finite heterogeneous products (``HetProd``), whose positions are
``FinIdx(0) .. FinIdx(k-1)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Optional

from .chains import (
    EMPTY_MAP,
    Chain,
    Elem,
    ExtBool,
    Fin,
    FinIdx,
    HetProd,
    MapElem,
    Ordering,
    Pow,
    TupleElem,
    _cmp,
    has_last,
    is_last,
    last,
    member,
    sort_key,
)
from .errors import BadOne, DuplicateKey, NoLastElement, NotAMember, OverlapError

SupportSet = tuple  # strictly ascending positions of the exponent chain


@dataclass(frozen=True, eq=False)
class OneSelector:
    """Picks, for each position, a value strictly above that position's zero."""

    choose: Callable[[Elem], Elem]

    def __call__(self, position: Elem) -> Elem:
        return self.choose(position)

    @classmethod
    def constant(cls, value: Elem) -> OneSelector:
        return cls(lambda _position: value)


@dataclass(frozen=True, eq=False)
class Embedding:
    """An order embedding with a partial inverse (``None`` = not in the image)."""

    source: Chain
    target: Chain
    forward: Callable[[Elem], Elem]
    inverse: Callable[[Elem], Optional[Elem]]
    convex: bool = False
    final_segment: bool = False

    def __call__(self, x: Elem) -> Elem:
        return self.forward(x)

    def then(self, other: Embedding) -> Embedding:
        """Apply ``self`` first, then ``other``."""

        def inverse(y):
            x = other.inverse(y)
            return None if x is None else self.inverse(x)

        return Embedding(
            self.source,
            other.target,
            lambda x: other.forward(self.forward(x)),
            inverse,
            convex=self.convex and other.convex,
            final_segment=self.final_segment and other.final_segment,
        )


@dataclass(frozen=True, eq=False)
class Iso:
    to: Embedding
    from_: Embedding

    @classmethod
    def of(cls, to: Embedding) -> Iso:
        """Complete a surjective embedding (total inverse) to a two-way isomorphism."""
        onto = Embedding(to.source, to.target, to.forward, to.inverse, True, True)
        back = Embedding(to.target, to.source, to.inverse, to.forward, True, True)
        return cls(onto, back)


# -- positional view of Pow / HetProd ------------------------------------------


def exponent(c: Chain) -> Chain:
    if isinstance(c, Pow):
        return c.exp
    if isinstance(c, HetProd):
        return Fin(len(c.factors))
    raise TypeError(f"not a product: {c!r}")


def zero_at(c: Chain, position: Elem) -> Elem:
    return c.zero if isinstance(c, Pow) else c.factors[position.i][1]


def factor_at(c: Chain, position: Elem) -> Chain:
    return c.base if isinstance(c, Pow) else c.factors[position.i][0]


def value_at(c: Chain, e: Elem, position: Elem) -> Elem:
    if isinstance(c, Pow):
        return e.get(position, c.zero)
    return e.values[position.i]


def nonzero_pairs(c: Chain, e: Elem) -> list:
    """The (position, value) pairs off the zeros, ascending in position."""
    if isinstance(c, Pow):
        return list(e.pairs)
    return [
        (FinIdx(i), v) for i, (v, (_, z)) in enumerate(zip(e.values, c.factors)) if v != z
    ]


def from_pairs(c: Chain, pairs: Iterable) -> Elem:
    """Build an element from ascending (position, value) pairs; zero values are dropped."""
    if isinstance(c, Pow):
        return MapElem(tuple((k, v) for k, v in pairs if v != c.zero))
    values = [z for _, z in c.factors]
    for k, v in pairs:
        values[k.i] = v
    return TupleElem(tuple(values))


def support_of(c: Chain, e: Elem) -> SupportSet:
    return tuple(k for k, _ in nonzero_pairs(c, e))


def _check_member(c: Chain, e: Elem) -> None:
    if not member(c, e):
        raise NotAMember(f"{e!r} is not an element of {c!r}")


def _ascending_set(exp: Chain, positions: Iterable) -> tuple:
    out = []
    for p in sorted(positions, key=sort_key(exp)):
        if not out or _cmp(exp, out[-1], p) is not Ordering.EQUAL:
            out.append(p)
    return tuple(out)


# -- operations ---------------------------------------------------------------


def canon_map(base: Chain, zero: Elem, exp: Chain, pairs: Iterable) -> MapElem:
    pairs = list(pairs)
    for k, v in pairs:
        _check_member(exp, k)
        _check_member(base, v)
    pairs.sort(key=lambda kv: sort_key(exp)(kv[0]))
    for (k1, _), (k2, _) in zip(pairs, pairs[1:]):
        if _cmp(exp, k1, k2) is Ordering.EQUAL:
            raise DuplicateKey(f"key {k1!r} given twice")
    return MapElem(tuple((k, v) for k, v in pairs if v != zero))


def support(e: MapElem) -> SupportSet:
    return e.keys()


def oplus(c: Chain, d: Elem, s: Iterable, one: OneSelector) -> Elem:
    """d + S: set the positions in S to their chosen 'one', keep d elsewhere."""
    _check_member(c, d)
    exp = exponent(c)
    positions = list(s)
    for p in positions:
        _check_member(exp, p)
    positions = _ascending_set(exp, positions)
    for p in positions:
        if value_at(c, d, p) != zero_at(c, p):
            raise OverlapError(f"{d!r} is nonzero at {p!r}")
        o = one(p)
        if not member(factor_at(c, p), o) or _cmp(factor_at(c, p), zero_at(c, p), o) is not Ordering.LESS:
            raise BadOne(f"chosen one {o!r} is not above zero at {p!r}")
    merged = nonzero_pairs(c, d) + [(p, one(p)) for p in positions]
    merged.sort(key=lambda kv: sort_key(exp)(kv[0]))
    return from_pairs(c, merged)


def chi(c: Pow, s: Iterable, one: Elem) -> MapElem:
    """Characteristic map of a finite set of positions."""
    if not member(c.base, one) or _cmp(c.base, c.zero, one) is not Ordering.LESS:
        raise BadOne(f"{one!r} is not above zero")
    positions = list(s)
    for p in positions:
        _check_member(c.exp, p)
    return MapElem(tuple((p, one) for p in _ascending_set(c.exp, positions)))


def lift(phi: Embedding, base: Chain, zero: Elem) -> Embedding:
    """Relabel supports along ``phi``; positions outside the image get zero."""

    def forward(s: MapElem) -> MapElem:
        return MapElem(tuple((phi.forward(k), v) for k, v in s.pairs))

    def inverse(t: MapElem) -> Optional[MapElem]:
        pairs = []
        for k, v in t.pairs:
            x = phi.inverse(k)
            if x is None:
                return None
            pairs.append((x, v))
        return MapElem(tuple(pairs))

    # image is Delta^F for F = image of phi: convex when F is a final segment
    return Embedding(
        Pow(base, zero, phi.source),
        Pow(base, zero, phi.target),
        forward,
        inverse,
        convex=phi.final_segment,
        final_segment=phi.final_segment and is_last(base, zero) is ExtBool.TRUE,
    )


def embed_delta(base: Chain, zero: Elem, exp: Chain) -> Embedding:
    """delta -> the map with value delta at the last position of ``exp``."""
    if has_last(exp) is not ExtBool.TRUE:
        raise NoLastElement(f"{exp!r} has no (known) last element")
    top = last(exp)

    def forward(delta: Elem) -> MapElem:
        return EMPTY_MAP if delta == zero else MapElem(((top, delta),))

    def inverse(t: MapElem) -> Optional[Elem]:
        if not t.pairs:
            return zero
        if len(t.pairs) == 1 and _cmp(exp, t.pairs[0][0], top) is Ordering.EQUAL:
            return t.pairs[0][1]
        return None

    return Embedding(
        base,
        Pow(base, zero, exp),
        forward,
        inverse,
        convex=True,
        final_segment=is_last(base, zero) is ExtBool.TRUE,
    )


def truncate(c: Chain, s: Elem, beta: Elem) -> Elem:
    """Keep the values of ``s`` at positions <= beta, zero above."""
    _check_member(c, s)
    exp = exponent(c)
    _check_member(exp, beta)
    return from_pairs(c, [(k, v) for k, v in nonzero_pairs(c, s) if _cmp(exp, k, beta) <= 0])


def first_difference(c: Chain, a: Elem, b: Elem) -> Optional[Elem]:
    """Least position where ``a`` and ``b`` differ (None when equal)."""
    exp = exponent(c)
    positions = _ascending_set(exp, support_of(c, a) + support_of(c, b))
    for p in positions:
        if value_at(c, a, p) != value_at(c, b, p):
            return p
    return None
