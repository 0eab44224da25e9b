"""Chain descriptors, element values, and the decidable order on them.

A chain is described symbolically by a small set of constructors (finite
chains, omega, omega*, lexicographic powers, initial segments, finite
heterogeneous products and fixed-point chains).  Elements are plain frozen
values; maps are kept in canonical form so structural equality coincides
with order-equality.
"""
from __future__ import annotations

import enum
import functools
import itertools
from dataclasses import dataclass
from typing import Iterator, Optional, Union

from .errors import InvariantError, NotAMember, NotFinite


class Ordering(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1

    def flip(self) -> Ordering:
        return Ordering(-self.value)


class ExtBool(enum.Enum):
    TRUE = "true"
    FALSE = "false"
    UNKNOWN = "unknown"

    @classmethod
    def of(cls, flag: bool) -> ExtBool:
        return cls.TRUE if flag else cls.FALSE

    def __bool__(self):
        raise TypeError("ExtBool has no truth value; compare against ExtBool.TRUE")


UNKNOWN = ExtBool.UNKNOWN

# finite chains larger than this are never listed just to answer a structural question
LISTING_LIMIT = 4096


class Kind(enum.IntEnum):
    """Which lexicographic functional equation a fixed-point chain solves."""

    EQ1 = 1  # (D^G)^{<=0} ~ G
    EQ2 = 2  # D^G ~ G
    EQ3 = 3  # (D^G)^{<0} ~ G


# -- elements ---------------------------------------------------------------


@dataclass(frozen=True)
class FinIdx:
    i: int


@dataclass(frozen=True)
class Nat:
    i: int


@dataclass(frozen=True)
class StarIdx:
    """The k-th element counted down from the top of omega*."""

    k: int


@dataclass(frozen=True)
class MapElem:
    pairs: tuple = ()

    def keys(self) -> tuple:
        return tuple(k for k, _ in self.pairs)

    def get(self, key, default=None):
        for k, v in self.pairs:
            if k == key:
                return v
        return default


@dataclass(frozen=True)
class StageElem:
    n: int
    inner: "Elem"


@dataclass(frozen=True)
class TupleElem:
    values: tuple


Elem = Union[FinIdx, Nat, StarIdx, MapElem, StageElem, TupleElem]

EMPTY_MAP = MapElem(())


# -- chains -----------------------------------------------------------------


@dataclass(frozen=True)
class Fin:
    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise InvariantError("empty chain")


@dataclass(frozen=True)
class Omega:
    pass


@dataclass(frozen=True)
class OmegaStar:
    pass


@dataclass(frozen=True)
class Pow:
    """Lexicographic power base^exp with respect to ``zero``, finite supports."""

    base: "Chain"
    zero: Elem
    exp: "Chain"

    def __post_init__(self):
        if not member(self.base, self.zero):
            raise InvariantError("zero not a member of base")


@dataclass(frozen=True)
class SegLE:
    of: "Chain"
    bound: Elem

    def __post_init__(self):
        if not member(self.of, self.bound):
            raise InvariantError("bound not a member of chain")


@dataclass(frozen=True)
class SegLT:
    # may be empty (e.g. below a least element); emptiness is not always decidable
    of: "Chain"
    bound: Elem

    def __post_init__(self):
        if not member(self.of, self.bound):
            raise InvariantError("bound not a member of chain")


@dataclass(frozen=True)
class HetProd:
    """Finite lexicographic product; position i carries factors[i] = (chain, zero)."""

    factors: tuple

    def __post_init__(self):
        if not self.factors:
            raise InvariantError("empty chain")
        for chain, zero in self.factors:
            if not member(chain, zero):
                raise InvariantError("zero not a member of factor")


@dataclass(frozen=True)
class Fix:
    """The union chain of the stage tower solving equation ``kind``."""

    kind: Kind
    base: "Chain"
    zero: Elem

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        if not member(self.base, self.zero):
            raise InvariantError("zero not a member of base")
        if self.kind is Kind.EQ2:
            flag = is_last(self.base, self.zero)
            if flag is ExtBool.FALSE:
                raise InvariantError("zero not last")
            if flag is UNKNOWN:
                raise InvariantError("cannot decide whether zero is last")
        elif self.kind is Kind.EQ3:
            p = predecessor(self.base, self.zero)
            if p is None:
                raise InvariantError("no last element below zero")
            if p is UNKNOWN:
                raise InvariantError("cannot decide the last element below zero")


Chain = Union[Fin, Omega, OmegaStar, Pow, SegLE, SegLT, HetProd, Fix]


def _fixpoint():
    from . import fixpoint

    return fixpoint


def _sign(x: int) -> Ordering:
    return Ordering.LESS if x < 0 else Ordering.GREATER if x > 0 else Ordering.EQUAL


# -- membership -------------------------------------------------------------


def member(c: Chain, e) -> bool:
    """True iff ``e`` is a well-formed (canonical) element of ``c``."""
    try:
        return _member(c, e)
    except (TypeError, AttributeError, ValueError):
        return False


def _is_nat(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool) and x >= 0


def _member(c: Chain, e) -> bool:
    match c:
        case Fin(n=n):
            return isinstance(e, FinIdx) and _is_nat(e.i) and e.i < n
        case Omega():
            return isinstance(e, Nat) and _is_nat(e.i)
        case OmegaStar():
            return isinstance(e, StarIdx) and _is_nat(e.k)
        case Pow(base=base, zero=zero, exp=exp):
            if not isinstance(e, MapElem) or not isinstance(e.pairs, tuple):
                return False
            prev = None
            for pair in e.pairs:
                k, v = pair
                if not _member(exp, k) or not _member(base, v) or v == zero:
                    return False
                if prev is not None and _cmp(exp, prev, k) is not Ordering.LESS:
                    return False
                prev = k
            return True
        case SegLE(of=of, bound=b):
            return _member(of, e) and _cmp(of, e, b) <= 0
        case SegLT(of=of, bound=b):
            return _member(of, e) and _cmp(of, e, b) < 0
        case HetProd(factors=factors):
            return (
                isinstance(e, TupleElem)
                and isinstance(e.values, tuple)
                and len(e.values) == len(factors)
                and all(_member(f, x) for (f, _), x in zip(factors, e.values))
            )
        case Fix():
            return _fixpoint().tower(c).member(e)
    raise TypeError(f"not a chain: {c!r}")


# -- order --------------------------------------------------------------------


def compare(c: Chain, a, b) -> Ordering:
    if not member(c, a):
        raise NotAMember(f"{a!r} is not an element of {c!r}")
    if not member(c, b):
        raise NotAMember(f"{b!r} is not an element of {c!r}")
    return _cmp(c, a, b)


def _cmp(c: Chain, a, b) -> Ordering:
    """Comparison without membership checks."""
    match c:
        case Fin() | Omega():
            return _sign(a.i - b.i)
        case OmegaStar():
            return _sign(b.k - a.k)
        case Pow(base=base, zero=zero, exp=exp):
            return _cmp_maps(base, zero, exp, a.pairs, b.pairs)
        case SegLE(of=of) | SegLT(of=of):
            return _cmp(of, a, b)
        case HetProd(factors=factors):
            for (f, _), x, y in zip(factors, a.values, b.values):
                o = _cmp(f, x, y)
                if o:
                    return o
            return Ordering.EQUAL
        case Fix():
            return _fixpoint().tower(c).compare(a, b)
    raise TypeError(f"not a chain: {c!r}")


def _cmp_maps(base, zero, exp, a: tuple, b: tuple) -> Ordering:
    # values at the least position where the two maps differ decide
    i = j = 0
    while i < len(a) and j < len(b):
        ka, va = a[i]
        kb, vb = b[j]
        o = _cmp(exp, ka, kb)
        if o is Ordering.EQUAL:
            ov = _cmp(base, va, vb)
            if ov:
                return ov
            i += 1
            j += 1
        elif o is Ordering.LESS:
            return _cmp(base, va, zero)
        else:
            return _cmp(base, zero, vb)
    if i < len(a):
        return _cmp(base, a[i][1], zero)
    if j < len(b):
        return _cmp(base, zero, b[j][1])
    return Ordering.EQUAL


def sort_key(c: Chain):
    return functools.cmp_to_key(lambda a, b: _cmp(c, a, b))


# -- structural predicates --------------------------------------------------


def _extreme(c: Chain, top: bool):
    """Last (top=True) or least element: an Elem, None if provably absent, or UNKNOWN."""
    match c:
        case Fin(n=n):
            return FinIdx(n - 1) if top else FinIdx(0)
        case Omega():
            return None if top else Nat(0)
        case OmegaStar():
            return StarIdx(0) if top else None
        case Pow(base=base, zero=zero, exp=exp):
            zero_extreme = _is_extreme(base, zero, top)
            if zero_extreme is ExtBool.TRUE:
                return EMPTY_MAP
            if zero_extreme is UNKNOWN:
                return UNKNOWN
            # a free position can always be pushed away from zero when exp is infinite
            fin = is_finite(exp)
            if fin is ExtBool.FALSE:
                return None
            if fin is UNKNOWN:
                return UNKNOWN
            m = _extreme(base, top)
            if m is None or m is UNKNOWN:
                return m
            if size_bound(exp, LISTING_LIMIT) is None:
                return UNKNOWN  # exists, but too many positions to write down
            return MapElem(tuple((k, m) for k in enumerate(exp)))
        case SegLE(of=of, bound=b):
            return b if top else _extreme(of, False)
        case SegLT(of=of, bound=b):
            if top:
                return predecessor(of, b)
            m = _extreme(of, False)
            if m is None or m is UNKNOWN:
                return m
            return m if _cmp(of, m, b) < 0 else None
        case HetProd(factors=factors):
            parts = [_extreme(f, top) for f, _ in factors]
            if any(p is None for p in parts):
                return None
            if any(p is UNKNOWN for p in parts):
                return UNKNOWN
            return TupleElem(tuple(parts))
        case Fix():
            t = _fixpoint().tower(c)
            if top:
                return StageElem(0, t.top0)
            fin = is_finite(c)
            if fin is ExtBool.TRUE:
                return StageElem(0, t.top0)
            # every stage adds elements strictly below the previous one
            return None if fin is ExtBool.FALSE else UNKNOWN
    raise TypeError(f"not a chain: {c!r}")


def _is_extreme(c: Chain, e, top: bool) -> ExtBool:
    m = _extreme(c, top)
    if m is UNKNOWN:
        return UNKNOWN
    if m is None:
        return ExtBool.FALSE
    return ExtBool.of(_cmp(c, e, m) is Ordering.EQUAL)


def has_last(c: Chain) -> ExtBool:
    if isinstance(c, Pow) and is_finite(c) is ExtBool.TRUE:
        return ExtBool.TRUE  # powers are never empty
    m = _extreme(c, True)
    return UNKNOWN if m is UNKNOWN else ExtBool.of(m is not None)


def has_least(c: Chain) -> ExtBool:
    if isinstance(c, Pow) and is_finite(c) is ExtBool.TRUE:
        return ExtBool.TRUE
    m = _extreme(c, False)
    return UNKNOWN if m is UNKNOWN else ExtBool.of(m is not None)


def last(c: Chain) -> Optional[Elem]:
    m = _extreme(c, True)
    return None if m is UNKNOWN else m


def least(c: Chain) -> Optional[Elem]:
    m = _extreme(c, False)
    return None if m is UNKNOWN else m


def is_last(c: Chain, e) -> ExtBool:
    if not member(c, e):
        raise NotAMember(f"{e!r} is not an element of {c!r}")
    return _is_extreme(c, e, True)


def is_least(c: Chain, e) -> ExtBool:
    if not member(c, e):
        raise NotAMember(f"{e!r} is not an element of {c!r}")
    return _is_extreme(c, e, False)


def predecessor(c: Chain, e):
    """Immediate predecessor; None when provably absent, UNKNOWN when undecided."""
    match c:
        case Fin():
            return FinIdx(e.i - 1) if e.i > 0 else None
        case Omega():
            return Nat(e.i - 1) if e.i > 0 else None
        case OmegaStar():
            return StarIdx(e.k + 1)
        case SegLE(of=of) | SegLT(of=of):
            return predecessor(of, e)
        case HetProd(factors=factors):
            return _het_predecessor(factors, e)
        case Pow(base=base, zero=zero, exp=exp):
            # lowering the value at the top position by one step is immediate
            top = last(exp)
            if top is not None:
                pairs = list(e.pairs)
                at_top = bool(pairs) and _cmp(exp, pairs[-1][0], top) is Ordering.EQUAL
                v = pairs[-1][1] if at_top else zero
                p = predecessor(base, v)
                if p is not None and p is not UNKNOWN:
                    rest = pairs[:-1] if at_top else pairs
                    return MapElem(tuple(rest + ([] if p == zero else [(top, p)])))
        case Fix():
            p = _fixpoint().tower(c).predecessor(e)
            if p is not UNKNOWN:
                return p
    if is_finite(c) is ExtBool.TRUE and size_bound(c, LISTING_LIMIT) is not None:
        prev = None
        for x in enumerate(c):
            if _cmp(c, x, e) is Ordering.EQUAL:
                return prev
            prev = x
        raise NotAMember(f"{e!r} is not an element of {c!r}")
    return UNKNOWN


def _het_predecessor(factors, e: TupleElem):
    vals = list(e.values)
    i = len(vals) - 1
    # skip trailing coordinates sitting at their least element
    while i >= 0:
        flag = _is_extreme(factors[i][0], vals[i], False)
        if flag is UNKNOWN:
            return UNKNOWN
        if flag is ExtBool.FALSE:
            break
        i -= 1
    if i < 0:
        return None
    p = predecessor(factors[i][0], vals[i])
    if p is None or p is UNKNOWN:
        return p
    tail = []
    for f, _ in factors[i + 1:]:
        m = _extreme(f, True)
        if m is None or m is UNKNOWN:
            return m
        tail.append(m)
    return TupleElem(tuple(vals[:i] + [p] + tail))


def is_finite(c: Chain) -> ExtBool:
    match c:
        case Fin():
            return ExtBool.TRUE
        case Omega() | OmegaStar():
            return ExtBool.FALSE
        case Pow(base=base, exp=exp):
            fb = is_finite(base)
            if fb is not ExtBool.TRUE:
                return fb
            lo, hi = least(base), last(base)
            if lo is not None and lo == hi:
                return ExtBool.TRUE  # singleton base: only the empty map
            return is_finite(exp)
        case SegLE(of=of) | SegLT(of=of):
            fo = is_finite(of)
            if fo is ExtBool.TRUE:
                return fo
            if isinstance(of, Omega):
                return ExtBool.TRUE
            if isinstance(of, OmegaStar):
                return ExtBool.FALSE
            return UNKNOWN
        case HetProd(factors=factors):
            flags = [is_finite(f) for f, _ in factors]
            if all(f is ExtBool.TRUE for f in flags):
                return ExtBool.TRUE
            if any(f is ExtBool.FALSE for f in flags):
                return ExtBool.FALSE
            return UNKNOWN
        case Fix():
            return _fixpoint().tower(c).is_finite()
    raise TypeError(f"not a chain: {c!r}")


def size_bound(c: Chain, limit: int) -> Optional[int]:
    """An upper bound on the size of ``c`` when it is finite and at most ``limit``; else None."""
    match c:
        case Fin(n=n):
            return n if n <= limit else None
        case Pow(base=base, exp=exp):
            b = size_bound(base, limit)
            if b is None:
                return None
            if b == 1:
                return 1
            e = size_bound(exp, limit.bit_length())
            if e is None or b**e > limit:
                return None
            return b**e
        case SegLE(of=of) | SegLT(of=of):
            return size_bound(of, limit)
        case HetProd(factors=factors):
            total = 1
            for f, _ in factors:
                k = size_bound(f, limit)
                if k is None or total * k > limit:
                    return None
                total *= k
            return total
        case Fix():
            return 1 if is_finite(c) is ExtBool.TRUE else None
    return None


def enumerate(c: Chain) -> Iterator[Elem]:  # noqa: A001 - mirrors the operation name
    """Ascending stream of every element of a hereditarily finite chain."""
    if is_finite(c) is ExtBool.FALSE:
        raise NotFinite(f"{c!r} is infinite")
    if isinstance(c, (Omega, OmegaStar)):
        raise NotFinite(f"{c!r} is infinite")
    return _ascending(c)


def _ascending(c: Chain) -> Iterator[Elem]:
    match c:
        case Fin(n=n):
            for i in range(n):
                yield FinIdx(i)
        case Omega():
            for i in itertools.count():
                yield Nat(i)
        case OmegaStar():
            raise NotFinite("omega* has no least element")
        case Pow(base=base, zero=zero, exp=exp):
            base_elems = list(enumerate(base))
            if len(base_elems) == 1:
                yield EMPTY_MAP
                return
            exp_elems = list(enumerate(exp))
            maps = [
                MapElem(tuple((k, v) for k, v in zip(exp_elems, values) if v != zero))
                for values in itertools.product(base_elems, repeat=len(exp_elems))
            ]
            yield from sorted(maps, key=sort_key(c))
        case SegLE(of=of, bound=b):
            for x in _ascending(of):
                if _cmp(of, x, b) > 0:
                    return
                yield x
        case SegLT(of=of, bound=b):
            for x in _ascending(of):
                if _cmp(of, x, b) >= 0:
                    return
                yield x
        case HetProd(factors=factors):
            parts = [list(enumerate(f)) for f, _ in factors]
            for values in itertools.product(*parts):
                yield TupleElem(tuple(values))
        case Fix():
            yield from _fixpoint().tower(c).enumerate()
        case _:
            raise TypeError(f"not a chain: {c!r}")


def cardinality(c: Chain) -> int:
    return sum(1 for _ in enumerate(c))
