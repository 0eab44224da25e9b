"""Brute-force ground truth for hereditarily finite chains.

Nothing here calls the comparator in ``chains``: every finite chain is listed
directly, and powers are ordered by scanning positions in ascending order for
the first difference.
"""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Iterable, Optional

from .chains import Fin, FinIdx, HetProd, MapElem, Pow, SegLE, SegLT, TupleElem
from .errors import NotFinite


@dataclass(frozen=True)
class FiniteModel:
    chain: object
    elems: tuple

    def index(self, e) -> int:
        return self._positions()[e]

    def _positions(self) -> dict:
        pos = self.__dict__.get("_pos")
        if pos is None:
            pos = {e: i for i, e in enumerate(self.elems)}
            object.__setattr__(self, "_pos", pos)
        return pos

    def __len__(self):
        return len(self.elems)


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    counterexample: Optional[tuple] = None

    def __bool__(self):
        return self.ok


def listing(chain) -> tuple:
    """All elements of a hereditarily finite chain, ascending."""
    match chain:
        case Fin(n=n):
            return tuple(FinIdx(i) for i in range(n))
        case Pow(base=base, zero=zero, exp=exp):
            return brute_power(base, zero, exp).elems
        case SegLE(of=of, bound=b):
            elems = listing(of)
            return elems[: elems.index(b) + 1]
        case SegLT(of=of, bound=b):
            elems = listing(of)
            return elems[: elems.index(b)]
        case HetProd(factors=factors):
            return tuple(TupleElem(v) for v in itertools.product(*(listing(f) for f, _ in factors)))
    raise NotFinite(f"{chain!r} is not hereditarily finite")


def brute_power(base, zero, exp) -> FiniteModel:
    """Every function exp -> base, sorted lexicographically."""
    base_elems = listing(base)
    exp_elems = listing(exp)
    rank = {e: i for i, e in enumerate(base_elems)}

    def lex(f, g):
        for x, y in zip(f, g):
            if x != y:
                return -1 if rank[x] < rank[y] else 1
        return 0

    funcs = sorted(itertools.product(base_elems, repeat=len(exp_elems)), key=functools.cmp_to_key(lex))
    elems = tuple(
        MapElem(tuple((k, v) for k, v in zip(exp_elems, f) if v != zero)) for f in funcs
    )
    return FiniteModel(Pow(base, zero, exp), elems)


def model_of(chain) -> FiniteModel:
    return FiniteModel(chain, listing(chain))


def check_convex(model: FiniteModel, subset: Iterable) -> CheckResult:
    """No element strictly between two members may be missing; else (low, gap, high)."""
    idx = sorted({model.index(e) for e in subset})
    members = set(idx)
    if not idx:
        return CheckResult(True)
    below = idx[0]
    for j in range(idx[0], idx[-1] + 1):
        if j in members:
            below = j
        else:
            above = next(i for i in idx if i > j)
            return CheckResult(False, (model.elems[below], model.elems[j], model.elems[above]))
    return CheckResult(True)


def check_final_segment(model: FiniteModel, subset: Iterable) -> CheckResult:
    """Upward closure; on failure returns (a member, a larger non-member)."""
    idx = {model.index(e) for e in subset}
    if not idx:
        return CheckResult(True)
    lo = min(idx)
    for j in range(lo, len(model.elems)):
        if j not in idx:
            return CheckResult(False, (model.elems[lo], model.elems[j]))
    return CheckResult(True)
