"""Seeded random elements of constructed chains."""
from __future__ import annotations

import random

from .chains import (
    EMPTY_MAP,
    ExtBool,
    Fin,
    FinIdx,
    Fix,
    HetProd,
    MapElem,
    Nat,
    Omega,
    OmegaStar,
    Ordering,
    Pow,
    SegLE,
    SegLT,
    StageElem,
    StarIdx,
    TupleElem,
    _cmp,
    is_finite,
    last,
    sort_key,
)

TOP_RATE = 0.05
TRIES = 64


def sample(c, rng: random.Random, depth: int = 4, max_support: int = 3):
    """One random element of ``c``; ``depth`` bounds the nesting of maps."""
    if rng.random() < TOP_RATE:
        top = last(c)
        if top is not None:
            return top
    match c:
        case Fin(n=n):
            return FinIdx(rng.randrange(n))
        case Omega():
            return Nat(rng.randrange(16))
        case OmegaStar():
            return StarIdx(rng.randrange(16))
        case Pow(base=base, zero=zero, exp=exp):
            if depth <= 0:
                return EMPTY_MAP
            size = rng.randint(0, max_support) if rng.random() < 0.2 else rng.randint(1, max_support)
            keys = [sample(exp, rng, depth - 1, max_support) for _ in range(size)]
            pairs = []
            for k in sorted(keys, key=sort_key(exp)):
                if pairs and _cmp(exp, pairs[-1][0], k) is Ordering.EQUAL:
                    continue
                v = _nonzero(base, zero, rng, depth - 1, max_support)
                if v is not None:
                    pairs.append((k, v))
            return MapElem(tuple(pairs))
        case SegLE(of=of, bound=b) | SegLT(of=of, bound=b):
            strict = isinstance(c, SegLT)
            for _ in range(TRIES):
                x = sample(of, rng, depth, max_support)
                o = _cmp(of, x, b)
                if o < 0 or (o == 0 and not strict):
                    return x
            top = last(c)
            if top is None:
                raise ValueError(f"could not sample from {c!r}")
            return top
        case HetProd(factors=factors):
            return TupleElem(tuple(sample(f, rng, depth, max_support) for f, _ in factors))
        case Fix():
            from .fixpoint import tower

            t = tower(c)
            n = 0 if is_finite(c) is ExtBool.TRUE else rng.randint(0, max(depth, 0))
            x = sample(t.stage(n), rng, n, max_support)
            return t.normalize(StageElem(n, x))
    raise TypeError(f"not a chain: {c!r}")


def _nonzero(base, zero, rng, depth, max_support):
    for _ in range(10):
        v = sample(base, rng, depth, max_support)
        if v != zero:
            return v
    return None


def sample_many(c, count: int, seed: int = 0, depth: int = 4, max_support: int = 3) -> list:
    rng = random.Random(seed)
    return [sample(c, rng, depth, max_support) for _ in range(count)]
