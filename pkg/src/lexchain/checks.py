"""Sampled verification of embeddings and isomorphisms.

Every check raises ``CheckFailed`` carrying the offending element(s).
"""
from __future__ import annotations

import random
from typing import Iterable, Sequence

from .chains import Ordering, _cmp, member, sort_key
from .errors import CheckFailed
from .lexpower import Embedding, Iso


def distinct_sorted(chain, xs: Iterable) -> list:
    out = []
    for x in sorted(xs, key=sort_key(chain)):
        if not out or _cmp(chain, out[-1], x) is not Ordering.EQUAL:
            out.append(x)
    return out


def check_members(chain, xs: Iterable) -> None:
    for x in xs:
        if not member(chain, x):
            raise CheckFailed("not a member of the chain", x)


def check_order_preserving(emb: Embedding, samples: Sequence) -> int:
    """Sort the samples and check the images strictly ascend.

    Because both orders are total this covers every pair of samples.
    Returns the number of distinct samples checked.
    """
    xs = distinct_sorted(emb.source, samples)
    ys = [emb.forward(x) for x in xs]
    check_members(emb.target, ys)
    for (x0, y0), (x1, y1) in zip(zip(xs, ys), zip(xs[1:], ys[1:])):
        if _cmp(emb.target, y0, y1) is not Ordering.LESS:
            raise CheckFailed("order not preserved", x0, x1)
    return len(xs)


def check_pairwise(emb: Embedding, samples: Sequence, count: int, seed: int = 0) -> None:
    """Direct comparison of ``count`` random pairs before and after mapping."""
    rng = random.Random(seed)
    for _ in range(count):
        a, b = rng.choice(samples), rng.choice(samples)
        before = _cmp(emb.source, a, b)
        after = _cmp(emb.target, emb.forward(a), emb.forward(b))
        if before is not after:
            raise CheckFailed("order not preserved", a, b)


def check_round_trip(iso: Iso, src_samples: Iterable = (), tgt_samples: Iterable = ()) -> None:
    for s in src_samples:
        g = iso.to.forward(s)
        if not member(iso.to.target, g):
            raise CheckFailed("image outside the target", s, g)
        if iso.from_.forward(g) != s:
            raise CheckFailed("round trip failed", s, g)
    for g in tgt_samples:
        s = iso.from_.forward(g)
        if not member(iso.to.source, s):
            raise CheckFailed("preimage outside the source", g, s)
        if iso.to.forward(s) != g:
            raise CheckFailed("round trip failed", g, s)


def check_final_segment(emb: Embedding, src_samples: Sequence, tgt_samples: Iterable) -> None:
    """Every sampled target element above a sampled image point must be an image point."""
    images = [emb.forward(x) for x in src_samples]
    for x, y in zip(src_samples, images):
        if emb.inverse(y) != x:
            raise CheckFailed("inverse does not recover the source element", x, y)
    if not images:
        return
    lowest = min(images, key=sort_key(emb.target))
    for t in tgt_samples:
        if _cmp(emb.target, t, lowest) is Ordering.LESS:
            continue
        x = emb.inverse(t)
        if x is None or emb.forward(x) != t:
            raise CheckFailed("element above the image is not in the image", lowest, t)
