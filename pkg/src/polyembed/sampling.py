"""Seeded generators of rational test points."""
from __future__ import annotations

import random
from typing import Sequence

from gmpy2 import mpq

from .rational import ONE, ZERO


def rng(seed) -> random.Random:
    return random.Random(seed)


def random_distribution(r: random.Random, n: int, scale: int = 12, sparse: float = 0.15) -> tuple:
    """A random point of the simplex with small denominators.

    Some coordinates are zeroed with probability ``sparse`` so that faces of
    the simplex get sampled too.
    """
    while True:
        w = [0 if r.random() < sparse else r.randint(0, scale) for _ in range(n)]
        s = sum(w)
        if s:
            return tuple(mpq(x, s) for x in w)


def random_point(r: random.Random, d: int, radius: int = 3, denom: int = 8) -> tuple:
    return tuple(mpq(r.randint(-radius * denom, radius * denom), denom) for _ in range(d))


def random_convex_combination(r: random.Random, points: Sequence[Sequence], anchor: Sequence | None = None) -> tuple:
    """A random convex combination; positive weight on ``anchor`` when given."""
    pts = [tuple(p) for p in points]
    if anchor is not None:
        pts = [tuple(anchor)] + pts
    w = [r.randint(1, 9) for _ in pts]
    if anchor is not None:
        w[0] += 9 * len(pts)
    s = sum(w)
    d = len(pts[0])
    out = [ZERO] * d
    for wi, p in zip(w, pts):
        c = mpq(wi, s)
        for k in range(d):
            out[k] += c * p[k]
    return tuple(out)
