"""Exact rational scalars and vectors.

Every quantity in the package is a :class:`gmpy2.mpq`.  ``Q`` is the single
entry point for coercion; it accepts integers, ``fractions.Fraction``,
``mpq`` and strings such as ``"-3/4"`` and refuses floats outright.
"""
from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, Sequence

from gmpy2 import mpq

__all__ = ["Q", "ZERO", "ONE", "vec", "fmt", "fmt_vec", "dot", "parse_vec", "Rational", "Vector"]

Rational = type(mpq(0))
Vector = tuple

ZERO = mpq(0)
ONE = mpq(1)


def Q(x) -> mpq:
    """Coerce ``x`` to an exact rational.

    >>> Q("3/6")
    mpq(1,2)
    """
    if isinstance(x, Rational):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return mpq(x)
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, str):
        s = x.strip()
        if not s or any(ch in s for ch in ".eE"):
            raise ValueError(f"not an exact rational literal: {x!r}")
        num, _, den = s.partition("/")
        try:
            if den:
                return mpq(int(num), int(den))
            return mpq(int(num))
        except ValueError:
            raise ValueError(f"not an exact rational literal: {x!r}") from None
    if isinstance(x, float):
        raise TypeError(f"floating-point value {x!r} rejected; pass an exact rational")
    # numpy integers and similar
    if hasattr(x, "__index__"):
        return mpq(int(x))
    raise TypeError(f"cannot interpret {type(x).__name__} as a rational")


def vec(xs: Iterable) -> tuple:
    return tuple(Q(x) for x in xs)


def dot(a: Sequence, b: Sequence):
    s = ZERO
    for x, y in zip(a, b):
        if x and y:
            s += x * y
    return s


def fmt(x) -> str:
    x = Q(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def fmt_vec(v: Sequence) -> str:
    return "(" + ",".join(fmt(x) for x in v) + ")"


def parse_vec(s: str) -> tuple:
    """Inverse of :func:`fmt_vec`; also accepts whitespace-separated entries."""
    s = s.strip()
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    parts = [p for p in s.replace(",", " ").split() if p]
    return vec(parts)


def integer_row(coeffs: Sequence, rhs) -> tuple[tuple[int, ...], int]:
    """Scale ``(coeffs, rhs)`` by a positive factor to coprime integers."""
    dens = [Q(c).denominator for c in coeffs] + [Q(rhs).denominator]
    lcm = reduce(lambda a, b: a * b // gcd(a, b), (int(d) for d in dens), 1)
    ints = [int(Q(c) * lcm) for c in coeffs]
    r = int(Q(rhs) * lcm)
    g = reduce(gcd, ints + [r], 0)
    if g > 1:
        ints = [c // g for c in ints]
        r //= g
    return tuple(ints), r
