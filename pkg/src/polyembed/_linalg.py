"""Exact Gaussian elimination over the rationals."""
from __future__ import annotations

from typing import Sequence

from .rational import ZERO, ONE, Q


def rref(rows: Sequence[Sequence]) -> tuple[list[list], list[int]]:
    """Reduced row echelon form and pivot columns."""
    M = [[Q(x) for x in r] for r in rows]
    if not M:
        return [], []
    ncols = len(M[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = ONE / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1]) if rows else 0


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[tuple]:
    """Basis of ``{x : rows @ x = 0}``, one vector per free column."""
    if not rows:
        return [tuple(ONE if j == i else ZERO for j in range(ncols)) for i in range(ncols)]
    R, piv = rref(rows)
    free = [j for j in range(ncols) if j not in piv]
    basis = []
    for f in free:
        x = [ZERO] * ncols
        x[f] = ONE
        for i, p in enumerate(piv):
            x[p] = -R[i][f]
        basis.append(tuple(x))
    return basis


def solve_affine(E: Sequence[Sequence], e: Sequence, ncols: int):
    """Parametrize ``{x : E x = e}`` as ``x0 + N z``.

    Returns ``(x0, N)`` with ``N`` a list of basis vectors, or ``None`` when the
    system is inconsistent.
    """
    if not E:
        return tuple([ZERO] * ncols), nullspace([], ncols)
    aug = [list(r) + [Q(b)] for r, b in zip(E, e)]
    R, piv = rref(aug)
    if ncols in piv:
        return None
    x0 = [ZERO] * ncols
    for i, p in enumerate(piv):
        x0[p] = R[i][ncols]
    N = nullspace([r[:ncols] for r in R], ncols)
    return tuple(x0), N


def solve_square(A: Sequence[Sequence], b: Sequence):
    """Unique solution of a square system, or ``None`` if singular."""
    n = len(A)
    M = [[Q(x) for x in row] + [Q(bi)] for row, bi in zip(A, b)]
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c]), None)
        if piv is None:
            return None
        M[c], M[piv] = M[piv], M[c]
        inv = ONE / M[c][c]
        rowc = [x * inv for x in M[c]]
        M[c] = rowc
        for i in range(n):
            if i != c and M[i][c]:
                f = M[i][c]
                Mi = M[i]
                M[i] = [a - f * bb for a, bb in zip(Mi, rowc)]
    return tuple(M[i][n] for i in range(n))


def matvec(A: Sequence[Sequence], x: Sequence) -> tuple:
    out = []
    for row in A:
        s = ZERO
        for a, b in zip(row, x):
            if a and b:
                s += a * b
        out.append(s)
    return tuple(out)


def transpose(A: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*A)]
