"""Polyhedra in H-representation and the exact queries built on them.

A :class:`Polyhedron` is ``{x : A x <= b, E x = e}`` with rational data.  All
answers are exact; strict inequalities are never emulated by perturbing
constraints but by slack-maximizing programs whose optimum is compared to
zero by the caller.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from . import _simplex
from ._linalg import rank, solve_affine, solve_square
from .errors import GuardExceeded
from .rational import ONE, ZERO, Q, dot, integer_row, vec

__all__ = [
    "Polyhedron",
    "LpOutcome",
    "lp_solve",
    "is_empty",
    "implicit_equalities",
    "relative_interior_point",
    "contains",
    "equal_sets",
    "distance",
    "minmax_distance",
    "fourier_motzkin_eliminate",
    "polyhedron_vertices",
    "remove_redundancy",
    "affine_dimension",
]

OPTIMAL = _simplex.OPTIMAL
INFEASIBLE = _simplex.INFEASIBLE
UNBOUNDED = _simplex.UNBOUNDED

Row = tuple  # (normal, offset)


def _row(a, b) -> Row:
    return (vec(a), Q(b))


@dataclass(frozen=True)
class Polyhedron:
    """``{x in Q^dim : <a,x> <= b for each inequality, <a,x> = b for each equality}``."""

    dim: int
    inequalities: tuple = ()
    equalities: tuple = ()

    def __post_init__(self):
        ineqs = tuple(_row(a, b) for a, b in self.inequalities)
        eqs = tuple(_row(a, b) for a, b in self.equalities)
        for a, _ in ineqs + eqs:
            if len(a) != self.dim:
                raise ValueError(f"constraint of length {len(a)} in a {self.dim}-dimensional polyhedron")
        object.__setattr__(self, "inequalities", ineqs)
        object.__setattr__(self, "equalities", eqs)

    # constructors -------------------------------------------------------
    @classmethod
    def universe(cls, dim: int) -> "Polyhedron":
        return cls(dim)

    @classmethod
    def point(cls, x: Sequence) -> "Polyhedron":
        x = vec(x)
        d = len(x)
        eqs = [(tuple(ONE if j == i else ZERO for j in range(d)), x[i]) for i in range(d)]
        return cls(d, (), eqs)

    @classmethod
    def box(cls, lo: Sequence, hi: Sequence) -> "Polyhedron":
        """Axis-aligned box; ``None`` entries leave that side open."""
        d = len(lo)
        rows = []
        for i in range(d):
            e = tuple(ONE if j == i else ZERO for j in range(d))
            if hi[i] is not None:
                rows.append((e, hi[i]))
            if lo[i] is not None:
                rows.append((tuple(-x for x in e), -Q(lo[i])))
        return cls(d, rows)

    @classmethod
    def simplex(cls, n: int) -> "Polyhedron":
        """The probability simplex in ``Q^n``."""
        rows = [(tuple(-ONE if j == i else ZERO for j in range(n)), ZERO) for i in range(n)]
        return cls(n, rows, [((ONE,) * n, ONE)])

    # basic manipulation --------------------------------------------------
    def satisfies(self, x: Sequence) -> bool:
        x = vec(x)
        return all(dot(a, x) <= b for a, b in self.inequalities) and all(
            dot(a, x) == b for a, b in self.equalities
        )

    def strictly_inside_rows(self, x: Sequence, rows: Iterable[int]) -> bool:
        x = vec(x)
        return all(dot(self.inequalities[i][0], x) < self.inequalities[i][1] for i in rows)

    def intersect(self, other: "Polyhedron") -> "Polyhedron":
        if other.dim != self.dim:
            raise ValueError("dimension mismatch")
        return Polyhedron(self.dim, self.inequalities + other.inequalities, self.equalities + other.equalities)

    def add(self, inequalities=(), equalities=()) -> "Polyhedron":
        return Polyhedron(self.dim, self.inequalities + tuple(inequalities), self.equalities + tuple(equalities))

    def lift(self, extra: int) -> "Polyhedron":
        """Same set in ``Q^(dim+extra)`` with the new coordinates unconstrained."""
        pad = (ZERO,) * extra
        return Polyhedron(
            self.dim + extra,
            tuple((a + pad, b) for a, b in self.inequalities),
            tuple((a + pad, b) for a, b in self.equalities),
        )

    def __str__(self) -> str:
        from .rational import fmt

        def term(a):
            parts = [f"{fmt(c)}*x{i}" for i, c in enumerate(a) if c]
            return " + ".join(parts) or "0"

        lines = [f"{term(a)} <= {fmt(b)}" for a, b in self.inequalities]
        lines += [f"{term(a)} == {fmt(b)}" for a, b in self.equalities]
        return f"Polyhedron(dim={self.dim}; " + "; ".join(lines) + ")"


@dataclass(frozen=True)
class LpOutcome:
    status: str
    value: object = None
    witness: tuple | None = None

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


def _solve(c, ineqs, eqs, n):
    A_ub = [a for a, _ in ineqs]
    b_ub = [b for _, b in ineqs]
    A_eq = [a for a, _ in eqs]
    b_eq = [b for _, b in eqs]
    return _simplex.solve(c, A_ub, b_ub, A_eq, b_eq, n)


def lp_solve(objective: Sequence, P: Polyhedron, sense: str = "min") -> LpOutcome:
    """Exact optimum of a linear objective over ``P``.

    >>> lp_solve([1], Polyhedron.box([0], [1])).value
    mpq(0,1)
    """
    c = vec(objective)
    if len(c) != P.dim:
        raise ValueError("objective length differs from polyhedron dimension")
    if sense not in ("min", "max"):
        raise ValueError(f"sense must be 'min' or 'max', got {sense!r}")
    cc = c if sense == "min" else tuple(-x for x in c)
    status, x = _solve(cc, P.inequalities, P.equalities, P.dim)
    if status != OPTIMAL:
        return LpOutcome(status)
    return LpOutcome(OPTIMAL, dot(c, x), x)


def feasible_point(P: Polyhedron):
    status, x = _solve((ZERO,) * P.dim, P.inequalities, P.equalities, P.dim)
    return x if status == OPTIMAL else None


def is_empty(P: Polyhedron) -> bool:
    return feasible_point(P) is None


def implicit_equalities(P: Polyhedron) -> list[int] | None:
    """Indices of inequalities tight at every point of ``P``; ``None`` if empty.

    Solves one homogenized program over ``(x, z, lam)``:
    ``A x + z <= lam b``, ``E x = lam e``, ``0 <= z <= 1``, ``lam >= 1`` and
    maximizes ``sum z``.  Rows left with ``z_i < 1`` cannot be made strict.
    """
    m = len(P.inequalities)
    if m == 0:
        return None if is_empty(P) else []
    d = P.dim
    n = d + m + 1
    lam = d + m
    ineqs = []
    for i, (a, b) in enumerate(P.inequalities):
        row = list(a) + [ZERO] * (m + 1)
        row[d + i] = ONE
        row[lam] = -b
        ineqs.append((tuple(row), ZERO))
    for i in range(m):
        up = [ZERO] * n
        up[d + i] = ONE
        ineqs.append((tuple(up), ONE))
        lo = [ZERO] * n
        lo[d + i] = -ONE
        ineqs.append((tuple(lo), ZERO))
    lrow = [ZERO] * n
    lrow[lam] = -ONE
    ineqs.append((tuple(lrow), -ONE))
    eqs = []
    for a, e in P.equalities:
        row = list(a) + [ZERO] * (m + 1)
        row[lam] = -e
        eqs.append((tuple(row), ZERO))
    c = [ZERO] * n
    for i in range(m):
        c[d + i] = -ONE
    status, x = _solve(c, ineqs, eqs, n)
    if status != OPTIMAL:
        return None
    return [i for i in range(m) if x[d + i] < 1]


def affine_dimension(P: Polyhedron) -> int:
    """Dimension of the affine hull of ``P`` (``-1`` when empty)."""
    imp = implicit_equalities(P)
    if imp is None:
        return -1
    rows = [a for a, _ in P.equalities] + [P.inequalities[i][0] for i in imp]
    return P.dim - (rank(rows) if rows else 0)


def relative_interior_point(P: Polyhedron):
    """A point of the relative interior of ``P``, or ``None`` when ``P`` is empty.

    Maximizes a common slack ``s <= 1`` over all inequalities that are not
    implicit equalities, so the returned point is as central as that program
    makes it.
    """
    imp = implicit_equalities(P)
    if imp is None:
        return None
    d = P.dim
    imp_set = set(imp)
    ineqs = []
    eqs = [(a + (ZERO,), b) for a, b in P.equalities]
    for i, (a, b) in enumerate(P.inequalities):
        if i in imp_set:
            eqs.append((a + (ZERO,), b))
        else:
            ineqs.append((a + (ONE,), b))
    cap = [ZERO] * (d + 1)
    cap[d] = ONE
    ineqs.append((tuple(cap), ONE))
    c = [ZERO] * (d + 1)
    c[d] = -ONE
    status, x = _solve(c, ineqs, eqs, d + 1)
    assert status == OPTIMAL
    return x[:d]


def contains(P: Polyhedron, Q_: Polyhedron) -> bool:
    """True iff ``Q_`` is a subset of ``P``."""
    if P.dim != Q_.dim:
        raise ValueError("dimension mismatch")
    if is_empty(Q_):
        return True
    for a, b in P.inequalities:
        out = lp_solve(a, Q_, "max")
        if out.status == UNBOUNDED or out.value > b:
            return False
    for a, b in P.equalities:
        hi = lp_solve(a, Q_, "max")
        if hi.status == UNBOUNDED or hi.value != b:
            return False
        lo = lp_solve(a, Q_, "min")
        if lo.status == UNBOUNDED or lo.value != b:
            return False
    return True


def equal_sets(P: Polyhedron, Q_: Polyhedron) -> bool:
    return contains(P, Q_) and contains(Q_, P)


def _check_norm(norm: str):
    if norm not in ("inf", "l1"):
        raise ValueError(f"norm must be 'inf' or 'l1', got {norm!r}")


def distance(u: Sequence, P: Polyhedron, norm: str = "inf"):
    """Exact ``min_{x in P} ||x - u||``; ``math.inf`` when ``P`` is empty."""
    _check_norm(norm)
    u = vec(u)
    d = P.dim
    if len(u) != d:
        raise ValueError("point dimension differs from polyhedron dimension")
    if P.satisfies(u):
        return ZERO
    if norm == "inf":
        n = d + 1
        Pl = P.lift(1)
        rows = []
        for i in range(d):
            r = [ZERO] * n
            r[i] = ONE
            r[d] = -ONE
            rows.append((tuple(r), u[i]))
            r = [ZERO] * n
            r[i] = -ONE
            r[d] = -ONE
            rows.append((tuple(r), -u[i]))
        c = [ZERO] * n
        c[d] = ONE
    else:
        n = 2 * d
        Pl = P.lift(d)
        rows = []
        for i in range(d):
            r = [ZERO] * n
            r[i] = ONE
            r[d + i] = -ONE
            rows.append((tuple(r), u[i]))
            r = [ZERO] * n
            r[i] = -ONE
            r[d + i] = -ONE
            rows.append((tuple(r), -u[i]))
        c = [ZERO] * d + [ONE] * d
    out = lp_solve(c, Pl.add(rows), "min")
    if out.status == INFEASIBLE:
        return math.inf
    return out.value


def minmax_distance(family: Sequence[Polyhedron], norm: str = "inf", return_point: bool = False):
    """``min_u max_j dist(u, U_j)`` as one joint program.

    Variables are the query point ``u``, one copy ``x_j`` of the projection
    per member and the bound ``t``.  With ``return_point`` the minimizing
    ``u`` is returned alongside the value.
    """
    if not family:
        raise ValueError("empty family")
    d = family[0].dim
    _check_norm(norm)
    k = len(family)
    if norm == "inf":
        n = d + k * d + 1
    else:
        n = d + 2 * k * d + 1
    t = n - 1
    ineqs = []
    eqs = []
    for j, U in enumerate(family):
        off = d + j * d
        for a, b in U.inequalities:
            r = [ZERO] * n
            r[off:off + d] = a
            ineqs.append((tuple(r), b))
        for a, b in U.equalities:
            r = [ZERO] * n
            r[off:off + d] = a
            eqs.append((tuple(r), b))
        if norm == "inf":
            for i in range(d):
                for s in (ONE, -ONE):
                    r = [ZERO] * n
                    r[off + i] = s
                    r[i] = -s
                    r[t] = -ONE
                    ineqs.append((tuple(r), ZERO))
        else:
            soff = d + k * d + j * d
            for i in range(d):
                for s in (ONE, -ONE):
                    r = [ZERO] * n
                    r[off + i] = s
                    r[i] = -s
                    r[soff + i] = -ONE
                    ineqs.append((tuple(r), ZERO))
            r = [ZERO] * n
            for i in range(d):
                r[soff + i] = ONE
            r[t] = -ONE
            ineqs.append((tuple(r), ZERO))
    c = [ZERO] * n
    c[t] = ONE
    status, x = _solve(c, ineqs, eqs, n)
    if status != OPTIMAL:
        raise ValueError("minmax_distance requires every member to be nonempty")
    value = x[t]
    if return_point:
        return value, x[:d]
    return value


def _dedupe_rows(rows):
    seen = set()
    out = []
    for a, b in rows:
        key = integer_row(a, b)
        if not any(key[0]):
            continue
        if key in seen:
            continue
        seen.add(key)
        out.append((a, b))
    return out


def _trivially_infeasible(rows) -> bool:
    return any(not any(a) and b < 0 for a, b in rows)


def remove_redundancy(P: Polyhedron) -> Polyhedron:
    """Drop duplicate and LP-implied inequalities (equalities are kept)."""
    if _trivially_infeasible(P.inequalities):
        return P
    rows = _dedupe_rows(P.inequalities)
    i = 0
    while i < len(rows):
        a, b = rows[i]
        rest = Polyhedron(P.dim, rows[:i] + rows[i + 1:], P.equalities)
        out = lp_solve(a, rest, "max")
        if out.status == OPTIMAL and out.value <= b:
            del rows[i]
        elif out.status == INFEASIBLE:
            return Polyhedron(P.dim, rows, P.equalities)
        else:
            i += 1
    return Polyhedron(P.dim, rows, P.equalities)


def fourier_motzkin_eliminate(P: Polyhedron, drop_vars: Iterable[int], guard: int = 100_000) -> Polyhedron:
    """Exact projection of ``P`` onto the coordinates not in ``drop_vars``.

    Equalities that mention a dropped variable are used for substitution
    first; the remaining dropped variables are removed by pairing upper and
    lower bounds.  Redundant rows are pruned after each round.
    """
    drop = sorted(set(drop_vars))
    d = P.dim
    if any(j < 0 or j >= d for j in drop):
        raise ValueError("drop index out of range")
    ineqs = [(list(a), b) for a, b in P.inequalities]
    eqs = [(list(a), b) for a, b in P.equalities]
    pending = list(drop)

    # substitution through equalities
    for j in list(pending):
        piv = next((k for k, (a, _) in enumerate(eqs) if a[j]), None)
        if piv is None:
            continue
        pa, pb = eqs.pop(piv)
        inv = ONE / pa[j]

        def sub(a, b):
            f = a[j] * inv
            if not f:
                return a, b
            return [x - f * y for x, y in zip(a, pa)], b - f * pb

        ineqs = [sub(a, b) for a, b in ineqs]
        eqs = [sub(a, b) for a, b in eqs]
        pending.remove(j)

    for j in pending:
        pos, neg, zero = [], [], []
        for a, b in ineqs:
            (pos if a[j] > 0 else neg if a[j] < 0 else zero).append((a, b))
        if len(pos) * len(neg) + len(zero) > guard:
            raise GuardExceeded(
                f"elimination would create {len(pos) * len(neg) + len(zero)} rows (guard {guard})"
            )
        new = list(zero)
        for ap, bp in pos:
            for an, bn in neg:
                fp = -an[j]
                fn = ap[j]
                a = [fp * x + fn * y for x, y in zip(ap, an)]
                a[j] = ZERO
                new.append((a, fp * bp + fn * bn))
        reduced = remove_redundancy(Polyhedron(d, [(tuple(a), b) for a, b in new], [(tuple(a), b) for a, b in eqs]))
        ineqs = [(list(a), b) for a, b in reduced.inequalities]

    keep = [k for k in range(d) if k not in set(drop)]

    def proj(a):
        return tuple(a[k] for k in keep)

    out_ineqs = [(proj(a), b) for a, b in ineqs]
    out_eqs = [(proj(a), b) for a, b in eqs]
    return remove_redundancy(Polyhedron(len(keep), out_ineqs, out_eqs))


def polyhedron_vertices(P: Polyhedron, guard_dim: int = 6, budget: int = 1_000_000):
    """Vertices of ``P`` and whether ``P`` is unbounded.

    The affine hull is parametrized first so that only ``k``-subsets of the
    inequalities need to be tried, where ``k`` is the dimension of ``P``.
    """
    imp = implicit_equalities(P)
    if imp is None:
        return set(), False
    has_rays = False
    for i in range(P.dim):
        e = tuple(ONE if j == i else ZERO for j in range(P.dim))
        for sense in ("max", "min"):
            if lp_solve(e, P, sense).status == UNBOUNDED:
                has_rays = True
                break
        if has_rays:
            break
    imp_set = set(imp)
    eqs = list(P.equalities) + [P.inequalities[i] for i in imp]
    param = solve_affine([a for a, _ in eqs], [b for _, b in eqs], P.dim)
    assert param is not None
    x0, N = param
    k = len(N)
    if k == 0:
        return {x0}, has_rays
    if k > guard_dim:
        raise GuardExceeded(f"polyhedron of dimension {k} exceeds the vertex guard {guard_dim}")
    # inequalities in the parameter space z:  (a N) z <= b - a x0
    zrows = []
    for i, (a, b) in enumerate(P.inequalities):
        if i in imp_set:
            continue
        an = tuple(dot(a, col) for col in N)
        zrows.append((an, b - dot(a, x0)))
    zrows = _dedupe_rows(zrows)
    if math.comb(len(zrows), k) > budget:
        raise GuardExceeded(f"{math.comb(len(zrows), k)} constraint subsets exceed the budget {budget}")
    verts = set()
    for combo in combinations(range(len(zrows)), k):
        A = [zrows[i][0] for i in combo]
        b = [zrows[i][1] for i in combo]
        z = solve_square(A, b)
        if z is None:
            continue
        if all(dot(a, z) <= bb for a, bb in zrows):
            x = tuple(x0[r] + sum((z[c] * N[c][r] for c in range(k)), ZERO) for r in range(P.dim))
            verts.add(x)
    return verts, has_rays
