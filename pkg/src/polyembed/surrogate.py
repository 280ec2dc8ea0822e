"""Polyhedral surrogates: evaluation, optimal sets and the embedded discrete loss.

A surrogate is stored extensionally: for each outcome ``y`` a list of affine
pieces ``(a, c)`` with ``L(u)_y = max <a,u> + c``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Sequence

from ._linalg import nullspace, rank, solve_square, transpose
from .discrete import DiscreteLoss, bayes_risk, cell_complex, check_distribution, trim
from .errors import GuardExceeded, NegativeLoss, NotRepresentative
from .geometry import (
    INFEASIBLE,
    UNBOUNDED,
    Polyhedron,
    contains,
    fourier_motzkin_eliminate,
    implicit_equalities,
    lp_solve,
    remove_redundancy,
)
from .rational import ONE, ZERO, Q, dot, fmt_vec, integer_row, vec

__all__ = [
    "PolyhedralLoss",
    "Quotient",
    "OptimalSetFamily",
    "evaluate",
    "lineality_space",
    "quotient",
    "surrogate_risk",
    "optimal_set",
    "representative_set",
    "restrict",
    "optimal_set_range",
]


@dataclass(frozen=True)
class PolyhedralLoss:
    dim: int
    outcomes: tuple
    pieces: tuple
    check: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        outcomes = tuple(str(y) for y in self.outcomes)
        if len(outcomes) != len(self.pieces):
            raise ValueError("one piece list per outcome is required")
        if len(set(outcomes)) != len(outcomes):
            raise ValueError("outcome labels must be unique")
        cleaned = []
        for y, plist in zip(outcomes, self.pieces):
            seen = []
            for a, c in plist:
                piece = (vec(a), Q(c))
                if len(piece[0]) != self.dim:
                    raise ValueError(f"piece of outcome {y!r} has the wrong dimension")
                if piece not in seen:
                    seen.append(piece)
            if not seen:
                raise ValueError(f"outcome {y!r} has no pieces")
            cleaned.append(tuple(seen))
        object.__setattr__(self, "outcomes", outcomes)
        object.__setattr__(self, "pieces", tuple(cleaned))
        if self.check:
            self._certify_nonnegative()

    def _certify_nonnegative(self):
        d = self.dim
        for y, plist in zip(self.outcomes, self.pieces):
            rows = [(a + (-ONE,), -c) for a, c in plist]
            P = Polyhedron(d + 1, rows)
            out = lp_solve((ZERO,) * d + (ONE,), P, "min")
            if out.status == UNBOUNDED or out.value < 0:
                raise NegativeLoss(f"surrogate is negative for outcome {y!r}")

    @property
    def n(self) -> int:
        return len(self.outcomes)

    def __call__(self, u: Sequence) -> tuple:
        return evaluate(self, u)


def evaluate(L: PolyhedralLoss, u: Sequence) -> tuple:
    u = vec(u)
    if len(u) != L.dim:
        raise ValueError(f"point of length {len(u)} for a {L.dim}-dimensional surrogate")
    return tuple(max(dot(a, u) + c for a, c in plist) for plist in L.pieces)


def expected_loss(L: PolyhedralLoss, p: Sequence, u: Sequence):
    return dot(vec(p), evaluate(L, u))


def lineality_space(L: PolyhedralLoss) -> list:
    """Directions ``w`` with ``<a,w> = 0`` for every slope of every outcome."""
    slopes = [a for plist in L.pieces for a, _ in plist]
    if all(not any(a) for a in slopes):
        return nullspace([], L.dim)
    basis = nullspace(slopes, L.dim)
    return basis


@dataclass(frozen=True)
class Quotient:
    """A surrogate on the orthogonal complement of the lineality space.

    ``basis`` holds the complement's basis vectors; ``section`` maps
    quotient coordinates back and ``project`` is its left inverse.
    """

    loss: PolyhedralLoss
    original: PolyhedralLoss
    basis: tuple

    @property
    def trivial(self) -> bool:
        return self.loss.dim == self.original.dim and all(
            b == tuple(ONE if j == i else ZERO for j in range(self.original.dim)) for i, b in enumerate(self.basis)
        )

    def section(self, v: Sequence) -> tuple:
        v = vec(v)
        d = self.original.dim
        return tuple(sum((v[k] * self.basis[k][i] for k in range(len(v))), ZERO) for i in range(d))

    def project(self, u: Sequence) -> tuple:
        u = vec(u)
        if self.trivial:
            return u
        B = self.basis
        gram = [[dot(bi, bj) for bj in B] for bi in B]
        rhs = [dot(bi, u) for bi in B]
        return solve_square(gram, rhs)


def quotient(L: PolyhedralLoss) -> Quotient:
    lin = lineality_space(L)
    d = L.dim
    if not lin:
        ident = tuple(tuple(ONE if j == i else ZERO for j in range(d)) for i in range(d))
        return Quotient(L, L, ident)
    basis = tuple(nullspace(lin, d))
    pieces = [[(tuple(dot(b, a) for b in basis), c) for a, c in plist] for plist in L.pieces]
    return Quotient(PolyhedralLoss(len(basis), L.outcomes, pieces, check=False), L, basis)


# ---------------------------------------------------------------------------
# surrogate risk and optimal sets


def _risk_program(L: PolyhedralLoss, p: Sequence):
    """Variables ``(u, t_y for y in support)``; returns (polyhedron, cost, support, row map)."""
    supp = [y for y in range(L.n) if p[y] > 0]
    d = L.dim
    n = d + len(supp)
    rows = []
    owner = []
    for k, y in enumerate(supp):
        for j, (a, c) in enumerate(L.pieces[y]):
            r = list(a) + [ZERO] * len(supp)
            r[d + k] = -ONE
            rows.append((tuple(r), -c))
            owner.append((y, j))
    cost = [ZERO] * d + [p[y] for y in supp]
    return Polyhedron(n, rows), tuple(cost), supp, owner


def surrogate_risk(L: PolyhedralLoss, p: Sequence):
    """``min_u <p, L(u)>`` and a minimizer."""
    p = check_distribution(p, L.n)
    P, cost, supp, _ = _risk_program(L, p)
    out = lp_solve(cost, P, "min")
    if not out.optimal:
        raise AssertionError("surrogate risk program must be bounded for a nonnegative surrogate")
    return out.value, out.witness[: L.dim]


def _active_pieces(L: PolyhedralLoss, p):
    P, cost, supp, owner = _risk_program(L, p)
    out = lp_solve(cost, P, "min")
    face = P.add(equalities=[(cost, out.value)])
    imp = implicit_equalities(face)
    active = {y: [] for y in supp}
    for i in imp:
        y, j = owner[i]
        active[y].append(j)
    return active, out.value


def optimal_set(L: PolyhedralLoss, p: Sequence, method: str = "active", prune: bool = True) -> Polyhedron:
    """The set ``Gamma(p)`` of surrogate reports minimizing expected loss.

    ``method="active"`` reads off which pieces are active on the whole
    optimal face of the risk program and returns the region where exactly
    those pieces attain each outcome's maximum.  ``method="projection"``
    projects the optimal face onto ``u`` by Fourier-Motzkin elimination.
    """
    p = check_distribution(p, L.n)
    if method == "projection":
        P, cost, supp, _ = _risk_program(L, p)
        out = lp_solve(cost, P, "min")
        face = P.add(equalities=[(cost, out.value)])
        return fourier_motzkin_eliminate(face, range(L.dim, P.dim))
    if method != "active":
        raise ValueError(f"unknown method {method!r}")
    active, _ = _active_pieces(L, p)
    return _region_of(L, active, prune)


def _region_of(L: PolyhedralLoss, active: dict, prune: bool = True) -> Polyhedron:
    """Reports at which, for every outcome, exactly the given pieces attain the maximum."""
    ineqs, eqs = [], []
    for y, js in active.items():
        plist = L.pieces[y]
        a0, c0 = plist[js[0]]
        for j in js[1:]:
            a, c = plist[j]
            eqs.append((tuple(x - z for x, z in zip(a, a0)), c0 - c))
        for j, (a, c) in enumerate(plist):
            if j in js:
                continue
            ineqs.append((tuple(x - z for x, z in zip(a, a0)), c0 - c))
    keep, seen = [], set()
    for a, b in ineqs:
        key = integer_row(a, b)
        if not any(key[0]):
            continue
        if key not in seen:
            seen.add(key)
            keep.append((a, b))
    eqs = [(a, b) for a, b in eqs if any(a)]
    G = Polyhedron(L.dim, keep, eqs)
    return remove_redundancy(G) if prune else G


# ---------------------------------------------------------------------------
# finite representative sets


def restrict(L: PolyhedralLoss, S: Sequence[Sequence], names: Sequence[str] | None = None) -> DiscreteLoss:
    """The discrete loss obtained by allowing only the reports in ``S``."""
    pts = [vec(s) for s in S]
    if not pts:
        raise ValueError("restriction to an empty report set")
    names = list(names) if names is not None else [fmt_vec(s) for s in pts]
    return DiscreteLoss(L.outcomes, names, [evaluate(L, s) for s in pts])


def _tie_hyperplanes(L: PolyhedralLoss):
    seen = set()
    out = []
    for plist in L.pieces:
        for (a, c), (a2, c2) in combinations(plist, 2):
            normal = tuple(x - z for x, z in zip(a, a2))
            if not any(normal):
                continue
            key = integer_row(normal, c2 - c)
            neg = integer_row(tuple(-x for x in normal), c - c2)
            if key in seen or neg in seen:
                continue
            seen.add(key)
            out.append((normal, c2 - c))
    return out


def _arrangement_points(L: PolyhedralLoss, budget: int):
    hyper = _tie_hyperplanes(L)
    d = L.dim
    total = math.comb(len(hyper), d)
    if total > budget:
        raise GuardExceeded(f"{total} hyperplane subsets exceed the budget {budget}")
    pts = set()
    for combo in combinations(hyper, d):
        x = solve_square([h[0] for h in combo], [h[1] for h in combo])
        if x is not None:
            pts.add(x)
    return pts


def _mismatches(L: PolyhedralLoss, pts, first_only: bool = False) -> list:
    """Complex vertices where the restricted loss does worse than ``L``, each with a better point."""
    ell = restrict(L, sorted(pts))
    cx = cell_complex(ell)
    out = []
    for q in cx.vertices():
        target, u = surrogate_risk(L, q)
        if bayes_risk(ell, q).value != target:
            out.append((q, u))
            if first_only:
                break
    return out


AUTO_POINT_LIMIT = 64


def representative_set(L: PolyhedralLoss, method: str = "auto", budget: int = 1_000_000, max_rounds: int = 200) -> list:
    """A finite set of reports containing an optimal report for every distribution.

    ``"arrangement"`` solves every ``d``-subset of the within-outcome tie
    hyperplanes; ``"lp"`` adds minimizers of the risk program at vertices of
    the restricted loss's complex until both risks agree.  ``"auto"`` takes
    the arrangement when it has few vertices and falls back to ``"lp"``.
    Either way the result is verified by comparing risks on every vertex of
    that complex, which suffices because the surrogate's risk is concave.
    """
    if lineality_space(L):
        raise NotRepresentative(
            "surrogate has a nontrivial lineality space; quotient it first (see quotient())"
        )
    if L.dim == 0:
        return [()]
    if method not in ("auto", "arrangement", "lp"):
        raise ValueError(f"unknown method {method!r}")
    if method != "lp":
        small = math.comb(len(_tie_hyperplanes(L)), L.dim) <= 20_000
        pts = _arrangement_points(L, budget) if (small or method == "arrangement") else set()
        if method == "arrangement" or 0 < len(pts) <= AUTO_POINT_LIMIT:
            if not pts:
                raise NotRepresentative("tie hyperplanes have no vertices; quotient the lineality space first")
            bad = _mismatches(L, pts, first_only=True)
            if bad:
                raise NotRepresentative(f"restriction misses the surrogate risk at p={fmt_vec(bad[0][0])}")
            return sorted(pts)
    pts = set()
    for y in range(L.n):
        delta = tuple(ONE if k == y else ZERO for k in range(L.n))
        pts.add(surrogate_risk(L, delta)[1])
    for _ in range(max_rounds):
        bad = _mismatches(L, pts)
        if not bad:
            return sorted(pts)
        pts.update(u for _, u in bad)
    raise GuardExceeded(f"representative set did not stabilize after {max_rounds} rounds")


def embedded_loss(L: PolyhedralLoss, **kwargs) -> DiscreteLoss:
    return restrict(L, representative_set(L, **kwargs))


# ---------------------------------------------------------------------------
# the finite range of optimal sets


@dataclass(frozen=True)
class OptimalSetFamily:
    """Distinct optimal sets with the complex faces they come from.

    ``face_map[i]`` is the member index for face ``i`` of ``complex``.
    """

    members: tuple
    face_map: tuple
    complex: object
    loss: PolyhedralLoss

    def faces_of(self, member: int) -> list:
        return [i for i, m in enumerate(self.face_map) if m == member]


def _signature(active: dict) -> tuple:
    return tuple(sorted((y, tuple(sorted(js))) for y, js in active.items()))


def optimal_set_range(L: PolyhedralLoss, ell: DiscreteLoss | None = None, complex=None) -> OptimalSetFamily:
    """Every optimal set ``Gamma(p)``, one per class of faces of the embedded complex."""
    if complex is None:
        if ell is None:
            ell = embedded_loss(L)
        complex = cell_complex(ell)
    members: list = []
    sigs: dict = {}
    face_map = []
    for face in complex.faces:
        active, _ = _active_pieces(L, face.witness)
        sig = _signature(active)
        if sig in sigs:
            face_map.append(sigs[sig])
            continue
        G = _region_of(L, active)
        idx = None
        for k, M in enumerate(members):
            if contains(M, G) and contains(G, M):
                idx = k
                break
        if idx is None:
            members.append(G)
            idx = len(members) - 1
        sigs[sig] = idx
        face_map.append(idx)
    return OptimalSetFamily(tuple(members), tuple(face_map), complex, L)
