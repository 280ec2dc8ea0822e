"""Discrete target losses: Bayes risk, level sets, trim and the simplex complex."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import GuardExceeded, NotADistribution, UnknownReport
from .geometry import (
    Polyhedron,
    affine_dimension,
    contains,
    implicit_equalities,
    lp_solve,
    relative_interior_point,
)
from .rational import ONE, ZERO, Q, dot, vec

__all__ = [
    "DiscreteLoss",
    "LevelSet",
    "Face",
    "SimplexComplex",
    "Kept",
    "Duplicate",
    "StrictlyRedundant",
    "check_distribution",
    "bayes_risk",
    "level_set",
    "is_full_dimensional",
    "trim",
    "redundancy_report",
    "cell_complex",
]


@dataclass(frozen=True)
class DiscreteLoss:
    """Loss matrix with one row per report and one column per outcome."""

    outcomes: tuple
    reports: tuple
    matrix: tuple

    def __post_init__(self):
        outcomes = tuple(str(y) for y in self.outcomes)
        reports = tuple(str(r) for r in self.reports)
        matrix = tuple(vec(row) for row in self.matrix)
        if len(outcomes) < 2:
            raise ValueError("a discrete loss needs at least two outcomes")
        if len(set(outcomes)) != len(outcomes):
            raise ValueError("outcome labels must be unique")
        if not reports:
            raise ValueError("a discrete loss needs at least one report")
        if len(set(reports)) != len(reports):
            raise ValueError("report names must be unique")
        if len(matrix) != len(reports):
            raise ValueError("one matrix row per report is required")
        for name, row in zip(reports, matrix):
            if len(row) != len(outcomes):
                raise ValueError(f"row for report {name!r} has the wrong length")
            if any(x < 0 for x in row):
                raise ValueError(f"row for report {name!r} has a negative entry")
        object.__setattr__(self, "outcomes", outcomes)
        object.__setattr__(self, "reports", reports)
        object.__setattr__(self, "matrix", matrix)

    @property
    def n(self) -> int:
        return len(self.outcomes)

    def index(self, report: str) -> int:
        try:
            return self.reports.index(report)
        except ValueError:
            raise UnknownReport(report) from None

    def row(self, report: str) -> tuple:
        return self.matrix[self.index(report)]

    def scaled(self, c) -> "DiscreteLoss":
        c = Q(c)
        return DiscreteLoss(self.outcomes, self.reports, [[c * x for x in row] for row in self.matrix])

    def restrict(self, reports: Sequence[str]) -> "DiscreteLoss":
        idx = [self.index(r) for r in reports]
        return DiscreteLoss(self.outcomes, [self.reports[i] for i in idx], [self.matrix[i] for i in idx])

    def expected(self, p: Sequence, report: str):
        return dot(self.row(report), vec(p))


def check_distribution(p: Sequence, n: int) -> tuple:
    try:
        p = vec(p)
    except (TypeError, ValueError) as exc:
        raise NotADistribution(str(exc)) from None
    if len(p) != n:
        raise NotADistribution(f"expected {n} probabilities, got {len(p)}")
    if any(x < 0 for x in p) or sum(p, ZERO) != 1:
        raise NotADistribution(f"not a distribution: {p}")
    return p


@dataclass(frozen=True)
class BayesRisk:
    value: object
    argmin: tuple


def bayes_risk(loss: DiscreteLoss, p: Sequence) -> BayesRisk:
    """Minimum expected loss under ``p`` together with every minimizing report."""
    p = check_distribution(p, loss.n)
    risks = [dot(row, p) for row in loss.matrix]
    best = min(risks)
    return BayesRisk(best, tuple(r for r, v in zip(loss.reports, risks) if v == best))


def _simplex_rows(n: int):
    return Polyhedron.simplex(n)


def _optimality_region(loss: DiscreteLoss, i: int, against: Sequence[int]) -> Polyhedron:
    v = loss.matrix[i]
    rows = [(tuple(a - b for a, b in zip(v, loss.matrix[j])), ZERO) for j in against]
    return _simplex_rows(loss.n).add(rows)


@dataclass(frozen=True)
class LevelSet:
    report: str
    region: Polyhedron
    full_dimensional: bool


def is_full_dimensional(loss: DiscreteLoss, i: int) -> bool:
    """Whether report ``i`` is strictly optimal on an open subset of the simplex.

    Only reports with a different loss vector need to be beaten strictly;
    equal rows share the level set.
    """
    v = loss.matrix[i]
    others = [j for j, w in enumerate(loss.matrix) if w != v]
    if not others:
        return True
    n = loss.n
    ineqs = [(tuple(-ONE if k == y else ZERO for k in range(n)) + (ZERO,), ZERO) for y in range(n)]
    for j in others:
        diff = tuple(a - b for a, b in zip(v, loss.matrix[j]))
        ineqs.append((diff + (ONE,), ZERO))
    ineqs.append(((ZERO,) * n + (ONE,), ONE))
    P = Polyhedron(n + 1, ineqs, [((ONE,) * n + (ZERO,), ONE)])
    out = lp_solve((ZERO,) * n + (ONE,), P, "max")
    return out.optimal and out.value > 0


def level_set(loss: DiscreteLoss, report: str) -> LevelSet:
    i = loss.index(report)
    others = [j for j in range(len(loss.reports)) if j != i]
    return LevelSet(report, _optimality_region(loss, i, others), is_full_dimensional(loss, i))


@dataclass(frozen=True)
class Trim:
    vectors: tuple
    reports: tuple

    def vector_set(self) -> frozenset:
        return frozenset(self.vectors)


def trim(loss: DiscreteLoss) -> Trim:
    """Loss vectors of the full-dimensional level sets, one report per vector."""
    seen = set()
    vectors, reports = [], []
    for i, (name, row) in enumerate(zip(loss.reports, loss.matrix)):
        if row in seen:
            continue
        if is_full_dimensional(loss, i):
            seen.add(row)
            vectors.append(row)
            reports.append(name)
    return Trim(tuple(vectors), tuple(reports))


@dataclass(frozen=True)
class Kept:
    full_dimensional: bool = True


@dataclass(frozen=True)
class Duplicate:
    of: str


@dataclass(frozen=True)
class StrictlyRedundant:
    by: str


def redundancy_report(loss: DiscreteLoss) -> dict:
    """Classify every report as kept, a duplicate row, or strictly redundant."""
    m = len(loss.reports)
    full = [is_full_dimensional(loss, i) for i in range(m)]
    regions = {}

    def region(i):
        if i not in regions:
            regions[i] = _optimality_region(loss, i, [j for j in range(m) if j != i])
        return regions[i]

    out: dict = {}
    kept_by_vector: dict = {}
    for i, name in enumerate(loss.reports):
        row = loss.matrix[i]
        if row in kept_by_vector:
            out[name] = Duplicate(kept_by_vector[row])
            continue
        if full[i]:
            kept_by_vector[row] = name
            out[name] = Kept(True)
    for i, name in enumerate(loss.reports):
        if name in out:
            continue
        row = loss.matrix[i]
        # prefer a full-dimensional container, lowest index first
        order = [j for j in range(m) if full[j]] + [j for j in range(m) if not full[j]]
        by = None
        for j in order:
            if j == i or loss.matrix[j] == row:
                continue
            if contains(region(j), region(i)) and not contains(region(i), region(j)):
                by = loss.reports[j]
                break
        out[name] = StrictlyRedundant(by) if by is not None else Kept(False)
    return {name: out[name] for name in loss.reports}


@dataclass(frozen=True)
class Face:
    """A relatively open cell of the simplex complex.

    ``zeros`` are the outcomes with probability zero on the cell and
    ``active`` the indices (into the trim) of the loss vectors optimal on it.
    """

    zeros: frozenset
    active: frozenset
    witness: tuple
    dimension: int
    region: Polyhedron
    optimal_reports: tuple
    vertices: tuple = ()

    @property
    def support(self) -> tuple:
        return tuple(y for y in range(self.region.dim) if y not in self.zeros)


@dataclass(frozen=True)
class SimplexComplex:
    loss: DiscreteLoss
    trim: Trim
    hyperplanes: tuple
    faces: tuple

    def vertices(self) -> list:
        return [f.witness for f in self.faces if f.dimension == 0]

    def cells(self) -> list:
        """Faces of full dimension, one per trim vector."""
        top = self.loss.n - 1
        return [f for f in self.faces if f.dimension == top]

    def locate(self, p: Sequence) -> int:
        """Index of the face whose relative interior contains ``p``."""
        p = check_distribution(p, self.loss.n)
        zeros = frozenset(y for y in range(len(p)) if p[y] == 0)
        risks = [dot(v, p) for v in self.trim.vectors]
        best = min(risks)
        active = frozenset(k for k, r in enumerate(risks) if r == best)
        for i, f in enumerate(self.faces):
            if f.zeros == zeros and f.active == active:
                return i
        raise AssertionError("point not covered by the complex")


def _closed_face(n: int, vectors: Sequence, zeros, active) -> Polyhedron:
    """``{p in simplex : p_y = 0 for y in zeros, every active vector optimal}``."""
    a0 = vectors[min(active)]
    ineqs = [(tuple(-ONE if k == y else ZERO for k in range(n)), ZERO) for y in range(n) if y not in zeros]
    eqs = [((ONE,) * n, ONE)]
    eqs += [(tuple(ONE if k == y else ZERO for k in range(n)), ZERO) for y in sorted(zeros)]
    for b, vb in enumerate(vectors):
        diff = tuple(x - z for x, z in zip(a0, vb))
        if b in active:
            if b != min(active):
                eqs.append((diff, ZERO))
        else:
            ineqs.append((diff, ZERO))
    return Polyhedron(n, ineqs, eqs)


def _key_at(p, vectors):
    zeros = frozenset(y for y in range(len(p)) if p[y] == 0)
    risks = [dot(v, p) for v in vectors]
    best = min(risks)
    return zeros, frozenset(k for k, r in enumerate(risks) if r == best)


def cell_complex(loss: DiscreteLoss, guard: int = 40) -> SimplexComplex:
    """Common refinement of the trim level sets and the faces of the simplex.

    Faces are found top down: starting from the full cells, every face of a
    known face is reached by making one more constraint tight.  Each face is
    identified by the constraints tight on its relative interior.
    """
    t = trim(loss)
    vectors = list(t.vectors)
    if len(vectors) > guard:
        raise GuardExceeded(f"{len(vectors)} trim vectors exceed the complex guard {guard}")
    n = loss.n
    hyper = []
    for i in range(len(vectors)):
        for j in range(i + 1, len(vectors)):
            hyper.append(tuple(a - b for a, b in zip(vectors[i], vectors[j])))

    found: dict = {}
    stack = []
    for k in range(len(vectors)):
        P = _closed_face(n, vectors, frozenset(), frozenset([k]))
        w = relative_interior_point(P)
        key = _key_at(w, vectors)
        if key not in found:
            found[key] = (w, P)
            stack.append(key)
    while stack:
        zeros, active = stack.pop()
        children = [(zeros | {y}, active) for y in range(n) if y not in zeros]
        children += [(zeros, active | {b}) for b in range(len(vectors)) if b not in active]
        for cz, ca in children:
            if len(cz) == n:
                continue
            P = _closed_face(n, vectors, cz, ca)
            w = relative_interior_point(P)
            if w is None:
                continue
            key = _key_at(w, vectors)
            if key not in found:
                found[key] = (w, _closed_face(n, vectors, *key))
                stack.append(key)

    raw = []
    for (zeros, active), (w, P) in found.items():
        dim = affine_dimension(P)
        risks = [dot(row, w) for row in loss.matrix]
        best = min(risks)
        opt = tuple(r for r, v in zip(loss.reports, risks) if v == best)
        raw.append((zeros, active, w, dim, P, opt))
    raw.sort(key=lambda f: (-f[3], sorted(f[1]), sorted(f[0]), f[2]))
    verts = [f[2] for f in raw if f[3] == 0]
    faces = []
    for zeros, active, w, dim, P, opt in raw:
        fv = tuple(v for v in verts if P.satisfies(v))
        faces.append(Face(zeros, active, w, dim, P, opt, fv))
    return SimplexComplex(loss, t, tuple(hyper), tuple(faces))
