"""Thickened links: report sets, the largest safe epsilon, envelopes and checks.

An artifact holds the optimal-set family of a surrogate, the target reports
allowed on each member, a thickening radius ``epsilon`` and a norm.  The
envelope at ``u`` intersects the report sets of every member within
distance strictly less than ``epsilon``; the link picks its first report.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Callable, Mapping, Sequence

from gmpy2 import mpq

from .discrete import DiscreteLoss, bayes_risk, cell_complex, check_distribution, trim
from .embedding import Analysis, EmbeddingMap, _aligned, analyze
from .errors import EmptyEnvelope, EmptyReportSet, GuardExceeded, IndirectElicitationFails
from .geometry import Polyhedron, contains, distance, fourier_motzkin_eliminate, lp_solve, minmax_distance
from .rational import ONE, ZERO, Q, dot, fmt_vec, integer_row, vec
from .sampling import random_point, rng
from .surrogate import OptimalSetFamily, PolyhedralLoss, optimal_set_range

__all__ = [
    "LinkArtifact",
    "Holds",
    "Fails",
    "VerifiedAtSamples",
    "Refuted",
    "ConsistencyVerdict",
    "build_report_sets",
    "indirect_elicitation_check",
    "epsilon_max",
    "thicken",
    "build_link",
    "envelope",
    "link",
    "verify_proposed_link",
    "diagnose_consistency",
    "search_epsilon",
]


# ---------------------------------------------------------------------------
# report sets


def _member_vertices(family: OptimalSetFamily, member: int) -> list:
    seen = []
    for i in family.faces_of(member):
        for q in family.complex.faces[i].vertices:
            if q not in seen:
                seen.append(q)
    return seen


def build_report_sets(
    family: OptimalSetFamily,
    target: DiscreteLoss | None = None,
    embedding: EmbeddingMap | Mapping | None = None,
    strict: bool = True,
) -> tuple:
    """Allowed target reports for each member of the family.

    With ``embedding`` a report is allowed on a member that contains its
    embedded point.  With ``target`` a report is allowed when it is optimal
    on every distribution whose optimal set is that member; since the
    target's level sets are convex it is enough to test the vertices of the
    faces mapped to the member.
    """
    if (target is None) == (embedding is None):
        raise ValueError("give exactly one of target or embedding")
    out = []
    if embedding is not None:
        pairs = embedding.pairs if isinstance(embedding, EmbeddingMap) else tuple(embedding.items())
        for U in family.members:
            out.append(frozenset(r for r, u in pairs if U.satisfies(u)))
    else:
        for k in range(len(family.members)):
            allowed = set(target.reports)
            for q in _member_vertices(family, k):
                allowed &= set(bayes_risk(target, q).argmin)
                if not allowed:
                    break
            out.append(frozenset(allowed))
    if strict:
        for k, R in enumerate(out):
            if not R:
                raise EmptyReportSet(f"no target report is optimal on all of member {k}", member=k)
    return tuple(out)


# ---------------------------------------------------------------------------
# indirect elicitation and the largest epsilon


@dataclass(frozen=True)
class Holds:
    def __bool__(self):
        return True


@dataclass(frozen=True)
class Fails:
    """Members with a common point but no common allowed report."""

    members: tuple

    def __bool__(self):
        return False


def _classes(family: OptimalSetFamily, report_sets: Sequence[frozenset]):
    """Group members by report set, keeping only inclusion-maximal members."""
    groups: dict = {}
    for k, R in enumerate(report_sets):
        groups.setdefault(R, []).append(k)
    out = []
    for R, ids in groups.items():
        maximal = []
        for k in ids:
            U = family.members[k]
            if any(j != k and contains(family.members[j], U) and not (j > k and contains(U, family.members[j])) for j in ids):
                continue
            maximal.append(k)
        out.append((R, maximal))
    out.sort(key=lambda c: (sorted(c[0]), c[1]))
    return out


def _empty_combos(classes, budget: int):
    """Combinations of classes whose report sets have empty intersection.

    Every minimal such combination is produced: an addition that does not
    shrink the running intersection can never be part of a minimal one.
    """
    found = []
    work = [0]

    def rec(start, inter, chosen):
        for c in range(start, len(classes)):
            work[0] += 1
            if work[0] > budget:
                raise GuardExceeded(f"family enumeration exceeded {budget} steps")
            R = classes[c][0]
            nxt = inter & R
            if nxt == inter:
                continue
            if not nxt:
                found.append(chosen + (c,))
            else:
                rec(c + 1, nxt, chosen + (c,))

    for c, (R, _) in enumerate(classes):
        if not R:
            found.append((c,))
        else:
            rec(c + 1, R, (c,))
    return found


@dataclass(frozen=True)
class _Threshold:
    value: object
    members: tuple
    point: tuple | None


def _threshold(family, report_sets, norm, budget, stop_at_zero=False) -> _Threshold:
    classes = _classes(family, report_sets)
    combos = sorted(_empty_combos(classes, budget), key=lambda c: (len(c), c))
    # a superset of an empty combination can only have a larger min-max distance
    minimal = []
    for combo in combos:
        if not any(set(m) <= set(combo) for m in minimal):
            minimal.append(combo)
    pairs: dict = {}

    def pair_value(i, j):
        key = (min(i, j), max(i, j))
        if key not in pairs:
            pairs[key] = minmax_distance([family.members[key[0]], family.members[key[1]]], norm, return_point=True)
        return pairs[key]

    best = _Threshold(math.inf, (), None)
    evaluated = 0
    for combo in minimal:
        choices = [classes[c][1] for c in combo]
        for pick in product(*choices):
            evaluated += 1
            if evaluated > budget:
                raise GuardExceeded(f"more than {budget} member choices")
            pick = tuple(sorted(set(pick)))
            if len(pick) == 1:
                val, pt = ZERO, None
            else:
                lower = max(pair_value(i, j)[0] for i, j in combinations(pick, 2))
                if best.value != math.inf and lower >= best.value:
                    continue
                if len(pick) == 2:
                    val, pt = pair_value(*pick)
                else:
                    val, pt = minmax_distance([family.members[k] for k in pick], norm, return_point=True)
            if best.value == math.inf or val < best.value:
                best = _Threshold(val, pick, pt)
                if stop_at_zero and val == 0:
                    return best
    return best


def indirect_elicitation_check(family: OptimalSetFamily, report_sets: Sequence[frozenset], budget: int = 200_000):
    """Holds iff every set of members with a common point shares an allowed report."""
    for k, R in enumerate(report_sets):
        if not R:
            return Fails((k,))
    t = _threshold(family, report_sets, "inf", budget, stop_at_zero=True)
    if t.value == 0:
        return Fails(t.members)
    return Holds()


def epsilon_max(family: OptimalSetFamily, report_sets: Sequence[frozenset], norm: str = "inf", budget: int = 200_000, with_witness: bool = False):
    """Supremum of radii for which every envelope is nonempty.

    Equal to the smallest min-max distance over sets of members whose report
    sets have empty intersection; ``math.inf`` when there is no such set.
    Thickenings are open, so ``epsilon = epsilon_max`` itself still works.
    """
    for k, R in enumerate(report_sets):
        if not R:
            raise IndirectElicitationFails(f"member {k} has no allowed report", witness=(k,))
    t = _threshold(family, report_sets, norm, budget)
    if t.value == 0:
        raise IndirectElicitationFails("intersecting optimal sets share no allowed report", witness=t.members)
    if with_witness:
        return t.value, t.members, t.point
    return t.value


# ---------------------------------------------------------------------------
# thickenings and envelopes


def _ball_rows(d: int, eps, norm: str):
    if norm == "inf":
        rows = []
        for i in range(d):
            for s in (ONE, -ONE):
                rows.append((tuple(s if j == i else ZERO for j in range(d)), eps))
        return rows
    if norm == "l1":
        return [(tuple(Q(s) for s in signs), eps) for signs in product((1, -1), repeat=d)]
    raise ValueError(f"norm must be 'inf' or 'l1', got {norm!r}")


def thicken(U: Polyhedron, eps, norm: str = "inf") -> Polyhedron:
    """H-representation of ``U + eps * ball``, the closed thickening.

    Its interior is exactly ``{u : dist(u, U) < eps}``.
    """
    eps = Q(eps)
    d = U.dim
    # variables (u, w) with u - w in U and w in the ball
    ineqs = [(a + tuple(-x for x in a), b) for a, b in U.inequalities]
    eqs = [(a + tuple(-x for x in a), b) for a, b in U.equalities]
    ineqs += [((ZERO,) * d + a, b) for a, b in _ball_rows(d, eps, norm)]
    return fourier_motzkin_eliminate(Polyhedron(2 * d, ineqs, eqs), range(d, 2 * d))


def _strict_inside(rows, u) -> bool:
    for a, b in rows:
        if dot(a, u) >= b:
            return False
    return True


@dataclass(frozen=True)
class LinkArtifact:
    surrogate: PolyhedralLoss
    analysis: Analysis
    family: OptimalSetFamily
    reports: tuple
    report_sets: tuple
    mode: str
    norm: str
    epsilon: object
    epsilon_max: object
    thickenings: tuple = field(repr=False)
    target: DiscreteLoss | None = field(default=None, repr=False)
    # members realizing epsilon_max and the point where their thickenings first meet
    critical: tuple | None = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return self.surrogate.dim

    def with_epsilon(self, eps) -> "LinkArtifact":
        eps = Q(eps)
        if eps <= 0:
            raise ValueError("epsilon must be positive")
        thick = tuple(thicken(U, eps, self.norm).inequalities for U in self.family.members)
        return LinkArtifact(
            self.surrogate, self.analysis, self.family, self.reports, self.report_sets,
            self.mode, self.norm, eps, self.epsilon_max, thick, self.target, self.critical,
        )

    def near_members(self, u) -> list:
        u = vec(u)
        return [k for k, rows in enumerate(self.thickenings) if _strict_inside(rows, u)]


def build_link(
    L: PolyhedralLoss,
    target: DiscreteLoss | None = None,
    embedding: EmbeddingMap | Mapping | None = None,
    norm: str = "inf",
    epsilon=None,
    analysis: Analysis | None = None,
    check: bool = True,
) -> LinkArtifact:
    """Run the thickened-link construction for ``L``.

    Without ``target`` or ``embedding`` the embedded discrete loss of ``L`` is
    the target and each of its reports sits at its own point.  ``epsilon``
    defaults to half of the largest admissible radius (1 when unbounded).
    With ``check=False`` empty report sets are tolerated and no radius is
    computed; this is what link verification needs.
    """
    an = analysis if analysis is not None else analyze(L)
    cx = cell_complex(an.embedded)
    family = optimal_set_range(L, complex=cx)
    if target is None and embedding is None:
        t = an.trim
        embedding = EmbeddingMap(tuple((r, an.original_point(r)) for r in t.reports))
    if target is not None:
        target = _aligned(L, target)
        reports = target.reports
        mode = "property"
    else:
        pairs = embedding.pairs if isinstance(embedding, EmbeddingMap) else tuple(embedding.items())
        reports = tuple(r for r, _ in pairs)
        mode = "embedding"
    report_sets = build_report_sets(family, target=target, embedding=embedding, strict=check)
    if check:
        eps_max, crit_members, crit_point = epsilon_max(family, report_sets, norm, with_witness=True)
        critical = (crit_members, crit_point) if crit_members else None
        if epsilon is None:
            epsilon = eps_max / 2 if eps_max != math.inf else ONE
    else:
        eps_max = critical = None
        if epsilon is None:
            raise ValueError("epsilon is required when checks are disabled")
    art = LinkArtifact(L, an, family, tuple(reports), report_sets, mode, norm, None, eps_max, (), target, critical)
    return art.with_epsilon(epsilon)


def envelope(art: LinkArtifact, u: Sequence, allow_empty: bool = False) -> tuple:
    """Reports allowed at ``u``: those in every report set of a member closer than epsilon."""
    u = vec(u)
    if len(u) != art.dim:
        raise ValueError(f"point of length {len(u)} for a {art.dim}-dimensional surrogate")
    allowed = set(art.reports)
    for k in art.near_members(u):
        allowed &= art.report_sets[k]
    out = tuple(r for r in art.reports if r in allowed)
    if not out and not allow_empty:
        raise EmptyEnvelope(f"empty envelope at u={fmt_vec(u)}; lower epsilon", point=u)
    return out


def envelope_by_distance(art: LinkArtifact, u: Sequence) -> tuple:
    """Same as :func:`envelope` but with one distance program per member."""
    u = vec(u)
    allowed = set(art.reports)
    for k, U in enumerate(art.family.members):
        if distance(u, U, art.norm) < art.epsilon:
            allowed &= art.report_sets[k]
    return tuple(r for r in art.reports if r in allowed)


def link(art: LinkArtifact, u: Sequence) -> str:
    """First report of the envelope (ties go to the lowest report index)."""
    return envelope(art, u)[0]


# ---------------------------------------------------------------------------
# checking a proposed link


@dataclass(frozen=True)
class VerifiedAtSamples:
    count: int
    exact_points: int

    def __bool__(self):
        return True


@dataclass(frozen=True)
class Refuted:
    """``report = psi(u)`` is not allowed at ``u``; it is suboptimal at ``p`` although ``u`` is within epsilon of the optimal set at ``p``."""

    u: tuple
    p: tuple
    report: str
    member: int

    def __bool__(self):
        return False


def _line_points(rows_list, d: int, eps) -> list:
    """Probe points covering the arrangement of all thickening and member boundaries (d <= 2)."""
    lines = {}
    for rows in rows_list:
        for a, b in rows:
            if not any(a):
                continue
            key = integer_row(a, b)
            lines.setdefault(key, (a, b))
    lines = list(lines.values())
    if d == 1:
        xs = sorted({b / a[0] for a, b in lines})
        if not xs:
            return [(ZERO,)]
        gaps = [y - x for x, y in zip(xs, xs[1:])] or [ONE]
        delta = min(min(gaps), eps) / 8
        pts = set()
        for x in xs:
            pts.update({x, x - delta, x + delta})
        for x, y in zip(xs, xs[1:]):
            pts.add((x + y) / 2)
        pts.update({xs[0] - 1, xs[-1] + 1})
        return sorted((x,) for x in pts)
    verts = set()
    for (a1, b1), (a2, b2) in combinations(lines, 2):
        det = a1[0] * a2[1] - a1[1] * a2[0]
        if det == 0:
            continue
        x = (b1 * a2[1] - b2 * a1[1]) / det
        y = (a1[0] * b2 - a2[0] * b1) / det
        verts.add((x, y))
    verts = sorted(verts)
    if not verts:
        return [(ZERO, ZERO)]
    pts = set(verts)
    xs = sorted({v[0] for v in verts})
    ys = sorted({v[1] for v in verts})
    gx = [b - a for a, b in zip(xs, xs[1:])]
    gy = [b - a for a, b in zip(ys, ys[1:])]
    delta = min(gx + gy + [eps]) / 8
    for a, b in lines:
        on = sorted(v for v in verts if dot(a, v) == b)
        for v, w in zip(on, on[1:]):
            pts.add(((v[0] + w[0]) / 2, (v[1] + w[1]) / 2))
        if on:
            # beyond the extreme vertices along the line
            direction = (-a[1], a[0])
            for v, s in ((on[0], -1), (on[-1], 1)):
                pts.add((v[0] + s * direction[0], v[1] + s * direction[1]))
    dirs = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1),
            (2, 1), (1, 2), (-2, 1), (-1, 2), (2, -1), (1, -2), (-2, -1), (-1, -2)]
    for v in verts:
        for dx, dy in dirs:
            pts.add((v[0] + dx * delta, v[1] + dy * delta))
    return sorted(pts)


def _refutation(art: LinkArtifact, u, report: str):
    """Locate a member near ``u`` forbidding ``report`` and a distribution proving it."""
    for k in art.near_members(u):
        if report in art.report_sets[k]:
            continue
        for i in art.family.faces_of(k):
            face = art.family.complex.faces[i]
            for q in face.vertices:
                if report in bayes_risk(art.target, q).argmin:
                    continue
                lam = mpq(1, 2)
                while True:
                    p = tuple((1 - lam) * a + lam * b for a, b in zip(q, face.witness))
                    if report not in bayes_risk(art.target, p).argmin:
                        return Refuted(u, p, report, k)
                    lam /= 2
        # report set empty or report unknown: any face will do
        face = art.family.complex.faces[art.family.faces_of(k)[0]]
        return Refuted(u, face.witness, report, k)
    raise AssertionError("refutation requested at an allowed point")


def _sample_radius(art: LinkArtifact) -> int:
    m = 1
    for face in art.analysis.points:
        for x in face:
            m = max(m, int(abs(x)) + 1)
    return m + 1


def verify_proposed_link(
    L: PolyhedralLoss,
    target: DiscreteLoss,
    psi: Callable,
    epsilon,
    norm: str = "inf",
    n_samples: int = 10_000,
    seed: int = 0,
    exact: bool | None = None,
    artifact: LinkArtifact | None = None,
):
    """Check ``psi(u)`` against the envelope of the property-based construction.

    For ``d <= 2`` the probes include every vertex of the boundary
    arrangement, midpoints between neighbouring vertices and small offsets
    around each vertex; seeded random points are added in every dimension.
    A pass means "verified at these points", never a proof.
    """
    art = artifact if artifact is not None else build_link(L, target=target, norm=norm, epsilon=epsilon, check=False)
    if art.epsilon != Q(epsilon) or art.norm != norm:
        art = art.with_epsilon(epsilon)
    d = art.dim
    if exact is None:
        exact = d <= 2
    probes = []
    if exact:
        if d > 2:
            raise ValueError("exact probing is available for d <= 2 only")
        rows_list = list(art.thickenings) + [U.inequalities + U.equalities for U in art.family.members]
        probes = _line_points(rows_list, d, art.epsilon)
    n_exact = len(probes)
    r = rng(seed)
    radius = _sample_radius(art)
    for _ in range(n_samples):
        probes.append(random_point(r, d, radius=radius, denom=64))
    for u in probes:
        report = psi(u)
        allowed = envelope(art, u, allow_empty=True)
        if report not in allowed:
            return _refutation(art, u, report)
    return VerifiedAtSamples(len(probes), n_exact)


def search_epsilon(L, target, psi, norm="inf", hi=None, rounds: int = 8, n_samples: int = 2000, seed: int = 0):
    """Largest radius in ``hi, hi/2, hi/4, ...`` at which ``psi`` passes verification.

    One-sided: a returned radius is only verified at sampled points, and
    ``None`` means no tried radius passed.
    """
    art = build_link(L, target=target, norm=norm, epsilon=ONE, check=False)
    if hi is None:
        try:
            hi = epsilon_max(art.family, art.report_sets, norm)
        except IndirectElicitationFails:
            return None
        if hi == math.inf:
            hi = ONE
    eps = Q(hi)
    for _ in range(rounds):
        if verify_proposed_link(L, target, psi, eps, norm, n_samples, seed, artifact=art.with_epsilon(eps)):
            return eps
        eps /= 2
    return None


# ---------------------------------------------------------------------------
# consistency diagnosis


@dataclass(frozen=True)
class CellWitness:
    cell: str
    p: tuple
    p_prime: tuple
    reports: tuple
    reports_prime: tuple


@dataclass(frozen=True)
class ConsistencyVerdict:
    status: str
    witnesses: tuple
    restriction: tuple
    offending: tuple

    @property
    def calibrated(self) -> bool:
        return self.status == "Calibrated"


def _strict_point(embedded: DiscreteLoss, cell_vec, target: DiscreteLoss, tvec):
    """A point where ``cell_vec`` and ``tvec`` are both strictly optimal, away from the simplex boundary."""
    n = embedded.n
    N = n + 1
    ineqs = []
    for y in range(n):
        ineqs.append((tuple(-ONE if k == y else ZERO for k in range(n)) + (ONE,), ZERO))
    for w in set(embedded.matrix):
        if w != cell_vec:
            ineqs.append((tuple(a - b for a, b in zip(cell_vec, w)) + (ONE,), ZERO))
    for w in set(target.matrix):
        if w != tvec:
            ineqs.append((tuple(a - b for a, b in zip(tvec, w)) + (ONE,), ZERO))
    ineqs.append(((ZERO,) * n + (ONE,), ONE))
    P = Polyhedron(N, ineqs, [((ONE,) * n + (ZERO,), ONE)])
    out = lp_solve((ZERO,) * n + (ONE,), P, "max")
    if out.optimal and out.value > 0:
        return out.witness[:n]
    return None


def diagnose_consistency(embedded: DiscreteLoss, target: DiscreteLoss) -> ConsistencyVerdict:
    """Which full-dimensional cells of ``embedded`` fit inside a single target cell.

    A cell that does not is split by the target; two points of its relative
    interior with disjoint target-optimal sets are returned as a witness that
    no link can be calibrated there.
    """
    target = _aligned_loss(embedded, target)
    cx = cell_complex(embedded)
    t = cx.trim
    cells = {f.active: f for f in cx.cells()}
    good, bad, witnesses = [], [], []
    tt = trim(target)
    for k, (name, v) in enumerate(zip(t.reports, t.vectors)):
        face = cells[frozenset([k])]
        ok = False
        for r in target.reports:
            if all(r in bayes_risk(target, q).argmin for q in face.vertices):
                ok = True
                break
        if ok:
            good.append(name)
            continue
        bad.append(name)
        found = []
        for tname, tvec in zip(tt.reports, tt.vectors):
            p = _strict_point(embedded, v, target, tvec)
            if p is not None:
                found.append(p)
            if len(found) == 2:
                break
        p, p2 = found
        witnesses.append(CellWitness(name, p, p2, bayes_risk(target, p).argmin, bayes_risk(target, p2).argmin))
    status = "Calibrated" if not bad else "InconsistentForTarget"
    return ConsistencyVerdict(status, tuple(witnesses), tuple(good), tuple(bad))


def _aligned_loss(ref: DiscreteLoss, loss: DiscreteLoss) -> DiscreteLoss:
    if ref.outcomes == loss.outcomes:
        return loss
    if set(ref.outcomes) != set(loss.outcomes):
        raise ValueError("losses have different outcome labels")
    perm = [loss.outcomes.index(y) for y in ref.outcomes]
    return DiscreteLoss(ref.outcomes, loss.reports, [[row[j] for j in perm] for row in loss.matrix])
