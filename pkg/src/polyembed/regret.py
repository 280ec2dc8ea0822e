"""Linear regret transfer from a surrogate to a discrete target."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .discrete import DiscreteLoss, bayes_risk, check_distribution
from .embedding import _aligned
from .errors import ViolationWithProof
from .geometry import distance, lp_solve, polyhedron_vertices, relative_interior_point
from .rational import ONE, ZERO, Q, dot, vec
from .sampling import random_distribution, random_point, rng
from .surrogate import PolyhedralLoss, evaluate, expected_loss, optimal_set, surrogate_risk

__all__ = [
    "RegretReport",
    "max_loss_gap",
    "surrogate_regret",
    "target_regret",
    "hoffman_estimate",
    "regret_bound_constant",
    "empirical_transfer_check",
]


@dataclass(frozen=True)
class RegretReport:
    c_ell: object = None
    hoffman: object = None
    hoffman_exact: bool | None = None
    eps_psi: object = None
    c_bound: object = None
    max_sampled_ratio: object = None
    violations: int | None = None
    samples: int | None = None
    argmax_pair: tuple | None = None


def max_loss_gap(loss: DiscreteLoss):
    """Largest difference between two entries of the same column."""
    best = ZERO
    for y in range(loss.n):
        col = [row[y] for row in loss.matrix]
        best = max(best, max(col) - min(col))
    return best


def surrogate_regret(L: PolyhedralLoss, u, p, risk=None):
    if risk is None:
        risk = surrogate_risk(L, p)[0]
    return expected_loss(L, p, u) - risk


def target_regret(loss: DiscreteLoss, report: str, p):
    return loss.expected(p, report) - bayes_risk(loss, p).value


def _one_sided_slope(L: PolyhedralLoss, p, x, side: int):
    """Derivative of ``u -> <p, L(u)>`` at ``x`` to the right (+1) or left (-1)."""
    total = ZERO
    for py, plist in zip(p, L.pieces):
        if py == 0:
            continue
        vals = [(a[0] * x + c, a[0]) for a, c in plist]
        top = max(v for v, _ in vals)
        slopes = [s for v, s in vals if v == top]
        total += py * (max(slopes) if side > 0 else min(slopes))
    return total


def hoffman_estimate(L: PolyhedralLoss, p, n_samples: int = 200, seed: int = 0, norm: str = "inf"):
    """Constant ``H`` with ``dist(u, Gamma(p)) <= H * regret(u, p)``.

    Exact in one dimension, where the regret is convex piecewise linear and
    the worst ratio is the reciprocal slope just outside the optimal
    interval.  Otherwise a sampled lower bound along rays leaving the
    optimal set.  Returns ``(value, exact)``.
    """
    p = check_distribution(p, L.n)
    G = optimal_set(L, p)
    d = L.dim
    if not G.inequalities and not G.equalities:
        return ZERO, True
    if d == 1:
        best = ZERO
        for sense, side in (("max", 1), ("min", -1)):
            out = lp_solve((ONE,), G, sense)
            if not out.optimal:
                continue
            x = out.value
            slope = abs(_one_sided_slope(L, p, x, side))
            best = max(best, 1 / slope)
        return best, True
    risk = surrogate_risk(L, p)[0]
    anchors = sorted(polyhedron_vertices(G)[0]) or [relative_interior_point(G)]
    r = rng(seed)
    best = ZERO
    steps = (Q("1/4"), ONE, Q(4))
    for i in range(n_samples):
        v = anchors[i % len(anchors)]
        w = random_point(r, d, radius=1, denom=8)
        if not any(w):
            continue
        t = steps[i % len(steps)]
        u = tuple(a + t * b for a, b in zip(v, w))
        reg = expected_loss(L, p, u) - risk
        if reg == 0:
            continue
        best = max(best, distance(u, G, norm) / reg)
    return best, False


def regret_bound_constant(L: PolyhedralLoss, target: DiscreteLoss, artifact, n_samples: int = 200, seed: int = 0) -> RegretReport:
    """``c = C * H / epsilon`` with ``H`` maximized over the complex vertices."""
    target = _aligned(L, target)
    c_ell = max_loss_gap(target)
    H, exact = ZERO, True
    for q in artifact.family.complex.vertices():
        h, ex = hoffman_estimate(L, q, n_samples, seed, artifact.norm)
        H = max(H, h)
        exact = exact and ex
    eps = artifact.epsilon
    return RegretReport(c_ell=c_ell, hoffman=H, hoffman_exact=exact, eps_psi=eps, c_bound=c_ell * H / eps)


def _probe_distributions(n: int, r, count: int) -> list:
    pool = []
    for y in range(n):
        pool.append(tuple(ONE if k == y else ZERO for k in range(n)))
    for y in range(n):
        for z in range(y + 1, n):
            pool.append(tuple(Q("1/2") if k in (y, z) else ZERO for k in range(n)))
    pool.append(tuple(Q(1) / n for _ in range(n)))
    while len(pool) < count:
        pool.append(random_distribution(r, n))
    return pool


def empirical_transfer_check(
    L: PolyhedralLoss,
    target: DiscreteLoss,
    psi: Callable,
    c,
    n_samples: int = 10_000,
    seed: int = 0,
    radius: int = 3,
    n_distributions: int = 60,
    raise_on_violation: bool = False,
) -> RegretReport:
    """Sample ``(p, u)`` and compare target regret with ``c`` times surrogate regret.

    Distributions come from a pool holding the point masses, the two-point
    midpoints, the uniform distribution and seeded random points; reports
    are seeded grid points.  Pairs with zero regret on both sides are skipped.
    """
    target = _aligned(L, target)
    c = Q(c)
    r = rng(seed)
    pool = _probe_distributions(L.n, r, n_distributions)
    cache = {}
    worst, worst_pair = None, None
    violations = used = 0
    for i in range(n_samples):
        p = pool[r.randrange(len(pool))]
        if p not in cache:
            cache[p] = (surrogate_risk(L, p)[0], bayes_risk(target, p).value)
        s_risk, t_risk = cache[p]
        u = random_point(r, L.dim, radius=radius, denom=4 if i % 2 else 16)
        rl = expected_loss(L, p, u) - s_risk
        rt = target.expected(p, psi(u)) - t_risk
        if rl < 0 or rt < 0:
            raise AssertionError("negative regret")
        if rl == 0 and rt == 0:
            continue
        used += 1
        ratio = math.inf if rl == 0 else rt / rl
        if worst is None or ratio > worst:
            worst, worst_pair = ratio, (p, u)
        if ratio > c:
            violations += 1
            if raise_on_violation:
                raise ViolationWithProof(f"target regret exceeds {c} times surrogate regret", p=p, u=u, ratio=ratio)
    return RegretReport(c_bound=c, max_sampled_ratio=worst if worst is not None else ZERO, violations=violations, samples=used, argmax_pair=worst_pair)
