"""Building surrogates that embed a discrete loss, and checking embeddings."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .discrete import DiscreteLoss, bayes_risk, cell_complex, trim
from .rational import ONE, ZERO, fmt_vec
from .surrogate import PolyhedralLoss, evaluate, quotient, representative_set, restrict

__all__ = ["EmbeddingMap", "Embeds", "DoesNotEmbed", "conjugate_surrogate", "verify_embedding", "analyze"]


def conjugate_surrogate(loss: DiscreteLoss) -> PolyhedralLoss:
    """Surrogate ``L(u) = C(u) 1 - u`` on ``R^n`` embedding ``loss``.

    ``C`` is the conjugate of the negated Bayes risk: a maximum of affine
    functions ``<q,u> + risk(q)``, one per vertex ``q`` of the loss's complex.
    """
    cx = cell_complex(loss)
    n = loss.n
    pieces_c = [(q, bayes_risk(loss, q).value) for q in cx.vertices()]
    pieces = []
    for y in range(n):
        pieces.append([(tuple(qi - (ONE if i == y else ZERO) for i, qi in enumerate(q)), c) for q, c in pieces_c])
    return PolyhedralLoss(n, loss.outcomes, pieces)


@dataclass(frozen=True)
class EmbeddingMap:
    """Report to surrogate point, in the surrogate's original coordinates."""

    pairs: tuple

    def __getitem__(self, report: str) -> tuple:
        for r, u in self.pairs:
            if r == report:
                return u
        raise KeyError(report)

    def reports(self) -> tuple:
        return tuple(r for r, _ in self.pairs)

    def as_dict(self) -> dict:
        return dict(self.pairs)


@dataclass(frozen=True)
class Embeds:
    embedding: EmbeddingMap

    def __bool__(self):
        return True


@dataclass(frozen=True)
class DoesNotEmbed:
    """``vector`` lies in exactly one of the two trims (``side`` says which);
    the Bayes risks differ at ``p``."""

    vector: tuple
    side: str
    p: tuple
    surrogate_risk: object
    target_risk: object

    def __bool__(self):
        return False


@dataclass(frozen=True)
class Analysis:
    quotient: object
    points: tuple
    embedded: DiscreteLoss
    trim: object

    def original_point(self, report: str) -> tuple:
        return self.quotient.section(self.points[self.embedded.index(report)])


def analyze(L: PolyhedralLoss, method: str = "auto") -> Analysis:
    """Quotient, representative set and embedded discrete loss of a surrogate."""
    q = quotient(L)
    S = representative_set(q.loss, method=method)
    names = [fmt_vec(q.section(s)) for s in S]
    ell = restrict(q.loss, S, names)
    return Analysis(q, tuple(S), ell, trim(ell))


def _aligned(L: PolyhedralLoss, loss: DiscreteLoss) -> DiscreteLoss:
    if tuple(L.outcomes) == tuple(loss.outcomes):
        return loss
    if set(L.outcomes) != set(loss.outcomes):
        raise ValueError("surrogate and discrete loss have different outcome labels")
    perm = [loss.outcomes.index(y) for y in L.outcomes]
    return DiscreteLoss(L.outcomes, loss.reports, [[row[j] for j in perm] for row in loss.matrix])


def verify_embedding(L: PolyhedralLoss, loss: DiscreteLoss, analysis: Analysis | None = None):
    """Decide whether ``L`` embeds ``loss`` by comparing trims.

    On success the map sends each minimum-representative report to the
    lexicographically smallest surrogate point with the same loss vector.
    On failure a differing trim vector is returned together with a
    distribution where the two Bayes risks differ; such a distribution always
    exists among the vertices of the two complexes.
    """
    loss = _aligned(L, loss)
    an = analysis if analysis is not None else analyze(L)
    ell_hat = an.embedded
    t_hat = an.trim.vector_set()
    t_ell = trim(loss)
    if t_hat == t_ell.vector_set():
        pairs = []
        for r, v in zip(t_ell.reports, t_ell.vectors):
            cands = sorted(an.quotient.section(s) for s, row in zip(an.points, ell_hat.matrix) if row == v)
            u = cands[0]
            assert evaluate(L, u) == v
            pairs.append((r, u))
        return Embeds(EmbeddingMap(tuple(pairs)))
    only_hat = sorted(t_hat - t_ell.vector_set())
    only_ell = sorted(t_ell.vector_set() - t_hat)
    if only_ell:
        vector, side = only_ell[0], "target"
    else:
        vector, side = only_hat[0], "surrogate"
    best = None
    candidates = set(cell_complex(loss).vertices()) | set(cell_complex(ell_hat).vertices())
    for q in sorted(candidates):
        a = bayes_risk(ell_hat, q).value
        b = bayes_risk(loss, q).value
        gap = abs(a - b)
        if gap and (best is None or gap > best[0]):
            best = (gap, q, a, b)
    assert best is not None, "distinct trims must give distinct Bayes risks"
    return DoesNotEmbed(vector, side, best[1], best[2], best[3])
