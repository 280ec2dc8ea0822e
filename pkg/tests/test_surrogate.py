from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from polyembed import zoo
from polyembed.discrete import bayes_risk, cell_complex
from polyembed.errors import NegativeLoss, NotRepresentative
from polyembed.geometry import Polyhedron, contains, equal_sets
from polyembed.rational import Q, dot
from polyembed.sampling import random_distribution, random_point, rng
from polyembed.surrogate import (
    PolyhedralLoss,
    embedded_loss,
    expected_loss,
    lineality_space,
    optimal_set,
    optimal_set_range,
    quotient,
    representative_set,
    restrict,
    surrogate_risk,
)

HALF = Q("1/2")


def test_negative_surrogate_rejected():
    with pytest.raises(NegativeLoss):
        PolyhedralLoss(1, ["a", "b"], [[((1,), 0)], [((0,), 0)]])
    with pytest.raises(NegativeLoss):
        PolyhedralLoss(1, ["a", "b"], [[((0,), -1)], [((0,), 0)]])
    with pytest.raises(TypeError):
        PolyhedralLoss(1, ["a", "b"], [[((0.5,), 0)], [((0,), 0)]])


def test_hinge_risk_and_optimal_sets():
    L = zoo.hinge()
    assert surrogate_risk(L, (1, 0))[0] == 0
    assert surrogate_risk(L, (HALF, HALF))[0] == 1
    assert equal_sets(optimal_set(L, (HALF, HALF)), Polyhedron.box([-1], [1]))
    assert equal_sets(optimal_set(L, (Q("1/4"), Q("3/4"))), Polyhedron.point([1]))
    # all mass on -1: anything at or below -1 is optimal
    assert equal_sets(optimal_set(L, (1, 0)), Polyhedron(1, [((1,), -1)]))


@pytest.mark.parametrize("name", ["hinge", "bep", "ww"])
@given(seed=st.integers(0, 10_000))
def test_optimal_set_two_routes_agree(name, seed):
    L = {"hinge": zoo.hinge(), "bep": zoo.bep(4)[0], "ww": zoo.ww_hinge(3)}[name]
    p = random_distribution(rng(seed), L.n)
    a = optimal_set(L, p, method="active")
    b = optimal_set(L, p, method="projection")
    assert equal_sets(a, b)


@given(st.integers(0, 10_000))
def test_optimal_set_is_optimal(seed):
    r = rng(seed)
    L = zoo.bep(4)[0]
    p = random_distribution(r, 4)
    value, u = surrogate_risk(L, p)
    G = optimal_set(L, p)
    assert G.satisfies(u) and expected_loss(L, p, u) == value
    v = random_point(r, 2)
    assert (expected_loss(L, p, v) == value) == G.satisfies(v)


def test_lineality_and_quotient():
    assert lineality_space(zoo.hinge()) == []
    ww = lineality_space(zoo.ww_hinge(3))
    assert len(ww) == 1 and len(set(ww[0])) == 1
    q = quotient(zoo.ww_hinge(3))
    assert q.loss.dim == 2 and not q.trivial
    for v in [(1, 0), (Q("1/3"), -2)]:
        assert q.project(q.section(v)) == tuple(map(Q, v))
        assert q.loss(v) == zoo.ww_hinge(3)(q.section(v))
    assert quotient(zoo.hinge()).trivial


def test_representative_set_examples():
    assert representative_set(zoo.hinge()) == [(-1,), (1,)]
    pts = set(representative_set(zoo.bep(4)[0]))
    assert pts == {(1, 1), (1, -1), (-1, 1), (-1, -1), (0, 0)}
    with pytest.raises(NotRepresentative):
        representative_set(zoo.ww_hinge(3))


@pytest.mark.parametrize("method", ["arrangement", "lp"])
def test_representative_methods_give_equal_risks(method):
    L = zoo.bep(4)[0]
    ell = restrict(L, representative_set(L, method=method))
    for q in cell_complex(ell).vertices():
        assert bayes_risk(ell, q).value == surrogate_risk(L, q)[0]


@given(st.integers(0, 10_000))
def test_restricted_loss_has_the_same_risk(seed):
    L = zoo.bep(4)[0]
    ell = embedded_loss(L)
    p = random_distribution(rng(seed), 4)
    assert bayes_risk(ell, p).value == surrogate_risk(L, p)[0]


def test_hinge_family():
    fam = optimal_set_range(zoo.hinge())
    assert len(fam.members) == 5
    expected = [
        Polyhedron(1, [((1,), -1)]),
        Polyhedron(1, [((-1,), -1)]),
        Polyhedron.point([-1]),
        Polyhedron.box([-1], [1]),
        Polyhedron.point([1]),
    ]
    for E in expected:
        assert sum(equal_sets(E, M) for M in fam.members) == 1
    # every face maps to a member containing the optimal set at its witness
    for i, face in enumerate(fam.complex.faces):
        assert equal_sets(fam.members[fam.face_map[i]], optimal_set(fam.loss, face.witness))


def test_bep_family_size():
    assert len(optimal_set_range(zoo.bep(4)[0]).members) == 27


def test_family_members_are_distinct():
    fam = optimal_set_range(zoo.bep(4)[0])
    for i, A in enumerate(fam.members):
        for B in fam.members[i + 1:]:
            assert not (contains(A, B) and contains(B, A))
