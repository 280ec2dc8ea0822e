import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polyembed import zoo
from polyembed.discrete import bayes_risk, trim
from polyembed.embedding import DoesNotEmbed, Embeds, analyze, conjugate_surrogate, verify_embedding
from polyembed.rational import Q
from polyembed.sampling import random_distribution, rng
from polyembed.surrogate import evaluate, optimal_set, surrogate_risk

HINGE_TARGET = zoo.zero_one(2, ("-1", "+1"))


def test_hinge_analysis():
    an = analyze(zoo.hinge())
    assert an.quotient.trivial
    assert an.points == ((-1,), (1,))
    assert an.trim.vector_set() == {(0, 2), (2, 0)}


def test_hinge_embeds_twice_zero_one():
    res = verify_embedding(zoo.hinge(), HINGE_TARGET.scaled(2))
    assert isinstance(res, Embeds)
    assert res.embedding.as_dict() == {"-1": (-1,), "+1": (1,)}


def test_hinge_does_not_embed_plain_zero_one():
    res = verify_embedding(zoo.hinge(), HINGE_TARGET)
    assert isinstance(res, DoesNotEmbed) and not res
    assert res.p == (Q("1/2"), Q("1/2"))
    assert res.surrogate_risk != res.target_risk


def test_outcome_order_is_aligned():
    flipped = zoo.zero_one(2, ("+1", "-1")).scaled(2)
    assert verify_embedding(zoo.hinge(), flipped)


def test_conjugate_of_zero_one():
    L = conjugate_surrogate(zoo.zero_one(2))
    assert evaluate(L, (1, 0)) == (0, 1)
    assert evaluate(L, (0, 1)) == (1, 0)
    assert evaluate(L, (0, 0)) == (Q("1/2"), Q("1/2"))


def test_bep_embeds_twice_abstain():
    L, code = zoo.bep(4)
    res = verify_embedding(L, zoo.abstain(4).scaled(2))
    assert res
    phi = res.embedding.as_dict()
    assert phi["⊥"] == (0, 0)
    assert all(phi[y] == code[y] for y in code)


def test_ww_embeds_ordered_partitions():
    an = analyze(zoo.ww_hinge(3))
    assert an.trim.vector_set() == trim(zoo.ordered_partition(3)).vector_set()
    assert verify_embedding(zoo.ww_hinge(3), zoo.ordered_partition(3), analysis=an)


@pytest.mark.parametrize("ref", ["zoo:zero_one?n=3", "zoo:abstain?n=3", "zoo:abstain?n=2"])
def test_conjugate_round_trip(ref):
    loss = zoo.resolve(ref)
    L = conjugate_surrogate(loss)
    assert verify_embedding(L, loss)


@settings(max_examples=30)
@given(st.integers(0, 10_000))
def test_conjugate_risks_agree(seed):
    loss = zoo.abstain(3)
    L = conjugate_surrogate(loss)
    p = random_distribution(rng(seed), 3)
    assert surrogate_risk(L, p)[0] == bayes_risk(loss, p).value


@settings(max_examples=30)
@given(st.integers(0, 10_000))
def test_embedding_points_are_optimal_exactly_where_reports_are(seed):
    loss = zoo.abstain(3).scaled(2)
    L, _ = zoo.bep(3)
    res = verify_embedding(L, loss)
    p = random_distribution(rng(seed), 3)
    G = optimal_set(L, p)
    opt = set(bayes_risk(loss, p).argmin)
    for r, u in res.embedding.pairs:
        assert G.satisfies(u) == (r in opt)
