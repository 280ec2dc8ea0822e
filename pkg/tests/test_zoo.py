from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import bep_value, hinge_value, l4_value, ordered_partition_loss, topk_value, ww_value
from polyembed import zoo
from polyembed.errors import GuardExceeded, InvalidSetFunction, ParseError
from polyembed.rational import Q
from polyembed.surrogate import evaluate, lineality_space

coords = st.builds(lambda a, b: Q(F(a, b)), st.integers(-16, 16), st.sampled_from([1, 2, 4, 8]))


def _f(x):
    return F(int(x.numerator), int(x.denominator))


def test_zero_one_and_abstain():
    assert zoo.zero_one(2).matrix == ((0, 1), (1, 0))
    ab = zoo.abstain(3)
    assert ab.row("⊥") == (Q("1/2"),) * 3
    assert all(ab.row(y)[i] == 0 for i, y in enumerate(ab.outcomes))
    with pytest.raises(ValueError):
        zoo.abstain(3, 1)


def test_ordered_partition_matches_formula():
    for n in (2, 3, 4):
        loss = zoo.ordered_partition(n)
        ref = ordered_partition_loss(n)
        assert len(loss.reports) == len(ref)
        assert sorted(tuple(map(_f, r)) for r in loss.matrix) == sorted(ref.values())
    assert len(zoo.ordered_partition(3).reports) == 13
    # singleton-first chain on two labels is zero at its own label
    assert zoo.ordered_partition(2).row("{1}|{2}")[0] == 0


def test_top_k_and_l4_targets():
    tk = zoo.top_k(4, 2)
    assert len(tk.reports) == 6
    assert tk.row("{1,3}") == (0, 1, 0, 1)
    l4 = zoo.l4_target(4, 2)
    assert l4.row("{}") == (1, 1, 1, 1)
    assert l4.row("{2}") == (Q("3/2"), 0, Q("3/2"), Q("3/2"))
    assert l4.row("{1,2}") == (0, 0, 3, 3)


def test_structured_abstain_shapes():
    loss = zoo.structured_abstain(zoo.indicator_nonempty, 2)
    assert len(loss.reports) == 9 and loss.n == 4
    # abstaining everywhere pays f(empty) + f(all disagreements) = 1
    assert loss.row("(0,0)") == (1, 1, 1, 1)
    assert loss.row("(1,1)") == (2, 2, 2, 0)
    with pytest.raises(InvalidSetFunction):
        zoo.structured_abstain({(): 1, (0,): 1, (1,): 1, (0, 1): 1}, 2)
    with pytest.raises(GuardExceeded):
        zoo.structured_abstain(zoo.cardinality, 5)


@given(coords)
def test_hinge_values(u):
    L = zoo.hinge()
    out = evaluate(L, (u,))
    assert (_f(out[0]), _f(out[1])) == (hinge_value(_f(u), -1), hinge_value(_f(u), 1))


@given(st.tuples(coords, coords))
def test_bep_values_and_two_label_case(u):
    L, code = zoo.bep(4)
    out = evaluate(L, u)
    for y, val in zip(L.outcomes, out):
        assert _f(val) == bep_value(list(map(_f, u)), code[y])
    L2, _ = zoo.bep(2)
    assert evaluate(L2, u[:1]) == evaluate(zoo.hinge(), u[:1])[::-1]


def test_bep_code():
    code = zoo.bep_code(4)
    assert code == {"1": (1, 1), "2": (1, -1), "3": (-1, 1), "4": (-1, -1)}
    assert len(zoo.bep_code(3)) == 3 and len(zoo.bep(3)[0].pieces[0]) == 3


@given(st.tuples(coords, coords, coords))
def test_ww_values(u):
    L = zoo.ww_hinge(3)
    out = evaluate(L, u)
    assert [_f(x) for x in out] == [ww_value(list(map(_f, u)), y) for y in range(3)]
    assert evaluate(L, (0, 0, 0)) == (2, 2, 2)


@given(st.tuples(coords, coords, coords, coords))
def test_topk_and_l4_values(u):
    uf = list(map(_f, u))
    L = zoo.topk_surrogate(4, 2)
    assert [_f(x) for x in evaluate(L, u)] == [topk_value(uf, y, 2) for y in range(4)]
    L4 = zoo.l4_surrogate(4, 2)
    assert [_f(x) for x in evaluate(L4, u)] == [l4_value(uf, y, 2) for y in range(4)]


def test_topk_lineality_contains_ones():
    basis = lineality_space(zoo.topk_surrogate(4, 2))
    assert len(basis) == 1
    b = basis[0]
    assert len(set(b)) == 1 and b[0] != 0


def test_links():
    assert zoo.psi_inf(4)((Q("3/5"), Q("1/5"))) == "⊥"
    assert zoo.psi_1(4)((Q("3/5"), Q("1/5"))) == "⊥"
    assert zoo.psi_inf(4)((2, -2)) == "2"
    assert zoo.psi_1(4)((Q("3/5"), Q("3/5"))) == "1"
    assert zoo.argmax_link(2)((4, 3, 2, 1)) == "{1,2}"
    assert zoo.argmax_link(2)((0, 0, 0, 0)) == "{1,2}"
    assert zoo.sign_link((0,)) == "+1" and zoo.shifted_sign_link((Q("9/10"),)) == "-1"


def test_registry():
    assert zoo.resolve("zoo:abstain?n=3").n == 3
    assert zoo.resolve("zoo:abstain?n=3&alpha=1/3").row("⊥") == (Q("1/3"),) * 3
    assert zoo.resolve("zoo:hinge_target?scale=2").matrix == ((0, 2), (2, 0))
    assert zoo.resolve("zoo:bep?n=4").dim == 2
    assert zoo.resolve("zoo:argmax?k=2")((1, 2, 3, 4)) == "{3,4}"
    for bad in ("abstain?n=3", "zoo:nope", "zoo:abstain", "zoo:abstain?n=x"):
        with pytest.raises(ParseError):
            zoo.resolve(bad)
