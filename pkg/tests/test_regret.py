from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import hinge_value, hoffman_1d, ordered_partition_loss
from polyembed import zoo
from polyembed.errors import ViolationWithProof
from polyembed.geometry import lp_solve
from polyembed.links import build_link
from polyembed.rational import Q
from polyembed.regret import (
    empirical_transfer_check,
    hoffman_estimate,
    max_loss_gap,
    regret_bound_constant,
    surrogate_regret,
    target_regret,
)
from polyembed.sampling import random_distribution, random_point, rng
from polyembed.surrogate import optimal_set

HALF = Q("1/2")
TWO_ZO = zoo.zero_one(2, ("-1", "+1")).scaled(2)


def _f(x):
    return F(int(x.numerator), int(x.denominator))


def test_max_loss_gap():
    assert max_loss_gap(zoo.zero_one(3).scaled(2)) == 2
    assert max_loss_gap(zoo.abstain(4)) == 1
    assert max_loss_gap(zoo.top_k(4, 2)) == 1
    rows = list(ordered_partition_loss(3).values())
    expect = max(max(r[y] for r in rows) - min(r[y] for r in rows) for y in range(3))
    assert _f(max_loss_gap(zoo.ordered_partition(3))) == expect


def test_hinge_hoffman_examples():
    assert hoffman_estimate(zoo.hinge(), (HALF, HALF)) == (2, True)
    assert hoffman_estimate(zoo.hinge(), (1, 0)) == (1, True)


@given(st.integers(1, 15))
def test_hinge_hoffman_matches_grid(k):
    L = zoo.hinge()
    p = (Q(k) / 16, 1 - Q(k) / 16)
    value, exact = hoffman_estimate(L, p)
    assert exact
    G = optimal_set(L, p)
    lo = lp_solve((1,), G, "min")
    hi = lp_solve((1,), G, "max")
    lo = _f(lo.value) if lo.optimal else None
    hi = _f(hi.value) if hi.optimal else None
    pf = [_f(x) for x in p]

    def f(u):
        return pf[0] * hinge_value(u, -1) + pf[1] * hinge_value(u, 1)

    grid = [F(i, 8) for i in range(-40, 41)] + [F(-1001, 1000), F(1001, 1000)]
    assert _f(value) == hoffman_1d(f, lo, hi, grid)


def test_bep_hoffman_at_point_masses_is_one():
    L, _ = zoo.bep(4)
    for y in range(4):
        p = tuple(Q(int(k == y)) for k in range(4))
        value, exact = hoffman_estimate(L, p)
        assert value == 1 and not exact


@settings(max_examples=30)
@given(st.integers(0, 10_000))
def test_regrets_are_nonnegative(seed):
    r = rng(seed)
    L, _ = zoo.bep(4)
    p = random_distribution(r, 4)
    u = random_point(r, 2)
    assert surrogate_regret(L, u, p) >= 0
    for rep in zoo.abstain(4).reports:
        assert target_regret(zoo.abstain(4), rep, p) >= 0


def test_bound_constant_scales_inversely_with_epsilon():
    L = zoo.hinge()
    art = build_link(L, target=TWO_ZO)
    a = regret_bound_constant(L, TWO_ZO, art)
    b = regret_bound_constant(L, TWO_ZO, art.with_epsilon(art.epsilon / 2))
    assert a.c_ell == 2 and a.hoffman == 2 and a.hoffman_exact
    assert b.c_bound == 2 * a.c_bound


def test_hinge_transfer_holds_at_the_bound():
    L = zoo.hinge()
    art = build_link(L, target=TWO_ZO).with_epsilon(1)
    c = regret_bound_constant(L, TWO_ZO, art).c_bound
    assert c == 4
    rep = empirical_transfer_check(L, TWO_ZO, zoo.sign_link, c, n_samples=2000)
    assert rep.violations == 0 and rep.max_sampled_ratio == 2


def test_bep_transfer_is_tight_at_one():
    L, _ = zoo.bep(4)
    rep = empirical_transfer_check(L, zoo.abstain(4), zoo.psi_inf(4), 1, n_samples=2000)
    assert rep.violations == 0 and rep.max_sampled_ratio == 1


def test_violation_raises_with_proof():
    L = zoo.hinge()
    with pytest.raises(ViolationWithProof) as err:
        empirical_transfer_check(L, TWO_ZO, zoo.shifted_sign_link, 4, n_samples=2000, raise_on_violation=True)
    assert err.value.ratio > 4
