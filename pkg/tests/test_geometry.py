import math
from fractions import Fraction as F

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from oracles import brute_lp_min, brute_vertices
from polyembed.errors import GuardExceeded
from polyembed.geometry import (
    Polyhedron,
    affine_dimension,
    contains,
    distance,
    equal_sets,
    feasible_point,
    fourier_motzkin_eliminate,
    implicit_equalities,
    is_empty,
    lp_solve,
    minmax_distance,
    polyhedron_vertices,
    relative_interior_point,
    remove_redundancy,
)
from polyembed.rational import Q, dot

small = st.integers(-3, 3)
frac = st.builds(lambda a, b: Q(F(a, b)), st.integers(-12, 12), st.integers(1, 4))


@st.composite
def polytopes(draw, dim=None):
    d = draw(st.integers(1, 3)) if dim is None else dim
    rows = []
    for i in range(d):
        e = [0] * d
        e[i] = 1
        rows.append((tuple(e), 3))
        rows.append((tuple(-x for x in e), 3))
    for _ in range(draw(st.integers(0, 3))):
        a = tuple(draw(small) for _ in range(d))
        rows.append((a, draw(st.integers(-4, 6))))
    return Polyhedron(d, rows)


def _frac(x):
    return F(int(x.numerator), int(x.denominator))


def _raw(P):
    return [tuple(map(_frac, a)) for a, _ in P.inequalities], [_frac(b) for _, b in P.inequalities]


# ---------------------------------------------------------------------------
# linear programs


def test_lp_simple_values():
    P = Polyhedron.box([0], [1])
    assert lp_solve([1], P, "min").value == 0
    assert lp_solve([1], P, "max").value == 1
    out = lp_solve([1, 1, 1], Polyhedron.simplex(3), "max")
    assert out.value == 1
    assert lp_solve([1, 0, 0], Polyhedron.simplex(3), "max").witness == (1, 0, 0)


def test_lp_infeasible_and_unbounded():
    P = Polyhedron(1, [((1,), 0), ((-1,), -1)])
    assert lp_solve([1], P).status == "infeasible"
    assert is_empty(P)
    assert lp_solve([1], Polyhedron(1, [((1,), 0)])).status == "unbounded"


@given(polytopes(), st.data())
def test_lp_matches_basis_enumeration(P, data):
    c = tuple(data.draw(small) for _ in range(P.dim))
    out = lp_solve(c, P, "min")
    A, b = _raw(P)
    ref = brute_lp_min(c, A, b)
    if ref is None:
        assert out.status == "infeasible"
    else:
        assert out.optimal and out.value == ref


@given(polytopes(), st.data())
def test_lp_witness_rechecks(P, data):
    c = tuple(data.draw(small) for _ in range(P.dim))
    out = lp_solve(c, P, "max")
    if out.optimal:
        assert P.satisfies(out.witness)
        assert dot(c, out.witness) == out.value


def test_floats_rejected():
    with pytest.raises(TypeError):
        Polyhedron(1, [((0.5,), 1)])


# ---------------------------------------------------------------------------
# dimension and interior


def test_implicit_equalities_detects_pinched_rows():
    P = Polyhedron(2, [((1, 0), 1), ((-1, 0), -1), ((0, 1), 2)])
    assert set(implicit_equalities(P)) == {0, 1}
    assert affine_dimension(P) == 1
    assert implicit_equalities(Polyhedron(1, [((1,), 0), ((-1,), -1)])) is None


def test_relative_interior_point_examples():
    assert relative_interior_point(Polyhedron.simplex(2)) == (Q("1/2"), Q("1/2"))
    assert relative_interior_point(Polyhedron.point([3])) == (3,)
    assert affine_dimension(Polyhedron.simplex(3)) == 2


@given(polytopes())
def test_relative_interior_is_strict_on_free_rows(P):
    w = relative_interior_point(P)
    if w is None:
        assert is_empty(P)
        return
    imp = set(implicit_equalities(P))
    assert P.satisfies(w)
    assert P.strictly_inside_rows(w, [i for i in range(len(P.inequalities)) if i not in imp])


# ---------------------------------------------------------------------------
# vertices


def test_square_vertices():
    verts, rays = polyhedron_vertices(Polyhedron.box([0, 0], [1, 1]))
    assert verts == {(0, 0), (0, 1), (1, 0), (1, 1)} and not rays
    verts, rays = polyhedron_vertices(Polyhedron(1, [((-1,), -1)]))
    assert verts == {(1,)} and rays


@given(polytopes())
def test_vertices_match_brute_force(P):
    verts, rays = polyhedron_vertices(P)
    A, b = _raw(P)
    assert {tuple(map(_frac, v)) for v in verts} == brute_vertices(A, b)
    assert not rays


def _in_hull(x, verts):
    """Membership in the convex hull of ``verts``, by an LP over weights."""
    verts = sorted(verts)
    k = len(verts)
    eqs = [(tuple(v[i] for v in verts), x[i]) for i in range(len(x))]
    eqs.append(((1,) * k, 1))
    rows = [(tuple(-1 if j == i else 0 for j in range(k)), 0) for i in range(k)]
    return not is_empty(Polyhedron(k, rows, eqs))


@given(polytopes(dim=2), st.lists(st.tuples(frac, frac), min_size=1, max_size=5))
def test_vertex_hull_equivalence(P, points):
    verts, _ = polyhedron_vertices(P)
    assume(verts)
    for x in points:
        assert P.satisfies(x) == _in_hull(x, verts)


# ---------------------------------------------------------------------------
# containment and redundancy


def test_contains_examples():
    big = Polyhedron.box([0, 0], [2, 2])
    small_ = Polyhedron.box([0, 0], [1, 1])
    assert contains(big, small_) and not contains(small_, big)
    assert equal_sets(big, big.add([((1, 1), 10)]))


@given(polytopes())
def test_redundancy_removal_keeps_the_set(P):
    R = remove_redundancy(P)
    assert equal_sets(P, R)
    assert len(R.inequalities) <= len(P.inequalities)


# ---------------------------------------------------------------------------
# projection


def test_projection_examples():
    # triangle x, y >= 0, x + y <= 1 projected to x
    T = Polyhedron(2, [((-1, 0), 0), ((0, -1), 0), ((1, 1), 1)])
    S = fourier_motzkin_eliminate(T, [1])
    assert equal_sets(S, Polyhedron.box([0], [1]))
    # an equality is substituted before pairing
    E = Polyhedron(2, [((0, 1), 2), ((0, -1), 0)], [((1, -1), 0)])
    assert equal_sets(fourier_motzkin_eliminate(E, [1]), Polyhedron.box([0], [2]))


def test_projection_guard():
    rows = []
    for i in range(6):
        for j in range(6):
            a = [0] * 4
            a[0], a[1] = i - 3, j - 3
            a[2] = 1 if (i + j) % 2 else -1
            a[3] = 1 if i % 2 else -1
            rows.append((tuple(a), 1))
    with pytest.raises(GuardExceeded):
        fourier_motzkin_eliminate(Polyhedron(4, rows), [2, 3], guard=5)


@given(polytopes(dim=3), st.tuples(frac, frac))
def test_projection_membership_equivalence(P, x):
    S = fourier_motzkin_eliminate(P, [2])
    fiber = P.add(equalities=[((1, 0, 0), x[0]), ((0, 1, 0), x[1])])
    assert S.satisfies(x) == (not is_empty(fiber))


# ---------------------------------------------------------------------------
# distances


def test_distance_examples():
    pt = Polyhedron.point([1, 1])
    assert distance((Q("3/2"), 0), pt, "inf") == 1
    assert distance((Q("3/2"), 0), pt, "l1") == Q("3/2")
    assert distance((1, 1), pt) == 0
    empty = Polyhedron(1, [((1,), 0), ((-1,), -1)])
    assert distance((0,), empty) == math.inf


def test_minmax_examples():
    a, b = Polyhedron.point([1]), Polyhedron.point([-1])
    val, u = minmax_distance([a, b], return_point=True)
    assert val == 1 and u == (0,)
    ray = Polyhedron(1, [((1,), -1)])
    assert minmax_distance([a, ray]) == 1


@given(polytopes(), st.data(), st.sampled_from(["inf", "l1"]))
def test_distance_membership_consistency(P, data, norm):
    x = tuple(data.draw(frac) for _ in range(P.dim))
    dist = distance(x, P, norm)
    if is_empty(P):
        assert dist == math.inf
        return
    assert (dist == 0) == P.satisfies(x)
    # any feasible point bounds the distance from above
    y = feasible_point(P)
    gap = [abs(a - b) for a, b in zip(x, y)]
    assert dist <= (max(gap) if norm == "inf" else sum(gap))


@given(st.lists(polytopes(dim=2), min_size=2, max_size=3))
def test_minmax_is_attained_and_monotone(family):
    assume(all(not is_empty(U) for U in family))
    val, u = minmax_distance(family, return_point=True)
    assert max(distance(u, U) for U in family) == val
    # dropping members can only lower the value
    for i in range(len(family)):
        rest = family[:i] + family[i + 1:]
        assert minmax_distance(rest) <= val
