from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, strategies as st

from scrollfano._linalg import det, matmul
from scrollfano.isometry import word_eval
from scrollfano.lattice import (
    GramLattice,
    IntersectionLattice,
    LatticeError,
    abel_jacobi,
    action_orders,
    disc_action,
    discriminant_group,
    divisibility_full,
    gram_eval,
    smith_normal_form,
    subgroup_order,
)


def test_gram_eval_values(c12, syz, nonsyz):
    assert gram_eval(c12.lattice, (1, 0), (1, 0)) == 6
    assert gram_eval(syz.lattice, (1, 1, 1), (1, 1, 1)) == -2
    assert gram_eval(nonsyz.lattice, (1, 2, 0), (1, 2, 0)) == -10


def test_gram_eval_shape_mismatch(syz):
    with pytest.raises(ValueError):
        gram_eval(syz.lattice, (1, 0), (1, 0, 0))


@pytest.mark.parametrize("table, gram", [
    (((3, 3), (3, 7)), ((6, 0), (0, -4))),
    (((3, 3, 3), (3, 7, 3), (3, 3, 7)), ((6, 0, 0), (0, -4, 0), (0, 0, -4))),
    (((3, 3, 3), (3, 7, 1), (3, 1, 7)), ((6, 0, 0), (0, -4, 2), (0, 2, -4))),
])
def test_abel_jacobi_tables(table, gram):
    assert abel_jacobi(IntersectionLattice(table)).gram == gram


def test_scenario_grams_come_from_intersection_forms(scenarios):
    for sc in scenarios.values():
        assert abel_jacobi(sc.intersection).gram == sc.lattice.gram


def test_intersection_lattice_validation():
    with pytest.raises(LatticeError):
        IntersectionLattice(((2, 3), (3, 7)))
    with pytest.raises(LatticeError):
        IntersectionLattice(((3, 2), (2, 7)))


def test_gram_lattice_rejects_wrong_signature():
    with pytest.raises(LatticeError):
        GramLattice(((6, 0), (0, 4)))
    with pytest.raises(LatticeError):
        GramLattice(((6, 1), (0, -4)))


def test_gram_lattice_rejects_glue_outside_dual():
    with pytest.raises(LatticeError):
        GramLattice(((6, 0), (0, -4)), glue_gens=((Fraction(1, 5), 0),))


def _check_snf(M):
    D, U, V = smith_normal_form(M)
    assert matmul(matmul(U, M), V) == D
    assert det(U) in (1, -1) and det(V) in (1, -1)
    diag = [D[i][i] for i in range(min(len(D), len(D[0])))]
    assert all(D[i][j] == 0 for i in range(len(D)) for j in range(len(D[0])) if i != j)
    nz = [abs(d) for d in diag if d]
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    return diag


def test_snf_examples(syz, nonsyz):
    assert sorted(abs(d) for d in _check_snf(syz.lattice.gram)) == [2, 4, 12]
    assert _check_snf(((1, 0), (0, 1))) == [1, 1]
    assert abs(det(nonsyz.lattice.gram)) == 72


@given(st.lists(st.lists(st.integers(-20, 20), min_size=3, max_size=3), min_size=2, max_size=4))
def test_snf_property(rows):
    _check_snf(tuple(map(tuple, rows)))


@pytest.mark.parametrize("name, factors", [
    ("c12", (6, 4)), ("syz", (6, 4, 4)), ("nonsyz", (6, 2, 6)),
])
def test_discriminant_groups(scenarios, name, factors):
    L = scenarios[name].lattice
    D = discriminant_group(L)
    assert D.is_isomorphic_to(factors)
    assert D.order == abs(det(L.gram))
    for d, w in zip(D.invariant_factors, D.generator_lifts):
        assert all((d * x).denominator == 1 for x in w)


def test_glue_subgroups_have_index_two(scenarios):
    for sc in scenarios.values():
        L = sc.lattice
        assert 2 * subgroup_order(L, L.glue_gens) == discriminant_group(L).order


def test_disc_action_c12(c12):
    L, T = c12.lattice, c12.generators
    assert disc_action(L, T["R1"]) == ((1, 0), (0, -1))
    assert disc_action(L, T["R2"]) == ((-1, 0), (0, -1))
    assert disc_action(L, ((1, 0), (0, 1))) == ((1, 0), (0, 1))


@given(st.data())
def test_disc_action_is_multiplicative(scenarios, data):
    sc = scenarios[data.draw(st.sampled_from(sorted(scenarios)))]
    names = sorted(sc.generators)
    w1 = data.draw(st.lists(st.sampled_from(names), max_size=4))
    w2 = data.draw(st.lists(st.sampled_from(names), max_size=4))
    L = sc.lattice
    A = word_eval(sc.generators, w1).matrix
    B = word_eval(sc.generators, w2).matrix
    a, b, ab = disc_action(L, A), disc_action(L, B), disc_action(L, matmul(A, B))
    orders = action_orders(L.glue_gens)
    k = len(orders)
    prod = [[sum(a[i][m] * b[m][j] for m in range(k)) for j in range(k)] for i in range(k)]
    assert all((prod[i][j] - ab[i][j]) % orders[i] == 0 for i in range(k) for j in range(k))


def test_divisibility_examples(c12, syz):
    assert divisibility_full(c12.lattice, (1, -2)) == 2
    assert divisibility_full(syz.lattice, (1, 0, 0)) == 2
    assert divisibility_full(syz.lattice, (1, 1, 1)) == 1
    with pytest.raises(LatticeError):
        divisibility_full(syz.lattice, (0, 0, 0))


@given(st.tuples(st.integers(-9, 9), st.integers(-9, 9), st.integers(-9, 9)).filter(any),
       st.integers(1, 3))
def test_divisibility_scales(syz, v, k):
    L = syz.lattice
    d = divisibility_full(L, v)
    plain = 0
    for e in L.basis():
        plain = gcd(plain, L.q(v, e))
    assert plain % d == 0
    assert divisibility_full(L, tuple(k * x for x in v)) == k * d
