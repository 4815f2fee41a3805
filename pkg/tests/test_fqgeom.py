import itertools

import pytest
from hypothesis import given, settings, strategies as st

from scrollfano.fqgeom import (
    FpPoly,
    NotAScroll,
    NotOnVariety,
    ScrollSpec,
    check_example,
    jacobian_rank_at,
    load_example,
    minors_ideal,
    projective_point,
    projective_scan,
    rank_mod_p,
    scan,
    scroll_equations,
    singular_point_scan,
    verify_containment,
)


def brute_points(polys, n, p):
    out = []
    for x in itertools.product(range(p), repeat=n):
        if any(x) and projective_point(x, p) == x and all(f(x) == 0 for f in polys):
            out.append(x)
    return sorted(out)


def standard_scroll(p, n=6):
    x = [FpPoly.variable(i, p, n) for i in range(n)]
    return ScrollSpec(((x[0], x[1], x[2]), (x[2], x[3], x[4])), x[5])


def test_parse_and_arithmetic():
    f = FpPoly.parse("x0*x1 - 3*x2**2 + 30*x0**2", 29, 3)
    assert f(( 1, 2, 1)) == (2 - 3 + 30) % 29
    assert f.degree == 2 and f.is_homogeneous()
    g = f - f
    assert g.is_zero()
    assert f.derivative(2)((0, 0, 1)) == (-6) % 29
    assert not (f + FpPoly.parse("x0", 29, 3)).is_homogeneous()


def test_minors_of_standard_scroll():
    S = standard_scroll(29)
    m = minors_ideal(S)
    assert [str(f) for f in m] == [str(FpPoly.parse(s, 29, 6)) for s in
                                   ("x0*x3 - x1*x2", "x0*x4 - x2**2", "x1*x4 - x2*x3")]


def test_degenerate_matrix_is_not_a_scroll():
    z = FpPoly.from_dict(29, 6, {})
    x = [FpPoly.variable(i) for i in range(6)]
    with pytest.raises(NotAScroll):
        minors_ideal(ScrollSpec(((x[0], x[1], z), (x[0], x[1], z))))
    with pytest.raises(NotAScroll):
        ScrollSpec(((x[0], x[1]), (x[2], x[3])))
    with pytest.raises(NotAScroll):
        ScrollSpec(((x[0] * x[0], x[1], x[2]), (x[2], x[3], x[4])))


def test_row_scaling_keeps_the_scroll():
    p = 7
    S = standard_scroll(p)
    three = FpPoly.from_dict(p, 6, {(0,) * 6: 3})
    T = ScrollSpec((tuple(three * e for e in S.matrix[0]), S.matrix[1]), S.hyperplane)
    assert projective_scan(scroll_equations(S)) == projective_scan(scroll_equations(T))


def test_projective_line():
    x0 = FpPoly.variable(0, 5, 2)
    assert projective_scan([x0]) == [(0, 1)]
    assert len(projective_scan([], 2, 5)) == 6


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_scroll_point_count(p):
    # a smooth cubic scroll is P^1-bundle over P^1: (p + 1)^2 points
    pts = projective_scan(scroll_equations(standard_scroll(p)))
    assert len(pts) == (p + 1) ** 2
    assert pts == brute_points(scroll_equations(standard_scroll(p)), 6, p)


def test_minors_alone_give_a_cone():
    p = 5
    pts = projective_scan(minors_ideal(standard_scroll(p)))
    # the cone over the scroll with vertex (0,...,0,1)
    assert len(pts) == p * (p + 1) ** 2 + 1


def test_visited_counter():
    res = scan([FpPoly.parse("x0*x1 - x2**2", 3, 4)])
    assert res.visited == (3 ** 4 - 1) // 2


@settings(max_examples=15)
@given(st.sampled_from([3, 5, 7]), st.lists(st.integers(-20, 20), min_size=4, max_size=4))
def test_scan_matches_brute_force(p, coeffs):
    terms = {(2, 0, 0): coeffs[0], (1, 1, 0): coeffs[1], (0, 1, 1): coeffs[2], (0, 0, 2): coeffs[3]}
    f = FpPoly.from_dict(p, 3, terms)
    if f.is_zero():
        return
    assert projective_scan([f]) == brute_points([f], 3, p)


def test_threads_do_not_change_the_answer():
    p = 11
    eqs = scroll_equations(standard_scroll(p))
    assert projective_scan(eqs, workers=1) == projective_scan(eqs, workers=4)


def test_rank_and_jacobian():
    assert rank_mod_p([[1, 2], [2, 4]], 7) == 1
    assert rank_mod_p([[1, 2], [2, 4]], 2) == 1
    assert rank_mod_p([[2, 4], [4, 8]], 2) == 0
    eqs = scroll_equations(standard_scroll(29))
    assert jacobian_rank_at(eqs, (1, 1, 1, 1, 1, 0)) == 3  # codimension three in P^5
    with pytest.raises(NotOnVariety):
        jacobian_rank_at(eqs, (1, 0, 0, 0, 0, 1))


def test_jacobian_of_scroll_system_at_a_point():
    ex = load_example("syz")
    S = ex.scrolls["T1"]
    assert jacobian_rank_at(minors_ideal(S), (1, 1, 0, 0, 0, 0)) == 2
    assert jacobian_rank_at(scroll_equations(S), (1, 1, 0, 0, 0, 0)) == 3


def test_singular_scan_finds_a_node():
    p = 7
    f = FpPoly.parse("x0*x1 - x2**2", p, 3)
    assert singular_point_scan([f]) == []
    g = FpPoly.parse("x0*x1", p, 3)
    assert singular_point_scan([g]) == [(0, 0, 1)]


def test_containment_on_a_small_prime():
    p = 5
    S = standard_scroll(p)
    x = [FpPoly.variable(i, p, 6) for i in range(6)]
    cubic = minors_ideal(S)[0] * x[1] + S.hyperplane * x[5] * x[5]
    assert verify_containment(S, cubic).holds
    assert not verify_containment(S, x[0] * x[0] * x[0]).holds


@pytest.mark.parametrize("name", ["syz", "nonsyz"])
def test_listed_intersections_lie_on_everything(name):
    ex = load_example(name)
    for item in ex.intersections:
        a, b = item["pair"]
        eqs = scroll_equations(ex.scrolls[a]) + scroll_equations(ex.scrolls[b])
        for x in item["points"]:
            assert all(f(x) == 0 for f in eqs)
            assert ex.cubic(x) == 0
            assert jacobian_rank_at(eqs, x) == 5


def test_example_over_another_prime_is_report_only():
    ex = load_example("syz", prime=7)
    claims = check_example(ex)
    assert claims and all(c.passed is None for c in claims)
