import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from scrollfano.lattice import LatticeError, divisibility_full
from scrollfano.walls import (
    Obstructed,
    RegionError,
    Represented,
    WallKind,
    a_bound,
    alpha_from_rho,
    classify_wall,
    enumerate_walls_in_region,
    make_wall,
    negdef_obstruction_sweep,
    normalize,
    represents,
    residue_obstructed,
    walls_crossing_interior,
)

SYZ_NEF_RAYS = [(4, 3, 3), (4, -3, 3), (4, -3, -3), (4, 3, -3)]
SYZ_BOX = [(5, 4, 4), (5, -4, 4), (5, -4, -4), (5, 4, -4)]


def _brute_force(L, rays, bound):
    """Walls meeting cone(rays), found by scanning the coefficient box."""
    G = np.array(L.gram, dtype=np.int64)
    r = np.arange(-bound, bound + 1)
    grid = np.array(np.meshgrid(*([r] * L.rank), indexing="ij")).reshape(L.rank, -1).T
    sq = np.einsum("ij,jk,ik->i", grid, G, grid)
    out = set()
    for v in grid[(sq == -2) | (sq == -10)]:
        v = tuple(int(x) for x in v)
        vals = [L.q(v, x) for x in rays]
        if min(vals) > 0 or max(vals) < 0:
            continue
        kind = classify_wall(L, v)
        if kind is not WallKind.NOT_WALL:
            out.add((normalize(L, v), kind))
    return out


@pytest.mark.parametrize("name, rays", [
    ("syz", SYZ_BOX),
    ("syz", [(4, -3, 3), (4, -3, -3), (12, -10, 0)]),
    ("nonsyz", [(2, -2, -1), (2, -1, -2), (2, -1, 1), (2, 1, -1), (2, 1, 2), (2, 2, 1)]),
    ("nonsyz", [(7, 2, 3), (6, -3, 1), (6, 1, -4)]),
    ("c12", [(4, -3), (4, 3)]),
    ("c12", [(10, 9), (3, 1)]),
])
def test_enumeration_matches_brute_force(scenarios, name, rays):
    L = scenarios[name].lattice
    got = {(w.vector, w.kind) for w in enumerate_walls_in_region(L, rays)}
    # the a-bound must keep every wall inside the scanned box
    assert max(a_bound(L, rays, -10), a_bound(L, rays, -2)) <= 30
    assert got == _brute_force(L, rays, 30)


def test_syz_walls_near_nef(syz):
    L = syz.lattice
    flops = {w.vector for w in enumerate_walls_in_region(L, SYZ_BOX, "Flop")}
    assert flops == {(1, 2, 0), (1, -2, 0), (1, 0, 2), (1, 0, -2)}
    pex = {w.vector for w in enumerate_walls_in_region(L, SYZ_BOX, WallKind.PEX)}
    assert pex == {(1, 1, 1), (1, 1, -1), (1, -1, 1), (1, -1, -1)}
    # the pex walls touch Nef(F) only at its rays
    for v in pex:
        assert sum(L.q(v, r) == 0 for r in SYZ_NEF_RAYS) == 1
    assert not walls_crossing_interior(L, SYZ_NEF_RAYS)


def test_nonsyz_walls_near_nef(nonsyz):
    L = nonsyz.lattice
    rays = [(5, -6, -3), (5, -3, -6), (5, -3, 3), (5, 3, -3), (5, 6, 3), (5, 3, 6)]
    flops = {w.vector for w in enumerate_walls_in_region(L, rays, "Flop")}
    assert flops == {(1, 2, 0), (1, 2, 2), (1, 0, 2), (1, -2, 0), (1, -2, -2), (1, 0, -2)}


def test_region_outside_positive_cone(syz):
    with pytest.raises(RegionError):
        enumerate_walls_in_region(syz.lattice, [(1, 3, 0), (1, 0, 0), (1, 0, 1)])


def test_classify_examples(syz, nonsyz):
    assert classify_wall(syz.lattice, (3, -4, 0)) is WallKind.FLOP
    assert classify_wall(syz.lattice, (1, -1, 1)) is WallKind.PEX
    assert classify_wall(nonsyz.lattice, (0, 1, 0)) is WallKind.NOT_WALL
    with pytest.raises(ValueError):
        make_wall(nonsyz.lattice, (0, 1, 0))


@given(st.tuples(st.integers(-25, 25), st.integers(-25, 25), st.integers(-25, 25)).filter(any))
def test_wall_invariants(scenarios, v):
    for name in ("syz", "nonsyz"):
        L = scenarios[name].lattice
        kind = classify_wall(L, v)
        if kind is WallKind.NOT_WALL:
            continue
        w = make_wall(L, v)
        assert L.q(w.vector, L.ample) >= 0
        if kind is WallKind.FLOP:
            assert L.square(w.vector) == -10 and divisibility_full(L, w.vector) == 2
        else:
            assert L.square(w.vector) == -2


@pytest.mark.parametrize("name", ["syz", "nonsyz"])
def test_wall_sets_stable_under_sign_symmetries(scenarios, name):
    L = scenarios[name].lattice
    rays = [(9, 7, 2), (9, -7, 2), (9, 0, -7)]
    walls = {w.vector for w in enumerate_walls_in_region(L, rays)}
    from scrollfano.isometry import is_isometry
    for signs in itertools.product((1, -1), repeat=2):
        M = ((1, 0, 0), (0, signs[0], 0), (0, 0, signs[1]))
        if not is_isometry(L, M):
            continue
        image_rays = [tuple(s * x for s, x in zip((1,) + signs, r)) for r in rays]
        image = {w.vector for w in enumerate_walls_in_region(L, image_rays)}
        assert image == {normalize(L, tuple(s * x for s, x in zip((1,) + signs, v))) for v in walls}


def test_representability(c12, syz, nonsyz):
    r = represents(c12.lattice, -2)
    assert isinstance(r, Obstructed)
    assert residue_obstructed(c12.lattice, -2, r.modulus)
    w = represents(syz.lattice, -2)
    assert isinstance(w, Represented) and syz.lattice.square(w.vector) == -2
    r = represents(nonsyz.lattice, -2)
    assert isinstance(r, Obstructed)
    assert residue_obstructed(nonsyz.lattice, -2, r.modulus)
    for sc in (c12, syz, nonsyz):
        w = represents(sc.lattice, -10)
        assert isinstance(w, Represented) and sc.lattice.square(w.vector) == -10


def test_obstruction_certificate_by_hand(c12):
    # 6a^2 - 4b^2 mod 9 never hits -2 = 7
    values = {(6 * a * a - 4 * b * b) % 9 for a in range(9) for b in range(9)}
    assert 7 not in values
    assert represents(c12.lattice, -2) == Obstructed(9)


def test_represents_rejects_nonnegative(syz):
    with pytest.raises(ValueError):
        represents(syz.lattice, 4)


def test_obstruction_sweeps_empty(scenarios):
    for sc in scenarios.values():
        assert negdef_obstruction_sweep(sc.lattice, sc.lattice.ample, {-2, -6}, 2) == []


def test_obstruction_sweep_finds_classes(nonsyz):
    # lambda_1 has square -4 and divisibility 2 in the nonsyz overlattice
    found = negdef_obstruction_sweep(nonsyz.lattice, (1, 0, 0), {-4}, 2)
    assert all(nonsyz.lattice.square(v) == -4 for v in found)
    assert all(divisibility_full(nonsyz.lattice, v) == 2 for v in found)


def test_sweep_needs_definite_complement(syz):
    with pytest.raises(LatticeError):
        negdef_obstruction_sweep(syz.lattice, (0, 1, 0), {-2}, 2)


def test_alpha_from_rho(c12):
    assert alpha_from_rho(c12.lattice, (1, -2)) == (4, -3)
    assert alpha_from_rho(c12.lattice, (1, 2)) == (4, 3)
