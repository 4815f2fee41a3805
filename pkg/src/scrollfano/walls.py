"""Wall divisors: classification, enumeration near a cone, representability.

The lattices handled here have the polarization as first basis vector,
orthogonal to the rest, so a vector splits as (a, u) with
q = d a^2 + N(u), d = q(g, g) > 0 and N negative definite.
"""
from __future__ import annotations

import enum
import functools
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from ._linalg import floor_sqrt, is_positive_definite, matvec, neg, primitive, transpose, vectors_of_norm
from .lattice import GramLattice, LatticeError, divisibility_full, integer_kernel


class WallKind(enum.Enum):
    PEX = "Pex"
    FLOP = "Flop"
    NOT_WALL = "NotWall"


PEX_SQUARE = -2
FLOP_SQUARE = -10


class RegionError(ValueError):
    """The region is not strictly inside the positive cone."""


class Undecided(RuntimeError):
    pass


@dataclass(frozen=True, order=True)
class WallDivisor:
    vector: tuple
    kind: WallKind

    def __repr__(self):
        return f"WallDivisor({self.vector}, {self.kind.value})"


@dataclass(frozen=True)
class Represented:
    vector: tuple


@dataclass(frozen=True)
class Obstructed:
    modulus: int


def split_form(L: GramLattice):
    """(d, N): square of the polarization and the Gram block of its complement."""
    G = L.gram
    if tuple(L.ample) != tuple(int(i == 0) for i in range(L.rank)):
        raise LatticeError("expected the polarization to be the first basis vector")
    if any(G[0][j] for j in range(1, L.rank)):
        raise LatticeError("expected the polarization orthogonal to the other basis vectors")
    N = tuple(tuple(G[i][j] for j in range(1, L.rank)) for i in range(1, L.rank))
    return G[0][0], N


def normalize(L: GramLattice, v) -> tuple:
    """Primitive representative of +-v with q(v, ample) >= 0, ties lexicographically positive."""
    v = primitive(v)
    s = L.q(v, L.ample)
    if s < 0 or (s == 0 and v < tuple(-x for x in v)):
        v = tuple(-x for x in v)
    return v


def classify_wall(L: GramLattice, v) -> WallKind:
    if not any(v):
        raise ValueError("zero vector")
    s = L.square(v)
    if s == PEX_SQUARE:
        return WallKind.PEX
    if s == FLOP_SQUARE and divisibility_full(L, v) == 2:
        return WallKind.FLOP
    return WallKind.NOT_WALL


def make_wall(L: GramLattice, v) -> WallDivisor:
    v = normalize(L, v)
    kind = classify_wall(L, v)
    if kind is WallKind.NOT_WALL:
        raise ValueError(f"{v} is not a wall divisor")
    return WallDivisor(v, kind)


def alpha_from_rho(L: GramLattice, rho) -> tuple:
    """Rank two: the primitive class spanning rho-perp, with positive ample pairing."""
    if L.rank != 2:
        raise LatticeError("alpha_from_rho is a rank-two helper")
    row = (tuple(L.q(rho, e) for e in L.basis()),)
    (alpha,) = integer_kernel(row)
    alpha = primitive(alpha)
    return alpha if L.q(alpha, L.ample) > 0 else tuple(-x for x in alpha)


@functools.lru_cache(maxsize=4096)
def shell(form: tuple, norm: int) -> tuple:
    """Cached list of integer vectors u with u^T form u == norm (form positive definite)."""
    return tuple(vectors_of_norm(form, norm))


def _kinds(kind) -> tuple:
    if kind is None or kind == "all":
        return (WallKind.PEX, WallKind.FLOP)
    if isinstance(kind, str):
        kind = WallKind(kind)
    return (kind,)


def slice_square(L: GramLattice, x) -> Fraction:
    """q at the point where the ray through x meets the level q(g, .) = q(g, g)."""
    d = L.square(L.ample)
    t = Fraction(L.q(x, L.ample))
    if t <= 0:
        raise RegionError(f"{tuple(x)} does not pair positively with the polarization")
    return Fraction(L.square(x)) * d * d / (t * t)


def a_bound(L: GramLattice, rays: Sequence, square: int) -> int:
    """Largest |a| for which a wall of the given square can meet cone(rays).

    On the slice q(g, .) = d the square q is concave, so its minimum Q over
    the region is attained at a ray. Cauchy-Schwarz in the negative-definite
    complement turns q(v, x) = 0 into a^2 <= |s| (d - Q) / (d Q).
    """
    d = L.square(L.ample)
    qmin = min(slice_square(L, r) for r in rays)
    if qmin <= 0:
        raise RegionError("region reaches the boundary of the positive cone")
    return floor_sqrt(Fraction(abs(square)) * (d - qmin) / (d * qmin))


def enumerate_walls_in_region(L: GramLattice, region, kind=None) -> list[WallDivisor]:
    """All wall divisors whose hyperplane meets the closed cone spanned by ``region``.

    ``region`` is a sequence of rays or anything with a ``rays`` attribute.
    """
    rays = [tuple(r) for r in getattr(region, "rays", region)]
    if not rays:
        return []
    d, N = split_form(L)
    negN = neg(N)
    out = set()
    for k in _kinds(kind):
        s = PEX_SQUARE if k is WallKind.PEX else FLOP_SQUARE
        amax = a_bound(L, rays, s)
        for a in range(0, amax + 1):
            for u in shell(negN, d * a * a - s):
                v = (a,) + tuple(u)
                if a == 0 and v < tuple(-x for x in v):
                    continue
                vals = [L.q(v, r) for r in rays]
                if min(vals) > 0 or max(vals) < 0:
                    continue
                if classify_wall(L, v) is k:
                    out.add(WallDivisor(normalize(L, v), k))
    return sorted(out)


def walls_crossing_interior(L: GramLattice, region, kind=None) -> list[WallDivisor]:
    """Walls taking strictly both signs on the rays of ``region``."""
    rays = [tuple(r) for r in getattr(region, "rays", region)]
    out = []
    for w in enumerate_walls_in_region(L, rays, kind):
        vals = [L.q(w.vector, r) for r in rays]
        if min(vals) < 0 < max(vals):
            out.append(w)
    return out


# --- representability -------------------------------------------------------

SIEVE_MODULI = (8, 9, 16, 64)


def _residues(L: GramLattice, M: int) -> set:
    """All values of q(x, x) mod M for x in (Z/M)^n."""
    grids = np.meshgrid(*([np.arange(M, dtype=np.int64)] * L.rank), indexing="ij")
    xs = [g.ravel() for g in grids]
    total = np.zeros_like(xs[0])
    for i in range(L.rank):
        for j in range(L.rank):
            if L.gram[i][j]:
                total = (total + L.gram[i][j] * xs[i] % M * xs[j]) % M
    return set(int(t) for t in np.unique(total))


def residue_obstructed(L: GramLattice, n: int, M: int) -> bool:
    """True iff q(x, x) = n has no solution mod M (exhaustive over (Z/M)^n)."""
    return (n % M) not in _residues(L, M)


def _shell(rank: int, B: int):
    for v in itertools.product(range(-B, B + 1), repeat=rank):
        if max(abs(x) for x in v) == B:
            yield v


def represents(L: GramLattice, n: int, box: int = 60):
    """Decide whether q represents n < 0: a witness or a modular obstruction.

    Witnesses come from the smallest box shell containing one; among those
    the wall-normalized, lexicographically largest vector is returned.
    """
    if n >= 0:
        raise ValueError("only negative targets are supported")
    for M in SIEVE_MODULI:
        if residue_obstructed(L, n, M):
            return Obstructed(M)
    for B in range(1, box + 1):
        hits = {normalize(L, v) for v in _shell(L.rank, B) if L.square(v) == n}
        if hits:
            return Represented(max(hits))
    raise Undecided(box)


# --- obstruction sweep ------------------------------------------------------

def negdef_obstruction_sweep(L: GramLattice, orthogonal_to, squares: Iterable[int],
                             required_div: int) -> list[tuple]:
    """Every v with q(v, u) = 0, q(v, v) in ``squares`` and full divisibility ``required_div``.

    The set is finite because u-perp is negative definite; one of each
    +-pair is returned, normalized lexicographically positive.
    """
    row = (tuple(L.q(orthogonal_to, e) for e in L.basis()),)
    K = integer_kernel(row)
    if not K:
        return []
    Kcols = transpose(tuple(K))
    restricted = tuple(tuple(L.q(a, b) for b in K) for a in K)
    if not is_positive_definite(neg(restricted)):
        raise LatticeError("orthogonal complement is not negative definite")
    found = set()
    for s in sorted(set(squares)):
        if s >= 0:
            continue
        for c in vectors_of_norm(neg(restricted), -s):
            v = matvec(Kcols, c)
            if v < tuple(-x for x in v):
                continue
            if divisibility_full(L, v) == required_div:
                found.add(v)
    return sorted(found)
