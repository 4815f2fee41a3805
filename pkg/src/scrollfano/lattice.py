"""Integer lattices with a symmetric Gram form, and their discriminant groups.

Coordinates are always coefficients in the lattice basis, so the lattice
itself is Z^n and its dual is gram^{-1} Z^n inside Q^n.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, prod
from typing import Sequence

from ._linalg import (
    Matrix,
    as_matrix,
    bilinear,
    det,
    identity,
    matvec,
    signature,
    transpose,
)


class LatticeError(ValueError):
    pass


def _frac_vec(v) -> tuple:
    return tuple(Fraction(x) for x in v)


@dataclass(frozen=True)
class GramLattice:
    """A nondegenerate hyperbolic lattice with a polarization and glue data.

    ``glue_gens`` are rational vectors in the dual lattice spanning the
    subgroup of the discriminant group that glues to the transcendental
    part (for the Fano varieties here: g/3 together with the lambda_i/4 or
    lambda_1/2, lambda_1/3 + lambda_2/6).
    """

    gram: Matrix
    basis_labels: tuple = ()
    ample: tuple = ()
    glue_gens: tuple = ()
    name: str = ""

    def __post_init__(self):
        gram = as_matrix(self.gram)
        object.__setattr__(self, "gram", gram)
        n = len(gram)
        if any(len(row) != n for row in gram):
            raise LatticeError("gram matrix must be square")
        if gram != transpose(gram):
            raise LatticeError("gram matrix must be symmetric")
        if not self.basis_labels:
            object.__setattr__(self, "basis_labels", tuple(f"e{i}" for i in range(n)))
        else:
            object.__setattr__(self, "basis_labels", tuple(self.basis_labels))
        if len(self.basis_labels) != n:
            raise LatticeError("one label per basis vector")
        ample = tuple(self.ample) if self.ample else tuple(int(i == 0) for i in range(n))
        object.__setattr__(self, "ample", ample)
        object.__setattr__(self, "glue_gens", tuple(_frac_vec(w) for w in self.glue_gens))

        pos, negs, zero = signature(gram)
        if (pos, negs, zero) != (1, n - 1, 0):
            raise LatticeError(f"gram has signature {(pos, negs, zero)}, expected (1, {n - 1})")
        if self.q(ample, ample) <= 0:
            raise LatticeError("polarization must have positive square")
        for w in self.glue_gens:
            if len(w) != n:
                raise LatticeError("glue generator has wrong length")
            for i in range(n):
                e = tuple(int(i == j) for j in range(n))
                if Fraction(self.q(w, e)).denominator != 1:
                    raise LatticeError(f"glue generator {w} is not in the dual lattice")

    @property
    def rank(self) -> int:
        return len(self.gram)

    def q(self, v, w):
        return bilinear(self.gram, v, w)

    def square(self, v):
        return bilinear(self.gram, v, v)

    def basis(self) -> list[tuple]:
        return [tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank)]

    def with_glue(self, glue_gens) -> "GramLattice":
        return GramLattice(self.gram, self.basis_labels, self.ample, tuple(glue_gens), self.name)


@dataclass(frozen=True)
class IntersectionLattice:
    """Intersection form on the algebraic middle cohomology of a cubic fourfold."""

    gram: Matrix
    eta_index: int = 0
    labels: tuple = ()

    def __post_init__(self):
        gram = as_matrix(self.gram)
        object.__setattr__(self, "gram", gram)
        if gram != transpose(gram):
            raise LatticeError("intersection form must be symmetric")
        e = self.eta_index
        if gram[e][e] != 3:
            raise LatticeError("eta must have self-intersection 3")
        for i in range(len(gram)):
            if gram[e][i] != 3:
                raise LatticeError("every scroll class must meet eta in degree 3")


@dataclass(frozen=True)
class DiscriminantGroup:
    invariant_factors: tuple
    generator_lifts: tuple
    q_values: tuple = field(default=())

    @property
    def order(self) -> int:
        return prod(self.invariant_factors)

    def primary_parts(self) -> tuple:
        return primary_decomposition(self.invariant_factors)

    def is_isomorphic_to(self, factors: Sequence[int]) -> bool:
        return self.primary_parts() == primary_decomposition(factors)


def gram_eval(L: GramLattice, v, w):
    if len(v) != L.rank or len(w) != L.rank:
        raise LatticeError(f"vectors must have length {L.rank}")
    return L.q(v, w)


def abel_jacobi(A: IntersectionLattice, glue_gens=(), name: str = "") -> GramLattice:
    """Transport the intersection form on A(X) to the BBF form on NS(F).

    The basis (eta, T_1, ..., T_k) becomes (g, lambda_1, ..., lambda_k)
    with lambda_i the image of T_i - eta; q(g, g) = 6, g is orthogonal to
    the lambda_i, and q(lambda_i, lambda_j) = -(T_i - eta).(T_j - eta).
    """
    gram = A.gram
    e = A.eta_index
    others = [i for i in range(len(gram)) if i != e]

    def dot(i, j):
        return gram[i][j] - gram[i][e] - gram[e][j] + gram[e][e]

    for i in others:
        # T_i - eta is primitive: (T_i - eta).eta = 3 - 3
        if gram[i][e] - gram[e][e] != 0:
            raise LatticeError("T_i - eta must be primitive")
    k = len(others)
    out = [[0] * (k + 1) for _ in range(k + 1)]
    out[0][0] = 6
    for a, i in enumerate(others, start=1):
        for b, j in enumerate(others, start=1):
            out[a][b] = -dot(i, j)
    labels = ("g",) + tuple(f"λ{i}" for i in range(1, k + 1)) if k > 1 else ("g", "λ")
    return GramLattice(as_matrix(out), labels, tuple(int(i == 0) for i in range(k + 1)), glue_gens, name)


def smith_normal_form(M: Matrix) -> tuple[Matrix, Matrix, Matrix]:
    """Return (D, U, V) with U @ M @ V == D diagonal, d_i | d_{i+1}, U, V unimodular.

    Pivot rule: smallest absolute nonzero entry of the remaining block,
    ties broken row-major, so the transforms are reproducible.
    """
    a = [list(row) for row in M]
    m = len(a)
    n = len(a[0]) if m else 0
    U = [list(r) for r in identity(m)]
    V = [list(r) for r in identity(n)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, f):
        a[dst] = [x + f * y for x, y in zip(a[dst], a[src])]
        U[dst] = [x + f * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, f):
        for row in a:
            row[dst] += f * row[src]
        for row in V:
            row[dst] += f * row[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    if a[i][j] != 0 and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                return _finish_snf(a, U, V)
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            p = a[t][t]
            dirty = False
            for i in range(t + 1, m):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
                    dirty |= a[i][t] != 0
            for j in range(t + 1, n):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
                    dirty |= a[t][j] != 0
            if dirty:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % p), None)
            if bad is not None:
                add_row(t, bad[0], 1)
                continue
            if p < 0:
                a[t] = [-x for x in a[t]]
                U[t] = [-x for x in U[t]]
            break
    return _finish_snf(a, U, V)


def _finish_snf(a, U, V):
    return as_matrix(a), as_matrix(U), as_matrix(V)


def primary_decomposition(factors: Sequence[int]) -> tuple:
    """Sorted prime-power orders of the cyclic factors of a finite abelian group."""
    parts = []
    for f in factors:
        f = abs(f)
        p = 2
        while f > 1:
            if f % p == 0:
                q = 1
                while f % p == 0:
                    f //= p
                    q *= p
                parts.append(q)
            p += 1
    return tuple(sorted(parts))


def discriminant_group(L: GramLattice) -> DiscriminantGroup:
    if det(L.gram) == 0:
        raise LatticeError("degenerate gram matrix")
    D, U, V = smith_normal_form(L.gram)
    factors, lifts, qs = [], [], []
    for i in range(L.rank):
        d = D[i][i]
        if d == 1:
            continue
        w = reduce_mod_lattice(Fraction(V[r][i], d) for r in range(L.rank))
        factors.append(d)
        lifts.append(w)
        qs.append(Fraction(L.square(w)) % 2)
    return DiscriminantGroup(tuple(factors), tuple(lifts), tuple(qs))


def reduce_mod_lattice(w) -> tuple:
    """Representative of w + Z^n with every coordinate in (-1/2, 1/2]."""
    out = []
    for x in w:
        x = Fraction(x)
        x -= x.numerator // x.denominator
        out.append(x - 1 if x > Fraction(1, 2) else x)
    return tuple(out)


def element_order(w) -> int:
    """Order of a rational vector in Q^n / Z^n."""
    o = 1
    for x in w:
        den = Fraction(x).denominator
        o = o * den // gcd(o, den)
    return o


def subgroup_order(L: GramLattice, gens) -> int:
    """Order of the subgroup of Q^n / Z^n generated by ``gens``."""
    gens = [_frac_vec(w) for w in gens]
    if not gens:
        return 1
    N = 1
    for w in gens:
        N = N * element_order(w) // gcd(N, element_order(w))
    n = L.rank
    cols = [[N * int(i == j) for j in range(n)] for i in range(n)]
    cols += [[int(N * x) for x in w] for w in gens]
    D, _, _ = smith_normal_form(transpose(as_matrix(cols)))
    index = prod(D[i][i] for i in range(n))
    return N ** n // index


def _sym_residue(c: int, m: int) -> int:
    c %= m
    return c - m if c > m // 2 else c


def disc_action(L: GramLattice, phi: Matrix, subgroup_gens=None) -> tuple:
    """Matrix of the action of ``phi`` on the subgroup spanned by ``subgroup_gens``.

    Column j holds the coefficients of phi(w_j) in terms of the w_i,
    reduced mod the order of w_i to the symmetric range. The generators
    must span a direct sum of the cyclic groups they generate.
    """
    gens = [_frac_vec(w) for w in (L.glue_gens if subgroup_gens is None else subgroup_gens)]
    orders = [element_order(w) for w in gens]
    if prod(orders) != subgroup_order(L, gens):
        raise LatticeError("subgroup generators are not independent")
    cols = []
    for w in gens:
        image = matvec(phi, w)
        for coeffs in itertools.product(*(range(o) for o in orders)):
            diff = [image[r] - sum(c * g[r] for c, g in zip(coeffs, gens)) for r in range(L.rank)]
            if all(Fraction(x).denominator == 1 for x in diff):
                cols.append(coeffs)
                break
        else:
            raise LatticeError("isometry does not preserve the subgroup")
    k = len(gens)
    return tuple(tuple(_sym_residue(cols[j][i], orders[i]) for j in range(k)) for i in range(k))


def action_orders(gens) -> tuple:
    return tuple(element_order(_frac_vec(w)) for w in gens)


def is_plus_minus_identity(action: tuple, orders: Sequence[int]) -> bool:
    k = len(orders)
    for s in (1, -1):
        if all((action[i][j] - s * (i == j)) % orders[i] == 0 for i in range(k) for j in range(k)):
            return True
    return False


def divisibility_full(L: GramLattice, v) -> int:
    """Divisibility of v in the overlattice glued from NS and the glue generators."""
    if not any(v):
        raise LatticeError("divisibility of the zero vector is undefined")
    d = 0
    for e in L.basis():
        d = gcd(d, int(L.q(v, e)))
    for w in L.glue_gens:
        x = Fraction(L.q(v, w))
        if x.denominator != 1:
            raise LatticeError("glue generator pairs non-integrally with v")
        d = gcd(d, int(x))
    return d


def integer_kernel(rows: Matrix) -> list[tuple]:
    """A Z-basis of {x in Z^n : rows @ x == 0}."""
    D, U, V = smith_normal_form(rows)
    n = len(rows[0])
    r = sum(1 for i in range(min(len(rows), n)) if D[i][i] != 0)
    return [tuple(V[i][j] for i in range(n)) for j in range(r, n)]
