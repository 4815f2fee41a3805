"""Birational automorphisms seen in NS(F): the Torelli-type criterion,
involutions, orbit reduction and relations among the involutions."""
from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from ._linalg import (
    as_matrix,
    from_columns,
    identity,
    inverse,
    is_integral,
    matmul,
    matvec,
    neg,
    to_int,
    vectors_of_norm,
)
from .isometry import GeneratorTable, Isometry, is_isometry, preserves_positive_cone, word_eval
from .lattice import (
    GramLattice,
    action_orders,
    disc_action,
    discriminant_group,
    integer_kernel,
    is_plus_minus_identity,
    subgroup_order,
)

ROUND_POS = "RoundPos"
PEX_BOUNDED = "PexBounded"


class NoSolution(ValueError):
    pass


class NotUnique(ValueError):
    pass


class NonTermination(RuntimeError):
    pass


@dataclass(frozen=True)
class BirCriterionConfig:
    """Glue generators of the index-two subgroup and how Mov is bounded."""

    glue_gens: tuple
    mov_mode: str = ROUND_POS
    witness: tuple | None = None

    def validate(self, L: GramLattice):
        if self.mov_mode not in (ROUND_POS, PEX_BOUNDED):
            raise ValueError(f"unknown mov mode {self.mov_mode}")
        total = discriminant_group(L).order
        if 2 * subgroup_order(L, self.glue_gens) != total:
            raise ValueError("glue generators do not span an index-two subgroup")


def bir_criterion(L: GramLattice, config: BirCriterionConfig, phi) -> bool:
    """Does the isometry come from a birational automorphism?

    It must act as +-1 on the glue subgroup and preserve the movable cone;
    with prime exceptional walls present, one interior witness decides the
    latter because Mov is a fundamental domain for the -2 reflections.
    """
    from .chambers import mov_membership

    M = phi.matrix if isinstance(phi, Isometry) else as_matrix(phi)
    action = disc_action(L, M, config.glue_gens)
    if not is_plus_minus_identity(action, action_orders(config.glue_gens)):
        return False
    if not preserves_positive_cone(L, M):
        return False
    if config.mov_mode == PEX_BOUNDED:
        witness = config.witness or L.ample
        return mov_membership(L, matvec(M, witness))
    return True


def _complement_isometries(gram) -> list:
    """All isometries of a negative-definite Gram matrix."""
    k = len(gram)
    P = neg(gram)
    cands = {i: list(vectors_of_norm(P, P[i][i])) for i in range(k)}
    out = []

    def rec(cols):
        i = len(cols)
        if i == k:
            out.append(from_columns(cols))
            return
        for v in cands[i]:
            if all(sum(cols[j][a] * gram[a][b] * v[b] for a in range(k) for b in range(k)) == gram[j][i]
                   for j in range(i)):
                rec(cols + [v])

    rec([])
    return out


def solve_involution(L: GramLattice, config: BirCriterionConfig, fixed_vector,
                     nef_chamber=None) -> Isometry:
    """The unique birational involution fixing ``fixed_vector`` and moving Nef(F).

    Candidates fix f and act on the definite lattice f-perp by one of its
    finitely many isometries; they are extended to NS(F) through the
    finite-index sublattice <f> + f-perp and kept when integral.
    """
    from .chambers import carve_chamber, transform_chamber

    f = tuple(fixed_vector)
    if L.square(f) <= 0:
        raise ValueError("fixed vector must have positive square")
    nef = nef_chamber or carve_chamber(L, L.ample)
    K = integer_kernel((tuple(L.q(f, e) for e in L.basis()),))
    restricted = tuple(tuple(L.q(a, b) for b in K) for a in K)
    B = from_columns([f] + list(K))
    B_inv = inverse(B)
    n = L.rank
    found = []
    for A in _complement_isometries(restricted):
        block = [[int(i == 0 and j == 0) for j in range(n)] for i in range(n)]
        for i in range(1, n):
            for j in range(1, n):
                block[i][j] = A[i - 1][j - 1]
        M = matmul(matmul(B, as_matrix(block)), B_inv)
        if not is_integral(M):
            continue
        M = to_int(M)
        if not is_isometry(L, M) or matmul(M, M) != identity(n):
            continue
        if not preserves_positive_cone(L, M):
            continue
        if transform_chamber(L, nef, M) == nef:
            continue
        if bir_criterion(L, config, M):
            found.append(M)
    if not found:
        raise NoSolution(f"no birational involution fixes {f}")
    if len(found) > 1:
        raise NotUnique(f"{len(found)} involutions fix {f}")
    return Isometry(found[0])


@dataclass(frozen=True)
class OrbitReduction:
    representative: tuple
    word: tuple
    sign: int


def orbit_reduce(T: GeneratorTable, v, target_square: int | None = None,
                 max_steps: int = 10_000) -> OrbitReduction:
    """Greedily shrink |first coordinate| with the generators of T.

    word_eval(T, word) applied to v gives sign * representative; the
    representative has non-negative first coordinate (lexicographically
    positive when that is zero).
    """
    L = T.lattice
    v = tuple(v)
    if target_square is not None and L.square(v) != target_square:
        raise ValueError(f"{v} does not have square {target_square}")
    names = sorted(T)
    applied = []
    cur = v
    for _ in range(max_steps):
        best = None
        for name in names:
            img = matvec(T[name], cur)
            if abs(img[0]) < abs(cur[0]) and (best is None or abs(img[0]) < abs(best[1][0])):
                best = (name, img)
        if best is None:
            break
        applied.append(best[0])
        cur = best[1]
    else:
        raise NonTermination(f"reduction of {v} did not stop")
    sign = 1
    if cur[0] < 0 or (cur[0] == 0 and cur < tuple(-x for x in cur)):
        sign = -1
    rep = tuple(sign * x for x in cur)
    return OrbitReduction(rep, tuple(reversed(applied)), sign)


def vectors_with_square(L: GramLattice, square: int, bound: int):
    """Vectors (a, u) with q = square, 0 <= a <= bound, one of each +-pair."""
    from .walls import shell, split_form

    d, N = split_form(L)
    for a in range(0, bound + 1):
        for u in shell(neg(N), d * a * a - square):
            v = (a,) + tuple(u)
            if a == 0 and v < tuple(-x for x in v):
                continue
            if any(v):
                yield v


@dataclass
class OrbitReport:
    kind: str
    bound: int
    orbits: dict  # representative -> number of vectors
    total: int

    @property
    def count(self) -> int:
        return len(self.orbits)


def orbit_count(T: GeneratorTable, kind_or_square, coefficient_bound: int,
                movable_only: bool = False) -> OrbitReport:
    """Partition walls of a kind (or vectors of a fixed square) by reduction representative.

    With ``movable_only`` only walls whose hyperplane meets the movable cone
    are kept (the ones that actually bound chambers of marked models).
    """
    from .chambers import wall_meets_movable
    from .walls import FLOP_SQUARE, PEX_SQUARE, Undecided, WallKind, classify_wall

    if coefficient_bound < 1:
        raise ValueError("bound must be positive")
    L = T.lattice
    if kind_or_square in ("flop", "Flop", WallKind.FLOP):
        square, kind, label = FLOP_SQUARE, WallKind.FLOP, "flop"
    elif kind_or_square in ("pex", "Pex", WallKind.PEX):
        square, kind, label = PEX_SQUARE, WallKind.PEX, "pex"
    else:
        square, kind, label = int(kind_or_square), None, f"square{kind_or_square}"
    orbits: dict = defaultdict(int)
    total = 0
    for v in vectors_with_square(L, square, coefficient_bound):
        if square > 0 and v[0] <= 0:
            continue
        if kind is not None and classify_wall(L, v) is not kind:
            continue
        if movable_only and square < 0:
            meets = wall_meets_movable(L, v)
            if meets is None:
                raise Undecided(f"could not place {v} relative to the movable cone")
            if not meets:
                continue
        orbits[orbit_reduce(T, v).representative] += 1
        total += 1
    return OrbitReport(label, coefficient_bound, dict(sorted(orbits.items())), total)


def reduced_words(names: Sequence[str], length: int):
    """Words with no letter repeated twice in a row (involution generators)."""
    def rec(prefix):
        if len(prefix) == length:
            yield tuple(prefix)
            return
        for s in names:
            if not prefix or prefix[-1] != s:
                yield from rec(prefix + [s])
    yield from rec([])


def words_mapping(T: GeneratorTable, src, dst, length: int, allow_sign: bool = True) -> list:
    """All reduced words of exactly ``length`` sending src to dst (or -dst)."""
    names = sorted(T)
    src, dst = tuple(src), tuple(dst)
    targets = {dst, tuple(-x for x in dst)} if allow_sign else {dst}
    out = []
    for w in reduced_words(names, length):
        if matvec(word_eval(T, w).matrix, src) in targets:
            out.append(w)
    return out


def _free_reduce(word):
    out = []
    for s in word:
        if out and out[-1] == s:
            out.pop()
        else:
            out.append(s)
    while len(out) > 1 and out[0] == out[-1]:
        out = out[1:-1]
    return tuple(out)


def canonical_relator(word) -> tuple:
    """Smallest rotation of the word or its reverse (inverse, for involutions)."""
    w = _free_reduce(word)
    if not w:
        return ()
    variants = []
    for base in (w, tuple(reversed(w))):
        for i in range(len(base)):
            variants.append(base[i:] + base[:i])
    return min(variants)


def find_relations(T: GeneratorTable, max_length: int) -> list[tuple]:
    """Cyclically reduced relators of length <= max_length among involutions.

    Words of length up to ceil(max_length / 2) are grouped by their matrix;
    two different words with the same matrix give the relator u v^-1.
    Results are relations up to the length bound, not a presentation.
    """
    names = sorted(T)
    n = T.lattice.rank
    for s in names:
        if matmul(T[s], T[s]) != identity(n):
            raise ValueError(f"generator {s} is not an involution")
    half = (max_length + 1) // 2
    by_matrix: dict = defaultdict(list)
    for length in range(half + 1):
        for w in reduced_words(names, length):
            by_matrix[word_eval(T, w).matrix].append(w)
    found = set()
    for words in by_matrix.values():
        for u, v in itertools.combinations(words, 2):
            rel = canonical_relator(u + tuple(reversed(v)))
            if rel and len(rel) <= max_length:
                found.add(rel)
    return sorted(found, key=lambda r: (len(r), r))


def nef_stabilizer(L: GramLattice, config: BirCriterionConfig, chamber) -> list[Isometry]:
    """Birational isometries mapping the chamber to itself."""
    from .chambers import chamber_isometries

    return chamber_isometries(L, chamber, chamber, lambda M: bir_criterion(L, config, M))


def factor_isometry(T: GeneratorTable, phi, base_point=None):
    """Write phi = word * residual by reducing phi(base point) with T.

    Returns (word, residual matrix); the residual fixes the base point's
    orbit representative when the reduction lands back on it.
    """
    L = T.lattice
    M = phi.matrix if isinstance(phi, Isometry) else as_matrix(phi)
    x = base_point or L.ample
    red = orbit_reduce(T, matvec(M, x))
    W = word_eval(T, red.word).matrix
    residual = matmul(W, M)
    if red.sign < 0:
        residual = neg(residual)
    word_inv = tuple(reversed(red.word))
    return word_inv, residual, red.representative
