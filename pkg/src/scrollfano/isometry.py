"""Isometries of a GramLattice and words in named generators.

Matrices act on column vectors: column j of M is the image of basis vector j.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from ._linalg import Matrix, as_matrix, det, identity, inverse, matmul, matvec, neg, transpose
from .lattice import GramLattice


class NonIntegralReflection(ValueError):
    pass


class UnknownGenerator(KeyError):
    pass


@dataclass(frozen=True)
class Isometry:
    matrix: Matrix
    word: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "matrix", as_matrix(self.matrix))
        if self.word is not None:
            object.__setattr__(self, "word", tuple(self.word))

    def __call__(self, v):
        return matvec(self.matrix, v)

    def compose(self, other: "Isometry") -> "Isometry":
        """self after other."""
        word = self.word + other.word if self.word is not None and other.word is not None else None
        return Isometry(matmul(self.matrix, other.matrix), word)


def is_isometry(L: GramLattice, M) -> bool:
    M = as_matrix(M)
    n = L.rank
    if len(M) != n or any(len(r) != n for r in M):
        return False
    if any(Fraction(x).denominator != 1 for r in M for x in r):
        return False
    return matmul(matmul(transpose(M), L.gram), M) == L.gram and det(M) in (1, -1)


def inverse_isometry(L: GramLattice, M: Matrix) -> Matrix:
    """M^{-1} = G^{-1} M^T G for an isometry; returned with integer entries."""
    inv = matmul(matmul(inverse(L.gram), transpose(M)), L.gram)
    return tuple(tuple(int(x) for x in row) for row in inv)


def reflection_in(L: GramLattice, rho) -> Isometry:
    """The reflection x -> x - 2 q(x, rho) / q(rho, rho) rho."""
    s = L.square(rho)
    if s not in (-2, -10):
        raise ValueError(f"reflections are only taken in classes of square -2 or -10, got {s}")
    cols = []
    for e in L.basis():
        f = Fraction(2 * L.q(e, rho), s)
        img = tuple(x - f * r for x, r in zip(e, rho))
        if any(Fraction(x).denominator != 1 for x in img):
            raise NonIntegralReflection(f"reflection in {tuple(rho)} is not integral")
        cols.append(tuple(int(x) for x in img))
    return Isometry(transpose(tuple(cols)))


def preserves_positive_cone(L: GramLattice, phi) -> bool:
    M = phi.matrix if isinstance(phi, Isometry) else phi
    return L.q(matvec(M, L.ample), L.ample) > 0


def parse_word(word) -> list[str]:
    """Expand a word into single symbols; accepts "R4^3" style powers and a
    single space-separated string."""
    if isinstance(word, str):
        word = word.split()
    out = []
    for tok in word:
        if isinstance(tok, (tuple, list)):
            name, k = tok
        elif "^" in tok:
            name, k = tok.split("^")
        else:
            name, k = tok, 1
        out.extend([name] * int(k))
    return out


class GeneratorTable(Mapping):
    """Named isometries of one lattice, validated on construction."""

    def __init__(self, lattice: GramLattice, generators: Mapping[str, Sequence]):
        self.lattice = lattice
        self._gens = {}
        for name, m in generators.items():
            m = as_matrix(m)
            if not is_isometry(lattice, m):
                raise ValueError(f"generator {name} is not an isometry")
            self._gens[name] = m

    def __getitem__(self, name):
        try:
            return self._gens[name]
        except KeyError:
            raise UnknownGenerator(name) from None

    def __iter__(self):
        return iter(self._gens)

    def __len__(self):
        return len(self._gens)

    def subtable(self, names: Iterable[str]) -> "GeneratorTable":
        return GeneratorTable(self.lattice, {n: self[n] for n in names})

    def extended(self, extra: Mapping[str, Sequence]) -> "GeneratorTable":
        return GeneratorTable(self.lattice, {**self._gens, **extra})


def word_eval(T: GeneratorTable, word) -> Isometry:
    """Word (a, b, c) is the map a o b o c on column vectors."""
    syms = parse_word(word)
    M = identity(T.lattice.rank)
    for s in syms:
        M = matmul(M, T[s])
    return Isometry(M, tuple(syms))


def matrix_order(M: Matrix, limit: int = 50) -> int | None:
    """Smallest k >= 1 with M^k = Id, or None if there is none up to ``limit``."""
    n = len(M)
    P = M
    for k in range(1, limit + 1):
        if P == identity(n):
            return k
        P = matmul(P, M)
    return None


def group_closure(gens: Iterable[Matrix], limit: int = 10_000) -> set:
    """Finite group generated by ``gens``; raises if it exceeds ``limit`` elements."""
    gens = [as_matrix(g) for g in gens]
    n = len(gens[0])
    seen = {identity(n)}
    queue = deque(seen)
    while queue:
        m = queue.popleft()
        for g in gens:
            p = matmul(m, g)
            if p not in seen:
                seen.add(p)
                if len(seen) > limit:
                    raise ValueError("group closure exceeds limit")
                queue.append(p)
    return seen


def bounded_isometry_search(L: GramLattice, entry_bound: int) -> list[Isometry]:
    """All isometries with every entry bounded by ``entry_bound`` in absolute value.

    Columns are chosen one at a time; column i must already have the right
    square and the right pairings with the earlier columns. Rank 3 at
    bound b scans (2b+1)^3 vectors once, then backtracks over the short
    candidate lists, so bounds up to about 10 stay well under a second.
    """
    if entry_bound < 1:
        raise ValueError("entry_bound must be at least 1")
    n = L.rank
    G = L.gram
    rng = range(-entry_bound, entry_bound + 1)
    by_square: dict = {}
    for v in itertools.product(rng, repeat=n):
        by_square.setdefault(L.square(v), []).append(v)
    found = []

    def rec(cols):
        i = len(cols)
        if i == n:
            M = transpose(tuple(cols))
            if det(M) in (1, -1):
                found.append(M)
            return
        for v in by_square.get(G[i][i], ()):
            if all(L.q(cols[j], v) == G[j][i] for j in range(i)):
                rec(cols + [v])

    rec([])
    found.sort()
    return [Isometry(M) for M in found]


def word_search(T: GeneratorTable, target: Matrix, max_length: int, allow_sign: bool = True):
    """Shortest word in T equal to ``target`` (or its negative), by BFS."""
    n = T.lattice.rank
    start = identity(n)
    targets = {as_matrix(target)}
    if allow_sign:
        targets.add(neg(as_matrix(target)))
    seen = {start: ()}
    frontier = [start]
    if start in targets:
        return ()
    names = sorted(T)
    for _ in range(max_length):
        nxt = []
        for m in frontier:
            for s in names:
                p = matmul(m, T[s])
                if p in seen:
                    continue
                seen[p] = seen[m] + (s,)
                if p in targets:
                    return seen[p]
                nxt.append(p)
        frontier = nxt
    return None
