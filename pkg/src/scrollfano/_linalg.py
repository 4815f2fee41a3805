"""Exact integer/rational matrix helpers.

Matrices are tuples of row tuples, vectors are tuples. Entries are Python
ints or ``fractions.Fraction``; nothing here touches floating point.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt
from typing import Iterator, Sequence

Vector = tuple
Matrix = tuple


def as_matrix(rows: Sequence[Sequence]) -> Matrix:
    return tuple(tuple(r) for r in rows)


def identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def transpose(m: Matrix) -> Matrix:
    return tuple(zip(*m))


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def matvec(m: Matrix, v: Sequence) -> Vector:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in m)


def matpow(m: Matrix, k: int) -> Matrix:
    result = identity(len(m))
    for _ in range(k):
        result = matmul(m, result)
    return result


def neg(m: Matrix) -> Matrix:
    return tuple(tuple(-x for x in row) for row in m)


def bilinear(gram: Matrix, v: Sequence, w: Sequence):
    return sum(v[i] * gram[i][j] * w[j] for i in range(len(v)) for j in range(len(w)))


def column(m: Matrix, j: int) -> Vector:
    return tuple(row[j] for row in m)


def from_columns(cols: Sequence[Sequence]) -> Matrix:
    return transpose(tuple(tuple(c) for c in cols))


def det(m: Matrix):
    """Determinant by fraction-free Bareiss elimination (exact for ints)."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                a[i][j] = num / prev if isinstance(num, Fraction) else _exact_div(num, prev)
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _exact_div(num, den):
    if isinstance(num, int) and isinstance(den, int):
        q, r = divmod(num, den)
        assert r == 0
        return q
    return Fraction(num) / den


def inverse(m: Matrix) -> Matrix:
    """Inverse over Q by Gauss-Jordan; raises ZeroDivisionError if singular."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        a[c], a[piv] = a[piv], a[c]
        p = a[c][c]
        a[c] = [x / p for x in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return tuple(tuple(row[n:]) for row in a)


def solve(m: Matrix, b: Sequence) -> Vector:
    return matvec(inverse(m), b)


def is_integral(obj) -> bool:
    if isinstance(obj, (tuple, list)):
        return all(is_integral(x) for x in obj)
    return Fraction(obj).denominator == 1


def to_int(obj):
    if isinstance(obj, (tuple, list)):
        return tuple(to_int(x) for x in obj)
    f = Fraction(obj)
    if f.denominator != 1:
        raise ValueError(f"{obj} is not an integer")
    return int(f)


def primitive(v: Sequence) -> Vector:
    """Scale a nonzero rational vector to the primitive integer vector on the same ray."""
    fr = [Fraction(x) for x in v]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(x // g for x in ints)


def sign(x) -> int:
    return (x > 0) - (x < 0)


def charpoly(m: Matrix) -> list:
    """Coefficients [1, c1, ..., cn] of det(xI - m) by Faddeev-LeVerrier."""
    n = len(m)
    coeffs = [Fraction(1)]
    mk = identity(n)
    mk = tuple(tuple(Fraction(x) for x in row) for row in mk)
    a = tuple(tuple(Fraction(x) for x in row) for row in m)
    c = Fraction(1)
    for k in range(1, n + 1):
        prod = matmul(a, mk)
        c = -sum(prod[i][i] for i in range(n)) / k
        coeffs.append(c)
        mk = tuple(tuple(prod[i][j] + (c if i == j else 0) for j in range(n)) for i in range(n))
    return coeffs


def signature(sym: Matrix) -> tuple[int, int, int]:
    """(positive, negative, zero) eigenvalue counts via Descartes' rule.

    Exact because a real symmetric matrix has only real eigenvalues.
    """
    p = charpoly(sym)
    n = len(sym)
    zero = 0
    while zero < n and p[n - zero] == 0:
        zero += 1
    trimmed = p[: n + 1 - zero]

    def changes(cs):
        signs = [sign(c) for c in cs if c != 0]
        return sum(1 for s, t in zip(signs, signs[1:]) if s != t)

    pos = changes(trimmed)
    # p(-x): flip the sign of odd-degree coefficients
    deg = len(trimmed) - 1
    negp = [c * (-1) ** (deg - i) for i, c in enumerate(trimmed)]
    return pos, changes(negp), zero


def ldl(p: Matrix) -> tuple[Matrix, tuple]:
    """Rational LDL^T of a symmetric positive-definite matrix.

    Returns (L, D) with L unit lower-triangular and D the diagonal entries.
    """
    n = len(p)
    lo = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    d = [Fraction(0)] * n
    for j in range(n):
        d[j] = Fraction(p[j][j]) - sum(lo[j][k] ** 2 * d[k] for k in range(j))
        if d[j] <= 0:
            raise ValueError("matrix is not positive definite")
        for i in range(j + 1, n):
            lo[i][j] = (Fraction(p[i][j]) - sum(lo[i][k] * lo[j][k] * d[k] for k in range(j))) / d[j]
    return tuple(tuple(r) for r in lo), tuple(d)


def is_positive_definite(p: Matrix) -> bool:
    try:
        ldl(p)
    except ValueError:
        return False
    return True


def floor_sqrt(x: Fraction) -> int:
    """floor(sqrt(x)) for a non-negative rational x."""
    x = Fraction(x)
    if x < 0:
        raise ValueError("negative argument")
    return isqrt(x.numerator * x.denominator) // x.denominator


def vectors_of_norm(p: Matrix, m) -> Iterator[Vector]:
    """All integer x with x^T p x == m, for p positive definite.

    Fincke-Pohst style enumeration over the LDL^T factorisation, every
    bound checked exactly. Output order: lexicographic in reversed
    coordinates, deterministic.
    """
    m = Fraction(m)
    n = len(p)
    if m < 0:
        return
    if n == 0:
        if m == 0:
            yield ()
        return
    lo, d = ldl(p)
    x = [0] * n

    def rec(i: int, remaining: Fraction):
        # shift = sum_{j>i} L[j][i] * x_j
        shift = sum(lo[j][i] * x[j] for j in range(i + 1, n))
        r = floor_sqrt(remaining / d[i]) + 1
        centre = -shift
        c0 = centre.numerator // centre.denominator
        for xi in range(c0 - r, c0 + r + 2):
            t = d[i] * (xi + shift) ** 2
            if t > remaining:
                continue
            x[i] = xi
            if i == 0:
                if t == remaining:
                    yield tuple(x)
            else:
                yield from rec(i - 1, remaining - t)
        x[i] = 0

    yield from rec(n - 1, m)
