"""Exact geometry of cones in rank 2 and 3, drawn on the slice {a = 1}.

Points of the slice are carried as primitive integer rays (homogeneous
coordinates with positive first entry), so clipping and orientation tests
stay in integer arithmetic. A cone is an interval (rank 2, two rays) or a
convex polygon (rank 3, rays in counterclockwise order).
"""
from __future__ import annotations

from fractions import Fraction
from functools import cmp_to_key
from math import gcd
from typing import Sequence

from ._linalg import bilinear, floor_sqrt, inverse, ldl, neg, primitive, transpose

Ray = tuple


def to_slice(x) -> tuple:
    if x[0] <= 0:
        raise ValueError(f"{tuple(x)} does not lie over the slice")
    return tuple(Fraction(c) / x[0] for c in x[1:])


def lift(y) -> Ray:
    """Primitive integer ray through the slice point y."""
    return primitive((Fraction(1),) + tuple(y))


def linear_form(gram, v) -> tuple:
    """Coefficients c with q(v, x) = c . x."""
    n = len(gram)
    return tuple(sum(v[i] * gram[i][j] for i in range(n)) for j in range(n))


def value(c, x):
    return sum(a * b for a, b in zip(c, x))


def slice_value(gram, v, y) -> Fraction:
    """q(v, (1, y)) for a slice point y."""
    return bilinear(gram, v, (Fraction(1),) + tuple(y))


def slice_q(gram, y) -> Fraction:
    x = (Fraction(1),) + tuple(y)
    return bilinear(gram, x, x)


def _prim(v) -> Ray:
    g = 0
    for x in v:
        g = gcd(g, x)
    return tuple(x // g for x in v)


def _rational_circle(m: int) -> list[tuple]:
    """4m rational points on the unit circle, counterclockwise."""
    half = []
    for j in range(-m, m + 1):
        t = Fraction(j, m)
        half.append(((1 - t * t) / (1 + t * t), 2 * t / (1 + t * t)))
    # right half runs from (0,-1) up to (0,1); the left half is its negative
    return half[:-1] + [(-a, -b) for a, b in half[:-1]]


def base_region(d: int, N, k: int) -> list[Ray]:
    """A rational polygon (or interval) strictly inside {d + N(y) > 0}.

    Level k shrinks an inscribed shape by 1 - 2^-k and, in rank 3, uses
    4 * 2^k vertices, so every vertex has q >= d (1 - r^2) > 0 on the slice.
    """
    r = 1 - Fraction(1, 2 ** k)
    prec = 10 ** 4
    lo, diag = ldl(neg(N))
    R = Fraction(floor_sqrt(Fraction(d * prec * prec)), prec)
    scale = [Fraction(floor_sqrt(Fraction(prec * prec) / D), prec) for D in diag]
    if len(N) == 1:
        e = r * R * scale[0]
        return [lift((-e,)), lift((e,))]
    lo_inv_t = transpose(inverse(lo))
    pts = []
    for c in _rational_circle(2 ** k):
        w = [r * R * scale[i] * c[i] for i in range(2)]
        pts.append(lift(tuple(sum(lo_inv_t[i][j] * w[j] for j in range(2)) for i in range(2))))
    return pts


def clip(region: list[Ray], c) -> list[Ray]:
    """Intersect a convex cone with {c . x >= 0}."""
    if not region:
        return []
    if len(region[0]) == 2:
        return _clip_interval(region, c)
    out = []
    n = len(region)
    vals = [value(c, p) for p in region]
    for i in range(n):
        p, q = region[i], region[(i + 1) % n]
        fp, fq = vals[i], vals[(i + 1) % n]
        if fp >= 0:
            out.append(p)
        if (fp > 0 > fq) or (fp < 0 < fq):
            out.append(_cut(p, q, fp, fq))
    return dedupe(out)


def _cut(p, q, fp, fq) -> Ray:
    """The ray on segment pq where the form vanishes."""
    x = tuple(fp * b - fq * a for a, b in zip(p, q))
    x = _prim(x)
    return x if x[0] > 0 else tuple(-t for t in x)


def _clip_interval(region, c):
    a, b = region[0], region[-1]
    fa, fb = value(c, a), value(c, b)
    if fa < 0 and fb < 0:
        return []
    if fa >= 0 and fb >= 0:
        return [a, b]
    root = _cut(a, b, fa, fb)
    return [a, root] if fa >= 0 else [root, b]


def dedupe(pts: list) -> list:
    out = []
    for p in pts:
        if not out or out[-1] != p:
            out.append(p)
    while len(out) > 1 and out[0] == out[-1]:
        out.pop()
    return out


def orientation(p, q, r) -> int:
    """Sign of the turn p -> q -> r on the slice (rays with positive first entry)."""
    s = (p[0] * (q[1] * r[2] - q[2] * r[1]) - p[1] * (q[0] * r[2] - q[2] * r[0])
         + p[2] * (q[0] * r[1] - q[1] * r[0]))
    return (s > 0) - (s < 0)


def strictly_inside(region: list[Ray], x) -> bool:
    if len(x) == 2:
        a, b = region[0], region[-1]
        return a[1] * x[0] < x[1] * a[0] and x[1] * b[0] < b[1] * x[0]
    n = len(region)
    return all(orientation(region[i], region[(i + 1) % n], x) > 0 for i in range(n))


def midpoint(p, q) -> Ray:
    """Ray through the midpoint of the slice points of p and q."""
    return _prim(tuple(q[0] * a + p[0] * b for a, b in zip(p, q)))


def centroid(points: Sequence) -> tuple:
    """Centroid of the slice points of the given rays (as Fractions)."""
    ys = [to_slice(p) for p in points]
    k = len(ys)
    return tuple(sum(y[i] for y in ys) / k for i in range(len(ys[0])))


def cyclic_order(rays: Sequence[Ray]) -> list[Ray]:
    """Counterclockwise order around the centroid, starting from the
    lexicographically smallest ray; intervals are sorted left to right."""
    rays = list(rays)
    if not rays:
        return []
    if len(rays[0]) == 2:
        return sorted(rays, key=lambda r: Fraction(r[1], r[0]))
    c = centroid(rays)
    pts = {r: to_slice(r) for r in rays}

    def half(y):
        dx, dy = y[0] - c[0], y[1] - c[1]
        return 0 if (dy > 0 or (dy == 0 and dx > 0)) else 1

    def cmp(r, s):
        p, q = pts[r], pts[s]
        hp, hq = half(p), half(q)
        if hp != hq:
            return hp - hq
        cross = (p[0] - c[0]) * (q[1] - c[1]) - (p[1] - c[1]) * (q[0] - c[0])
        return -1 if cross > 0 else (1 if cross < 0 else 0)

    ordered = sorted(rays, key=cmp_to_key(cmp))
    start = ordered.index(min(ordered))
    return ordered[start:] + ordered[:start]


def edges(region: list[Ray]) -> list[tuple]:
    """Polygon edges as ray pairs; for an interval, its two endpoints."""
    if len(region[0]) == 2:
        return [(region[0],), (region[-1],)]
    n = len(region)
    return [(region[i], region[(i + 1) % n]) for i in range(n)]


def distance_key(c, y) -> Fraction:
    """Squared Euclidean distance on the slice from y to {c . (1, y) = 0}."""
    h = c[0] + sum(a * b for a, b in zip(c[1:], y))
    norm = sum(a * a for a in c[1:])
    return Fraction(h * h, 1) / norm if norm else Fraction(h * h)
