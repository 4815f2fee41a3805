"""Exhaustive checks over a prime field: scrolls from 2x2 minors, containment,
intersection points, Jacobian ranks and rational singular points.

Everything here is decided by scanning all F_p-rational points of
projective space, so smoothness statements only cover rational points.
"""
from __future__ import annotations

import itertools
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from importlib import resources

import numpy as np
import sympy

DEFAULT_PRIME = 29


class NotAScroll(ValueError):
    pass


class NotOnVariety(ValueError):
    pass


# --- polynomials -------------------------------------------------------------

@dataclass(frozen=True)
class FpPoly:
    """Sparse polynomial over F_p: sorted ((exponents), coefficient) pairs."""

    p: int
    n: int
    terms: tuple = ()

    @classmethod
    def from_dict(cls, p: int, n: int, d: dict) -> "FpPoly":
        clean = {tuple(e): c % p for e, c in d.items() if c % p}
        return cls(p, n, tuple(sorted(clean.items(), reverse=True)))

    @classmethod
    def parse(cls, text: str, p: int = DEFAULT_PRIME, n: int = 6) -> "FpPoly":
        xs = sympy.symbols(f"x0:{n}")
        poly = sympy.Poly(sympy.sympify(text, locals={str(x): x for x in xs}), *xs)
        d = {}
        for e, c in poly.terms():
            if not c.is_integer:
                raise ValueError(f"non-integer coefficient {c} in {text!r}")
            d[e] = int(c)
        return cls.from_dict(p, n, d)

    @classmethod
    def variable(cls, i: int, p: int = DEFAULT_PRIME, n: int = 6) -> "FpPoly":
        return cls.from_dict(p, n, {tuple(int(j == i) for j in range(n)): 1})

    def as_dict(self) -> dict:
        return dict(self.terms)

    def _check(self, other):
        if (self.p, self.n) != (other.p, other.n):
            raise ValueError("polynomials live in different rings")

    def __add__(self, other):
        self._check(other)
        d = self.as_dict()
        for e, c in other.terms:
            d[e] = d.get(e, 0) + c
        return FpPoly.from_dict(self.p, self.n, d)

    def __neg__(self):
        return FpPoly.from_dict(self.p, self.n, {e: -c for e, c in self.terms})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return FpPoly.from_dict(self.p, self.n, {e: c * other for e, c in self.terms})
        self._check(other)
        d = {}
        for (e1, c1), (e2, c2) in itertools.product(self.terms, other.terms):
            e = tuple(a + b for a, b in zip(e1, e2))
            d[e] = d.get(e, 0) + c1 * c2
        return FpPoly.from_dict(self.p, self.n, d)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return max((sum(e) for e, _ in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e, _ in self.terms}) <= 1

    def derivative(self, i: int) -> "FpPoly":
        d = {}
        for e, c in self.terms:
            if e[i]:
                e2 = list(e)
                e2[i] -= 1
                d[tuple(e2)] = c * e[i]
        return FpPoly.from_dict(self.p, self.n, d)

    def __call__(self, point) -> int:
        total = 0
        for e, c in self.terms:
            t = c
            for x, k in zip(point, e):
                if k:
                    t = t * pow(int(x), k, self.p) % self.p
            total += t
        return total % self.p

    def evaluate(self, columns) -> np.ndarray:
        """Values at many points; ``columns[i]`` holds the i-th coordinates
        (an int64 array, or a scalar shared by all points)."""
        p = self.p
        total = 0
        for e, c in self.terms:
            t = c
            for i, k in enumerate(e):
                if k:
                    t = t * (columns[i] ** k % p) % p
            total = (total + t) % p
        return np.asarray(total, dtype=np.int64)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.terms:
            mono = "*".join(f"x{i}" + (f"**{k}" if k > 1 else "") for i, k in enumerate(e) if k)
            parts.append(mono if c == 1 and mono else (f"{c}*{mono}" if mono else str(c)))
        return " + ".join(parts)


def projective_point(coords, p: int = DEFAULT_PRIME) -> tuple:
    """Canonical representative: first nonzero coordinate scaled to 1."""
    coords = [int(c) % p for c in coords]
    lead = next((c for c in coords if c), None)
    if lead is None:
        raise ValueError("the zero vector is not a projective point")
    inv = pow(lead, -1, p)
    return tuple(c * inv % p for c in coords)


# --- scrolls -----------------------------------------------------------------

@dataclass(frozen=True)
class ScrollSpec:
    """2x3 matrix of linear forms, plus the hyperplane spanned by the scroll."""

    matrix: tuple
    hyperplane: FpPoly | None = None

    def __post_init__(self):
        if len(self.matrix) != 2 or any(len(row) != 3 for row in self.matrix):
            raise NotAScroll("a scroll matrix is 2 x 3")
        for entry in itertools.chain(*self.matrix):
            if not entry.is_zero() and (entry.degree != 1 or not entry.is_homogeneous()):
                raise NotAScroll(f"entry {entry} is not a linear form")


def minors_ideal(S: ScrollSpec) -> list[FpPoly]:
    """The 2x2 minors for the column pairs (1,2), (1,3), (2,3)."""
    (a0, a1, a2), (b0, b1, b2) = S.matrix
    cols = ((a0, b0), (a1, b1), (a2, b2))
    out = []
    for i, j in ((0, 1), (0, 2), (1, 2)):
        m = cols[i][0] * cols[j][1] - cols[j][0] * cols[i][1]
        if m.is_zero():
            raise NotAScroll("a 2x2 minor vanishes identically")
        out.append(m)
    return out


def scroll_equations(S) -> list[FpPoly]:
    """Equations of the surface in the ambient space: minors plus its hyperplane."""
    if not isinstance(S, ScrollSpec):
        return list(S)
    eqs = minors_ideal(S)
    return eqs + [S.hyperplane] if S.hyperplane is not None else eqs


# --- scanning ----------------------------------------------------------------

CHUNK_FREE = 4  # free coordinates enumerated inside one numpy chunk


@dataclass
class ScanResult:
    points: list
    visited: int


def _chunks(n: int, p: int):
    """(lead index, fixed prefix) blocks covering every canonical point once."""
    for k in range(n):
        free = n - 1 - k
        split = max(0, free - CHUNK_FREE)
        for prefix in itertools.product(range(p), repeat=split):
            yield k, prefix


def _scan_chunk(polys, n, p, k, prefix):
    m = n - 1 - k - len(prefix)
    size = p ** m
    idx = np.arange(size, dtype=np.int64)
    cols = [0] * k + [1] + list(prefix)
    for j in range(m):
        cols.append(idx // p ** (m - 1 - j) % p)
    alive = None
    for f in polys:
        sub = cols if alive is None else [c[alive] if isinstance(c, np.ndarray) else c for c in cols]
        vals = np.broadcast_to(f.evaluate(sub), (size if alive is None else len(alive),))
        hit = np.nonzero(vals == 0)[0]
        alive = hit if alive is None else alive[hit]
        if len(alive) == 0:
            break
    if alive is None:
        alive = idx
    pts = np.zeros((len(alive), n), dtype=np.int64)
    for i, c in enumerate(cols):
        pts[:, i] = c[alive] if isinstance(c, np.ndarray) else c
    return [tuple(int(x) for x in row) for row in pts], size


def scan(polys, n: int | None = None, p: int | None = None, workers: int = 1) -> ScanResult:
    """All canonical points of P^{n-1}(F_p) where every polynomial vanishes.

    Linear equations are applied first and survivors are filtered
    progressively. Work is split into blocks; results are merged in block
    order and sorted, so the output does not depend on ``workers``.
    """
    polys = list(polys)
    if polys:
        n = n or polys[0].n
        p = p or polys[0].p
    if n is None or p is None:
        raise ValueError("need at least one polynomial or explicit n and p")
    for f in polys:
        if (f.n, f.p) != (n, p):
            raise ValueError("all polynomials must share the ring")
        if not f.is_homogeneous():
            raise ValueError(f"{f} is not homogeneous")
    if any(f.is_zero() for f in polys):
        polys = [f for f in polys if not f.is_zero()]
    polys.sort(key=lambda f: (f.degree, len(f.terms)))
    jobs = list(_chunks(n, p))
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            parts = list(ex.map(lambda job: _scan_chunk(polys, n, p, *job), jobs))
    else:
        parts = [_scan_chunk(polys, n, p, *job) for job in jobs]
    points = sorted(itertools.chain.from_iterable(pts for pts, _ in parts))
    visited = sum(size for _, size in parts)
    if visited != (p ** n - 1) // (p - 1):
        raise RuntimeError(f"scan visited {visited} points, expected {(p ** n - 1) // (p - 1)}")
    return ScanResult(points, visited)


def projective_scan(polys, n: int | None = None, p: int | None = None, workers: int = 1) -> list:
    return scan(polys, n, p, workers).points


@dataclass
class Containment:
    holds: bool
    count: int
    failures: list = field(default_factory=list)
    certification: str = "scan-certified"


def verify_containment(surface, hypersurface: FpPoly, workers: int = 1) -> Containment:
    """Does the hypersurface vanish at every rational point of the surface?

    A cubic not containing the scroll would cut it in a curve of degree 9,
    with far fewer rational points than the scroll has for p = 29, so
    vanishing at all of them certifies containment for these examples.
    """
    pts = projective_scan(scroll_equations(surface), workers=workers)
    bad = [x for x in pts if hypersurface(x) != 0]
    return Containment(not bad, len(pts), bad)


def intersection_points(A, B, workers: int = 1) -> list:
    return projective_scan(scroll_equations(A) + scroll_equations(B), workers=workers)


def rank_mod_p(rows, p: int) -> int:
    M = [[x % p for x in row] for row in rows]
    rank, ncols = 0, len(M[0]) if M else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(M)) if M[r][c]), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        inv = pow(M[rank][c], -1, p)
        M[rank] = [x * inv % p for x in M[rank]]
        for r in range(len(M)):
            if r != rank and M[r][c]:
                f = M[r][c]
                M[r] = [(x - f * y) % p for x, y in zip(M[r], M[rank])]
        rank += 1
    return rank


def jacobian_rank_at(polys, point) -> int:
    polys = list(polys)
    for f in polys:
        if f(point) != 0:
            raise NotOnVariety(f"{tuple(point)} is not a zero of {f}")
    p, n = polys[0].p, polys[0].n
    rows = [[f.derivative(i)(point) for i in range(n)] for f in polys]
    return rank_mod_p(rows, p)


def _det(rows, p):
    m = len(rows)
    total = 0
    for perm in itertools.permutations(range(m)):
        inv = sum(1 for i in range(m) for j in range(i + 1, m) if perm[i] > perm[j])
        t = 1
        for i in range(m):
            t = t * rows[i][perm[i]] % p
        total = (total + (-t if inv % 2 else t)) % p
    return total


def singular_point_scan(system, n: int | None = None, p: int | None = None,
                        codim: int | None = None, workers: int = 1) -> list:
    """Rational points of the variety where the Jacobian has rank below ``codim``.

    ``codim`` defaults to the number of equations (a complete intersection).
    The rank test runs on all points at once through the maximal minors.
    """
    system = [f for f in system if not f.is_zero()]
    pts = projective_scan(system, n, p, workers)
    if not pts:
        return []
    p, n = system[0].p, system[0].n
    m = codim or len(system)
    cols = list(np.array(pts, dtype=np.int64).T)
    grads = [[f.derivative(i).evaluate(cols) for i in range(n)] for f in system]
    grads = [[np.broadcast_to(g, (len(pts),)) for g in row] for row in grads]
    singular = np.ones(len(pts), dtype=bool)
    for rows in itertools.combinations(range(len(system)), m):
        for cs in itertools.combinations(range(n), m):
            block = [[grads[r][c] for c in cs] for r in rows]
            singular &= _det(block, p) == 0
            if not singular.any():
                return []
    return [x for x, s in zip(pts, singular) if s]


# --- the two worked examples ----------------------------------------------

@dataclass
class Claim:
    name: str
    passed: bool | None  # None when only reported, not asserted
    detail: str


@dataclass
class WorkedExample:
    name: str
    prime: int
    cubic: FpPoly
    hyperplanes: dict
    scrolls: dict
    intersections: list
    surfaces: list


def load_example(name: str, prime: int | None = None) -> WorkedExample:
    text = resources.files("scrollfano").joinpath("data", f"example_{name}.json").read_text(encoding="utf-8")
    return example_from_dict(json.loads(text), prime)


def example_from_dict(data: dict, prime: int | None = None) -> WorkedExample:
    p = prime or data["prime"]
    n = data["variables"]

    def P(s):
        return FpPoly.parse(s, p, n)

    hyper = {k: P(v) for k, v in data["hyperplanes"].items()}
    scrolls = {}
    for k, spec in data["scrolls"].items():
        H = hyper[spec["hyperplane"]]
        if "matrix" in spec:
            M = tuple(tuple(P(e) for e in row) for row in spec["matrix"])
            scrolls[k] = ScrollSpec(M, H)
        else:
            scrolls[k] = [P(q) for q in spec["quadrics"]] + [H]
    return WorkedExample(data["name"], p, P(data["cubic"]), hyper, scrolls,
                           data.get("intersections", []), data.get("surfaces", []))


def check_example(ex: WorkedExample, expected_prime: int = DEFAULT_PRIME, workers: int = 1) -> list[Claim]:
    """Run every claim of a worked example; expectations are only asserted
    over the prime the data was written for."""
    p = ex.prime
    strict = p == expected_prime
    claims = []

    def add(name, ok, detail):
        claims.append(Claim(name, ok if strict else None, detail))

    scroll_count = p * p + 2 * p + 1
    for k, S in ex.scrolls.items():
        eqs = scroll_equations(S)
        pts = projective_scan(eqs, workers=workers)
        add(f"{k} point count", len(pts) == scroll_count, f"{len(pts)} points (scroll count {scroll_count})")
        H = S.hyperplane if isinstance(S, ScrollSpec) else S[-1]
        bad = [x for x in pts if ex.cubic(x) or H(x)]
        add(f"{k} inside its threefold", not bad and bool(pts),
            f"cubic and hyperplane vanish on {len(pts) - len(bad)}/{len(pts)} points (scan-certified)")
    for item in ex.intersections:
        a, b = item["pair"]
        eqs = scroll_equations(ex.scrolls[a]) + scroll_equations(ex.scrolls[b])
        found = projective_scan(eqs, workers=workers)
        listed = sorted(projective_point(x, p) for x in item["points"])
        add(f"{a} meets {b}", found == listed, f"found {found}, listed {listed}")
        for x in listed:
            on = all(f(x) == 0 for f in eqs) and ex.cubic(x) == 0
            add(f"{a} meets {b} at {x}: on both surfaces", on, "pointwise evaluation")
            if on:
                r = jacobian_rank_at(eqs, x)
                add(f"{a} meets {b} at {x}: transverse", r == ex_n(ex) - 1, f"stacked Jacobian rank {r}")
    for hs in ex.surfaces:
        system = [ex.hyperplanes[h] for h in hs] + [ex.cubic]
        sing = singular_point_scan(system, workers=workers)
        add(f"surface {'.'.join(hs)} smooth at rational points", not sing,
            f"{len(sing)} rational singular points (rational points only)")
    for h, H in sorted(ex.hyperplanes.items()):
        sing = singular_point_scan([H, ex.cubic], workers=workers)
        claims.append(Claim(f"threefold {h} rational nodes", len(sing) <= 6 if strict else None,
                            f"{len(sing)} rational singular points {sing}"))
    return claims


def ex_n(ex: WorkedExample) -> int:
    return ex.cubic.n
