"""Chambers of the wall arrangement in the positive cone, and the model census.

A chamber is stored through its slice picture: the convex polygon (rank 3)
or interval (rank 2) it cuts on the level a = 1, together with the walls
supporting its edges.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from . import _slice
from ._linalg import det, floor_sqrt, from_columns, identity, inverse, is_integral, matmul, matvec, primitive, to_int
from .isometry import Isometry, is_isometry, preserves_positive_cone
from .lattice import GramLattice
from .walls import (
    RegionError,
    WallDivisor,
    WallKind,
    enumerate_walls_in_region,
    make_wall,
    normalize,
    split_form,
)

MAX_LEVEL = 16


class PointOnWall(ValueError):
    pass


class CrossingPexWall(ValueError):
    """Crossing a prime exceptional wall leaves the movable cone."""


class NotAFacet(ValueError):
    pass


class ClosureNotReached(RuntimeError):
    def __init__(self, depth):
        super().__init__(f"chamber graph not closed within depth {depth}")
        self.depth = depth


@dataclass(frozen=True)
class Chamber:
    """H-representation {x : sign * q(w, x) >= 0} plus the derived rays.

    ``vertices`` lists the rays in counterclockwise order on the slice.
    Equality and hashing use the sorted facet list only.
    """

    walls: tuple
    rays: tuple = field(compare=False)
    interior_point: tuple = field(compare=False)
    vertices: tuple = field(compare=False, repr=False)
    label: str | None = field(default=None, compare=False)

    def wall_vectors(self) -> tuple:
        return tuple(w.vector for w, _ in self.walls)

    def flop_facets(self) -> list[WallDivisor]:
        return [w for w, _ in self.walls if w.kind is WallKind.FLOP]

    def sign_of(self, w) -> int:
        v = w.vector if isinstance(w, WallDivisor) else tuple(w)
        for wall, s in self.walls:
            if wall.vector == v:
                return s
        raise NotAFacet(f"{v} is not a facet")

    def contains(self, L: GramLattice, x, strict: bool = False) -> bool:
        vals = [s * L.q(w.vector, x) for w, s in self.walls]
        return all(v > 0 for v in vals) if strict else all(v >= 0 for v in vals)

    def with_label(self, label):
        return Chamber(self.walls, self.rays, self.interior_point, self.vertices, label)


def _build(L: GramLattice, cuts: dict, region: list) -> Chamber:
    facets = sorted(cuts.items(), key=lambda kv: kv[0].vector)
    rays = tuple(sorted(region))
    interior = tuple(sum(r[i] for r in rays) for i in range(L.rank))
    C = Chamber(tuple(facets), rays, interior, tuple(region))
    if L.square(interior) <= 0 or not C.contains(L, interior, strict=True):
        raise AssertionError("ray sum is not an interior point")
    return C


def _label_edges(region, forms: dict) -> list:
    """For each edge, the cut wall containing it, or None for a base edge."""
    labels = []
    for edge in _slice.edges(region):
        hit = None
        for w, c in forms.items():
            if all(_slice.value(c, x) == 0 for x in edge):
                hit = w
                break
        labels.append(hit)
    return labels


def _merge_collinear(region, labels):
    if len(region[0]) == 2:
        return region, labels
    n = len(region)
    keep = [i for i in range(n) if labels[i - 1] is None or labels[i - 1] != labels[i]]
    return [region[i] for i in keep], [labels[i] for i in keep]


def carve_chamber(L: GramLattice, p) -> Chamber:
    """The chamber of the full wall arrangement containing p.

    Start from a rational polygon well inside the positive cone around p,
    cut by every wall crossing it, and enlarge the starting polygon (keeping
    the cuts) until no edge of the result comes from the starting polygon.
    """
    p = tuple(Fraction(x) for x in p)
    if L.square(p) <= 0 or L.q(p, L.ample) <= 0:
        raise RegionError("point is not in the positive cone")
    d, N = split_form(L)
    p_ray = primitive(p)
    y_p = _slice.to_slice(p_ray)
    forms: dict = {}
    for level in range(1, MAX_LEVEL + 1):
        region = _slice.base_region(d, N, level)
        if not _slice.strictly_inside(region, p_ray):
            continue
        for w, c in forms.items():
            region = _slice.clip(region, c)
        while True:
            new = []
            for w in enumerate_walls_in_region(L, region):
                c = _slice.linear_form(L.gram, w.vector)
                hp = _slice.value(c, p_ray)
                if hp == 0:
                    raise PointOnWall(f"{tuple(p)} lies on the wall {w.vector}")
                if hp < 0:
                    c = tuple(-x for x in c)
                vals = [_slice.value(c, r) for r in region]
                if min(vals) < 0:
                    new.append((_slice.distance_key(c, y_p), w, c))
            if not new:
                break
            # nearest walls first: the region shrinks early and most
            # of the remaining candidates stop crossing it
            for _, w, c in sorted(new, key=lambda t: (t[0], t[1].vector)):
                if min(_slice.value(c, r) for r in region) < 0:
                    forms[w] = c
                    region = _slice.clip(region, c)
        labels = _label_edges(region, forms)
        if all(lab is not None for lab in labels):
            region, labels = _merge_collinear(region, labels)
            used = {}
            for w in labels:
                used[w] = 1 if _slice.value(_slice.linear_form(L.gram, w.vector), p_ray) > 0 else -1
            return _build(L, used, region)
    raise RegionError("chamber reaches the boundary of the positive cone")


def transform_chamber(L: GramLattice, C: Chamber, phi) -> Chamber:
    """Image of C under an isometry preserving the positive cone."""
    M = phi.matrix if isinstance(phi, Isometry) else phi
    if not preserves_positive_cone(L, M):
        raise ValueError("isometry does not preserve the positive cone")
    facets = {}
    for w, s in C.walls:
        img = matvec(M, w.vector)
        nw = make_wall(L, img)
        facets[nw] = s if nw.vector == tuple(img) else -s
    rays = [primitive(matvec(M, r)) for r in C.rays]
    return _build(L, facets, _slice.cyclic_order(rays))


def _facet_edge(L, C: Chamber, w: WallDivisor):
    c = _slice.linear_form(L.gram, w.vector)
    for edge in _slice.edges(list(C.vertices)):
        if all(_slice.value(c, x) == 0 for x in edge):
            return edge
    raise NotAFacet(f"{w.vector} does not support an edge")


def cross_wall(L: GramLattice, C: Chamber, w) -> Chamber:
    """The chamber on the other side of the flop wall w."""
    if not isinstance(w, WallDivisor):
        w = make_wall(L, w)
    C.sign_of(w)
    if w.kind is WallKind.PEX:
        raise CrossingPexWall(f"{w.vector} is a prime exceptional wall")
    edge = _facet_edge(L, C, w)
    m = _slice.centroid(edge)
    c = _slice.centroid(C.vertices)
    direction = tuple(a - b for a, b in zip(m, c))
    t0 = Fraction(1)
    while _slice.slice_q(L.gram, _step(m, direction, t0)) <= 0:
        t0 /= 2
    far = _step(m, direction, t0)
    t_star = t0
    for other in enumerate_walls_in_region(L, [_slice.lift(m), _slice.lift(far)]):
        if other == w:
            continue
        h0 = _slice.slice_value(L.gram, other.vector, m)
        h1 = _slice.slice_value(L.gram, other.vector, far)
        if h0 != h1:
            t = h0 / (h0 - h1) * t0
            if 0 < t < t_star:
                t_star = t
    seed = _slice.lift(_step(m, direction, t_star / 2))
    D = carve_chamber(L, seed)
    if D.sign_of(w) != -C.sign_of(w):
        raise AssertionError("crossing did not flip the side of the wall")
    return D


def _step(m, direction, t):
    return tuple(a + t * b for a, b in zip(m, direction))


def mov_membership(L: GramLattice, p) -> bool:
    """Is p in the movable cone, i.e. not separated from the ample class by a -2 wall?"""
    p = tuple(Fraction(x) for x in p)
    if L.square(p) <= 0 or L.q(p, L.ample) <= 0:
        raise RegionError("point is not in the positive cone")
    g = L.ample
    for rho in enumerate_walls_in_region(L, [g, primitive(p)], WallKind.PEX):
        a, b = L.q(rho.vector, g), L.q(rho.vector, p)
        if (a > 0 > b) or (a < 0 < b):
            return False
    return True


def _chord(L: GramLattice, v):
    """A rational point and direction on the slice line {q(v, (1, y)) = 0}."""
    c = _slice.linear_form(L.gram, v)
    c0, cy = c[0], c[1:]
    if len(cy) != 2:
        raise ValueError("chords are a rank-three notion")
    k = 0 if cy[0] != 0 else 1
    y0 = [Fraction(0), Fraction(0)]
    y0[k] = Fraction(-c0, cy[k])
    return tuple(y0), (Fraction(-cy[1]), Fraction(cy[0]))


def wall_meets_movable(L: GramLattice, v, max_level: int = 16) -> bool | None:
    """Does the hyperplane v-perp meet the closed movable cone?

    Along the chord v-perp on the slice, every -2 wall separating a point
    from the ample class cuts off a half-line. Those half-lines are
    collected for a growing sub-segment of the chord (walls meeting the
    triangle spanned by the ample class and the sub-segment); the answer is
    certified once their common interval is empty or meets the
    sub-segment. Returns None if neither happens by ``max_level``.
    """
    if L.square(v) >= 0:
        raise ValueError("wall vectors have negative square")
    y0, u = _chord(L, v)
    g = L.ample

    def point(t):
        return tuple(a + t * b for a, b in zip(y0, u))

    # slice_q along the chord is a concave quadratic in t; find its peak
    q0 = _slice.slice_q(L.gram, point(Fraction(0)))
    q1 = _slice.slice_q(L.gram, point(Fraction(1)))
    qm = _slice.slice_q(L.gram, point(Fraction(-1)))
    A = (q1 + qm) / 2 - q0
    B = (q1 - qm) / 2
    if A >= 0:
        raise ValueError("chord is not inside a definite slice")
    peak = -B / (2 * A)
    if _slice.slice_q(L.gram, point(peak)) <= 0:
        return False
    # q(peak + s) = q(peak) + A s^2, so the chord inside Pos has half-width
    # sqrt(q(peak) / -A); W is a rational lower bound for it
    prec = 10 ** 6
    W = Fraction(floor_sqrt(_slice.slice_q(L.gram, point(peak)) / -A * prec * prec), prec)
    for level in range(1, max_level + 1):
        half = W * (1 - Fraction(1, 2 ** level))
        ends = [peak - half, peak + half]
        t_lo, t_hi = ends
        rays = [g, _slice.lift(point(t_lo)), _slice.lift(point(t_hi))]
        left, right = None, None
        for rho in enumerate_walls_in_region(L, rays, WallKind.PEX):
            s = 1 if L.q(rho.vector, g) > 0 else -1
            a = s * _slice.slice_value(L.gram, rho.vector, point(Fraction(0)))
            b = s * _slice.slice_value(L.gram, rho.vector, point(Fraction(1))) - a
            # feasible where a + b t >= 0
            if b > 0:
                root = -a / b
                left = root if left is None else max(left, root)
            elif b < 0:
                root = -a / b
                right = root if right is None else min(right, root)
            elif a < 0:
                return False
        if left is not None and right is not None and left > right:
            return False
        # q is concave along the chord, so a constraint cutting it outside
        # the positive disc rules out the whole chord
        if left is not None and left > peak and _slice.slice_q(L.gram, point(left)) <= 0:
            return False
        if right is not None and right < peak and _slice.slice_q(L.gram, point(right)) <= 0:
            return False
        # every wall separating a point of [t_lo, t_hi] from g is in the list,
        # so a feasible point there is movable
        lo = t_lo if left is None else max(left, t_lo)
        hi = t_hi if right is None else min(right, t_hi)
        if lo <= hi:
            return True
    return None


# --- isomorphisms between chambers -----------------------------------------

def chamber_isometries(L: GramLattice, src: Chamber, dst: Chamber,
                       accept: Callable | None = None, first: bool = False) -> list[Isometry]:
    """Lattice isometries carrying src onto dst (optionally filtered by ``accept``).

    A basis of independent rays of src is sent to every ordered choice of
    rays of dst; each solution is checked for integrality, the Gram form
    and a bijection of the full ray sets.
    """
    if len(src.rays) != len(dst.rays):
        return []
    n = L.rank
    basis = next(b for b in itertools.combinations(src.rays, n) if det(from_columns(b)) != 0)
    B_inv = inverse(from_columns(basis))
    target_rays = set(dst.rays)
    found = []
    for images in itertools.permutations(dst.rays, n):
        M = matmul(from_columns(images), B_inv)
        if not is_integral(M):
            continue
        M = to_int(M)
        if not is_isometry(L, M):
            continue
        if {tuple(matvec(M, r)) for r in src.rays} != target_rays:
            continue
        if accept is not None and not accept(M):
            continue
        found.append(Isometry(M))
        if first:
            break
    found.sort(key=lambda phi: phi.matrix)
    return found


# --- census -----------------------------------------------------------------

@dataclass
class ChamberClass:
    label: str
    representative: int
    members: list = field(default_factory=list)
    names: list = field(default_factory=list)


@dataclass
class ChamberGraph:
    nodes: list
    edges: list
    classes: list

    @property
    def class_count(self) -> int:
        return len(self.classes)

    def class_of(self, chamber: Chamber) -> ChamberClass | None:
        for cls in self.classes:
            for idx, _ in cls.members:
                if self.nodes[idx] == chamber:
                    return cls
        return None

    def labels(self) -> list[str]:
        return [c.label for c in self.classes]


def census(scenario, max_depth: int = 12, facet_order: Callable | None = None) -> ChamberGraph:
    """Breadth-first walk over flop walls from Nef(F), modulo birational isometries.

    Only class representatives are expanded; each neighbour is matched
    against the known representatives. Class labels come from the named
    wall-crossing paths of the scenario.
    """
    from .birgroup import bir_criterion

    L = scenario.lattice
    config = scenario.bir_config

    def accept(M):
        return bir_criterion(L, config, M)

    order = facet_order or (lambda ws: ws)
    start = carve_chamber(L, L.ample)
    nodes = [start]
    index = {start: 0}
    classes = [ChamberClass("C0", 0, [(0, Isometry(identity(L.rank)))])]
    edges = []
    queue = deque([(0, 0)])
    while queue:
        cls_idx, depth = queue.popleft()
        rep_node = classes[cls_idx].representative
        rep = nodes[rep_node]
        for w in order(rep.flop_facets()):
            nb = cross_wall(L, rep, w)
            if nb not in index:
                index[nb] = len(nodes)
                nodes.append(nb)
            j = index[nb]
            edges.append((rep_node, j, w))
            if any(j == m for cls in classes for m, _ in cls.members):
                continue
            for cls in classes:
                hits = chamber_isometries(L, nodes[cls.representative], nb, accept, first=True)
                if hits:
                    cls.members.append((j, hits[0]))
                    break
            else:
                if depth + 1 > max_depth:
                    raise ClosureNotReached(max_depth)
                classes.append(ChamberClass(f"C{len(classes)}", j, [(j, Isometry(identity(L.rank)))]))
                queue.append((len(classes) - 1, depth + 1))
    graph = ChamberGraph(nodes, edges, classes)
    _name_classes(scenario, graph, accept)
    return graph


def chamber_along(L: GramLattice, path: Sequence) -> Chamber:
    """Nef(F) followed by crossing the given flop walls in order."""
    C = carve_chamber(L, L.ample)
    for w in path:
        C = cross_wall(L, C, w)
    return C


def _name_classes(scenario, graph: ChamberGraph, accept):
    L = scenario.lattice
    for name, path in scenario.named_paths.items():
        C = chamber_along(L, path)
        target = graph.class_of(C)
        if target is None:
            for cls in graph.classes:
                if chamber_isometries(L, graph.nodes[cls.representative], C, accept, first=True):
                    target = cls
                    break
        if target is not None:
            target.names.append(name)
    for cls in graph.classes:
        if cls.names:
            cls.label = cls.names[0]


# --- figure export -----------------------------------------------------------

@dataclass
class SliceObject:
    object_type: str  # "boundary", "chamber" or "wall"
    id: str
    points: list  # (x, y) pairs of Fractions


def slice_export(L: GramLattice, chambers: Sequence[Chamber], plane_level,
                 circle_level: int = 5) -> list[SliceObject]:
    """Exact 2-D picture of chambers on the plane q(g, .) = plane_level.

    Coordinates are the last two basis coordinates of points on that plane.
    The boundary of the positive cone is irrational in general, so it is
    drawn as a rational polyline inscribed in it (finer for larger
    ``circle_level``). Each chamber contributes its closed polygon and one
    segment per facet.
    """
    if L.rank != 3:
        raise ValueError("slice export needs a rank-three lattice")
    d, N = split_form(L)
    a = Fraction(plane_level) / d
    if a <= 0:
        raise ValueError("plane level must be positive")

    def place(ray):
        return tuple(a * Fraction(c, ray[0]) for c in ray[1:])

    out = [SliceObject("boundary", "positive_cone",
                       [place(r) for r in _slice.base_region(d, N, circle_level)])]
    for k, C in enumerate(chambers):
        name = C.label or f"chamber{k}"
        verts = list(C.vertices)
        out.append(SliceObject("chamber", name, [place(r) for r in verts]))
        for w, _ in C.walls:
            on = [r for r in verts if L.q(w.vector, r) == 0]
            if len(on) == 2:
                on = _slice.cyclic_order(on)
                wid = f"{name}:{w.kind.value}:" + ",".join(str(x) for x in w.vector)
                out.append(SliceObject("wall", wid, [place(r) for r in on]))
    return out


SLICE_COLUMNS = ("object_type", "id", "x_num", "x_den", "y_num", "y_den")


def slice_rows(objects: Sequence[SliceObject]) -> list[tuple]:
    rows = []
    for obj in objects:
        for x, y in obj.points:
            rows.append((obj.object_type, obj.id, x.numerator, x.denominator, y.numerator, y.denominator))
    return rows


def slice_json(objects: Sequence[SliceObject]) -> list[dict]:
    return [
        {"object_type": o.object_type, "id": o.id,
         "points": [[f"{x.numerator}/{x.denominator}", f"{y.numerator}/{y.denominator}"] for x, y in o.points]}
        for o in objects
    ]
