"""Exact polyhedral primitives: double description, cones, planar cell complexes."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .exact import (
    FeasibilityResult,
    dot,
    feasible_point,
    frac,
    inverse,
    kernel,
    mat_vec,
    primitive,
    rank,
    transpose,
)

Point = tuple[Fraction, ...]


@dataclass(frozen=True)
class VRep:
    vertices: tuple[Point, ...]
    rays: tuple[tuple[int, ...], ...]
    lines: tuple[tuple[int, ...], ...] = ()

    @property
    def empty(self) -> bool:
        return not self.vertices


@dataclass(frozen=True)
class Polyhedron:
    """``{x : <a, x> >= b}`` for each stored pair ``(a, b)``."""

    dim: int
    inequalities: tuple[tuple[tuple[Fraction, ...], Fraction], ...]

    @classmethod
    def from_pairs(cls, dim: int, pairs) -> "Polyhedron":
        ineqs = tuple((tuple(frac(x) for x in a), frac(b)) for a, b in pairs)
        return cls(dim, ineqs)

    def contains(self, x: Sequence) -> bool:
        return all(dot(a, x) >= b for a, b in self.inequalities)

    def intersect(self, other: "Polyhedron") -> "Polyhedron":
        return Polyhedron(self.dim, self.inequalities + other.inequalities)

    def feasible(self) -> FeasibilityResult:
        return lp_feasible(self)

    def vrep(self) -> VRep:
        return vertex_enumeration(self)


def lp_feasible(P: Polyhedron) -> FeasibilityResult:
    G = [list(a) for a, _ in P.inequalities]
    h = [b for _, b in P.inequalities]
    return feasible_point(G, h, P.dim)


def cone_extreme_rays(C: Sequence[Sequence], dim: int) -> tuple[list[tuple[int, ...]], list[tuple[int, ...]]]:
    """Extreme rays and lineality basis of ``{y in Q^dim : C y >= 0}``.

    Double description with rows inserted in their given order; extreme
    rays are returned primitive and sorted.
    """
    C = [[frac(x) for x in row] for row in C]
    C = [row for row in C if any(x != 0 for x in row)]
    lineality = kernel(C, dim) if C else [[Fraction(int(i == j)) for j in range(dim)] for i in range(dim)]
    lines = sorted(primitive(v) for v in lineality)
    if len(lineality) == dim:
        return [], lines
    if lineality:
        # restrict to the orthogonal complement of the lineality space
        Q = kernel([list(v) for v in lineality], dim)
        Qt = transpose(Q)  # dim x k
        Cq = [mat_vec(Q, row) for row in C]
        rays_z, _ = cone_extreme_rays(Cq, len(Q))
        rays = sorted({primitive(mat_vec(Qt, r)) for r in rays_z})
        return rays, lines
    return _dd_pointed(C, dim), lines


def _dd_pointed(C: list[list[Fraction]], dim: int) -> list[tuple[int, ...]]:
    chosen: list[int] = []
    for i in range(len(C)):
        if rank([C[j] for j in chosen] + [C[i]]) > len(chosen):
            chosen.append(i)
        if len(chosen) == dim:
            break
    Binv = inverse([C[i] for i in chosen])
    rays = []
    for j in range(dim):
        col = [Binv[i][j] for i in range(dim)]
        rays.append((list(primitive(col)), frozenset(chosen[k] for k in range(dim) if k != j)))
    for i in range(len(C)):
        if i in chosen:
            continue
        row = C[i]
        pos, neg, zero = [], [], []
        for r in rays:
            s = dot(row, r[0])
            if s > 0:
                pos.append((r, s))
            elif s < 0:
                neg.append((r, s))
            else:
                zero.append(r)
        if not neg:
            rays = [r for r, _ in pos] + [(v, z | {i}) for v, z in zero]
            continue
        new = []
        everything = [r for r, _ in pos] + [r for r, _ in neg] + zero
        for (rp, sp), (rn, sn) in ((p, q) for p in pos for q in neg):
            common = rp[1] & rn[1]
            if len(common) < dim - 2:
                continue
            if any(common <= other[1] for other in everything if other is not rp and other is not rn):
                continue
            v = [sp * b - sn * a for a, b in zip(rp[0], rn[0])]
            new.append((list(primitive(v)), common | {i}))
        rays = [r for r, _ in pos] + [(v, z | {i}) for v, z in zero] + new
    out = {tuple(v) for v, _ in rays}
    return sorted(out)


def vertex_enumeration(P: Polyhedron) -> VRep:
    """V-representation (vertices, recession rays, lineality) of ``P``."""
    d = P.dim
    if d == 0:
        ok = all(b <= 0 for _, b in P.inequalities)
        return VRep(((),) if ok else (), ())
    rows = [list(a) + [-b] for a, b in P.inequalities]
    rows.append([Fraction(0)] * d + [Fraction(1)])
    rays, lines = cone_extreme_rays(rows, d + 1)
    verts, recs = [], []
    for r in rays:
        if r[-1] > 0:
            verts.append(tuple(Fraction(x, r[-1]) for x in r[:-1]))
        else:
            recs.append(tuple(r[:-1]))
    if lines:
        # lines of the homogenised cone have x0 = 0; a base point is still needed
        if not verts:
            pt = lp_feasible(P)
            if pt.feasible:
                verts.append(_project_off(pt.point, lines))
    if not verts:
        return VRep((), (), ())
    return VRep(tuple(sorted(set(verts))), tuple(sorted(set(recs))), tuple(tuple(l[:-1]) for l in lines))


def _project_off(x, lines):
    L = [list(l[:-1]) for l in lines]
    x = list(x)
    G = [[dot(a, b) for b in L] for a in L]
    rhs = [dot(a, x) for a in L]
    coef = mat_vec(inverse(G), rhs)
    return tuple(xi - sum(c * l[i] for c, l in zip(coef, L)) for i, xi in enumerate(x))


def cone_hrep(rays: Sequence[Sequence[int]], n: int) -> tuple[list[tuple[int, ...]], list[tuple[int, ...]]]:
    """Facet normals and equations of cone(rays): ``<m, x> >= 0`` and ``<e, x> = 0``."""
    if not rays:
        eqs = [tuple(int(i == j) for j in range(n)) for i in range(n)]
        return [], eqs
    ineqs, eqs = cone_extreme_rays([list(r) for r in rays], n)
    return ineqs, eqs


def in_cone(x: Sequence, hrep) -> bool:
    ineqs, eqs = hrep
    return all(dot(m, x) >= 0 for m in ineqs) and all(dot(e, x) == 0 for e in eqs)


def in_relative_interior(x: Sequence, hrep) -> bool:
    ineqs, eqs = hrep
    return all(dot(m, x) > 0 for m in ineqs) and all(dot(e, x) == 0 for e in eqs)


def cone_dimension(rays: Sequence[Sequence[int]]) -> int:
    return rank(rays) if rays else 0


def is_extreme_generator(v: Sequence[int], others: Sequence[Sequence[int]]) -> bool:
    """True when v is not a nonnegative combination of the other generators."""
    others = [o for o in others if primitive(o) != primitive(v)]
    if not others:
        return True
    n = len(v)
    # lambda >= 0 with sum lambda_i o_i = v
    pairs = []
    for j, _ in enumerate(others):
        pairs.append(([int(i == j) for i in range(len(others))], 0))
    for k in range(n):
        row = [o[k] for o in others]
        pairs.append((row, v[k]))
        pairs.append(([-x for x in row], -v[k]))
    return not lp_feasible(Polyhedron.from_pairs(len(others), pairs)).feasible


# --- planar geometry ------------------------------------------------------

P2 = tuple[Fraction, Fraction]


def cross(o: P2, a: P2, b: P2) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull_2d(points) -> list[P2]:
    """Counter-clockwise hull without collinear points (monotone chain)."""
    pts = sorted(set((frac(p[0]), frac(p[1])) for p in points))
    if len(pts) <= 2:
        return pts
    lower: list[P2] = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[P2] = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) == 2 and hull[0] == hull[1]:
        return hull[:1]
    return hull


def polygon_area(poly: Sequence[P2]) -> Fraction:
    if len(poly) < 3:
        return Fraction(0)
    s = Fraction(0)
    for i in range(len(poly)):
        x1, y1 = poly[i]
        x2, y2 = poly[(i + 1) % len(poly)]
        s += x1 * y2 - x2 * y1
    return abs(s) / 2


def centroid_of_vertices(poly: Sequence[P2]) -> P2:
    k = len(poly)
    return (sum((p[0] for p in poly), Fraction(0)) / k, sum((p[1] for p in poly), Fraction(0)) / k)


Line = tuple[Fraction, Fraction, Fraction]  # a*x + b*y + c = 0


def line_value(line: Line, p: P2) -> Fraction:
    return line[0] * p[0] + line[1] * p[1] + line[2]


def normalize_line(line) -> Optional[tuple[int, int, int]]:
    a, b, c = (frac(x) for x in line)
    if a == 0 and b == 0:
        return None
    v = primitive((a, b, c))
    # orientation: first nonzero of (a, b) positive
    if v[0] < 0 or (v[0] == 0 and v[1] < 0):
        v = tuple(-x for x in v)
    return v


def clip_halfplane(poly: Sequence[P2], line: Line, keep_positive: bool = True) -> list[P2]:
    """Part of a convex polygon where ``sign * line >= 0`` (Sutherland-Hodgman)."""
    sgn = 1 if keep_positive else -1
    out: list[P2] = []
    k = len(poly)
    if k == 0:
        return out
    if k == 1:
        return list(poly) if sgn * line_value(line, poly[0]) >= 0 else []
    for i in range(k):
        p, q = poly[i], poly[(i + 1) % k]
        vp, vq = sgn * line_value(line, p), sgn * line_value(line, q)
        if vp >= 0:
            out.append(p)
        if (vp > 0 and vq < 0) or (vp < 0 and vq > 0):
            t = vp / (vp - vq)
            out.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
    return convex_hull_2d(out) if len(out) >= 3 else _dedupe(out)


def _dedupe(pts):
    seen = []
    for p in pts:
        if p not in seen:
            seen.append(p)
    return seen


def polygon_from_polyhedron(P: Polyhedron) -> list[P2]:
    if P.dim != 2:
        raise ValueError("expected a planar region")
    v = vertex_enumeration(P)
    if v.rays or v.lines:
        raise ValueError("region must be bounded")
    return convex_hull_2d(v.vertices)


def halfplanes_of_polygon(poly: Sequence[P2]) -> list[Line]:
    """Lines ``l`` with ``l >= 0`` on the (counter-clockwise, 2D) polygon."""
    out = []
    k = len(poly)
    for i in range(k):
        (x1, y1), (x2, y2) = poly[i], poly[(i + 1) % k]
        a, b = -(y2 - y1), (x2 - x1)
        out.append((a, b, -(a * x1 + b * y1)))
    return out


def point_in_polygon(p: P2, poly: Sequence[P2], strict: bool = False) -> bool:
    if len(poly) >= 3:
        vals = [line_value(l, p) for l in halfplanes_of_polygon(poly)]
        return all(v > 0 for v in vals) if strict else all(v >= 0 for v in vals)
    if strict:
        return False
    if len(poly) == 1:
        return p == poly[0]
    if len(poly) == 2:
        a, b = poly
        if cross(a, b, p) != 0:
            return False
        return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])
    return False


def convex_intersection(A: Sequence[P2], B: Sequence[P2]) -> list[P2]:
    """Intersection of two convex sets given by vertices (points, segments or polygons)."""
    pairs = _hrep_2d(A) + _hrep_2d(B)
    v = vertex_enumeration(Polyhedron.from_pairs(2, pairs))
    return convex_hull_2d(v.vertices)


def _hrep_2d(poly: Sequence[P2]):
    poly = convex_hull_2d(poly)
    if len(poly) >= 3:
        return [((a, b), -c) for a, b, c in halfplanes_of_polygon(poly)]
    if len(poly) == 2:
        (x1, y1), (x2, y2) = poly
        a, b = -(y2 - y1), (x2 - x1)
        c = -(a * x1 + b * y1)
        dx, dy = x2 - x1, y2 - y1
        return [((a, b), -c), ((-a, -b), c),
                ((dx, dy), dx * x1 + dy * y1), ((-dx, -dy), -(dx * x2 + dy * y2))]
    if len(poly) == 1:
        x, y = poly[0]
        return [((1, 0), x), ((-1, 0), -x), ((0, 1), y), ((0, -1), -y)]
    return [((0, 0), 1)]


def affine_dimension(points) -> int:
    pts = list(points)
    if not pts:
        return -1
    base = pts[0]
    diffs = [[a - b for a, b in zip(p, base)] for p in pts[1:]]
    diffs = [d for d in diffs if any(x != 0 for x in d)]
    return rank(diffs) if diffs else 0


@dataclass
class Arrangement:
    """Planar cell complex cut out of a convex region by lines.

    ``cells`` are counter-clockwise vertex-index lists, ``edges`` are sorted
    vertex-index pairs, and ``edge_cells`` records which cells share an edge.
    """

    vertices: list[P2]
    edges: list[tuple[int, int]]
    cells: list[list[int]]
    edge_cells: dict[tuple[int, int], list[int]] = field(default_factory=dict)
    boundary_edges: set = field(default_factory=set)
    boundary_vertices: set = field(default_factory=set)

    def cell_polygon(self, c: int) -> list[P2]:
        return [self.vertices[i] for i in self.cells[c]]

    def cell_sample(self, c: int) -> P2:
        return centroid_of_vertices(self.cell_polygon(c))

    def edge_sample(self, e: tuple[int, int]) -> P2:
        a, b = self.vertices[e[0]], self.vertices[e[1]]
        return ((a[0] + b[0]) / 2, (a[1] + b[1]) / 2)

    def interior_edges(self) -> list[tuple[int, int]]:
        return [e for e in self.edges if e not in self.boundary_edges]

    def interior_vertices(self) -> list[int]:
        return [i for i in range(len(self.vertices)) if i not in self.boundary_vertices]


def _on_segment(p: P2, a: P2, b: P2) -> bool:
    return p != a and p != b and cross(a, b, p) == 0 and \
        min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])


def line_arrangement_2d(lines: Sequence, region) -> Arrangement:
    """Subdivide a bounded convex region by rational lines ``a x + b y + c = 0``."""
    if isinstance(region, Polyhedron):
        poly = polygon_from_polyhedron(region)
    else:
        poly = convex_hull_2d(region)
    uniq = sorted({n for n in (normalize_line(l) for l in lines) if n is not None})
    uniq_f = [tuple(Fraction(x) for x in l) for l in uniq]
    if len(poly) < 3:
        return _degenerate_arrangement(poly, uniq_f)
    cells = [poly]
    for line in uniq_f:
        nxt = []
        for cell in cells:
            vals = [line_value(line, p) for p in cell]
            if any(v > 0 for v in vals) and any(v < 0 for v in vals):
                nxt.append(clip_halfplane(cell, line, True))
                nxt.append(clip_halfplane(cell, line, False))
            else:
                nxt.append(cell)
        cells = nxt
    vertices = sorted({p for c in cells for p in c})
    index = {p: i for i, p in enumerate(vertices)}
    region_lines = halfplanes_of_polygon(poly)
    edge_cells: dict[tuple[int, int], list[int]] = {}
    cell_idx = []
    for ci, cell in enumerate(cells):
        ring = []
        for k in range(len(cell)):
            a, b = cell[k], cell[(k + 1) % len(cell)]
            inner = sorted((p for p in vertices if _on_segment(p, a, b)),
                           key=lambda p: (p[0] - a[0]) ** 2 + (p[1] - a[1]) ** 2)
            chain = [a] + inner
            ring.extend(index[p] for p in chain)
            chain.append(b)
            for p, q in zip(chain, chain[1:]):
                e = tuple(sorted((index[p], index[q])))
                edge_cells.setdefault(e, []).append(ci)
        cell_idx.append(ring)
    edges = sorted(edge_cells)
    boundary_vertices = {i for i, p in enumerate(vertices)
                         if any(line_value(l, p) == 0 for l in region_lines)}
    boundary_edges = {e for e in edges if len(edge_cells[e]) == 1}
    return Arrangement(vertices, edges, cell_idx, edge_cells, boundary_edges, boundary_vertices)


def _degenerate_arrangement(poly, lines) -> Arrangement:
    if not poly:
        return Arrangement([], [], [])
    if len(poly) == 1:
        return Arrangement(list(poly), [], [], {}, set(), {0})
    a, b = poly
    pts = {a, b}
    for line in lines:
        va, vb = line_value(line, a), line_value(line, b)
        if (va > 0 > vb) or (va < 0 < vb):
            t = va / (va - vb)
            pts.add((a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])))
    vertices = sorted(pts)
    edges = [(i, i + 1) for i in range(len(vertices) - 1)]
    return Arrangement(vertices, edges, [], {e: [] for e in edges}, set(edges), set(range(len(vertices))))
