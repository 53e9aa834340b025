"""Two-dimensional slices of the space of divisors and their ample-model chambers."""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence

from .divisors import (
    Coeffs,
    as_coeffs,
    discrepancy_functionals,
    is_ample,
    pullback,
    pullback_along,
    pullback_compare,
    pushforward,
)
from .exact import det, dot, feasible_point, frac
from .fan import Fan, FanError, ToricModel, fan_morphism, has_morphism, is_maximal_simplicial, is_projective, picard_number
from .mmp import MMPTrace, ample_model, contracted_walls
from .polyhedra import (
    P2,
    Arrangement,
    Polyhedron,
    affine_dimension,
    clip_halfplane,
    cone_extreme_rays,
    convex_hull_2d,
    convex_intersection,
    halfplanes_of_polygon,
    line_arrangement_2d,
    line_value,
    normalize_line,
    polygon_area,
    polygon_from_polyhedron,
)


class SliceError(RuntimeError):
    """A slice failed one of its required properties; carries the failed checks."""

    def __init__(self, message: str, failures: Optional[list] = None, slice_: Optional["GeographySlice"] = None):
        super().__init__(message)
        self.failures = failures or []
        self.slice = slice_


def _model(X) -> ToricModel:
    return X if isinstance(X, ToricModel) else ToricModel.birational(X)


def effective_dual(Z) -> list[tuple[int, ...]]:
    """Extreme rays of {y >= 0 : sum y_rho v_rho = 0}; D is pseudo-effective iff y.d >= 0 for all of them."""
    f = _model(Z).fan
    k = len(f.rays)
    rows = [[int(i == j) for j in range(k)] for i in range(k)]
    for t in range(f.rank):
        col = [v[t] for v in f.rays]
        rows += [col, [-x for x in col]]
    rays, lines = cone_extreme_rays(rows, k)
    if lines:
        raise FanError("effective cone dual is not pointed")
    return sorted(rays)


def divisor_at(origin: Sequence, u: Sequence, w: Sequence, p: P2) -> Coeffs:
    s, t = p
    return tuple(o + s * a + t * b for o, a, b in zip(origin, u, w))


def candidate_lines(f: Fan, origin, u, w) -> list[tuple[int, int, int]]:
    """Loci where n+1 of the hyperplanes <m, v_rho> = -d_rho(s, t) acquire a common point."""
    n = f.rank
    out = set()
    for sub in combinations(range(len(f.rays)), n + 1):
        cof = []
        for pos in range(n + 1):
            minor = [f.rays[i] for k, i in enumerate(sub) if k != pos]
            cof.append((-1) ** (pos + n) * det(minor))
        if all(c == 0 for c in cof):
            continue
        a = sum(c * u[i] for c, i in zip(cof, sub))
        b = sum(c * w[i] for c, i in zip(cof, sub))
        c0 = sum(c * origin[i] for c, i in zip(cof, sub))
        line = normalize_line((a, b, c0))
        if line is not None:
            out.add(line)
    return sorted(out)


@dataclass(frozen=True)
class Chamber:
    id: int
    model: ToricModel
    dimension: int
    closure: tuple[P2, ...]          # convex hull; lower-dimensional chambers can be disconnected
    strata: tuple[tuple, ...]        # ("cell", i), ("edge", (a, b)) or ("vertex", i)
    sample: P2
    big: bool
    interior: bool                   # meets the interior of B
    adjacency: tuple[int, ...] = ()

    @property
    def key(self):
        return self.model.key


@dataclass(frozen=True)
class GeographySlice:
    base: ToricModel
    origin: Coeffs
    directions: tuple[Coeffs, Coeffs]
    region: tuple[P2, ...]           # B
    effective: tuple[P2, ...]        # E(B)
    arrangement: Arrangement
    chambers: tuple[Chamber, ...]
    stratum_chamber: dict            # stratum -> chamber id
    stratum_models: dict             # stratum -> AmpleModel
    nonbig: tuple[tuple, ...]        # strata of L
    notes: dict = field(default_factory=dict)

    def divisor(self, p: P2) -> Coeffs:
        return divisor_at(self.origin, self.directions[0], self.directions[1], p)

    def on_region_boundary(self, p: P2) -> bool:
        if len(self.region) < 3:
            return True
        return any(line_value(l, p) == 0 for l in halfplanes_of_polygon(self.region))

    def chamber_of_model(self, model: ToricModel) -> Optional[Chamber]:
        for c in self.chambers:
            if c.key == model.key:
                return c
        return None

    def stratum_sample(self, s) -> P2:
        kind, ref = s
        if kind == "cell":
            return self.arrangement.cell_sample(ref)
        if kind == "edge":
            return self.arrangement.edge_sample(ref)
        return self.arrangement.vertices[ref]

    def stratum_closure(self, s) -> list[P2]:
        kind, ref = s
        if kind == "cell":
            return self.arrangement.cell_polygon(ref)
        if kind == "edge":
            return [self.arrangement.vertices[i] for i in ref]
        return [self.arrangement.vertices[ref]]

    def effective_area(self) -> Fraction:
        return polygon_area(list(self.effective))


def region_polygon(halfplanes: Sequence) -> list[P2]:
    """Bounded polygon {a s + b t + c >= 0} from coefficient triples."""
    P = Polyhedron.from_pairs(2, [((frac(a), frac(b)), -frac(c)) for a, b, c in halfplanes])
    return polygon_from_polyhedron(P)


def _strata(arr: Arrangement) -> list[tuple]:
    return ([("cell", i) for i in range(len(arr.cells))] + [("edge", e) for e in arr.edges]
            + [("vertex", i) for i in range(len(arr.vertices))])


def _ample_model_task(args):
    fan, d = args
    return ample_model(fan, d)


def chamber_decomposition(Z, origin, u, w, region, jobs: int = 1) -> GeographySlice:
    """Decompose E(B) for the slice d(s, t) = origin + s u + t w over the polygon ``region``."""
    Zm = _model(Z)
    f = Zm.fan
    try:
        origin, u, w = as_coeffs(origin), as_coeffs(u), as_coeffs(w)
    except TypeError as exc:
        raise ValueError(f"slice parametrization must be rational: {exc}") from None
    if not (len(origin) == len(u) == len(w) == len(f.rays)):
        raise ValueError("slice parametrization does not match the rays")
    B = convex_hull_2d(region)
    E = list(B)
    for y in effective_dual(f):
        line = (sum(c * x for c, x in zip(y, u)), sum(c * x for c, x in zip(y, w)),
                sum(c * x for c, x in zip(y, origin)))
        if line[0] == 0 and line[1] == 0:
            if line[2] < 0:
                E = []
            continue
        E = clip_halfplane(E, line, True)
    E = convex_hull_2d(E) if E else []
    arr = line_arrangement_2d(candidate_lines(f, origin, u, w), E) if E else Arrangement([], [], [])
    strata = _strata(arr)
    tmp = GeographySlice(Zm, origin, (u, w), tuple(B), tuple(E), arr, (), {}, {}, ())
    points = [tmp.stratum_sample(s) for s in strata]
    tasks = [(Zm, divisor_at(origin, u, w, p)) for p in points]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            models = list(ex.map(_ample_model_task, tasks, chunksize=8))
    else:
        models = [_ample_model_task(t) for t in tasks]
    n = f.rank
    groups: dict = {}
    order = []
    for s, am in zip(strata, models):
        k = am.model.key
        if k not in groups:
            groups[k] = []
            order.append(k)
        groups[k].append(s)
    by_key = {am.model.key: am for am in models}
    stratum_models = dict(zip(strata, models))
    nonbig = tuple(s for s, am in zip(strata, models) if am.polytope_dim < n)
    proto = []
    for cid, k in enumerate(order):
        ss = groups[k]
        pts = set()
        dim = 0
        for s in ss:
            kind, ref = s
            if kind == "cell":
                pts.update(arr.cell_polygon(ref))
                dim = max(dim, 2)
            elif kind == "edge":
                pts.update(arr.vertices[i] for i in ref)
                dim = max(dim, 1)
            else:
                pts.add(arr.vertices[ref])
        closure = tuple(convex_hull_2d(pts))
        top = [s for s in ss if _stratum_dim(s) == dim]
        inner = [s for s in top if not tmp.on_region_boundary(tmp.stratum_sample(s))]
        sample = tmp.stratum_sample((inner or top)[0])
        interior = any(not tmp.on_region_boundary(tmp.stratum_sample(s)) for s in ss)
        proto.append(Chamber(cid, by_key[k].model, dim, closure, tuple(ss), sample,
                             by_key[k].polytope_dim == n, interior))
    adj = {c.id: [] for c in proto}
    for a, b in combinations(proto, 2):
        if _closures_meet(tmp, a, b) >= 0:
            adj[a.id].append(b.id)
            adj[b.id].append(a.id)
    chambers = tuple(Chamber(c.id, c.model, c.dimension, c.closure, c.strata, c.sample, c.big,
                             c.interior, tuple(sorted(adj[c.id]))) for c in proto)
    stratum_chamber = {s: c.id for c in chambers for s in c.strata}
    return GeographySlice(Zm, origin, (u, w), tuple(B), tuple(E), arr, chambers,
                          stratum_chamber, stratum_models, nonbig)


def _stratum_dim(s) -> int:
    return {"cell": 2, "edge": 1, "vertex": 0}[s[0]]


def _closures_meet(slice_: GeographySlice, a: Chamber, b: Chamber) -> int:
    """Dimension of the intersection of the closures, -1 when empty, computed stratum by stratum."""
    best = -1
    for sa in a.strata:
        pa = slice_.stratum_closure(sa)
        for sb in b.strata:
            best = max(best, affine_dimension(convex_intersection(pa, slice_.stratum_closure(sb))))
    return best


def chamber_is_convex(slice_: GeographySlice, c: Chamber) -> bool:
    arr = slice_.arrangement
    if c.dimension == 2:
        cells = [s[1] for s in c.strata if s[0] == "cell"]
        return polygon_area(list(c.closure)) == sum(polygon_area(arr.cell_polygon(i)) for i in cells)
    if c.dimension == 1:
        if affine_dimension(c.closure) != 1:
            return False
        # collinear edges cover the hull exactly when their projections add up
        axis = 0 if c.closure[0][0] != c.closure[-1][0] else 1
        edges = [slice_.stratum_closure(s) for s in c.strata if s[0] == "edge"]
        return sum(abs(p[axis] - q[axis]) for p, q in edges) == abs(c.closure[0][axis] - c.closure[-1][axis])
    return len(c.closure) == 1


# --- structural checks ---------------------------------------------------------

@dataclass
class SpanPicardReport:
    span: list = field(default_factory=list)      # (chamber id, ok, reason)
    picard: list = field(default_factory=list)    # (i, j, rho difference, dim difference, ok)

    @property
    def ok(self) -> bool:
        return all(e[1] for e in self.span) and all(e[-1] for e in self.picard)

    def failures(self) -> list:
        return [e for e in self.span if not e[1]] + [e for e in self.picard if not e[-1]]


def _strata_inside(slice_: GeographySlice, j: Chamber, i: Chamber) -> list:
    """Strata of A_j lying in C_i away from the boundary of B; their union is A_j meet C_i there."""
    closure = list(i.closure)
    out = []
    for s in j.strata:
        p = slice_.stratum_sample(s)
        if not slice_.on_region_boundary(p) and convex_intersection(closure, [p]):
            out.append(s)
    return out


def verify_span_picard(slice_: GeographySlice) -> SpanPicardReport:
    rep = SpanPicardReport()
    for c in slice_.chambers:
        bir = c.model.is_birational_to_base() and c.model.dim == slice_.base.dim
        simp = c.model.dim == 0 or is_maximal_simplicial(c.model.fan)
        if c.dimension == 2:
            rep.span.append((c.id, bir and simp, "" if bir and simp else "two-dimensional chamber with a "
                             + ("non-birational" if not bir else "non-simplicial") + " model"))
        elif c.interior:
            rep.span.append((c.id, not (bir and simp), "" if not (bir and simp)
                             else "lower-dimensional chamber with a birational simplicial model"))
    rho = {c.id: picard_number(c.model) for c in slice_.chambers}
    for i in slice_.chambers:
        if i.dimension != 2:
            continue
        for j in slice_.chambers:
            inside = [] if j.id == i.id else _strata_inside(slice_, j, i)
            if not inside:
                continue
            lhs = rho[i.id] - rho[j.id]
            rhs = 2 - max(_stratum_dim(s) for s in inside)
            ok = has_morphism(i.model, j.model) and lhs == rhs
            rep.picard.append((i.id, j.id, lhs, rhs, ok))
    return rep


# --- the non-big arc -------------------------------------------------------------

@dataclass(frozen=True)
class ArcVertex:
    vertex: int
    incoming: tuple[int, int]
    outgoing: tuple[int, int]


def _boundary_cycle(arr: Arrangement) -> list[int]:
    nbrs: dict[int, list[int]] = {}
    for a, b in sorted(arr.boundary_edges):
        nbrs.setdefault(a, []).append(b)
        nbrs.setdefault(b, []).append(a)
    if not nbrs:
        return []
    start = min(nbrs)
    cyc, prev, cur = [start], None, start
    while True:
        nxt = [x for x in sorted(nbrs[cur]) if x != prev]
        if not nxt:
            break
        prev, cur = cur, nxt[0]
        if cur == start:
            break
        cyc.append(cur)
    return cyc


def _interior_edge_of(slice_: GeographySlice, c: Chamber, side: Optional[Chamber] = None) -> tuple[int, int]:
    """A boundary edge of ``c`` inside B, next to a cell of ``side`` when that is given."""
    for s in c.strata:
        if s[0] == "edge" and s[1] in slice_.arrangement.boundary_edges \
                and not slice_.on_region_boundary(slice_.stratum_sample(s)):
            if side is None or any(slice_.stratum_chamber[("cell", x)] == side.id
                                   for x in slice_.arrangement.edge_cells[s[1]]):
                return s[1]
    raise SliceError("chamber has no boundary edge inside B", [("chamber", c.id)])


def nonbig_boundary_arc(slice_: GeographySlice, start: Chamber, end: Chamber,
                        start_side: Optional[Chamber] = None, end_side: Optional[Chamber] = None) -> list[ArcVertex]:
    """Vertices of the part of the boundary of E(B) inside L that runs from ``start`` to ``end``.

    A one-dimensional chamber can border several two-dimensional ones; ``start_side`` and
    ``end_side`` pin the ends of the arc to the edges next to those chambers.
    """
    e0 = _interior_edge_of(slice_, start, start_side)
    e1 = _interior_edge_of(slice_, end, end_side)
    if e0 == e1 or (start.id == end.id and start_side is None and end_side is None):
        return []
    arr = slice_.arrangement
    cyc = _boundary_cycle(arr)
    m = len(cyc)
    pos = {}
    for k in range(m):
        pos[tuple(sorted((cyc[k], cyc[(k + 1) % m])))] = k
    k0, k1 = pos[e0], pos[e1]
    nonbig = set(slice_.nonbig)
    for step in (1, -1):
        verts, edges = [], []
        k = k0
        while k != k1:
            if step == 1:
                v = cyc[(k + 1) % m]
                nk = (k + 1) % m
            else:
                v = cyc[k]
                nk = (k - 1) % m
            verts.append(v)
            edges.append(tuple(sorted((cyc[nk], cyc[(nk + 1) % m]))))
            k = nk
        inside = all(("vertex", v) in nonbig for v in verts) and all(("edge", e) in nonbig for e in edges[:-1])
        if inside:
            out = []
            prev = e0
            for v, nxt in zip(verts, edges):
                out.append((v, prev, nxt))
                prev = nxt
            return _link_vertices(slice_, out)
    raise SliceError("slice violates property (5)", [("arc", start.id, end.id)])


def _link_vertices(slice_: GeographySlice, walk) -> list[ArcVertex]:
    """Keep the arc vertices where the boundary model or the set of 2-dim chambers changes."""
    out = []
    for v, inc, outg in walk:
        cin = slice_.stratum_chamber[("edge", inc)]
        cout = slice_.stratum_chamber[("edge", outg)]
        if cin != cout or len(chambers_at_vertex(slice_, v)) > 1:
            out.append(ArcVertex(v, inc, outg))
    return out


def chambers_at_vertex(slice_: GeographySlice, v: int) -> list[int]:
    arr = slice_.arrangement
    cells = {c for e, cs in arr.edge_cells.items() if v in e for c in cs}
    return sorted({slice_.stratum_chamber[("cell", c)] for c in cells})


# --- slice construction ------------------------------------------------------------

def _ample_on(X: ToricModel, d) -> bool:
    if X.dim == 0:
        return True
    return is_ample(X.fan, d)


def _certificate(X: ToricModel) -> Coeffs:
    cert = is_projective(X.fan)
    if not cert.projective:
        raise FanError("model is not projective")
    return tuple(cert.support_values)


def _base_ample(trace: MMPTrace) -> Coeffs:
    """C ample on the base with -D_X + phi^* C ample on X."""
    X, S, dX = trace.model, trace.base, trace.final_divisor
    if S.dim == 0:
        if not _ample_on(X, [-x for x in dX]):
            raise SliceError("anti-divisor is not ample over a point")
        return ()
    A = _certificate(S)
    m = fan_morphism(X, S)
    lam = Fraction(1)
    for _ in range(64):
        C = tuple(lam * a for a in A)
        cand = [-x + y for x, y in zip(dX, pullback_along(m, C))]
        if _ample_on(X, cand):
            return C
        lam *= 2
    raise SliceError("no ample class on the base makes the relative anti-divisor ample")


def _rand_small(rng: random.Random, q: int) -> Fraction:
    return Fraction(rng.randint(1, q), q * q)


@dataclass(frozen=True)
class SliceProperties:
    checks: dict

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def failures(self) -> list:
        return [k for k, v in self.checks.items() if not v]


def slice_properties(slice_: GeographySlice, D, trace_f: MMPTrace, trace_g: MMPTrace) -> SliceProperties:
    """Exact checks of the five required properties of a slice."""
    Zf = slice_.base.fan
    d = as_coeffs(D)
    checks = {}
    E = list(slice_.effective)
    checks["1_ample_difference"] = bool(E) and all(
        is_ample(Zf, [a - b for a, b in zip(slice_.divisor(p), d)]) for p in E)
    cf = slice_.chamber_of_model(trace_f.base)
    cg = slice_.chamber_of_model(trace_g.base)
    checks["2_mfs_chambers_inside"] = bool(cf and cg and cf.interior and cg.interior)
    xf = slice_.chamber_of_model(trace_f.model)
    xg = slice_.chamber_of_model(trace_g.model)
    checks["3_models_two_dimensional"] = bool(xf and xg and xf.dimension == 2 and xg.dimension == 2)
    checks["4_mfs_chambers_one_dimensional"] = bool(cf and cg and cf.dimension == 1 and cg.dimension == 1)
    checks["5_nonbig_connected"] = _nonbig_connected(slice_)
    return SliceProperties(checks)


def _nonbig_connected(slice_: GeographySlice) -> bool:
    arr = slice_.arrangement
    verts = {s[1] for s in slice_.nonbig if s[0] == "vertex"}
    edges = [s[1] for s in slice_.nonbig if s[0] == "edge"]
    if any(s[0] == "cell" for s in slice_.nonbig):
        return False
    if not verts:
        return False
    parent = {v: v for v in verts}

    def find(a):
        while parent[a] != a:
            a = parent[a]
        return a

    for a, b in edges:
        if a in parent and b in parent:
            parent[find(a)] = find(b)
    return len({find(v) for v in verts}) == 1


class _HyperplaneData:
    """Ample generators, base classes and the two pulled-back tops of the construction."""

    def __init__(self, Zm: ToricModel, d: Coeffs, trace_f: MMPTrace, trace_g: MMPTrace):
        f = Zm.fan
        r = len(f.rays)
        A = _certificate(Zm)
        c = Fraction(1)
        while True:
            Hs = [tuple(c * a + (1 if j == i else 0) for j, a in enumerate(A)) for i in range(r)]
            if all(is_ample(f, h) for h in Hs):
                break
            c *= 2
        bases = [(tr, _base_ample(tr), fan_morphism(tr.model, tr.base)) for tr in (trace_f, trace_g)]
        Hsum = tuple(sum(h[j] for h in Hs) for j in range(r))
        eps = Fraction(1)
        for _ in range(64):
            H = tuple(eps * x for x in Hsum)
            if all(_ample_on(tr.model, self._top(f, tr, C, m, H)) and
                   pullback_compare((f, tr.model.fan), [a + b for a, b in zip(d, H)]).negative
                   for tr, C, m in bases):
                break
            eps /= 2
        else:
            raise SliceError("could not find a small multiple of H keeping the maps negative")
        self.scale, self.eps, self.generators = c, eps, Hs
        self.tops = [pullback(f, tr.model.fan, self._top(f, tr, C, m, H)) for tr, C, m in bases]

    @staticmethod
    def _top(f: Fan, tr: MMPTrace, C, m, H) -> Coeffs:
        """-f_*D - f_*H + phi^*C on the model of the trace."""
        X = tr.model
        hX = pushforward(f, X.fan, H)
        pc = pullback_along(m, C) if C else tuple(Fraction(0) for _ in X.fan.rays)
        return tuple(-a - b + e for a, b, e in zip(tr.final_divisor, hX, pc))


def mfs_anchor(Z, D, trace: MMPTrace) -> Optional[Coeffs]:
    """An ample A on Z such that the ample model of D + A is the Mori fiber space of ``trace``.

    Solved exactly as a linear feasibility problem: A is ample on Z, the map to
    the model is (D + A)-negative, and the pushed-forward divisor is trivial on
    the fibres and positive on every other wall curve.
    """
    Zm = _model(Z)
    f = Zm.fan
    d = as_coeffs(D)
    X, S = trace.model, trace.base
    r = len(f.rays)
    _, disc = discrepancy_functionals(f, X.fan)
    exceptional = set(f.rays) - set(X.fan.rays)
    fibres = set(contracted_walls(X, S))
    dX = pushforward(f, X.fan, d)
    for tau in (Fraction(1), Fraction(1, 8), Fraction(1, 64)):
        G, h = [], []
        for c in f.wall_relations.values():
            G.append(list(c))
            h.append(tau)
        for w, row in disc.items():
            G.append(list(row))
            h.append((tau if w in exceptional else 0) - dot(row, d))
        for wall, c in X.fan.wall_relations.items():
            row = [0] * r
            for j, x in enumerate(c):
                row[f.ray_index[X.fan.rays[j]]] = x
            base = dot(c, dX)
            if wall in fibres:
                G += [row, [-x for x in row]]
                h += [-base, base]
            else:
                G.append(row)
                h.append(tau - base)
        res = feasible_point(G, h, r)
        if not res.feasible:
            continue
        A = tuple(res.point)
        if ample_model(Zm, [a + b for a, b in zip(d, A)]).model.key == S.key:
            return A
    return None


def _construction_plane(data: _HyperplaneData, r: int, rng: random.Random, q: int, a: Fraction):
    eps = data.eps
    gens = data.generators + data.tops
    alpha = [eps] * r + [Fraction(1), Fraction(0)]
    beta = [eps] * r + [Fraction(0), Fraction(1)]
    alpha = [x + _rand_small(rng, q) for x in alpha]
    beta = [x + _rand_small(rng, q) for x in beta]
    u = tuple(sum(al * g[j] for al, g in zip(alpha, gens)) for j in range(r))
    w = tuple(sum(be * g[j] for be, g in zip(beta, gens)) for j in range(r))
    halfplanes = [(al, be, 0) for al, be in zip(alpha, beta)]
    halfplanes.append((-sum(alpha), -sum(beta), a))
    return u, w, region_polygon(halfplanes)


def _anchor_plane(f: Fan, anchors, rng: random.Random, q: int, a: Fraction):
    """Plane through D spanned by perturbed anchors, cut to a cone of ample classes."""
    u = tuple(x + _rand_small(rng, q) * (1 + abs(x)) for x in anchors[0])
    w = tuple(x + _rand_small(rng, q) * (1 + abs(x)) for x in anchors[1])
    eta = Fraction(1, 4)
    while not (is_ample(f, [x - eta * y for x, y in zip(u, w)]) and
               is_ample(f, [y - eta * x for x, y in zip(u, w)])):
        eta /= 2
        if eta < Fraction(1, 2 ** 40):
            raise SliceError("anchors do not span a cone of ample classes")
    return u, w, region_polygon([(1, eta, 0), (eta, 1, 0), (-1, -1, a)])


def build_slice(Z, D, trace_f: MMPTrace, trace_g: MMPTrace, seed: int = 0,
                retries: int = 8, q: int = 97, jobs: int = 1) -> GeographySlice:
    """Construct a rational two-dimensional slice with the five required properties.

    The plane first follows the proof construction (ample generators plus the
    two pulled-back tops).  When a run contains flips the pulled-back top need
    not be nef and property (1) can fail; the remaining attempts then use
    exact ample anchors from ``mfs_anchor``.
    """
    Zm = _model(Z)
    f = Zm.fan
    d = as_coeffs(D)
    for tr in (trace_f, trace_g):
        if not tr.is_mfs:
            raise SliceError("trace does not end in a Mori fiber space")
    r = len(f.rays)
    rng = random.Random(seed)
    data = _HyperplaneData(Zm, d, trace_f, trace_g)
    mode = "construction"
    anchors = None
    a_con = 2 * (1 + r * data.eps)
    a_anc = Fraction(4)
    failures = []
    for attempt in range(retries):
        if mode == "construction":
            u, w, region = _construction_plane(data, r, rng, q, a_con)
        else:
            u, w, region = _anchor_plane(f, anchors, rng, q, a_anc)
        sl = chamber_decomposition(Zm, d, u, w, region, jobs=jobs)
        props = slice_properties(sl, d, trace_f, trace_g)
        span = verify_span_picard(sl)
        if props.ok and span.ok:
            notes = {"seed": seed, "attempt": attempt, "mode": mode, "epsilon": data.eps}
            return GeographySlice(sl.base, sl.origin, sl.directions, sl.region, sl.effective, sl.arrangement,
                                  sl.chambers, sl.stratum_chamber, sl.stratum_models, sl.nonbig, notes)
        failures.append({"attempt": attempt, "mode": mode, "properties": props.failures(),
                         "span_picard": span.failures()})
        if mode == "construction" and "1_ample_difference" in props.failures():
            anchors = (mfs_anchor(Zm, d, trace_f), mfs_anchor(Zm, d, trace_g))
            if None in anchors:
                raise SliceError("no ample anchor reaches a Mori fiber space chamber", failures)
            mode = "anchors"
        elif "2_mfs_chambers_inside" in props.failures():
            a_con *= 2
            a_anc *= 2
        q = q * 2 + 1
    raise SliceError("slice construction exhausted its retries", failures)


def generic_slice(Z, seed: int = 0, q: int = 101, jobs: int = 1, origin=None) -> GeographySlice:
    """A seeded random rational slice through an ample class reaching past the pseudo-effective cone.

    With ``origin`` given the plane passes through it and, up to a small
    perturbation, through an ample class.
    """
    Zm = _model(Z)
    f = Zm.fan
    rng = random.Random(seed)
    r = len(f.rays)
    A = _certificate(Zm)

    def rand_vec():
        return tuple(Fraction(rng.randint(-q, q), q) for _ in range(r))

    if origin is None:
        u, w = rand_vec(), rand_vec()
        origin = tuple(a + x / 8 for a, x in zip(A, rand_vec()))
        size = 4 * (1 + max(abs(x) for x in A))
    else:
        origin = as_coeffs(origin)
        u = tuple(a - o + x / 8 for a, o, x in zip(A, origin, rand_vec()))
        w = rand_vec()
        size = Fraction(4)
    region = [(-size, -size), (size, -size), (size, size), (-size, size)]
    return chamber_decomposition(Zm, origin, u, w, region, jobs=jobs)
