"""Wall-crossing classification, Sarkisov links at boundary vertices, and full factorizations."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .divisors import Coeffs, as_coeffs, pullback_compare, pushforward, wall_values
from .exact import dot, primitive
from .fan import FanError, FanMorphism, ToricModel, fan_morphism, is_maximal_simplicial, picard_number
from .geography import (
    ArcVertex,
    Chamber,
    GeographySlice,
    SliceError,
    build_slice,
    chambers_at_vertex,
    nonbig_boundary_arc,
    verify_span_picard,
)
from .mmp import EngineError, MMPTrace, contract, contracted_walls, flip, mori_cone
from .polyhedra import P2, cross


class LinkError(RuntimeError):
    """A vertex did not match the case table; the slice should be re-perturbed."""

    def __init__(self, message: str, diagnostics: Optional[dict] = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


# --- flops -------------------------------------------------------------------

@dataclass(frozen=True)
class FlopStep:
    source: ToricModel
    target: ToricModel
    relation: tuple[int, ...]      # flopped class on the source rays
    degree: Fraction               # intersection of the pushed-forward divisor with that class


def flop_between(X: ToricModel, Y: ToricModel, d_base: Coeffs, base_fan) -> FlopStep:
    """Identify Y as the flip of X along one extremal class and record the divisor's degree on it."""
    if set(X.fan.rays) != set(Y.fan.rays):
        raise LinkError("models across a flop wall do not share their rays")
    dX = pushforward(base_fan, X.fan, d_base)
    for R in mori_cone(X):
        if len(R.j_minus) < 2:
            continue
        step = contract(X, R, check_extremal=False)
        if flip(X, step).fan.key == Y.fan.key:
            return FlopStep(X, Y, R.relation, dot(R.relation, dX))
    raise LinkError("no single flip connects the models across a flop wall")


# --- wall crossings --------------------------------------------------------------

WALL_TAGS = {
    "1a-i": "divisorial",
    "1a-ii": "small-contraction-to-nonQfactorial",
    "1b": "mori-fiber",
    "2": "flop",
}


@dataclass(frozen=True)
class WallCrossingKind:
    tag: str
    source: ToricModel
    target: ToricModel
    pi: Union[FanMorphism, FlopStep]
    divisor: Coeffs                # D_X at a relative-interior point of the wall
    trivial: bool                  # pi is D_X-trivial

    @property
    def name(self) -> str:
        return WALL_TAGS[self.tag]


def _edge_on_region_boundary(slice_: GeographySlice, e) -> bool:
    return slice_.on_region_boundary(slice_.arrangement.edge_sample(e))


def _trivial_on_contracted(X: ToricModel, Y: ToricModel, dX) -> bool:
    vals = wall_values(X.fan, dX)
    return all(vals[w] == 0 for w in contracted_walls(X, Y))


def classify_wall(slice_: GeographySlice, cf: Chamber, edge: tuple[int, int],
                  target: Optional[Chamber] = None) -> WallCrossingKind:
    """Classify crossing the edge ``edge`` out of the two-dimensional chamber ``cf``."""
    arr = slice_.arrangement
    edge = tuple(sorted(edge))
    if cf.dimension != 2:
        raise LinkError("wall classification starts from a two-dimensional chamber")
    if edge not in arr.edge_cells:
        raise LinkError("edge is not part of the arrangement")
    if _edge_on_region_boundary(slice_, edge):
        raise LinkError("wall on slice boundary has no classification")
    Zf = slice_.base.fan
    p = arr.edge_sample(edge)
    d = slice_.divisor(p)
    X = cf.model
    dX = pushforward(Zf, X.fan, d)
    own = slice_.chambers[slice_.stratum_chamber[("edge", edge)]]
    cells = arr.edge_cells[edge]
    other = [slice_.stratum_chamber[("cell", c)] for c in cells]
    other = [c for c in other if c != cf.id]
    if target is None:
        if edge in arr.boundary_edges:
            target = own
        elif other:
            target = slice_.chambers[other[0]]
        else:
            raise LinkError("edge does not separate two chambers")
    Y = target.model
    if target.dimension < 2:
        m = fan_morphism(X, Y)
        triv = _trivial_on_contracted(X, Y, dX)
        if edge in arr.boundary_edges and not target.big:
            return WallCrossingKind("1b", X, Y, m, dX, triv)
        return WallCrossingKind("1a-ii", X, Y, m, dX, triv)
    rx, ry = picard_number(X), picard_number(Y)
    if rx == ry:
        fl = flop_between(X, Y, d, Zf)
        return WallCrossingKind("2", X, Y, fl, dX, fl.degree == 0)
    if abs(rx - ry) != 1:
        raise LinkError("Picard numbers across a wall differ by more than one")
    big, small_ = (X, Y) if rx > ry else (Y, X)
    m = fan_morphism(big, small_)
    dbig = pushforward(Zf, big.fan, d)
    return WallCrossingKind("1a-i", big, small_, m, dbig, _trivial_on_contracted(big, small_, dbig))


# --- links -------------------------------------------------------------------------

@dataclass(frozen=True)
class SarkisovLink:
    type: str                              # "I", "II", "III", "IVm" or "IVs"
    case: int                              # 1-7 of the case table
    X: ToricModel
    Y: ToricModel
    S: ToricModel
    T: ToricModel
    R: ToricModel
    X_prime: Optional[ToricModel]
    Y_prime: Optional[ToricModel]
    flops: tuple[FlopStep, ...]
    p: Optional[FanMorphism]
    q: Optional[FanMorphism]
    s: Optional[FanMorphism]
    t: Optional[FanMorphism]
    vertex: P2
    chambers: tuple[int, ...]
    note: str = ""

    @property
    def start(self) -> tuple[ToricModel, ToricModel]:
        return self.X, self.S

    @property
    def end(self) -> tuple[ToricModel, ToricModel]:
        return self.Y, self.T


def _cells_around(slice_: GeographySlice, v: int, inc, outg) -> list[tuple[int, tuple[int, int]]]:
    """Cells around vertex v from the incoming boundary edge to the outgoing one, with crossed edges."""
    arr = slice_.arrangement
    at_v = {e: cs for e, cs in arr.edge_cells.items() if v in e}
    walk = []
    edge = tuple(sorted(inc))
    seen = set()
    while True:
        cells = [c for c in at_v[edge] if c not in seen]
        if not cells:
            break
        c = cells[0]
        seen.add(c)
        nxt = [e for e in at_v if c in at_v[e] and e != edge]
        if len(nxt) != 1:
            raise LinkError("cell does not have exactly two edges at the vertex", {"cell": c})
        walk.append((c, edge))
        edge = nxt[0]
        if edge == tuple(sorted(outg)):
            walk.append((None, edge))
            break
    if not walk or walk[-1][1] != tuple(sorted(outg)):
        raise LinkError("could not walk from the incoming to the outgoing boundary edge")
    return walk


def _relative_rho(A: ToricModel, B: ToricModel) -> int:
    return picard_number(A) - picard_number(B)


def _morphism(a: ToricModel, b: ToricModel) -> FanMorphism:
    try:
        return fan_morphism(a, b)
    except FanError as exc:
        raise LinkError(f"expected morphism is missing: {exc}")


def _is_identity(a: ToricModel, b: ToricModel) -> bool:
    return a.key == b.key


def _is_small(m: FanMorphism) -> bool:
    return m.source.dim == m.target.dim and m.birational and set(m.source.fan.rays) == set(m.target.fan.rays)


def _is_fiber(m: FanMorphism) -> bool:
    return m.target.dim < m.source.dim and _relative_rho(m.source, m.target) == 1


def link_at_vertex(slice_: GeographySlice, av: ArcVertex) -> SarkisovLink:
    arr = slice_.arrangement
    Zf = slice_.base.fan
    v = av.vertex
    vertex = arr.vertices[v]
    walk = _cells_around(slice_, v, av.incoming, av.outgoing)
    seq: list[int] = []
    walls: list[tuple[int, int]] = []
    for c, e in walk[:-1]:
        ch = slice_.stratum_chamber[("cell", c)]
        if not seq or seq[-1] != ch:
            if seq:
                walls.append(e)
            seq.append(ch)
    chs = [slice_.chambers[i] for i in seq]
    k = len(chs)
    if any(c.dimension != 2 for c in chs):
        raise LinkError("a chamber around the vertex is not two-dimensional")
    S = slice_.chambers[slice_.stratum_chamber[("edge", tuple(sorted(av.incoming)))]].model
    T = slice_.chambers[slice_.stratum_chamber[("edge", tuple(sorted(av.outgoing)))]].model
    R = slice_.stratum_models[("vertex", v)].model
    X, Y = chs[0].model, chs[-1].model
    d_dag = slice_.divisor(vertex)
    kinds = [classify_wall(slice_, chs[i], walls[i], chs[i + 1]) for i in range(k - 1)]
    for kd in kinds:
        if not kd.trivial:
            raise LinkError("wall crossing is not trivial for the divisor at the wall")
    phi, psi = _morphism(X, S), _morphism(Y, T)
    for m in (phi, psi):
        if not _is_fiber(m):
            raise LinkError("boundary map is not a Mori fiber structure")
    s, t = _morphism(S, R), _morphism(T, R)
    rxr, ryr = _relative_rho(X, R), _relative_rho(Y, R)
    diag = {"k": k, "rho_X_R": rxr, "rho_Y_R": ryr, "walls": [kd.tag for kd in kinds]}

    def flops_over(idx):
        out = []
        for i in idx:
            kd = kinds[i]
            if kd.tag != "2":
                raise LinkError("horizontal wall is not a flop", diag)
            fl = kd.pi
            pushed = pushforward(Zf, fl.source.fan, d_dag)
            if dot(fl.relation, pushed) != 0:
                raise LinkError("flop is not trivial for the vertex divisor", diag)
            out.append(fl)
        return tuple(out)

    Xp = Yp = None
    p = q = None
    note = ""
    if k == 1:
        case, flops = 1, ()
        note = "single chamber at the vertex"
    elif k == 2:
        tag = kinds[0].tag
        if (rxr, ryr) == (1, 2) and tag == "1a-i":
            case, flops, Xp = 2, (), Y
            p = kinds[0].pi
            note = "two chambers at the vertex"
        elif (rxr, ryr) == (2, 1) and tag == "1a-i":
            case, flops, Yp = 3, (), X
            q = kinds[0].pi
            note = "two chambers at the vertex"
        elif (rxr, ryr) == (2, 2) and tag == "2":
            case, flops = 7, flops_over([0])
            note = "two chambers meeting along a flop wall; treated with the flop-flop case"
        else:
            raise LinkError("two-chamber vertex outside the case table", diag)
    else:
        pk, qk = kinds[0].tag, kinds[-1].tag
        Xp, Yp = chs[1].model, chs[-2].model
        if pk == "1a-i" and qk == "1a-i":
            case = 4
            flops = flops_over(range(1, k - 2))
        elif pk == "1a-i" and qk == "2":
            case = 5
            flops = flops_over(range(1, k - 1))
        elif pk == "2" and qk == "1a-i":
            case = 6
            flops = flops_over(range(0, k - 2))
        elif pk == "2" and qk == "2":
            case = 7
            flops = flops_over(range(0, k - 1))
        else:
            raise LinkError("unexpected wall kinds at a vertex", diag)
        if pk == "1a-i":
            p = kinds[0].pi
            if not (_is_identity(S, R) and p.source.key == Xp.key):
                raise LinkError("divisorial p without identity s", diag)
        if qk == "1a-i":
            q = kinds[-1].pi
            if not (_is_identity(T, R) and q.source.key == Yp.key):
                raise LinkError("divisorial q without identity t", diag)
        for i in range(1, k - 1):
            if _relative_rho(chs[i].model, R) != 2:
                raise LinkError("middle chamber does not have relative Picard number two", diag)
    if case in (2, 5):
        typ = "I"
    elif case in (3, 6):
        typ = "III"
    elif case == 4:
        typ = "II"
    else:
        typ = _split_type_four(R, s, t, diag)
    return SarkisovLink(typ, case, X, Y, S, T, R, Xp, Yp, flops, p, q,
                        None if _is_identity(S, R) else s, None if _is_identity(T, R) else t,
                        vertex, tuple(seq), note)


def _split_type_four(R: ToricModel, s: FanMorphism, t: FanMorphism, diag) -> str:
    simplicial = R.dim == 0 or is_maximal_simplicial(R.fan)
    if simplicial and _is_fiber(s) and _is_fiber(t):
        return "IVm"
    if not simplicial and _is_small(s) and _is_small(t):
        return "IVs"
    raise LinkError("type IV link with maps that are neither fiber structures nor small", diag)


# --- full factorization ------------------------------------------------------------

@dataclass(frozen=True)
class SarkisovChain:
    start: tuple[ToricModel, ToricModel]
    end: tuple[ToricModel, ToricModel]
    links: tuple[SarkisovLink, ...]
    slice: Optional[GeographySlice]
    checks: dict = field(default_factory=dict)

    @property
    def types(self) -> list[str]:
        return [l.type for l in self.links]


def _same_mfs(a: tuple[ToricModel, ToricModel], b: tuple[ToricModel, ToricModel]) -> bool:
    return a[0].key == b[0].key and a[1].key == b[1].key


def factorize(Z, D, trace_f: MMPTrace, trace_g: MMPTrace, seed: int = 0, retries: int = 6,
              jobs: int = 1) -> SarkisovChain:
    """Connect the two Mori fiber space outputs by Sarkisov links read off a two-dimensional slice."""
    if not trace_f.is_mfs or not trace_g.is_mfs:
        raise SliceError("output is a minimal model, no MFS to connect")
    Zm = Z if isinstance(Z, ToricModel) else ToricModel.birational(Z)
    d = as_coeffs(D)
    start = (trace_f.model, trace_f.base)
    end = (trace_g.model, trace_g.base)
    if _same_mfs(start, end):
        return SarkisovChain(start, end, (), None, {"identical": True})
    errors = []
    for attempt in range(retries):
        sl = build_slice(Zm, d, trace_f, trace_g, seed=seed + 1000 * attempt, jobs=jobs)
        try:
            cf = sl.chamber_of_model(trace_f.base)
            cg = sl.chamber_of_model(trace_g.base)
            arc = nonbig_boundary_arc(sl, cf, cg, sl.chamber_of_model(trace_f.model),
                                      sl.chamber_of_model(trace_g.model))
            links = tuple(link_at_vertex(sl, av) for av in arc)
        except (LinkError, SliceError) as exc:
            errors.append(str(exc))
            continue
        checks = _chain_checks(Zm, d, start, end, links)
        if not all(checks.values()):
            raise EngineError(f"factorization failed its consistency checks: {checks}")
        return SarkisovChain(start, end, links, sl, checks)
    raise SliceError("factorization exhausted its slice retries", errors)


def _chain_checks(Z: ToricModel, d, start, end, links) -> dict:
    checks = {"connected": True, "endpoints": True, "mmp_results": True}
    if not links:
        checks["endpoints"] = False
        return checks
    checks["endpoints"] = _same_mfs(links[0].start, start) and _same_mfs(links[-1].end, end)
    for a, b in zip(links, links[1:]):
        if not _same_mfs(a.end, b.start):
            checks["connected"] = False
    for l in links:
        for M in [l.X, l.Y, l.X_prime, l.Y_prime] + [fl.target for fl in l.flops]:
            if M is None:
                continue
            if not pullback_compare((Z.fan, M.fan), d).non_positive:
                checks["mmp_results"] = False
    return checks
