"""The D-MMP on simplicial projective toric varieties, plus ample models."""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import lcm
from typing import Callable, Optional, Sequence, Union

from .divisors import (
    Coeffs,
    as_coeffs,
    is_nef,
    pullback_compare,
    pushforward,
    section_polytope,
    wall_values,
)
from .exact import dot, mat_mul, mat_vec, primitive, rank, saturated_span
from .fan import (
    Fan,
    FanError,
    ToricModel,
    fan_morphism,
    image_lattice,
    is_maximal_simplicial,
    is_projective,
    picard_number,
    validate_fan,
)
from .polyhedra import in_cone, in_relative_interior, is_extreme_generator, vertex_enumeration


class EngineError(RuntimeError):
    """Internal inconsistency; carries the offending fan when there is one."""

    def __init__(self, message: str, fan: Optional[Fan] = None):
        super().__init__(message)
        self.fan = fan


def _model(X) -> ToricModel:
    return X if isinstance(X, ToricModel) else ToricModel.birational(X)


# --- Mori cone -------------------------------------------------------------

@dataclass(frozen=True)
class ExtremalRay:
    relation: tuple[int, ...]      # primitive class, aligned with the source rays
    walls: tuple[frozenset, ...]   # every wall whose curve lies in this class

    @property
    def wall(self) -> frozenset:
        return self.walls[0]

    def degree(self, d: Sequence) -> Fraction:
        return dot(self.relation, as_coeffs(d))

    @property
    def j_plus(self) -> tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.relation) if c > 0)

    @property
    def j_minus(self) -> tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.relation) if c < 0)


def wall_classes(X) -> dict[tuple[int, ...], list[frozenset]]:
    f = _model(X).fan
    classes: dict[tuple[int, ...], list[frozenset]] = {}
    for w, c in f.wall_relations.items():
        classes.setdefault(primitive(c), []).append(w)
    return classes


def mori_cone(X) -> list[ExtremalRay]:
    """Extremal rays of the cone of curves, each with its walls."""
    f = _model(X).fan
    if not is_maximal_simplicial(f):
        raise FanError("divisor not R-Cartier on non-simplicial cone")
    classes = wall_classes(f)
    gens = list(classes)
    out = []
    for g in gens:
        if is_extreme_generator(g, [h for h in gens if h != g]):
            out.append(ExtremalRay(g, tuple(classes[g])))
    return out


# --- contractions ------------------------------------------------------------

@dataclass(frozen=True)
class ContractionStep:
    kind: str                      # "divisorial", "small", "flip" or "fiber"
    ray: ExtremalRay
    source: ToricModel
    target: ToricModel             # for small steps a non-simplicial fan
    divisor: Optional[Coeffs] = None   # the divisor on the source when the step was taken
    flipped: Optional[ToricModel] = None

    @property
    def relation(self) -> tuple[int, ...]:
        return self.ray.relation

    @property
    def result(self) -> ToricModel:
        return self.flipped if self.kind == "flip" else self.target


def _components(f: Fan, walls) -> list[list[int]]:
    parent = list(range(len(f.cones)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for w in walls:
        a, b = f.walls[w]
        parent[find(a)] = find(b)
    groups: dict[int, list[int]] = {}
    for ci in range(len(f.cones)):
        groups.setdefault(find(ci), []).append(ci)
    return list(groups.values())


def _merge(f: Fan, walls) -> Fan:
    """Glue maximal cones across the given walls and keep the extreme rays of each union."""
    cones = []
    for comp in _components(f, walls):
        ids = sorted({i for ci in comp for i in f.cones[ci]})
        vecs = [f.rays[i] for i in ids]
        cones.append([i for i, v in zip(ids, vecs) if is_extreme_generator(v, [u for u in vecs if u != v])])
    used = sorted({i for c in cones for i in c})
    remap = {old: new for new, old in enumerate(used)}
    return Fan.make([f.rays[i] for i in used], [[remap[i] for i in c] for c in cones], f.rank)


def _quotient_fan(f: Fan, span_rays: Sequence[Sequence[int]]) -> tuple[Fan, tuple]:
    Q = image_lattice(span_rays, f.rank)
    k = len(Q)
    if k == 0:
        return Fan.point(), ()
    cones = set()
    for c in f.cones:
        imgs = {primitive(mat_vec(Q, f.rays[i])) for i in c if any(mat_vec(Q, f.rays[i]))}
        imgs = sorted(imgs)
        if len(imgs) < k or rank(imgs) != k:
            continue
        ext = [v for v in imgs if is_extreme_generator(v, [u for u in imgs if u != v])]
        cones.add(frozenset(ext))
    rays = sorted({v for c in cones for v in c})
    idx = {v: i for i, v in enumerate(rays)}
    return Fan.make(rays, [[idx[v] for v in c] for c in cones], k), Q


def contract(X, R: ExtremalRay, check_extremal: bool = True) -> ContractionStep:
    X = _model(X)
    f = X.fan
    if check_extremal:
        if R.relation not in {e.relation for e in mori_cone(X)}:
            raise FanError("class is not an extremal ray of the Mori cone")
    jm = R.j_minus
    if not jm:
        S, Q = _quotient_fan(f, [f.rays[i] for i in R.j_plus])
        lm = _int_rows(mat_mul(Q, X.lattice_map)) if Q else ()
        return ContractionStep("fiber", R, X, ToricModel(S, lm))
    Y = _merge(f, R.walls)
    kind = "divisorial" if len(jm) == 1 else "small"
    return ContractionStep(kind, R, X, ToricModel(Y, X.lattice_map))


def flip(X, step: ContractionStep) -> ToricModel:
    """Swap the triangulation of the circuit cone: cones omitting a J+ ray become cones omitting a J- ray."""
    if step.kind != "small":
        raise FanError("only small contractions can be flipped")
    X = _model(X)
    f = X.fan
    c = step.relation
    J = {i for i, x in enumerate(c) if x != 0}
    jm = [i for i, x in enumerate(c) if x < 0]
    affected = set()
    for w in step.ray.walls:
        affected.update(f.walls[w])
    rests = {tuple(sorted(set(f.cones[ci]) - J)) for ci in affected}
    cones = [cn for ci, cn in enumerate(f.cones) if ci not in affected]
    for K in rests:
        for j in jm:
            cones.append(tuple(sorted((J - {j}) | set(K))))
    Y = Fan.make(f.rays, cones, f.rank)
    diag = validate_fan(Y)
    if not diag.valid:
        raise EngineError("flip produced an invalid fan", Y)
    neg = tuple(-x for x in c)
    flipped_walls = [w for w, r in Y.wall_relations.items() if primitive(r) == neg]
    if not flipped_walls:
        raise EngineError("flipped fan has no wall in the opposite class", Y)
    return ToricModel(Y, X.lattice_map)


# --- the MMP loop -----------------------------------------------------------

Strategy = Union[str, Callable[[ToricModel, list, Coeffs], ExtremalRay]]


def _canonical_key(f: Fan, R: ExtremalRay):
    return tuple(sorted((f.rays[i], c) for i, c in enumerate(R.relation) if c))


def prefer_kind(*kinds: str) -> Callable:
    """Strategy choosing the first D-negative ray whose contraction type is listed earliest."""

    def choose(X: ToricModel, rays: list, d: Coeffs) -> ExtremalRay:
        def rank_of(R):
            jm = len(R.j_minus)
            kind = "fiber" if jm == 0 else "divisorial" if jm == 1 else "small"
            return (kinds.index(kind) if kind in kinds else len(kinds), _canonical_key(X.fan, R))
        return min(rays, key=rank_of)

    return choose


@dataclass(frozen=True)
class MMPTrace:
    start: ToricModel
    divisor: Coeffs
    steps: tuple[ContractionStep, ...]
    outcome: str                       # "minimal_model" or "mori_fiber_space"
    model: ToricModel                  # last model reached before any fiber contraction
    final_divisor: Coeffs
    base: Optional[ToricModel] = None

    @property
    def birational_steps(self) -> tuple[ContractionStep, ...]:
        return tuple(s for s in self.steps if s.kind != "fiber")

    @property
    def is_mfs(self) -> bool:
        return self.outcome == "mori_fiber_space"


def run_mmp(Z, D, strategy: Strategy = "deterministic-lex", seed: int = 0,
            max_steps: int = 10_000) -> MMPTrace:
    Z = _model(Z)
    d = as_coeffs(D)
    if len(d) != len(Z.fan.rays):
        raise ValueError("coefficient vector does not match the rays")
    rng = random.Random(seed)
    X, steps = Z, []
    for _ in range(max_steps):
        if not is_projective(X.fan).projective:
            raise EngineError("intermediate model is not projective", X.fan)
        neg = sorted((R for R in mori_cone(X) if R.degree(d) < 0), key=lambda R: _canonical_key(X.fan, R))
        if not neg:
            return MMPTrace(Z, as_coeffs(D), tuple(steps), "minimal_model", X, d)
        if strategy == "deterministic-lex":
            R = neg[0]
        elif strategy == "seeded-random":
            R = rng.choice(neg)
        elif callable(strategy):
            R = strategy(X, neg, d)
        else:
            raise ValueError(f"unknown strategy {strategy!r}")
        step = replace(contract(X, R, check_extremal=False), divisor=d)
        if step.kind == "fiber":
            steps.append(step)
            return MMPTrace(Z, as_coeffs(D), tuple(steps), "mori_fiber_space", X, d, step.target)
        if step.kind == "small":
            Y = flip(X, step)
            step = replace(step, kind="flip", flipped=Y)
        steps.append(step)
        Y = step.result
        d = pushforward(X.fan, Y.fan, d)
        X = Y
    raise EngineError(f"MMP did not terminate within {max_steps} steps", X.fan)


# --- verification -------------------------------------------------------------

@dataclass
class MMPReport:
    clauses: dict = field(default_factory=dict)
    details: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(self.clauses.values())

    def record(self, name: str, ok: bool, detail: str = "") -> None:
        self.clauses[name] = self.clauses.get(name, True) and bool(ok)
        if not ok:
            self.details.append(f"{name}: {detail}" if detail else name)


def contracted_walls(X: ToricModel, S: ToricModel) -> list[frozenset]:
    """Walls of X whose curves map to points of S."""
    f = X.fan
    m = fan_morphism(X, S)
    out = []
    for w in f.interior_walls():
        if S.dim == 0:
            out.append(w)
            continue
        p = [sum(f.rays[i][k] for i in w) for k in range(f.rank)]
        img = mat_vec(m.lattice_map, p)
        if any(in_relative_interior(img, h) for h in S.fan.hreps):
            out.append(w)
    return out


def verify_mfs(X: ToricModel, d: Sequence, S: ToricModel, report: MMPReport) -> None:
    try:
        contracted = contracted_walls(X, S)
        report.record("morphism", True)
    except FanError as exc:
        report.record("morphism", False, str(exc))
        return
    vals = wall_values(X, d)
    report.record("minus_d_relatively_ample", bool(contracted) and all(vals[w] < 0 for w in contracted),
                  "some contracted curve is not D-negative")
    report.record("relative_picard_one", picard_number(X) - picard_number(S) == 1,
                  f"rho(X) - rho(S) = {picard_number(X) - picard_number(S)}")
    report.record("dimension_drop", S.dim < X.dim, f"dim S = {S.dim}, dim X = {X.dim}")


def verify_output(trace: MMPTrace) -> MMPReport:
    """Re-check every clause of the reached outcome independently of the loop."""
    rep = MMPReport()
    Z, d = trace.start, trace.divisor
    cur = Z
    for i, s in enumerate(trace.birational_steps):
        rep.record("chained", s.source.same_as(cur), f"step {i} does not start at the previous model")
        if s.kind == "flip":
            before = s.divisor
            rep.record("flip_sign", dot(s.relation, before) < 0, f"step {i}: flipped class not D-negative")
            Y = s.flipped.fan
            neg = tuple(-x for x in s.relation)
            new = [w for w, r in Y.wall_relations.items() if primitive(r) == neg]
            rep.record("flip_sign", bool(new) and all(dot(Y.wall_relations[w], before) > 0 for w in new),
                       f"step {i}: flipped class not D-positive")
            rep.record("flip_isomorphic_in_codim_one", set(Y.rays) == set(s.source.fan.rays))
        cur = s.result
        cmp = pullback_compare((Z.fan, cur.fan), d)
        rep.record("d_negative", cmp.negative, f"composite to step {i} is {cmp.status}")
    rep.record("chained", cur.same_as(trace.model), "final model does not match the last step")
    dX = pushforward(Z.fan, trace.model.fan, d)
    rep.record("divisor_pushforward", dX == trace.final_divisor)
    if trace.outcome == "minimal_model":
        rep.record("nef", is_nef(trace.model, dX), "pushed-forward divisor is not nef")
    else:
        if trace.base is None:
            rep.record("base_present", False)
        else:
            verify_mfs(trace.model, dX, trace.base, rep)
    return rep


# --- ample models ---------------------------------------------------------------

@dataclass(frozen=True)
class AmpleModel:
    model: ToricModel
    divisor: Coeffs        # ample divisor on the model, aligned with its rays
    polytope_dim: int
    translation: tuple     # point of the section polytope used as origin of its span


def ample_model(Z, D) -> AmpleModel:
    """Normal fan of the section polytope, taken in the lattice dual to its span."""
    Z = _model(Z)
    f = Z.fan
    d = as_coeffs(D)
    vr = vertex_enumeration(section_polytope(f, d))
    if vr.empty:
        raise FanError("not pseudo-effective")
    if vr.rays or vr.lines:
        raise FanError("ample model needs a complete fan")
    verts = sorted(vr.vertices)
    n = f.rank
    diffs = [[a - b for a, b in zip(v, verts[0])] for v in verts[1:]]
    k = rank(diffs) if diffs else 0
    if k == n:
        m0 = tuple(Fraction(0) for _ in range(n))
        Q = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    else:
        m0 = verts[0]
        Q = tuple(tuple(r) for r in saturated_span([_clear(v) for v in diffs], n)) if k else ()
    lm = _int_rows(mat_mul(Q, Z.lattice_map)) if k else ()
    if k == 0:
        return AmpleModel(ToricModel(Fan.point(), ()), (), 0, m0)
    shifted = [d[i] + dot(m0, v) for i, v in enumerate(f.rays)]
    facets: dict[tuple[int, ...], tuple[Fraction, frozenset]] = {}
    for i, v in enumerate(f.rays):
        img = mat_vec(Q, v)
        if not any(img):
            continue
        tight = frozenset(j for j, m in enumerate(verts) if dot(m, v) == -d[i])
        pts = [verts[j] for j in tight]
        if len(pts) < k or (rank([[a - b for a, b in zip(p, pts[0])] for p in pts[1:]]) if len(pts) > 1 else 0) != k - 1:
            continue
        u = primitive(img)
        lam = Fraction(img[next(t for t, x in enumerate(u) if x)], u[next(t for t, x in enumerate(u) if x)])
        facets[u] = (shifted[i] / lam, tight)
    rays = sorted(facets)
    cones = []
    for j in range(len(verts)):
        cones.append([r for r, u in enumerate(rays) if j in facets[u][1]])
    fan = Fan.make(rays, cones, k)
    return AmpleModel(ToricModel(fan, lm), tuple(facets[u][0] for u in rays), k, tuple(m0))


def _int_rows(A) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(x) for x in row) for row in A)


def _clear(v: Sequence[Fraction]) -> list[int]:
    den = 1
    for x in v:
        den = lcm(den, Fraction(x).denominator)
    return [int(x * den) for x in v]
