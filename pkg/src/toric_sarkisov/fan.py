"""Fans, toric models, fan morphisms and structural predicates."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Optional, Sequence

from .exact import (
    FeasibilityResult,
    check_farkas,
    det,
    dot,
    hermite_form,
    identity,
    integer_kernel,
    kernel,
    mat_vec,
    primitive,
    rank,
    solve_linear,
)
from .polyhedra import (
    Polyhedron,
    cone_extreme_rays,
    cone_hrep,
    in_cone,
    in_relative_interior,
    is_extreme_generator,
    lp_feasible,
)

Ray = tuple[int, ...]


class FanError(ValueError):
    pass


@dataclass(frozen=True)
class Fan:
    """A rational fan stored by its maximal cones.

    ``cones`` holds sorted tuples of indices into ``rays``.  Faces are derived
    on demand.
    """

    rank: int
    rays: tuple[Ray, ...]
    cones: tuple[tuple[int, ...], ...]

    @classmethod
    def make(cls, rays, cones, rank: Optional[int] = None) -> "Fan":
        rays = tuple(tuple(int(x) for x in r) for r in rays)
        if rank is None:
            if not rays:
                raise FanError("rank must be given for a fan without rays")
            rank = len(rays[0])
        cones = tuple(sorted({tuple(sorted(int(i) for i in c)) for c in cones}))
        return cls(rank, rays, cones)

    @classmethod
    def point(cls) -> "Fan":
        return cls(0, (), ((),))

    def canonical(self) -> "Fan":
        """Same fan with rays sorted lexicographically and unused rays dropped."""
        used = sorted({i for c in self.cones for i in c}, key=lambda i: self.rays[i])
        remap = {old: new for new, old in enumerate(used)}
        return Fan.make([self.rays[i] for i in used],
                        [[remap[i] for i in c] for c in self.cones], self.rank)

    @cached_property
    def key(self) -> frozenset:
        return frozenset(frozenset(self.rays[i] for i in c) for c in self.cones)

    @cached_property
    def ray_index(self) -> dict[Ray, int]:
        return {r: i for i, r in enumerate(self.rays)}

    def cone_rays(self, cone: Sequence[int]) -> list[Ray]:
        return [self.rays[i] for i in cone]

    @cached_property
    def hreps(self) -> tuple:
        return tuple(cone_hrep(self.cone_rays(c), self.rank) for c in self.cones)

    @cached_property
    def walls(self) -> dict[frozenset, tuple[int, ...]]:
        """Codimension-one faces of full-dimensional maximal cones -> cones containing them."""
        out: dict[frozenset, list[int]] = {}
        for ci, cone in enumerate(self.cones):
            if rank(self.cone_rays(cone)) != self.rank:
                continue
            ineqs, _ = self.hreps[ci]
            for m in ineqs:
                face = frozenset(i for i in cone if dot(m, self.rays[i]) == 0)
                out.setdefault(face, []).append(ci)
        return {w: tuple(cs) for w, cs in sorted(out.items(), key=lambda kv: sorted(kv[0]))}

    def interior_walls(self) -> list[frozenset]:
        return [w for w, cs in self.walls.items() if len(cs) == 2]

    def relation(self, wall: frozenset) -> tuple[int, ...]:
        """Primitive wall relation over all rays, positive on the two non-wall rays.

        Only defined for walls between two simplicial cones.
        """
        cs = self.walls[wall]
        if len(cs) != 2:
            raise FanError("boundary wall has no wall curve")
        a_cone, b_cone = (self.cones[c] for c in cs)
        extra_a = [i for i in a_cone if i not in wall]
        extra_b = [i for i in b_cone if i not in wall]
        if len(extra_a) != 1 or len(extra_b) != 1 or len(wall) != self.rank - 1:
            raise FanError("divisor not R-Cartier on non-simplicial cone")
        idx = sorted(wall) + [extra_a[0], extra_b[0]]
        cols = [[self.rays[i][k] for i in idx] for k in range(self.rank)]
        ker = kernel(cols, len(idx))
        if len(ker) != 1:
            raise FanError("wall relation is not unique")
        c = primitive(ker[0])
        if c[-1] < 0:
            c = tuple(-x for x in c)
        full = [0] * len(self.rays)
        for i, x in zip(idx, c):
            full[i] = x
        return tuple(full)

    @cached_property
    def wall_relations(self) -> dict[frozenset, tuple[int, ...]]:
        return {w: self.relation(w) for w in self.interior_walls()}

    def to_dict(self) -> dict:
        return {"rank": self.rank, "rays": [list(r) for r in self.rays],
                "max_cones": [list(c) for c in self.cones]}


@dataclass(frozen=True)
class ToricModel:
    """A toric variety X(fan) together with the lattice map from the base lattice."""

    fan: Fan
    lattice_map: tuple[tuple[int, ...], ...]

    @classmethod
    def birational(cls, fan: Fan) -> "ToricModel":
        return cls(fan, tuple(map(tuple, identity(fan.rank))))

    @property
    def dim(self) -> int:
        return self.fan.rank

    @cached_property
    def key(self) -> tuple:
        return (self.lattice_map, self.fan.key)

    def is_birational_to_base(self) -> bool:
        n = len(self.lattice_map[0]) if self.lattice_map else 0
        return self.fan.rank == n and self.lattice_map == tuple(map(tuple, identity(n)))

    def same_as(self, other: "ToricModel") -> bool:
        return self.key == other.key


# --- validation and predicates ---------------------------------------------

@dataclass
class FanDiagnostics:
    valid: bool
    problems: list[str] = field(default_factory=list)
    violating_pair: Optional[tuple[int, int]] = None


def validate_fan(f: Fan) -> FanDiagnostics:
    problems = []
    for i, r in enumerate(f.rays):
        if len(r) != f.rank:
            problems.append(f"ray {i} has wrong length")
        elif all(x == 0 for x in r):
            problems.append(f"ray {i} is zero")
        elif primitive(r) != r:
            problems.append(f"ray {i} is not primitive")
    if len(set(f.rays)) != len(f.rays):
        problems.append("rays are not distinct")
    used = {i for c in f.cones for i in c}
    if f.rank and used != set(range(len(f.rays))):
        problems.append("some ray lies in no maximal cone")
    if problems:
        return FanDiagnostics(False, problems)
    for ci, cone in enumerate(f.cones):
        rays = f.cone_rays(cone)
        if not _strongly_convex(rays, f.rank):
            return FanDiagnostics(False, [f"cone {ci} is not strongly convex"])
        for i, r in zip(cone, rays):
            if not is_extreme_generator(r, [x for x in rays if x != r]):
                return FanDiagnostics(False, [f"ray {i} is not extremal in cone {ci}"])
    for a, b in combinations(range(len(f.cones)), 2):
        ok, why = _meets_in_face(f, f.cones[a], f.cones[b])
        if not ok:
            return FanDiagnostics(False, [f"cones {a} and {b}: {why}"], (a, b))
    return FanDiagnostics(True)


def _strongly_convex(rays, n) -> bool:
    if not rays:
        return True
    # lambda >= 0, sum lambda = 1, sum lambda v = 0 must be infeasible
    k = len(rays)
    pairs = [([int(i == j) for i in range(k)], 0) for j in range(k)]
    pairs.append(([1] * k, 1))
    pairs.append(([-1] * k, -1))
    for t in range(n):
        row = [r[t] for r in rays]
        pairs.append((row, 0))
        pairs.append(([-x for x in row], 0))
    return not lp_feasible(Polyhedron.from_pairs(k, pairs)).feasible


def _is_face(f: Fan, cone, sub) -> bool:
    """Whether cone(sub) is a face of cone(cone): some m >= 0 vanishes exactly on sub."""
    if set(sub) == set(cone):
        return True
    n = f.rank
    pairs = []
    for i in cone:
        r = f.rays[i]
        if i in sub:
            pairs.append((r, 0))
            pairs.append(([-x for x in r], 0))
        else:
            pairs.append((r, 1))
    return lp_feasible(Polyhedron.from_pairs(n, pairs)).feasible


def _meets_in_face(f: Fan, c1, c2) -> tuple[bool, str]:
    common = sorted(set(c1) & set(c2))
    h1 = f.hreps[f.cones.index(tuple(c1))]
    h2 = f.hreps[f.cones.index(tuple(c2))]
    rows = [list(m) for m in h1[0] + h2[0]]
    for e in h1[1] + h2[1]:
        rows.append(list(e))
        rows.append([-x for x in e])
    rays, lines = cone_extreme_rays(rows, f.rank)
    if lines:
        return False, "intersection contains a line"
    common_prims = {f.rays[i] for i in common}
    for r in rays:
        if r not in common_prims:
            return False, "intersection is not a face of each"
    if not (_is_face(f, c1, common) and _is_face(f, c2, common)):
        return False, "shared rays do not span a common face"
    return True, ""


def is_complete(f: Fan) -> bool:
    if f.rank == 0:
        return True
    if not f.cones:
        return False
    if any(rank(f.cone_rays(c)) != f.rank for c in f.cones):
        return False
    return all(len(cs) == 2 for cs in f.walls.values())


def is_simplicial(f: Fan) -> bool:
    return all(len(c) == rank(f.cone_rays(c)) for c in f.cones if c)


def is_maximal_simplicial(f: Fan) -> bool:
    return all(len(c) == f.rank and rank(f.cone_rays(c)) == f.rank for c in f.cones)


@dataclass(frozen=True)
class ProjectivityCertificate:
    support_values: Optional[tuple[Fraction, ...]]
    farkas: Optional[tuple[Fraction, ...]]

    @property
    def projective(self) -> bool:
        return self.support_values is not None


def is_projective(f: Fan) -> ProjectivityCertificate:
    """Find divisor coefficients whose support function is strictly convex across every wall."""
    if not is_complete(f):
        raise FanError("projectivity test needs a complete fan")
    if not is_maximal_simplicial(f):
        raise FanError("projectivity test needs a simplicial fan")
    nrays = len(f.rays)
    if f.rank == 0:
        return ProjectivityCertificate((), None)
    rels = list(f.wall_relations.values())
    if not rels:
        return ProjectivityCertificate(tuple(Fraction(1) for _ in range(nrays)), None)
    res: FeasibilityResult = lp_feasible(Polyhedron.from_pairs(nrays, [(c, 1) for c in rels]))
    if res.feasible:
        vals = res.point
        assert all(dot(c, vals) > 0 for c in rels)
        return ProjectivityCertificate(vals, None)
    assert check_farkas(rels, [1] * len(rels), res.farkas)
    return ProjectivityCertificate(None, res.farkas)


def picard_number(X) -> int:
    """Rank of the group of Cartier classes: piecewise-linear functions modulo linear ones."""
    f = X.fan if isinstance(X, ToricModel) else X
    n = f.rank
    if n == 0:
        return 0
    if is_maximal_simplicial(f):
        return len(f.rays) - n
    # unknowns: m_sigma for each max cone; agreement on shared rays
    k = len(f.cones)
    rows = []
    for a, b in combinations(range(k), 2):
        for i in set(f.cones[a]) & set(f.cones[b]):
            row = [Fraction(0)] * (n * k)
            for t in range(n):
                row[a * n + t] = Fraction(f.rays[i][t])
                row[b * n + t] = -Fraction(f.rays[i][t])
            rows.append(row)
    dim_pl = n * k - (rank(rows) if rows else 0)
    return dim_pl - n


# --- morphisms ------------------------------------------------------------

@dataclass(frozen=True)
class FanMorphism:
    source: ToricModel
    target: ToricModel
    lattice_map: tuple[tuple[int, ...], ...]

    @property
    def kind(self) -> str:
        if self.source.dim == self.target.dim and self.lattice_map == tuple(map(tuple, identity(self.source.dim))):
            return "refinement"
        if self.source.dim > self.target.dim:
            return "projection"
        return "mixed"

    @property
    def birational(self) -> bool:
        return self.kind == "refinement"

    @property
    def exceptional_rays(self) -> list[Ray]:
        """Rays of the source that are not rays of the target (contracted divisors)."""
        if not self.birational:
            return []
        tgt = set(self.target.fan.rays)
        return [r for r in self.source.fan.rays if r not in tgt]


def relative_lattice_map(source: ToricModel, target: ToricModel) -> Optional[tuple[tuple[int, ...], ...]]:
    """Integer matrix L with target.lattice_map = L * source.lattice_map, if it exists."""
    S = [list(r) for r in source.lattice_map]
    T = [list(r) for r in target.lattice_map]
    if target.dim == 0:
        return ()
    # each row t of T must be an integer combination of the rows of S: t = l S
    St = [[S[i][j] for i in range(len(S))] for j in range(len(S[0]))]
    out = []
    for t in T:
        sol = solve_linear(St, t, len(S))
        if not sol.feasible or any(x.denominator != 1 for x in sol.particular):
            return None
        out.append(tuple(int(x) for x in sol.particular))
    return tuple(out)


def fan_morphism(source: ToricModel, target: ToricModel) -> FanMorphism:
    """Morphism X(source) -> X(target) compatible with both lattice maps; raises if none."""
    L = relative_lattice_map(source, target)
    if L is None:
        raise FanError("lattice maps are not compatible")
    tf = target.fan
    for cone in source.fan.cones:
        imgs = [tuple(mat_vec(L, r)) if L else () for r in source.fan.cone_rays(cone)]
        if tf.rank == 0:
            continue
        if not any(all(in_cone(v, h) for v in imgs) for h in tf.hreps):
            raise FanError("a source cone is not mapped into any target cone")
    return FanMorphism(source, target, L)


def has_morphism(source: ToricModel, target: ToricModel) -> bool:
    try:
        fan_morphism(source, target)
    except FanError:
        return False
    return True


def image_lattice(vectors: Sequence[Sequence[int]], n: int) -> tuple[tuple[int, ...], ...]:
    """Hermite basis of the annihilator {m in M : <m, v> = 0 for all v}: the quotient map."""
    rows = [list(v) for v in vectors if any(x != 0 for x in v)]
    if not rows:
        return tuple(map(tuple, identity(n)))
    basis = integer_kernel(rows, n)
    return tuple(tuple(r) for r in basis)


# --- constructions ----------------------------------------------------------

def placing_triangulation(rays: Sequence[Ray], order: Sequence[int]) -> list[tuple[int, ...]]:
    """Placing triangulation of cone(rays) inserting ray indices in ``order``."""
    simplices: list[tuple[int, ...]] = []
    span: list[int] = []
    for r in order:
        v = rays[r]
        if rank([rays[i] for i in span] + [v]) > len(span):
            simplices = [s + (r,) for s in simplices] if simplices else [(r,)]
            span.append(r)
            continue
        basis = [rays[i] for i in span]
        coords = lambda x: _coords_in_basis(basis, x)
        facet_count: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
        for s in simplices:
            for j in range(len(s)):
                facet = tuple(sorted(s[:j] + s[j + 1:]))
                facet_count.setdefault(facet, []).append(s)
        new = []
        for facet, owners in facet_count.items():
            if len(owners) != 1:
                continue
            s = owners[0]
            opp = next(i for i in s if i not in facet)
            fc = [coords(rays[i]) for i in facet]
            side_r = det(fc + [coords(v)])
            side_o = det(fc + [coords(rays[opp])])
            if side_r != 0 and side_o != 0 and (side_r > 0) != (side_o > 0):
                new.append(tuple(sorted(facet + (r,))))
        simplices.extend(new)
    return sorted(tuple(sorted(s)) for s in simplices)


def _coords_in_basis(basis, x):
    cols = [[b[k] for b in basis] for k in range(len(x))]
    sol = solve_linear(cols, x, len(basis))
    return list(sol.particular)


def common_refinement(A: Fan, B: Fan) -> tuple[Fan, FanMorphism, FanMorphism]:
    if A.rank != B.rank:
        raise FanError("fans live in lattices of different rank")
    n = A.rank
    pieces = []
    for ha in A.hreps:
        for hb in B.hreps:
            rows = [list(m) for m in ha[0] + hb[0]]
            for e in ha[1] + hb[1]:
                rows += [list(e), [-x for x in e]]
            rays, lines = cone_extreme_rays(rows, n)
            if lines or rank(rays) != n:
                continue
            pieces.append(rays)
    all_rays = sorted({r for p in pieces for r in p})
    idx = {r: i for i, r in enumerate(all_rays)}
    cones = []
    for p in pieces:
        ids = sorted(idx[r] for r in p)
        if len(ids) == n:
            cones.append(tuple(ids))
        else:
            cones.extend(placing_triangulation(all_rays, ids))
    W = Fan.make(all_rays, cones, n)
    mW = ToricModel.birational(W)
    return W, fan_morphism(mW, ToricModel.birational(A)), fan_morphism(mW, ToricModel.birational(B))


def star_subdivision(f: Fan, v: Sequence[int]) -> Fan:
    v = tuple(int(x) for x in v)
    if primitive(v) != v:
        raise FanError("subdivision vector must be primitive")
    if v in f.ray_index:
        return f
    containing = [ci for ci, h in enumerate(f.hreps) if in_cone(v, h)]
    if not containing:
        raise FanError("vector lies outside the support of the fan")
    rays = list(f.rays) + [v]
    new_idx = len(rays) - 1
    cones = [c for ci, c in enumerate(f.cones) if ci not in containing]
    for ci in containing:
        cone = f.cones[ci]
        ineqs, _ = f.hreps[ci]
        for m in ineqs:
            face = tuple(i for i in cone if dot(m, f.rays[i]) == 0)
            if dot(m, v) == 0:
                continue
            cones.append(face + (new_idx,))
    return Fan.make(rays, cones, f.rank).canonical()


def contains_in_relative_interior(f: Fan, cone_index: int, x) -> bool:
    return in_relative_interior(x, f.hreps[cone_index])
