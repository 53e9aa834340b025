"""Torus-invariant divisors: Cartier data, positivity, classes and singularities.

A divisor on a fan is its coefficient vector ``d`` aligned with ``fan.rays``.
The support function convention is ``<m_sigma, v_rho> = -d_rho`` on each
maximal cone.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Optional, Sequence

from .exact import dot, frac, integer_kernel, inverse, mat_vec, rank, solve_linear
from .fan import Fan, FanError, FanMorphism, ToricModel, common_refinement
from .polyhedra import Polyhedron, in_cone, vertex_enumeration

Coeffs = tuple[Fraction, ...]


def as_coeffs(d: Sequence) -> Coeffs:
    return tuple(frac(x) for x in d)


def canonical_divisor(f: Fan) -> Coeffs:
    return tuple(Fraction(-1) for _ in f.rays)


def principal_divisor(f: Fan, m: Sequence) -> Coeffs:
    return tuple(frac(dot(m, v)) for v in f.rays)


def _fan(X) -> Fan:
    return X.fan if isinstance(X, ToricModel) else X


@dataclass(frozen=True)
class SupportFunction:
    fan: Fan
    functionals: tuple[tuple[Fraction, ...], ...]  # one m_sigma per max cone

    def __call__(self, u: Sequence) -> Fraction:
        for h, m in zip(self.fan.hreps, self.functionals):
            if in_cone(u, h):
                return dot(m, u)
        raise FanError("point outside the support of the fan")


def support_function(X, d: Sequence) -> SupportFunction:
    f = _fan(X)
    d = as_coeffs(d)
    if len(d) != len(f.rays):
        raise ValueError("coefficient vector does not match the rays")
    ms = []
    for cone in f.cones:
        if not cone:
            ms.append(())
            continue
        if len(cone) != f.rank or rank(f.cone_rays(cone)) != f.rank:
            raise FanError("divisor not R-Cartier on non-simplicial cone")
        A = f.cone_rays(cone)
        ms.append(tuple(mat_vec(inverse(A), [-d[i] for i in cone])))
    return SupportFunction(f, tuple(ms))


def intersection_functional(X, wall: frozenset) -> tuple[Fraction, ...]:
    """Linear functional on coefficient vectors proportional to D . C_wall.

    Equals ``<m_a(D), v_b> + d_b``; this is the wall relation divided by its
    coefficient on ``v_b``.
    """
    f = _fan(X)
    if wall not in f.walls or len(f.walls[wall]) != 2:
        raise FanError("boundary wall has no wall curve")
    c = f.relation(wall)
    b_cone = f.cones[f.walls[wall][1]]
    b = next(i for i in b_cone if i not in wall)
    return tuple(Fraction(x, c[b]) for x in c)


def wall_values(X, d: Sequence) -> dict[frozenset, Fraction]:
    f = _fan(X)
    d = as_coeffs(d)
    return {w: dot(c, d) for w, c in f.wall_relations.items()}


def is_nef(X, d) -> bool:
    return all(v >= 0 for v in wall_values(X, d).values())


def is_ample(X, d) -> bool:
    return all(v > 0 for v in wall_values(X, d).values())


def is_nef_convexity(X, d) -> bool:
    """Nef test through the support function: every m_sigma lies in P_D."""
    f = _fan(X)
    d = as_coeffs(d)
    psi = support_function(f, d)
    return all(dot(m, v) >= -d[i] for m in psi.functionals for i, v in enumerate(f.rays))


def section_polytope(X, d) -> Polyhedron:
    f = _fan(X)
    d = as_coeffs(d)
    return Polyhedron.from_pairs(f.rank, [(v, -di) for v, di in zip(f.rays, d)])


def polytope_dimension(X, d) -> int:
    """Dimension of P_D, or -1 when empty."""
    vr = vertex_enumeration(section_polytope(X, d))
    if vr.empty:
        return -1
    base = vr.vertices[0]
    diffs = [[a - b for a, b in zip(v, base)] for v in vr.vertices[1:]]
    diffs += [list(r) for r in vr.rays]
    return rank(diffs) if diffs else 0


def is_pseudo_effective(X, d) -> bool:
    return section_polytope(X, d).feasible().feasible


def is_big(X, d) -> bool:
    return polytope_dimension(X, d) == _fan(X).rank


@dataclass(frozen=True)
class NumericalClass:
    coords: tuple[Fraction, ...]


def relation_basis(f: Fan) -> list[list[int]]:
    """Integer basis of the relations sum c_rho v_rho = 0 (a copy of N_1)."""
    if not f.rays:
        return []
    cols = [[v[k] for v in f.rays] for k in range(f.rank)]
    return integer_kernel(cols, len(f.rays))


def numerical_class(X, d) -> NumericalClass:
    f = _fan(X)
    d = as_coeffs(d)
    return NumericalClass(tuple(dot(c, d) for c in relation_basis(f)))


def r_linear_equiv(X, d, d2) -> Optional[tuple[Fraction, ...]]:
    """Some m with d2_rho = d_rho + <m, v_rho>, or None."""
    f = _fan(X)
    diff = [b - a for a, b in zip(as_coeffs(d), as_coeffs(d2))]
    sol = solve_linear([list(v) for v in f.rays], diff, f.rank)
    return sol.particular


# --- singularities ----------------------------------------------------------

class PairType(enum.Enum):
    KLT = "klt"
    LC = "lc"
    NOT_CERTIFIED = "not-certified"


def pair_singularity(boundary: Sequence) -> PairType:
    """Coefficient criterion for toric pairs: [0, 1) gives klt, [0, 1] gives lc."""
    coeffs = as_coeffs(boundary)
    if any(c < 0 for c in coeffs):
        raise ValueError("boundary has a negative coefficient")
    if all(c < 1 for c in coeffs):
        return PairType.KLT
    if all(c <= 1 for c in coeffs):
        return PairType.LC
    return PairType.NOT_CERTIFIED


def is_terminal(X) -> bool:
    f = _fan(X)
    for cone in f.cones:
        gens = f.cone_rays(cone)
        if len(gens) != rank(gens):
            raise FanError("terminality check needs simplicial cones")
        if not _simplex_is_empty(gens):
            return False
    return True


def _simplex_is_empty(gens) -> bool:
    """No lattice points in conv(0, gens) other than 0 and the generators."""
    k = len(gens)
    n = len(gens[0]) if gens else 0
    if k == 0:
        return True
    lo = [min(0, *(g[t] for g in gens)) for t in range(n)]
    hi = [max(0, *(g[t] for g in gens)) for t in range(n)]
    genset = set(map(tuple, gens))
    cols = [[g[t] for g in gens] for t in range(n)]
    for u in product(*(range(a, b + 1) for a, b in zip(lo, hi))):
        if not any(u) or u in genset:
            continue
        sol = solve_linear(cols, u, k)
        if not sol.feasible:
            continue
        lam = sol.particular
        if all(x >= 0 for x in lam) and sum(lam) <= 1:
            return False
    return True


# --- comparing divisors across a birational contraction -------------------

@dataclass(frozen=True)
class PullbackComparison:
    pushforward: Coeffs
    refinement: Fan
    difference: dict  # ray of the common refinement -> coefficient of E
    non_positive: bool
    negative: bool

    @property
    def status(self) -> str:
        if self.negative:
            return "D-negative"
        if self.non_positive:
            return "D-non-positive"
        return "neither"


def pushforward(source: Fan, target: Fan, d) -> Coeffs:
    d = as_coeffs(d)
    try:
        return tuple(d[source.ray_index[r]] for r in target.rays)
    except KeyError:
        raise FanError("target has a divisor not present on the source; map is not a birational contraction")


def pullback(source: Fan, target: Fan, d_target) -> Coeffs:
    """Coefficients on the rays of ``source`` of the pullback of a divisor on ``target``."""
    psi = support_function(target, d_target)
    return tuple(-psi(v) for v in source.rays)


def pullback_compare(f, d) -> PullbackComparison:
    """E = p^*D - q^*f_*D on a common refinement of source and target."""
    if isinstance(f, FanMorphism):
        if not f.source.is_birational_to_base() or not f.target.is_birational_to_base():
            raise FanError("map is not birational")
        X, Y = f.source.fan, f.target.fan
    else:
        X, Y = f
    if X.rank != Y.rank:
        raise FanError("map is not birational")
    d = as_coeffs(d)
    push = pushforward(X, Y, d)
    W, _, _ = common_refinement(X, Y)
    psi_x = support_function(X, d)
    psi_y = support_function(Y, push)
    diff = {w: psi_y(w) - psi_x(w) for w in W.rays}
    nonpos = all(v >= 0 for v in diff.values())
    y_rays = set(Y.rays)
    exceptional = [r for r in X.rays if r not in y_rays]
    negative = nonpos and all(diff[r] > 0 for r in exceptional)
    return PullbackComparison(push, W, diff, nonpos, negative)



def pullback_along(m: FanMorphism, d_target) -> Coeffs:
    """Pull a divisor on the target of a fan morphism back to the source rays."""
    if m.target.dim == 0:
        return tuple(Fraction(0) for _ in m.source.fan.rays)
    psi = support_function(m.target.fan, d_target)
    return tuple(-psi(mat_vec(m.lattice_map, v)) for v in m.source.fan.rays)


def support_functional(f: Fan, w: Sequence) -> dict[int, Fraction]:
    """Coefficients c with psi_D(w) = sum_i c_i d_i for every divisor d on f."""
    for cone, h in zip(f.cones, f.hreps):
        if in_cone(w, h):
            A = f.cone_rays(cone)
            if len(cone) != f.rank or rank(A) != f.rank:
                raise FanError("divisor not R-Cartier on non-simplicial cone")
            row = mat_vec([list(r) for r in zip(*inverse(A))], w)
            return {i: -x for i, x in zip(cone, row)}
    raise FanError("point outside the support of the fan")


def discrepancy_functionals(X: Fan, Y: Fan) -> tuple[Fan, dict]:
    """Per ray w of a common refinement, the linear form d -> E_w of ``pullback_compare``."""
    W, _, _ = common_refinement(X, Y)
    out = {}
    for w in W.rays:
        fx = support_functional(X, w)
        fy = support_functional(Y, w)
        row = [Fraction(0)] * len(X.rays)
        for j, c in fy.items():
            row[X.ray_index[Y.rays[j]]] += c
        for i, c in fx.items():
            row[i] -= c
        out[w] = tuple(row)
    return W, out
