"""Standard small fans used as fixtures and examples."""

from __future__ import annotations

from .fan import Fan


def projective_plane() -> Fan:
    return Fan.make([(1, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2), (0, 2)])


def projective_line() -> Fan:
    return Fan.make([(1,), (-1,)], [(0,), (1,)])


def p1xp1() -> Fan:
    return Fan.make([(1, 0), (0, 1), (-1, 0), (0, -1)], [(0, 1), (1, 2), (2, 3), (0, 3)])


def hirzebruch(a: int) -> Fan:
    """F_a with rays (1,0), (0,1), (-1,a), (0,-1); the ray (0,1) is the negative section."""
    return Fan.make([(1, 0), (0, 1), (-1, a), (0, -1)], [(0, 1), (1, 2), (2, 3), (0, 3)])


def blowup_p2_two_points() -> Fan:
    rays = [(1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1)]
    return Fan.make(rays, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)])


def weighted_p112() -> Fan:
    return Fan.make([(1, 0), (0, 1), (-1, -2)], [(0, 1), (1, 2), (0, 2)])


def p1_cubed() -> Fan:
    rays = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)]
    cones = [(a, b, c) for a in (0, 1) for b in (2, 3) for c in (4, 5)]
    return Fan.make(rays, cones)


# cone over a unit square (the quadric cone) closed off by one more ray
SQUARE = [(0, 0, 1), (1, 0, 1), (1, 1, 1), (0, 1, 1)]
BOTTOM = (-1, -1, -2)


def quadric_cone() -> Fan:
    """Projective cone over P1 x P1: non-simplicial, one square cone."""
    rays = SQUARE + [BOTTOM]
    cones = [(0, 1, 2, 3)] + [(i, (i + 1) % 4, 4) for i in range(4)]
    return Fan.make(rays, cones)


def small_resolution(diagonal: int) -> Fan:
    """Small resolution of the quadric cone: diagonal 0 joins rays 0-2, diagonal 1 joins 1-3."""
    rays = SQUARE + [BOTTOM]
    side = [(i, (i + 1) % 4, 4) for i in range(4)]
    if diagonal == 0:
        top = [(0, 1, 2), (0, 2, 3)]
    else:
        top = [(0, 1, 3), (1, 2, 3)]
    return Fan.make(rays, top + side)


def times_p1(f: Fan) -> Fan:
    """Product of a fan with the fan of P1 (new last coordinate)."""
    n = f.rank
    rays = [tuple(r) + (0,) for r in f.rays] + [(0,) * n + (1,), (0,) * n + (-1,)]
    k = len(f.rays)
    cones = [tuple(c) + (k + e,) for c in f.cones for e in (0, 1)]
    return Fan.make(rays, cones)


CUBE_VERTICES = [(1, 1, 1), (1, 1, -1), (1, -1, 1), (1, -1, -1),
                 (-1, 1, 1), (-1, 1, -1), (-1, -1, 1), (-1, -1, -1)]


def nonprojective_cube() -> Fan:
    """Fan over the cube with face diagonals chosen so that no strictly convex support function exists.

    Found by scanning all 64 diagonal choices; 18 of them are not projective.
    """
    cones = [(0, 1, 3), (0, 1, 5), (0, 2, 3), (0, 2, 4), (0, 4, 5), (1, 3, 7),
             (1, 5, 7), (2, 3, 6), (2, 4, 6), (3, 6, 7), (4, 5, 7), (4, 6, 7)]
    return Fan.make(CUBE_VERTICES, cones)


def corpus() -> dict[str, Fan]:
    """The desk-scale test corpus."""
    return {
        "P2": projective_plane(),
        "F1": hirzebruch(1),
        "F2": hirzebruch(2),
        "Bl2P2": blowup_p2_two_points(),
        "P1xP1": p1xp1(),
        "P112": weighted_p112(),
        "P1xP1xP1": p1_cubed(),
        "flop3": small_resolution(0),
    }
