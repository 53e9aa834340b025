from fractions import Fraction as F

from hypothesis import given, settings
from hypothesis import strategies as st

from toric_sarkisov.polyhedra import (
    Polyhedron,
    affine_dimension,
    clip_halfplane,
    cone_extreme_rays,
    convex_hull_2d,
    is_extreme_generator,
    line_arrangement_2d,
    polygon_area,
    vertex_enumeration,
)

SQUARE = [(F(-1), F(-1)), (F(1), F(-1)), (F(1), F(1)), (F(-1), F(1))]


def test_triangle_vertices():
    P = Polyhedron.from_pairs(2, [((1, 0), -1), ((0, 1), -1), ((-1, -1), -1)])
    V = vertex_enumeration(P)
    assert set(V.vertices) == {(-1, -1), (2, -1), (-1, 2)}
    assert V.rays == ()


def test_half_line():
    V = vertex_enumeration(Polyhedron.from_pairs(1, [((1,), 0)]))
    assert V.vertices == ((0,),)
    assert V.rays == ((1,),)


def test_empty_polyhedron():
    V = vertex_enumeration(Polyhedron.from_pairs(1, [((1,), 1), ((-1,), 0)]))
    assert V.empty


def test_vertices_are_tight_on_spanning_subsets():
    P = Polyhedron.from_pairs(3, [((1, 0, 0), 0), ((0, 1, 0), 0), ((0, 0, 1), 0), ((-1, -1, -1), -2),
                                  ((1, -1, 0), -1)])
    for v in vertex_enumeration(P).vertices:
        assert P.contains(v)
        tight = [a for a, b in P.inequalities if sum(x * y for x, y in zip(a, v)) == b]
        assert affine_dimension([(0, 0, 0)] + [tuple(a) for a in tight]) == 3


def test_arrangement_one_line():
    arr = line_arrangement_2d([(1, 0, 0)], SQUARE)
    assert len(arr.cells) == 2
    assert len([e for e in arr.edges if e not in arr.boundary_edges]) == 1


def test_arrangement_two_lines():
    arr = line_arrangement_2d([(1, 0, 0), (0, 1, 0)], SQUARE)
    assert len(arr.cells) == 4
    assert len([e for e in arr.edges if e not in arr.boundary_edges]) == 4
    assert len([v for v in range(len(arr.vertices)) if v not in arr.boundary_vertices]) == 1


def test_arrangement_no_lines():
    arr = line_arrangement_2d([], SQUARE)
    assert len(arr.cells) == 1
    assert polygon_area(arr.cell_polygon(0)) == 4


def test_duplicate_lines_collapse():
    arr = line_arrangement_2d([(1, 0, 0), (2, 0, 0), (-3, 0, 0)], SQUARE)
    assert len(arr.cells) == 2


lines_strategy = st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3))
                          .filter(lambda l: l[0] or l[1]), max_size=6)


@settings(max_examples=80, deadline=None)
@given(lines_strategy)
def test_arrangement_areas_sum_to_region(lines):
    arr = line_arrangement_2d(lines, SQUARE)
    assert sum(polygon_area(arr.cell_polygon(c)) for c in range(len(arr.cells))) == 4
    for c in range(len(arr.cells)):
        s = arr.cell_sample(c)
        for a, b, k in lines:
            # samples never sit on a cutting line
            assert a * s[0] + b * s[1] + k != 0


def test_clip_and_hull():
    half = clip_halfplane(SQUARE, (1, 0, 0))
    assert polygon_area(half) == 2
    hull = convex_hull_2d(SQUARE + [(F(0), F(0))])
    assert len(hull) == 4


def test_cone_extreme_rays_of_square_cone():
    rays = [(0, 0, 1), (1, 0, 1), (1, 1, 1), (0, 1, 1), (1, 0, 2)]
    # x >= 0, y >= 0, z - x >= 0, z - y >= 0
    ext, lines = cone_extreme_rays([(1, 0, 0), (0, 1, 0), (-1, 0, 1), (0, -1, 1)], 3)
    assert sorted(ext) == sorted(rays[:4]) and lines == []
    assert not is_extreme_generator((1, 0, 2), rays[:4])
    assert is_extreme_generator((1, 1, 1), [rays[0], rays[1], rays[3]])
