import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toric_sarkisov.corpus import (
    corpus,
    hirzebruch,
    nonprojective_cube,
    p1xp1,
    projective_line,
    projective_plane,
    quadric_cone,
    small_resolution,
    times_p1,
)
from toric_sarkisov.exact import check_farkas, dot, primitive
from toric_sarkisov.fan import (
    Fan,
    FanError,
    ToricModel,
    common_refinement,
    fan_morphism,
    has_morphism,
    is_complete,
    is_maximal_simplicial,
    is_projective,
    is_simplicial,
    picard_number,
    star_subdivision,
    validate_fan,
)
from toric_sarkisov.polyhedra import in_cone

CORPUS = corpus()


def test_p2_valid_complete_simplicial():
    f = projective_plane()
    assert validate_fan(f).valid
    assert is_complete(f) and is_simplicial(f)


def test_partial_p2_is_valid_but_incomplete():
    f = Fan.make([(1, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2)])
    assert validate_fan(f).valid
    assert not is_complete(f)


def test_overlapping_cones_reported():
    f = Fan.make([(1, 0), (0, 1), (1, 1)], [(0, 1), (0, 2)])
    diag = validate_fan(f)
    assert not diag.valid and diag.violating_pair == (0, 1)


def test_bad_rays_reported():
    assert not validate_fan(Fan(2, ((2, 0), (0, 1)), ((0, 1),))).valid
    assert not validate_fan(Fan(2, ((1, 0), (1, 0)), ((0,), (1,)))).valid


def test_completeness_examples():
    assert is_complete(projective_line())
    assert is_complete(projective_plane())


def test_square_cone_not_simplicial():
    assert not is_simplicial(quadric_cone())
    assert all(is_simplicial(f) for f in CORPUS.values())


def test_projective_certificates():
    for name in ("P2", "P1xP1"):
        f = CORPUS[name]
        cert = is_projective(f)
        assert cert.projective
        # strict convexity re-checked at every wall
        assert all(dot(c, cert.support_values) > 0 for c in f.wall_relations.values())


def test_nonprojective_cube_fan():
    f = nonprojective_cube()
    assert validate_fan(f).valid and is_complete(f) and is_simplicial(f)
    cert = is_projective(f)
    assert not cert.projective
    rels = list(f.wall_relations.values())
    assert check_farkas(rels, [1] * len(rels), cert.farkas)


def test_projectivity_needs_complete_fan():
    with pytest.raises(FanError):
        is_projective(Fan.make([(1, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2)]))


def test_picard_numbers():
    assert picard_number(projective_plane()) == 1
    assert picard_number(p1xp1()) == 2
    assert picard_number(hirzebruch(1)) == 2


def test_wall_relations_are_primitive_relations():
    for f in list(CORPUS.values()) + [times_p1(small_resolution(0))]:
        for wall, c in f.wall_relations.items():
            assert primitive(c) == tuple(c)
            assert all(sum(ci * r[k] for ci, r in zip(c, f.rays)) == 0 for k in range(f.rank))
            off = [i for i, x in enumerate(c) if i not in wall and x != 0]
            assert len(off) == 2 and all(c[i] > 0 for i in off)


def test_common_refinement_identity():
    f = projective_plane()
    W, a, b = common_refinement(f, f)
    assert W.key == f.key


def test_common_refinement_blowup():
    F1 = Fan.make([(1, 0), (1, 1), (0, 1), (-1, -1)], [(0, 1), (1, 2), (2, 3), (0, 3)])
    W, a, b = common_refinement(F1, projective_plane())
    assert W.key == F1.key
    assert has_morphism(ToricModel.birational(F1), ToricModel.birational(projective_plane()))


def test_common_refinement_of_the_two_small_resolutions():
    W, _, _ = common_refinement(small_resolution(0), small_resolution(1))
    square = [(0, 0, 1), (1, 0, 1), (1, 1, 1), (0, 1, 1)]
    hrep = quadric_cone().hreps[0]
    inside = [c for c in W.cones if all(in_cone(W.rays[i], hrep) for i in c)]
    assert len(inside) == 4
    assert (1, 1, 2) in W.rays and set(square) <= set(W.rays)


def test_star_subdivision_examples():
    f = star_subdivision(projective_plane(), (1, 1))
    expected = {frozenset(p) for p in [((1, 0), (1, 1)), ((1, 1), (0, 1)), ((0, 1), (-1, -1)), ((-1, -1), (1, 0))]}
    assert {frozenset(f.rays[i] for i in c) for c in f.cones} == expected
    assert star_subdivision(projective_plane(), (1, 0)) == projective_plane()
    g = star_subdivision(quadric_cone(), (1, 1, 2))
    assert len(g.cones) == 8 and is_simplicial(g)


def test_fan_morphism_kinds():
    X = ToricModel.birational(p1xp1())
    m = fan_morphism(X, ToricModel(projective_line(), ((1, 0),)))
    assert m.kind == "projection"
    assert fan_morphism(X, X).kind == "refinement"


@st.composite
def fan_and_vector(draw):
    name = draw(st.sampled_from(sorted(CORPUS)))
    f = CORPUS[name]
    v = draw(st.lists(st.integers(-3, 3), min_size=f.rank, max_size=f.rank).filter(any))
    return f, primitive(v)


@settings(max_examples=60, deadline=None)
@given(fan_and_vector())
def test_star_subdivision_preserves_support(data):
    f, v = data
    g = star_subdivision(f, v)
    assert validate_fan(g).valid
    assert is_complete(g) and is_maximal_simplicial(g)
    assert tuple(v) in g.rays
    W, a, b = common_refinement(g, f)
    assert W.key == g.key


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(sorted(CORPUS)), st.sampled_from(sorted(CORPUS)))
def test_common_refinement_refines_both(n1, n2):
    A, B = CORPUS[n1], CORPUS[n2]
    if A.rank != B.rank:
        return
    W, a, b = common_refinement(A, B)
    for c in W.cones:
        for X in (A, B):
            owners = [k for k, h in enumerate(X.hreps) if all(in_cone(W.rays[i], h) for i in c)]
            assert len(owners) == 1
