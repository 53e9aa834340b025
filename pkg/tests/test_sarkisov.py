from fractions import Fraction as F

import pytest

from toric_sarkisov.corpus import blowup_p2_two_points, hirzebruch, projective_line, projective_plane, small_resolution
from toric_sarkisov.divisors import canonical_divisor, pullback_compare
from toric_sarkisov.fan import is_maximal_simplicial, picard_number
from toric_sarkisov.fixtures import surface_link, two_rulings
from toric_sarkisov.geography import SliceError, generic_slice
from toric_sarkisov.mmp import run_mmp
from toric_sarkisov.sarkisov import LinkError, classify_wall, factorize


def _inner_walls(sl):
    """Edges separating two different two-dimensional chambers, away from the region boundary."""
    arr = sl.arrangement
    out = []
    for e, cells in arr.edge_cells.items():
        ids = {sl.stratum_chamber[("cell", c)] for c in cells}
        if len(cells) == 2 and len(ids) == 2 and not sl.on_region_boundary(arr.edge_sample(e)):
            out.append((e, [sl.chambers[i] for i in sorted(ids)]))
    return out


@pytest.fixture(scope="module")
def surface_chain():
    return factorize(*surface_link())


def test_surface_chain_is_one_type_one_link(surface_chain):
    assert surface_chain.types == ["I"]
    link = surface_chain.links[0]
    assert link.case == 2
    assert link.p is not None and link.p.kind == "refinement"
    assert link.q is None
    assert link.S.dim == 0 and link.T.dim == 1
    assert all(surface_chain.checks.values())


def test_surface_chain_reversed_is_type_three():
    fx = surface_link()
    ch = factorize(fx.base, fx.divisor, fx.run_b, fx.run_a)
    assert ch.types == ["III"] and ch.links[0].case == 3


def test_blowdown_discrepancy_in_the_link(surface_chain):
    link = surface_chain.links[0]
    p = link.p
    res = pullback_compare((p.source.fan, p.target.fan), canonical_divisor(p.source.fan))
    exc = p.exceptional_rays
    assert len(exc) == 1 and res.difference[exc[0]] == 1


def test_two_rulings_link():
    ch = factorize(*two_rulings())
    assert ch.types == ["IVm"]
    link = ch.links[0]
    assert link.case == 1 and link.R.dim == 0
    assert link.S.fan.key == projective_line().key and link.T.fan.key == projective_line().key
    assert link.X.key == link.Y.key


def test_identical_outputs_give_empty_chain():
    f = projective_plane()
    tr = run_mmp(f, canonical_divisor(f))
    ch = factorize(f, canonical_divisor(f), tr, tr)
    assert ch.links == () and ch.checks == {"identical": True}


def test_other_seed_same_endpoints(surface_chain):
    ch = factorize(*surface_link(), seed=7)
    assert ch.links[0].start[0].key == surface_chain.links[0].start[0].key
    assert ch.links[-1].end[1].key == surface_chain.links[-1].end[1].key


def test_classify_blowdown_wall():
    sl = generic_slice(hirzebruch(1), seed=0)
    walls = _inner_walls(sl)
    assert walls
    e, (a, b) = walls[0]
    kind = classify_wall(sl, a, e)
    assert kind.tag == "1a-i" and kind.trivial
    assert kind.pi.birational and len(kind.pi.exceptional_rays) == 1


def test_classify_flop_wall():
    sl = generic_slice(small_resolution(0), seed=0)
    keys = {small_resolution(0).key, small_resolution(1).key}
    walls = [(e, cs) for e, cs in _inner_walls(sl) if {c.model.fan.key for c in cs} == keys]
    assert walls
    e, (a, b) = walls[0]
    kind = classify_wall(sl, a, e)
    assert kind.tag == "2" and kind.trivial
    assert picard_number(kind.source) == picard_number(kind.target)
    assert is_maximal_simplicial(kind.target.fan)


def test_classify_rejects_region_boundary():
    sl = generic_slice(hirzebruch(1), seed=0)
    arr = sl.arrangement
    c = next(c for c in sl.chambers if c.dimension == 2)
    boundary = [e for e in arr.edges if sl.on_region_boundary(arr.edge_sample(e))]
    assert boundary
    with pytest.raises(LinkError, match="boundary"):
        classify_wall(sl, c, boundary[0])


def test_link_flops_are_trivial(surface_chain):
    for link in surface_chain.links:
        assert all(fl.degree == 0 for fl in link.flops)


def test_factorize_rejects_minimal_model():
    f = hirzebruch(1)
    mm = run_mmp(f, [1, 1, 1, 1])
    mfs = run_mmp(f, canonical_divisor(f))
    with pytest.raises(SliceError, match="minimal model"):
        factorize(f, [1, 1, 1, 1], mm, mfs)


def test_two_rulings_of_one_line_are_joined_by_type_two():
    # The base P^1 chamber borders two F_1 chambers; the arc must start beside run A's model.
    Z = blowup_p2_two_points()
    d = [F(-11, 8), F(-5, 4), F(-5, 4), F(-9, 8), F(-3, 4)]
    a = run_mmp(Z, d, strategy="seeded-random", seed=32)
    b = run_mmp(Z, d, strategy="seeded-random", seed=1032)
    ch = factorize(Z, d, a, b, seed=32)
    assert ch.types == ["II", "IVm"]
    first = ch.links[0]
    assert first.X.key == a.model.key and first.S.key == first.T.key == first.R.key == a.base.key
    assert all(ch.checks.values())
