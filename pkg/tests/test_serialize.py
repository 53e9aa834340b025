from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toric_sarkisov import serialize
from toric_sarkisov.corpus import corpus
from toric_sarkisov.divisors import canonical_divisor
from toric_sarkisov.fan import FanError
from toric_sarkisov.fixtures import surface_link, two_rulings
from toric_sarkisov.geography import generic_slice
from toric_sarkisov.mmp import run_mmp
from toric_sarkisov.sarkisov import factorize

CORPUS = corpus()


def _round_trip(x):
    text = serialize.dumps(x)
    back = serialize.loads(text)
    assert back == x
    assert serialize.dumps(back) == text
    return back


def test_fans_round_trip():
    for f in CORPUS.values():
        _round_trip(f)
        assert serialize.fan_from_input(serialize.fan_to_input(f)) == f


def test_traces_round_trip():
    for name, f in CORPUS.items():
        tr = run_mmp(f, canonical_divisor(f), strategy="seeded-random", seed=3)
        back = _round_trip(tr)
        assert back.steps == tr.steps


def test_slice_round_trip():
    sl = generic_slice(CORPUS["Bl2P2"], seed=2)
    back = _round_trip(sl)
    assert back.arrangement.boundary_edges == sl.arrangement.boundary_edges


def test_chains_round_trip():
    for fx in (surface_link(), two_rulings()):
        _round_trip(factorize(*fx))


def test_strings_that_look_rational_survive():
    x = {"note": "1/2", ("k", 1): [F(3, 4), "x"], "s": frozenset({(1, 2), (0, 5)})}
    assert serialize.loads(serialize.dumps(x)) == x


def test_floats_are_refused():
    with pytest.raises(TypeError):
        serialize.encode(0.5)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.fractions(max_denominator=50), min_size=1, max_size=6))
def test_divisor_input_round_trip(coeffs):
    f = CORPUS["P1xP1xP1"]
    coeffs = (coeffs * 6)[:6]
    d = serialize.divisor_from_input(serialize.divisor_to_input(coeffs), f)
    assert d == tuple(coeffs)


def test_divisor_input_errors():
    f = CORPUS["P2"]
    with pytest.raises(ValueError):
        serialize.divisor_from_input({"coeffs": ["1", "2"]}, f)
    with pytest.raises(ValueError):
        serialize.divisor_from_input({"coeffs": ["1", "x", "2"]}, f)
    with pytest.raises(ValueError):
        serialize.divisor_from_input({"coeffs": [0.5, 1, 2]}, f)


def test_fan_input_errors():
    with pytest.raises(FanError):
        serialize.fan_from_input({"rank": 2, "rays": [[1, 0]]})
    with pytest.raises(FanError):
        serialize.fan_from_input({"rank": 2, "rays": [[1, 0, 0]], "max_cones": [[0]]})
    with pytest.raises(FanError):
        serialize.fan_from_input({"rank": 2, "rays": [[1, 0]], "max_cones": [[3]]})
