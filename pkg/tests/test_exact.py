from fractions import Fraction
from itertools import combinations
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toric_sarkisov.exact import (
    check_farkas,
    det,
    feasible_point,
    hermite_form,
    hermite_smith,
    integer_kernel,
    inverse,
    mat_mul,
    primitive,
    rank,
    saturated_span,
    solve_linear,
)


def test_primitive_examples():
    assert primitive([2, 4]) == (1, 2)
    assert primitive([1, 0, 0]) == (1, 0, 0)
    assert primitive([-6, 9, -3]) == (-2, 3, -1)


def test_primitive_zero_raises():
    with pytest.raises(ValueError, match="zero vector"):
        primitive([0, 0])


def test_smith_examples():
    assert hermite_smith([[1, 0], [0, 1]]).divisors == (1, 1)
    assert hermite_smith([[1, 0], [0, 1]]).hermite == ((1, 0), (0, 1))
    assert hermite_smith([[2, 0], [0, 3]]).divisors == (1, 6)
    hs = hermite_smith([[1, 1], [0, 0]])
    assert hs.hermite == ((1, 1), (0, 0))
    assert hs.divisors == (1,)


def _determinantal_divisors(A):
    """Smith invariants from gcds of k x k minors: d_k = g_k / g_{k-1}."""
    m, n = len(A), len(A[0])
    out, prev = [], 1
    for k in range(1, min(m, n) + 1):
        g = 0
        for rows in combinations(range(m), k):
            for cols in combinations(range(n), k):
                g = gcd(g, int(det([[A[i][j] for j in cols] for i in rows])))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return tuple(out)


small_int_matrix = st.integers(1, 4).flatmap(
    lambda m: st.integers(1, 4).flatmap(
        lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n), min_size=m, max_size=m)))


@settings(max_examples=150, deadline=None)
@given(small_int_matrix)
def test_hermite_smith_against_minors(A):
    hs = hermite_smith(A)
    assert hs.divisors == _determinantal_divisors(A)
    U = [list(r) for r in hs.transform]
    assert abs(det(U)) == 1
    assert [list(r) for r in mat_mul(U, A)] == [list(r) for r in hs.hermite]


@settings(max_examples=100, deadline=None)
@given(small_int_matrix)
def test_hermite_form_shape(A):
    H, _ = hermite_form(A)
    lead = -1
    seen_zero = False
    for i, row in enumerate(H):
        nz = [j for j, x in enumerate(row) if x != 0]
        if not nz:
            seen_zero = True
            continue
        assert not seen_zero
        j = nz[0]
        assert j > lead and row[j] > 0
        assert all(0 <= H[k][j] < row[j] for k in range(i))
        lead = j


def test_solve_linear_examples():
    s = solve_linear([[1, 0], [0, 1]], [Fraction(3, 2), -1])
    assert s.particular == (Fraction(3, 2), -1) and s.kernel == ()
    s = solve_linear([[1, 1]], [0])
    assert s.particular == (0, 0)
    assert len(s.kernel) == 1 and s.kernel[0][0] == -s.kernel[0][1] != 0
    assert not solve_linear([[1], [1]], [0, 1]).feasible


def test_feasible_point_examples():
    r = feasible_point([[1], [-1]], [0, -1], 1)
    assert r.feasible and 0 <= r.point[0] <= 1
    r = feasible_point([[1], [-1]], [1, 0], 1)
    assert not r.feasible and check_farkas([[1], [-1]], [1, 0], r.farkas)


def test_feasible_point_section_polytope_empty():
    # P_D for D = -D_0 on P2: m1 >= 1, m2 >= 0, -m1 - m2 >= 0
    G = [[1, 0], [0, 1], [-1, -1]]
    h = [1, 0, 0]
    r = feasible_point(G, h, 2)
    assert not r.feasible and check_farkas(G, h, r.farkas)


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 3).flatmap(lambda d: st.tuples(
    st.just(d),
    st.lists(st.lists(st.integers(-4, 4), min_size=d, max_size=d), min_size=1, max_size=6),
    st.lists(st.integers(-4, 4), min_size=6, max_size=6))))
def test_feasible_point_certificate_always_checks(data):
    d, G, h = data
    h = h[:len(G)]
    r = feasible_point(G, h, d)
    if r.feasible:
        assert all(sum(Fraction(a) * x for a, x in zip(row, r.point)) >= b for row, b in zip(G, h))
    else:
        assert check_farkas(G, h, r.farkas)


def test_integer_kernel_and_saturation():
    K = integer_kernel([[1, 1, 1]], 3)
    assert len(K) == 2 and all(sum(v) == 0 for v in K)
    # the span of (2, 0) saturates to (1, 0)
    assert saturated_span([[2, 0]], 2) == [[1, 0]]
    assert saturated_span([[2, 2, 0], [0, 2, 2]], 3) == integer_kernel(integer_kernel([[2, 2, 0], [0, 2, 2]], 3), 3)


def test_inverse_and_rank():
    A = [[2, 1], [1, 1]]
    assert mat_mul(A, inverse(A)) == [[1, 0], [0, 1]]
    assert rank([[1, 2], [2, 4]]) == 1
    with pytest.raises(ZeroDivisionError):
        inverse([[1, 2], [2, 4]])
