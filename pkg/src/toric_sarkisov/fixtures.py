"""Ready-made inputs for factorization: a base, a divisor and two MMP runs ending in Mori fiber spaces."""

from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple

from .corpus import hirzebruch, p1xp1, small_resolution, times_p1
from .divisors import Coeffs, canonical_divisor
from .fan import Fan
from .mmp import MMPTrace, prefer_kind, run_mmp


class FactorizationInput(NamedTuple):
    base: Fan
    divisor: Coeffs
    run_a: MMPTrace
    run_b: MMPTrace


def contract_rays(indices, first_small: bool = False):
    """Strategy: optionally flip first, then take the fiber contraction whose positive part is ``indices``."""
    target = set(indices)

    def choose(X, rays, d):
        if first_small:
            small = [R for R in rays if len(R.j_minus) >= 2]
            if small:
                return small[0]
        for R in rays:
            if set(R.j_plus) == target and not R.j_minus:
                return R
        return rays[0]

    return choose


def surface_link() -> FactorizationInput:
    """F_1 with K: one run blows down to P^2, the other is the ruling over P^1."""
    Z = hirzebruch(1)
    K = canonical_divisor(Z)
    return FactorizationInput(Z, K, run_mmp(Z, K, prefer_kind("divisorial")), run_mmp(Z, K, prefer_kind("fiber")))


def two_rulings() -> FactorizationInput:
    """P^1 x P^1 with K and its two projections."""
    Z = p1xp1()
    K = canonical_divisor(Z)
    return FactorizationInput(Z, K, run_mmp(Z, K, contract_rays((0, 2))), run_mmp(Z, K, contract_rays((1, 3))))


def product_flop(delta: Fraction = Fraction(1, 2)) -> FactorizationInput:
    """S x P^1 against T x P^1 for the two small resolutions S, T of the quadric cone.

    The divisor K + delta * D_0 is negative on the flopping curve of S (ray 0
    lies on its diagonal) and on the P^1 fibres, so one run projects to S
    directly and the other flips first and then projects to T.
    """
    Z = times_p1(small_resolution(0))
    d = list(canonical_divisor(Z))
    d[0] += delta
    fiber = (len(Z.rays) - 2, len(Z.rays) - 1)
    run_a = run_mmp(Z, d, contract_rays(fiber))
    run_b = run_mmp(Z, d, contract_rays(fiber, first_small=True))
    return FactorizationInput(Z, tuple(d), run_a, run_b)
