import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dirops.errors import DomainError
from dirops.special import (
    norm_lower_bound,
    norm_upper_bound,
    polylog_sum,
    weighted_sum_ceiling,
    zeta,
    zeta_bounds,
)

mpmath.mp.dps = 30


def mp_L(k, s):
    # L_k(s) = (-1)^k zeta^{(k)}(s)
    return float((-1) ** k * mpmath.zeta(s, derivative=k))


def test_zeta_two():
    z = zeta(2)
    assert z.value == pytest.approx(math.pi**2 / 6, abs=1e-13)
    assert z.contains(math.pi**2 / 6)
    assert z.tail_bound <= 1e-13


def test_zeta_decreases_to_one():
    vals = [zeta(s).value for s in (10, 20, 40)]
    assert vals[0] > vals[1] > vals[2] > 1
    assert vals[2] - 1 < 1e-12


@pytest.mark.parametrize("s", [1.01, 1.1, 1.5, 2, 3, 5, 10, 30])
def test_zeta_against_mpmath(s):
    z = zeta(s)
    assert z.tail_bound <= 1e-13
    assert abs(z.value - float(mpmath.zeta(s))) <= z.tail_bound + 1e-15


@pytest.mark.parametrize("s", [1.1, 1.5, 2, 3, 5, 10])
def test_zeta_sandwich(s):
    lo, hi = zeta_bounds(s)
    assert lo <= zeta(s).value <= hi


def test_zeta_monotone_on_grid():
    vals = [zeta(s).value for s in (1.1, 1.5, 2, 3, 5, 10)]
    assert all(a > b for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("s", [1.0, 1 + 1e-7, 0.5, -2])
def test_zeta_domain(s):
    with pytest.raises(DomainError):
        zeta(s)


def test_polylog_k0_is_zeta():
    for s in (1.3, 2, 4):
        assert polylog_sum(0, s).value == pytest.approx(zeta(s).value, abs=1e-13)


def test_polylog_against_brute_force():
    n = np.arange(1, 10**7 + 1, dtype=np.float64)
    terms = np.log(n) ** 2 / (n * n)
    brute = math.fsum(terms)
    # tail beyond 10^7 from the integral of (ln x)^2 x^-2
    L = math.log(1e7)
    brute += (L * L + 2 * L + 2) / 1e7
    assert polylog_sum(2, 2).value == pytest.approx(brute, abs=1e-8)


@pytest.mark.parametrize("k", [1, 2, 3, 5, 8, 12])
@pytest.mark.parametrize("s", [1.2, 2.0, 4.0, 7.5])
def test_polylog_against_mpmath(k, s):
    r = polylog_sum(k, s)
    assert abs(r.value - mp_L(k, s)) <= r.tail_bound + 1e-14 * abs(r.value)


def test_polylog_lemma_example():
    assert polylog_sum(3, 3).value <= math.factorial(3) * zeta(3).value / 2**3


@pytest.mark.parametrize("k", range(1, 7))
@pytest.mark.parametrize("s", [1.2, 2, 4])
def test_weighted_sum_lemma(k, s):
    assert polylog_sum(k, s).value <= weighted_sum_ceiling(k, s)


@pytest.mark.parametrize("k", [-1, 13, 2.5])
def test_polylog_domain(k):
    with pytest.raises(DomainError):
        polylog_sum(k, 2)


def test_norm_bound_values():
    assert norm_lower_bound(1) == 2
    assert norm_lower_bound(1.5) == 0.25
    assert norm_upper_bound(1) == pytest.approx(2 * math.pi**2 / 6, rel=1e-13)
    assert norm_upper_bound(1) == pytest.approx(3.2899, abs=1e-4)
    assert norm_upper_bound(1.5) == pytest.approx(0.5 * float(mpmath.zeta(3)), rel=1e-13)


@pytest.mark.parametrize("c", [0.8, 1, 2, 5])
def test_norm_bounds_ordered(c):
    assert norm_lower_bound(c) < norm_upper_bound(c)


@pytest.mark.parametrize("c", [0.5, 0.3])
def test_norm_bounds_domain(c):
    with pytest.raises(DomainError):
        norm_lower_bound(c)
    with pytest.raises(DomainError):
        norm_upper_bound(c)


@pytest.mark.parametrize("c", [0.75, 1, 2])
def test_weighted_sum_sits_below_cubic_bound(c):
    # sum (ln n)^2 n^{-2c} is strictly smaller than 2/(2c-1)^3 at these points:
    # the sum-versus-integral comparison needs a decreasing summand, which
    # (ln x)^2 x^{-2c} is not on (1, e^{1/c}).
    L2 = polylog_sum(2, 2 * c).value
    assert L2 == pytest.approx(mp_L(2, 2 * c), rel=1e-12)
    assert L2 < norm_lower_bound(c)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 12), st.floats(1.05, 12.0))
def test_polylog_bracket_contains_mpmath(k, s):
    r = polylog_sum(k, s)
    assert r.tail_bound >= 0
    assert abs(r.value - mp_L(k, s)) <= r.tail_bound + 1e-14 * abs(r.value)


@settings(max_examples=40, deadline=None)
@given(st.floats(1.01, 60.0))
def test_zeta_sandwich_property(s):
    lo, hi = zeta_bounds(s)
    z = zeta(s).value
    assert lo <= z <= hi
