import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dirops.errors import NonConvergenceError
from dirops.series import DirichletPolynomial, basis, derivative, eval_poly
from dirops.symbols import AffineSymbol
from dirops.verification import QuadratureSpec, cov_check, cov_lhs, cov_rhs

SYM = AffineSymbol(1, 0.25)
LN2 = math.log(2)


def circle_norm_sq(sym, P, M=1024):
    # ||f' o Phi||^2 as the mean of |P'(c1 + c2 e^{i theta})|^2 over the circle
    dP = derivative(P)
    th = 2 * np.pi * np.arange(M) / M
    vals = np.array([eval_poly(dP, sym.c1 + sym.c2 * cmath.exp(1j * t)) for t in th])
    return float(np.mean(np.abs(vals) ** 2))


def random_poly(seed, n):
    rng = np.random.default_rng(seed)
    return DirichletPolynomial(rng.standard_normal(n) + 1j * rng.standard_normal(n))


def test_quadrature_spec_validation():
    QuadratureSpec(8, 8, 20)
    for args in [(7, 8, 20), (8, 4, 20), (8, 8, 19.9)]:
        with pytest.raises(ValueError):
            QuadratureSpec(*args)


def test_e1_gives_zero():
    assert cov_lhs(SYM, basis(1)).value == 0
    assert cov_rhs(SYM, basis(1)).value == 0
    assert cov_check(SYM, basis(1)).rel_err == 0


def test_lhs_e2_closed_form():
    x = (0.25 * LN2) ** 2
    want = LN2**2 / 4 * math.fsum(x**k / math.factorial(k) ** 2 for k in range(40))
    assert cov_lhs(SYM, basis(2)).value == pytest.approx(want, rel=1e-14)


def test_lhs_homogeneity():
    P = random_poly(4, 9)
    assert cov_lhs(SYM, 2 * P).value == pytest.approx(4 * cov_lhs(SYM, P).value, rel=1e-14)


def test_rhs_e2_agrees_with_lhs():
    l, r = cov_lhs(SYM, basis(2)).value, cov_rhs(SYM, basis(2)).value
    assert abs(l - r) / l <= 1e-4
    assert abs(l - r) / l <= 1e-12


def test_rhs_shrinking_disk():
    P = random_poly(1, 6)
    point = abs(eval_poly(derivative(P), 1)) ** 2
    r = cov_rhs(AffineSymbol(1, 1e-6), P).value
    assert r == pytest.approx(point, rel=1e-9)
    assert cov_rhs(AffineSymbol(1, 0), P).value == point


def test_check_example_pair():
    rep = cov_check(SYM, basis(2) + basis(3))
    assert rep.rel_err <= 1e-4
    assert set(rep.to_json()) == {"lhs", "rhs", "rel_err", "K", "radial_nodes", "angular_nodes",
                                  "tail_budget"}


@pytest.mark.parametrize("seed", range(5))
def test_check_random_length_eight(seed):
    assert cov_check(SYM, random_poly(seed, 8)).rel_err <= 1e-4


@pytest.mark.parametrize("sym", [SYM, AffineSymbol(1.5, 0.5), AffineSymbol(2 + 0.5j, -0.6 + 0.7j)])
def test_lhs_matches_circle_oracle(sym):
    P = random_poly(7, 16)
    assert cov_lhs(sym, P).value == pytest.approx(circle_norm_sq(sym, P), rel=1e-12)


def test_refinement_within_error_estimate():
    P = random_poly(3, 16)
    q = QuadratureSpec()
    base = cov_rhs(SYM, P, q)
    fine = cov_rhs(SYM, P, q.doubled())
    assert abs(fine.value - base.value) < 10 * base.tail_bound


def test_failing_side_is_named():
    with pytest.raises(NonConvergenceError, match="lhs"):
        cov_check(AffineSymbol(2, 1), random_poly(0, 16), K=2)
    with pytest.raises(NonConvergenceError, match="rhs"):
        cov_check(AffineSymbol(2, 1.4), random_poly(0, 64), quad=QuadratureSpec(8, 8))


def test_coarse_rule_reports_its_error():
    P = random_poly(0, 64)
    sym = AffineSymbol(2, 1.4)
    coarse = cov_rhs(sym, P, QuadratureSpec(8, 8))
    exact = cov_lhs(sym, P).value
    assert abs(coarse.value - exact) <= coarse.tail_bound


def test_error_decreases_with_K():
    P = random_poly(5, 12)
    sym = AffineSymbol(1.5, 0.9)
    q = QuadratureSpec()
    errs = []
    for K in (20, 40, 80):
        l = cov_lhs(sym, P, K).value
        r = cov_rhs(sym, P, q).value
        errs.append(abs(l - r) / l)
    assert errs[1] <= errs[0] or errs[1] <= 1e-9
    assert errs[2] <= errs[1] or errs[2] <= 1e-9


symbols = st.tuples(st.floats(0.6, 3.0), st.floats(-1, 1), st.floats(0.05, 0.9),
                    st.floats(-np.pi, np.pi)).map(
    lambda t: AffineSymbol(complex(t[0], t[1]), t[2] * (t[0] - 0.5) * np.exp(1j * t[3]))
)


@settings(max_examples=25, deadline=None)
@given(symbols, st.integers(2, 16), st.integers(0, 2**31))
def test_identity_holds(sym, n, seed):
    rep = cov_check(sym, random_poly(seed, n))
    assert rep.rel_err <= 1e-4


@settings(max_examples=25, deadline=None)
@given(symbols, st.integers(0, 2**31), st.floats(0, 2 * np.pi))
def test_unimodular_invariance(sym, seed, phase):
    P = random_poly(seed, 8)
    u = cmath.exp(1j * phase)
    l0, r0 = cov_lhs(sym, P).value, cov_rhs(sym, P).value
    assert cov_lhs(sym, u * P).value == pytest.approx(l0, rel=1e-12)
    assert cov_rhs(sym, u * P).value == pytest.approx(r0, rel=1e-12)
