import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dirops.series import DirichletPolynomial
from dirops.symbols import (
    AffineSymbol,
    AffineVerdict,
    GeneralSymbol,
    TranslationSymbol,
    _sample_points,
    classify_sampled,
    format_symbol,
    parse_symbol,
    phi_at_infinity,
    strict_halfplane_check,
    validate_affine,
)


def test_phi_at_infinity():
    assert phi_at_infinity(AffineSymbol(2, 3)) == 2
    assert phi_at_infinity(AffineSymbol(1.5 + 1j)) == 1.5 + 1j
    assert phi_at_infinity(GeneralSymbol(0, DirichletPolynomial([4, 1]))) == 4
    with pytest.raises(ValueError):
        phi_at_infinity(TranslationSymbol(1))


def test_validate_affine_examples():
    assert validate_affine(1, 0.25) is AffineVerdict.STRICT_INTERIOR
    assert validate_affine(0.75, 0.25) is AffineVerdict.BOUNDARY
    assert validate_affine(0.6, 0.2) is AffineVerdict.INVALID
    assert validate_affine(0.75 + 5j, 0.25j) is AffineVerdict.BOUNDARY


def test_bounded_flag():
    assert AffineSymbol(1, 0.25).bounded
    assert not AffineSymbol(0.75, 0.25).bounded
    assert AffineSymbol(2).is_constant


def test_classify_constant():
    ev = classify_sampled(GeneralSymbol(0, DirichletPolynomial([2])), 500, 1)
    assert ev.label == "G0"
    assert ev.min_real_part == 2


def test_classify_identity():
    ev = classify_sampled(GeneralSymbol(1, DirichletPolynomial([0])), 500, 1)
    assert ev.label == "G>=1"


def test_classify_finds_counterexample():
    ev = classify_sampled(GeneralSymbol(0, DirichletPolynomial([0, 1])), 4096, 0)
    assert ev.label == "counterexample"
    assert ev.witness.real > 0
    assert (2.0 ** -ev.witness).real <= 0.5
    assert ev.as_dict()["note"] == "sampled evidence, not a proof"


def test_classify_is_deterministic():
    sym = GeneralSymbol(0, DirichletPolynomial([1, 0.3, -0.2j]))
    assert classify_sampled(sym, 300, 9) == classify_sampled(sym, 300, 9)


def test_strict_halfplane_examples():
    v = strict_halfplane_check(AffineSymbol(1, 0.25), 0.2)
    assert v.exact_pass and v.passed
    v = strict_halfplane_check(AffineSymbol(0.75, 0.25), 0.1)
    assert v.exact_pass is False and not v.passed
    for eps in (0.1, 1.0, 1.5):
        assert strict_halfplane_check(AffineSymbol(2), eps).passed


def test_strict_halfplane_rejects_nonpositive_epsilon():
    with pytest.raises(ValueError):
        strict_halfplane_check(AffineSymbol(2), 0)


def test_general_and_affine_agree():
    sym = AffineSymbol(1.2 - 0.1j, 0.3 + 0.2j)
    pts = _sample_points(64, 5)
    np.testing.assert_allclose(sym.evaluate(pts), sym.as_general().evaluate(pts), rtol=1e-14)
    assert sym(pts[3]) == pytest.approx(sym.evaluate(pts)[3])


@pytest.mark.parametrize("text", [
    "affine:1,0,0.25,0",
    "translate:1,0.5",
    "general:0;1,0;0.25,0",
    "general:2;0,0;0,0;0.5,-1",
])
def test_literal_roundtrip(text):
    sym = parse_symbol(text)
    assert parse_symbol(format_symbol(sym)) == sym


@pytest.mark.parametrize("text", [
    "affine:1,0", "affine:a,b,c,d", "translate:1", "general:x;1,0", "general:0",
    "general:-1;1,0", "moebius:1,2", "",
])
def test_literal_rejects(text):
    with pytest.raises(ValueError):
        parse_symbol(text)


interior = st.tuples(st.floats(0.51, 5), st.floats(0, 1), st.floats(-np.pi, np.pi)).map(
    lambda t: AffineSymbol(t[0], t[1] * (t[0] - 0.5) * np.exp(1j * t[2]))
)


@settings(max_examples=60, deadline=None)
@given(interior, st.integers(0, 2**16))
def test_sampled_min_respects_infimum(sym, seed):
    pts = _sample_points(256, seed)
    assert np.min(sym.evaluate(pts).real) >= sym.infimum_real_part() - 1e-12


@settings(max_examples=60, deadline=None)
@given(interior)
def test_strict_interior_admits_epsilon(sym):
    if validate_affine(sym.c1, sym.c2) is not AffineVerdict.STRICT_INTERIOR:
        return
    eps = (sym.c1.real - abs(sym.c2) - 0.5) / 2
    v = strict_halfplane_check(sym, eps, 512)
    assert v.exact_pass and v.sampled_pass
