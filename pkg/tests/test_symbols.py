import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toeplitz_embed import (
    AliasWarning,
    Symbol,
    check_hypotheses,
    derivative,
    discretize,
    evaluate,
    fixtures,
    reflect,
    toeplitz_truncation,
)
from toeplitz_embed.symbols import fourier_coefficients


def test_evaluate_monomials(sym_z, sym_recip_z, sym_z_plus_2):
    assert abs(evaluate(sym_z, np.pi / 2) - 1j) < 1e-15
    assert abs(evaluate(sym_recip_z, np.pi) + 1.0) < 1e-15
    assert abs(evaluate(sym_z_plus_2, 0.0) - 3.0) < 1e-15


def test_derivative_examples(sym_z, sym_z_plus_2):
    assert abs(derivative(sym_z, 0.0) - 1j) < 1e-15
    z2 = Symbol.from_coeffs({2: 1.0})
    assert abs(derivative(z2, np.pi / 2) - 2j * np.exp(1j * np.pi)) < 1e-14
    for th in (0.0, 1.0, 2.5):
        assert abs(derivative(sym_z_plus_2, th) - 1j * np.exp(1j * th)) < 1e-14


def test_derivative_matches_finite_differences(rng):
    h = 1e-5
    for _ in range(5):
        sym = fixtures.random_trig_polynomial(rng)
        th = rng.uniform(0, 2 * np.pi, size=32)
        fd = (evaluate(sym, th + h) - evaluate(sym, th)) / h \
            - 0.5 * h * 0  # central below
        fd = (evaluate(sym, th + h) - evaluate(sym, th - h)) / (2 * h)
        ex = derivative(sym, th)
        scale = np.max(np.abs(ex)) or 1.0
        assert np.max(np.abs(fd - ex)) / scale < 1e-6


def test_periodicity_exact(sym_z_plus_2, rng):
    # float32-coarse angles make theta + 2*pi exactly representable, so the
    # reduction returns bit-identical arguments and equality is exact
    th = np.float64(np.float32(rng.uniform(0, 2 * np.pi, size=64)))
    assert np.all(evaluate(sym_z_plus_2, th) == evaluate(sym_z_plus_2, th + 2 * np.pi))
    # generic angles: the addition itself rounds, leaving at most an ulp of 2*pi
    th = rng.uniform(0, 2 * np.pi, size=64)
    diff = np.abs(evaluate(sym_z_plus_2, th) - evaluate(sym_z_plus_2, th + 2 * np.pi))
    assert np.max(diff) < 1e-14


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=-6, max_value=6),
       st.floats(min_value=-10.0, max_value=10.0, allow_nan=False))
def test_evaluate_is_trig_sum(k, theta):
    coeffs = {0: 1.0 + 0.0j}
    coeffs[k] = coeffs.get(k, 0.0) + (1.5 - 0.25j)
    sym = Symbol.from_coeffs(coeffs)
    want = sum(c * np.exp(1j * kk * theta) for kk, c in coeffs.items())
    assert abs(evaluate(sym, theta) - want) < 1e-10


def test_parseval(rng):
    for _ in range(5):
        sym = fixtures.random_trig_polynomial(rng)
        th = np.arange(4096) * (2 * np.pi / 4096)
        mean_sq = float(np.mean(np.abs(evaluate(sym, th)) ** 2))
        coeff_sq = sum(abs(c) ** 2 for c in sym.coeffs.values())
        assert abs(mean_sq - coeff_sq) < 1e-10 * max(1.0, coeff_sq)


def test_discretize_unit_circle(sym_z):
    d = discretize(sym_z, 0.1)
    assert d.size >= 63
    assert not d.degenerate
    assert float(d.chord_lengths.max()) <= 0.1 + 1e-12


def test_discretize_constant_degenerate():
    sym = Symbol.from_coeffs({0: 2.0})
    d = discretize(sym, 0.1)
    assert d.degenerate
    assert d.size == 16


def test_discretize_cusp_sets_refined_flag(cusp):
    d = discretize(cusp, 0.05)
    near = np.abs(d.points - 0.0) < 0.3
    assert d.refined[near].any()


def test_toeplitz_shifts(sym_z, sym_recip_z):
    fwd = toeplitz_truncation(sym_z, 3).matrix
    assert np.array_equal(fwd, np.diag([1, 1], -1).astype(complex) * (1 + 0j)) \
        or np.allclose(fwd, np.eye(3, k=-1))
    back = toeplitz_truncation(sym_recip_z, 3).matrix
    assert np.allclose(back, np.eye(3, k=1))


def test_toeplitz_z_plus_2(sym_z_plus_2):
    m = toeplitz_truncation(sym_z_plus_2, 2).matrix
    assert np.allclose(m, np.array([[2.0, 0.0], [1.0, 2.0]]))


def test_toeplitz_nesting(rng):
    sym = fixtures.random_trig_polynomial(rng)
    small = toeplitz_truncation(sym, 5).matrix
    big = toeplitz_truncation(sym, 6).matrix
    assert np.allclose(big[:5, :5], small)


def test_sampled_coefficients_alias_warning():
    th = np.arange(32) * (2 * np.pi / 32)
    sym = Symbol.from_samples(th, np.exp(1j * th))
    with pytest.warns(AliasWarning):
        fourier_coefficients(sym, 20)


def test_sampled_matches_fourier_roundtrip(sym_z_plus_2):
    th = np.arange(512) * (2 * np.pi / 512)
    sampled = Symbol.from_samples(th, evaluate(sym_z_plus_2, th))
    coeffs = fourier_coefficients(sampled, 2)
    assert abs(coeffs[0] - 2.0) < 1e-10
    assert abs(coeffs[1] - 1.0) < 1e-10
    assert abs(coeffs[-1]) < 1e-10


def test_hypatheses_monomials(sym_z, sym_recip_z):
    dz = discretize(sym_z, 0.05)
    rep = check_hypotheses(sym_z, dz)
    assert rep.h1 and rep.h2 and not rep.h3 and rep.h3bis
    dr = discretize(sym_recip_z, 0.05)
    rep2 = check_hypotheses(sym_recip_z, dr)
    assert rep2.h1 and rep2.h2 and rep2.h3 and rep2.h3bis


def test_hypotheses_cusp_h1_fails(cusp):
    d = discretize(cusp, 0.05)
    rep = check_hypotheses(cusp, d)
    assert not rep.h1
    assert rep.h3 and rep.h3bis


def test_reflect_swaps_coefficients(sym_z_plus_2):
    r = reflect(sym_z_plus_2)
    assert r.coeffs == {0: 2.0, -1: 1.0}


def test_symbol_validation():
    with pytest.raises(ValueError):
        Symbol.from_coeffs({})
    with pytest.raises(ValueError):
        Symbol.from_samples([0.0, 1.0], [1.0, 2.0])  # too few samples
    th = np.arange(16) * 0.3
    th[5] = th[4]  # not strictly increasing
    with pytest.raises(ValueError):
        Symbol.from_samples(th, np.ones(16))
