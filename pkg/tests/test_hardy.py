import numpy as np
import pytest

from toeplitz_embed import BranchMismatch, Symbol, fixtures
from toeplitz_embed.hardy import (
    CircleFunction,
    analytic_exponential,
    eigenvector,
    log_phi_lambda,
    riesz_project,
)


def test_riesz_examples():
    n = 1024
    th = np.arange(n) * (2 * np.pi / n)
    cubed = CircleFunction(np.exp(3j * th))
    assert np.max(np.abs(riesz_project(cubed).samples - cubed.samples)) < 1e-12

    anti = CircleFunction(np.exp(-1j * th))
    assert np.max(np.abs(riesz_project(anti).samples)) < 1e-12

    cos2 = CircleFunction(2 * np.cos(th))
    proj = riesz_project(cos2)
    assert np.max(np.abs(proj.samples - np.exp(1j * th))) < 1e-12


def test_circle_function_views_consistent():
    rng = np.random.default_rng(5)
    samples = rng.normal(size=256) + 1j * rng.normal(size=256)
    f = CircleFunction(samples)
    back = CircleFunction.from_coefficients(f.coefficients)
    assert np.max(np.abs(back.samples - samples)) < 1e-12


def test_log_phi_closed_forms(sym_recip_z, sym_z, sym_z_plus_2):
    # 1/z at 0.5: phi = 1 - 0.5 tau, log at tau=1 is log(1/2)
    lp = log_phi_lambda(sym_recip_z, 0.5, -1)
    assert abs(lp.samples[0] - np.log(0.5)) < 1e-12
    th = lp.thetas
    assert np.max(np.abs(np.exp(lp.samples) - (1 - 0.5 * np.exp(1j * th)))) < 1e-10

    # z at 0 with winding 1: phi == 1, log == 0
    lp2 = log_phi_lambda(sym_z, 0.0, 1)
    assert np.max(np.abs(lp2.samples)) < 1e-12

    # z+2 at 0 with winding 0: principal branch, log(3) at theta 0
    lp3 = log_phi_lambda(sym_z_plus_2, 0.0, 0)
    assert abs(lp3.samples[0] - np.log(3.0)) < 1e-12


def test_log_phi_wrong_winding_raises(sym_recip_z):
    with pytest.raises(BranchMismatch):
        log_phi_lambda(sym_recip_z, 0.5, 0)


def test_eigenvector_backward_shift(sym_recip_z):
    ev = eigenvector(sym_recip_z, 0.5, 0, 64, winding=-1)
    expect = 0.5 ** np.arange(64)
    assert np.max(np.abs(ev.coefficients - expect)) < 1e-12
    assert ev.residual < 1e-10

    ev0 = eigenvector(sym_recip_z, 0.0, 0, 16, winding=-1)
    assert np.max(np.abs(ev0.coefficients - np.eye(16)[0])) < 1e-14


def test_eigenvector_double_shift():
    sym = Symbol.from_coeffs({-2: 1.0})
    for j in (0, 1):
        ev = eigenvector(sym, 0.25, j, 128, winding=-2)
        assert ev.residual < 1e-7
        assert ev.coefficients[j] == 1.0


def test_eigenvector_rejects_positive_winding(sym_z):
    with pytest.raises(ValueError):
        eigenvector(sym_z, 0.0, 0, 16, winding=1)


def test_eigenvector_index_range(sym_recip_z):
    with pytest.raises(ValueError):
        eigenvector(sym_recip_z, 0.5, 1, 16, winding=-1)


def test_h0_is_one_exactly(rng):
    for _ in range(5):
        lam = 0.5 * (rng.normal() + 1j * rng.normal())
        ev = eigenvector(Symbol.from_coeffs({-1: 1.0}), lam, 0, 32, winding=-1)
        assert ev.coefficients[0] == 1.0 + 0.0j


def test_residual_decreases_with_order(rng):
    sym = Symbol.from_coeffs({-1: 1.0, 0: 0.1, -2: 0.2})
    lam = 0.05 + 0.02j
    residuals = []
    for n in (64, 128, 256):
        ev = eigenvector(sym, lam, 0, n)
        residuals.append(max(ev.full_residual, 1e-17))
    assert residuals[-1] <= 1e-6
    assert residuals[-1] <= residuals[0] * 1.01


def test_lambda_continuity(sym_recip_z):
    lam = 0.4 + 0.1j
    base = eigenvector(sym_recip_z, lam, 0, 32, winding=-1)
    pert = eigenvector(sym_recip_z, lam + 1e-6, 0, 32, winding=-1)
    diff = np.abs(base.coefficients[:16] - pert.coefficients[:16])
    assert np.max(diff) <= 1e-4


def test_outer_factor_multiplicative(rng):
    # Fplus of a product equals the product of the factors when both
    # windings about 0 vanish.
    for _ in range(6):
        f = fixtures.random_nonvanishing(rng)
        g = fixtures.random_nonvanishing(rng)
        prod = {}
        for kf, cf in f.coeffs.items():
            for kg, cg in g.coeffs.items():
                prod[kf + kg] = prod.get(kf + kg, 0.0) + cf * cg
        h = Symbol.from_coeffs(prod)
        size = 4096
        ff = analytic_exponential(f, 0.0, 0, size=size)
        gg = analytic_exponential(g, 0.0, 0, size=size)
        hh = analytic_exponential(h, 0.0, 0, size=size)
        scale = np.max(np.abs(hh.samples))
        assert np.max(np.abs(ff.samples * gg.samples - hh.samples)) < 1e-8 * scale
