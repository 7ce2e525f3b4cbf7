import math

import numpy as np
import pytest

from chainlab.dispersion import (DispersionBranch, EDGE_KAPPA, EDGE_TOP,
                                 EDGE_ZERO, MINUS_I0, PLUS_I0,
                                 dispersion_residual, edge_series, exp_itheta,
                                 exp_itheta_at_zero, theta_branch)
from chainlab.errors import OnCutError


def roots_oracle(branch, omega):
    """Small root of the branch quadratic via dense polynomial rootfinding."""
    s = 2.0 + (branch.kappa ** 2 - omega ** 2) / branch.nu ** 2
    r = np.roots([1.0, -s, 1.0])
    return r[np.argmin(np.abs(r))]


def sample_offcut(branch, rng, n):
    pts = []
    while len(pts) < n:
        w = complex(rng.uniform(-4, 4), rng.uniform(-2.5, 2.5))
        if abs(w.imag) < 2e-2 and branch.kappa - 0.1 <= abs(w.real) <= branch.band_top + 0.1:
            continue
        if abs(w.imag) < 1e-3:
            continue
        pts.append(w)
    return np.array(pts)


def test_phi_examples():
    br = DispersionBranch(nu=1.0, kappa=0.5)
    assert br.phi(0.0) == pytest.approx(0.5)
    assert br.phi(math.pi) == pytest.approx(math.sqrt(0.25 + 4.0))
    assert DispersionBranch(1.0, 0.0).phi(math.pi / 2) == pytest.approx(math.sqrt(2.0))


def test_exp_itheta_at_zero_closed_form():
    br = DispersionBranch(nu=1.0, kappa=1.0)
    z = exp_itheta(br, 0.0)
    assert z == pytest.approx((3.0 - math.sqrt(5.0)) / 2.0)
    assert exp_itheta_at_zero(br) == pytest.approx(z.real)


def test_boundary_value_mid_band():
    br = DispersionBranch(nu=1.0, kappa=0.0)
    th = theta_branch(br, math.sqrt(2.0), PLUS_I0)
    assert th == pytest.approx(math.pi / 2)


def test_large_omega_decay():
    br = DispersionBranch(nu=1.0, kappa=0.0)
    z = exp_itheta(br, 10.0j)
    assert abs(z) < 0.02
    assert z == pytest.approx(roots_oracle(br, 10.0j))
    # |z| ~ nu^2/|omega|^2: compare scaled magnitudes along the imaginary axis
    mags = [abs(exp_itheta(br, 1j * R)) * R ** 2 for R in (10.0, 20.0, 40.0)]
    assert max(mags) / min(mags) < 1.2


@pytest.mark.parametrize("nu,kappa", [(1.0, 0.0), (1.0, 1.0), (0.7, 0.3), (1.4, 2.2)])
def test_interior_contracts(nu, kappa):
    br = DispersionBranch(nu=nu, kappa=kappa)
    rng = np.random.default_rng(11)
    pts = sample_offcut(br, rng, 150)
    th = theta_branch(br, pts)
    assert np.all(th.imag > 0.0)
    assert np.all((th.real > -math.pi - 1e-12) & (th.real <= math.pi + 1e-12))
    res = dispersion_residual(br, pts, th)
    assert np.max(res / np.maximum(1.0, np.abs(pts) ** 2)) < 1e-12
    # oracle comparison
    for w in pts[:40]:
        assert exp_itheta(br, w) == pytest.approx(roots_oracle(br, w), rel=1e-12)


def test_conjugation_symmetry():
    br = DispersionBranch(nu=1.0, kappa=0.7)
    rng = np.random.default_rng(5)
    pts = sample_offcut(br, rng, 60)
    th = np.asarray(theta_branch(br, pts))
    th_conj = np.asarray(theta_branch(br, np.conj(pts)))
    assert np.allclose(th_conj, -np.conj(th), rtol=0, atol=1e-13)


def test_cut_rejection_and_boundary_sign_rule():
    br = DispersionBranch(nu=1.0, kappa=1.0)
    with pytest.raises(OnCutError, match="plus_i0"):
        exp_itheta(br, 1.5)
    band = np.linspace(br.kappa + 1e-6, br.band_top - 1e-6, 101)
    for omegas, sign in ((band, 1.0), (-band, -1.0)):
        th = theta_branch(br, omegas, PLUS_I0)
        assert np.allclose(th.imag, 0.0, atol=1e-12)
        assert np.all(np.sign(np.sin(th.real)) == sign)
        th_m = theta_branch(br, omegas, MINUS_I0)
        assert np.allclose(np.sin(th_m.real), -np.sin(th.real), atol=1e-13)


def test_boundary_values_match_interior_limits():
    br = DispersionBranch(nu=1.0, kappa=0.6)
    for omega in (0.9, 1.7, -1.2):
        zb = exp_itheta(br, omega, PLUS_I0)
        prev = None
        for eps in (1e-3, 1e-5, 1e-7):
            zi = exp_itheta(br, omega + 1j * eps)
            err = abs(zi - zb)
            if prev is not None:
                assert err < prev
            prev = err
        assert prev < 1e-6


def test_no_branch_jump_along_path():
    # rectangle around the cut, sampled densely: theta must vary continuously
    br = DispersionBranch(nu=1.0, kappa=0.5)
    a = br.band_top
    top = np.linspace(-a - 0.5, a + 0.5, 400) + 0.15j
    right = a + 0.5 + 1j * np.linspace(0.15, -0.15, 60)
    bottom = np.linspace(a + 0.5, -a - 0.5, 400) - 0.15j
    left = -a - 0.5 + 1j * np.linspace(-0.15, 0.15, 60)
    path = np.concatenate([top, right, bottom, left])
    # z must never hop to the reciprocal root; theta is continuous up to the
    # 2 pi wrap of its principal-strip real part
    z = np.asarray(exp_itheta(br, path))
    assert np.max(np.abs(np.diff(z))) < 0.1
    th = np.asarray(theta_branch(br, path))
    d = np.diff(th)
    d_wrapped = np.abs(d.real - 2.0 * math.pi * np.round(d.real / (2.0 * math.pi))
                       + 1j * d.imag)
    assert np.max(d_wrapped) < 0.2


def test_edge_series_coefficients():
    br = DispersionBranch(nu=2.0, kappa=1.0)
    ser = edge_series(br, EDGE_KAPPA)
    assert ser.coefficients == (1.0, 0.5j, -0.125)
    ser_a = edge_series(br, EDGE_TOP)
    assert ser_a.coefficients[0] == -1.0
    assert ser_a.coefficients[1] == 0.5j
    with pytest.raises(ValueError, match="kappa = 0"):
        edge_series(br, EDGE_ZERO)
    br0 = DispersionBranch(nu=1.0, kappa=0.0)
    assert edge_series(br0, EDGE_ZERO).coefficients == (1.0, 1j, -0.5)


@pytest.mark.parametrize("nu,kappa,edge", [
    (1.0, 1.0, EDGE_KAPPA),
    (1.0, 1.0, EDGE_TOP),
    (0.8, 0.4, EDGE_KAPPA),
    (0.8, 0.4, EDGE_TOP),
    (1.0, 0.0, EDGE_ZERO),
    (1.0, 0.0, EDGE_TOP),
])
def test_edge_series_matches_branch(nu, kappa, edge):
    br = DispersionBranch(nu=nu, kappa=kappa)
    ser = edge_series(br, edge)
    base = ser.edge_value
    for direction in (1.0 + 1.0j, -1.0 + 1.0j):
        omega = base * (1 if base else 0) + 1e-4 * direction
        if base == 0.0 and direction.real < 0:
            omega = 1e-4 * direction
        exact = exp_itheta(br, omega)
        approx = ser.evaluate(omega)
        assert abs(exact - approx) / abs(exact) < 1e-5
