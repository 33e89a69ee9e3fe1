"""Gaussian region profile and its multipole moments, cross-checked by quadrature."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from udwtomo import smearing
from udwtomo.smearing import GaussianRegion
from udwtomo.spacetime import Event


def gauss1d_moment(power: int, ell: float, halfwidth: float) -> float:
    val, _ = quad(lambda u: u**power * math.exp(-u * u / (2 * ell * ell)),
                  -halfwidth, halfwidth, epsabs=1e-14, limit=200,
                  points=[0.0])
    return val


def test_peak_value():
    region = GaussianRegion(Event(0, 0, 0, 0), 1.0)
    assert smearing.evaluate(region, region.center) == pytest.approx(
        1.0 / (2 * math.pi) ** 2, rel=1e-15)


def test_one_sigma_ring():
    ell = 0.7
    region = GaussianRegion(Event(1.0, 2.0, 3.0, 4.0), ell)
    peak = smearing.evaluate(region, region.center)
    # any offset with squared norm 2 ell^2 sits at e^{-1} of the peak
    off = Event(1.0 + ell, 2.0 + ell, 3.0, 4.0)
    assert smearing.evaluate(region, off) == pytest.approx(peak / math.e, rel=1e-14)


def test_unit_normalisation_by_quadrature():
    # 4D integral factorises into identical 1D Gaussians; halfwidth 10 ell
    # keeps the truncated tail below 1e-10
    for ell in (0.5, 1.0, 2.0):
        one_d = gauss1d_moment(0, ell, 10.0 * ell)
        total = one_d**4 / ((2 * math.pi) ** 2 * ell**4)
        assert total == pytest.approx(1.0, abs=1e-10)


def test_symmetry_under_rotation_and_t_reflection():
    region = GaussianRegion(Event(0.5, -1.0, 0.0, 2.0), 1.3)
    c = region.center
    a = smearing.evaluate(region, Event(c.t + 0.4, c.x + 0.3, c.y, c.z))
    b = smearing.evaluate(region, Event(c.t - 0.4, c.x, c.y + 0.3, c.z))
    assert a == pytest.approx(b, rel=1e-14)


def test_odd_moments_vanish():
    ell = 0.8
    for power in (1, 3):
        m = gauss1d_moment(power, ell, 10.0 * ell)
        norm = gauss1d_moment(0, ell, 10.0 * ell)
        assert abs(m) / norm < 1e-12


def test_quadrupole_matches_quadrature():
    for ell in (0.3, 1.0, 1.7):
        second = gauss1d_moment(2, ell, 8.0 * ell)
        norm = gauss1d_moment(0, ell, 8.0 * ell)
        assert second / norm == pytest.approx(ell * ell, rel=1e-10)
        ms = smearing.moments(GaussianRegion(Event(0, 0, 0, 0), ell))
        assert np.allclose(np.diag(ms.quadrupole), ell * ell)


def test_moments_flat():
    ms = smearing.moments(GaussianRegion(Event(0, 0, 0, 0), 0.4))
    assert ms.monopole == 1.0
    assert np.all(ms.dipole == 0.0)
    assert np.allclose(ms.quadrupole, 0.16 * np.eye(4))
    assert ms.ricci_trace_correction == 0.0


def test_moments_zero_ricci_same_as_absent():
    region = GaussianRegion(Event(0, 0, 0, 0), 0.4)
    a = smearing.moments(region)
    b = smearing.moments(region, ricci=np.zeros((4, 4)))
    assert a.monopole == b.monopole
    assert np.array_equal(a.quadrupole, b.quadrupole)


def test_moments_with_ricci_trace():
    r = 0.7
    ms = smearing.moments(GaussianRegion(Event(0, 0, 0, 0), 0.1),
                          ricci=np.diag([r, r, r, r]))
    assert ms.monopole == pytest.approx(1.0 - 0.01 / 6.0 * 4.0 * r, rel=1e-14)


def test_bad_inputs():
    with pytest.raises(ValueError):
        GaussianRegion(Event(0, 0, 0, 0), 0.0)
    with pytest.raises(ValueError):
        smearing.moments(GaussianRegion(Event(0, 0, 0, 0), 1.0), ricci=np.eye(3))
