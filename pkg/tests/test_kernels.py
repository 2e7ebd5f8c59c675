#!/usr/bin/env python3
"""
Test closed forms for power kernels on spheres and balls.
"""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from nonlocal_energies.errors import DomainError
from nonlocal_energies.kernels import (
    ball_fractional_perimeter,
    ball_lens_volume,
    ball_power_energy,
    sphere_ball_overlap,
    sphere_power_mean,
    sphere_power_mean_dot,
)


def _circle_mean(a, b, q, weight=None):
    def integrand(phi):
        val = (a * a + b * b - 2.0 * a * b * math.cos(phi)) ** (0.5 * q)
        return val * (math.cos(phi) if weight else 1.0)

    value, _ = quad(integrand, 0.0, math.pi, epsabs=1e-13, epsrel=1e-13, limit=200)
    return value / math.pi


def _sphere_mean_3d(a, b, q):
    value, _ = quad(
        lambda t: (a * a + b * b - 2.0 * a * b * t) ** (0.5 * q), -1.0, 1.0, epsabs=1e-13, epsrel=1e-13
    )
    return 0.5 * value


def test_sphere_power_mean_plane():
    for a, b, q in [(1.0, 0.3, 1.5), (0.7, 2.0, 2.0), (1.0, 0.5, -1.0), (2.0, 1.9, 0.5)]:
        assert sphere_power_mean(a, b, q, 2) == pytest.approx(_circle_mean(a, b, q), rel=1e-10)


def test_sphere_power_mean_space():
    """Elementary and hypergeometric branches agree with direct quadrature."""
    for a, b, q in [(1.0, 0.1, 1.0), (1.0, 0.8, 2.5), (1.0, 0.5, -2.0), (0.4, 1.3, -1.5)]:
        assert sphere_power_mean(a, b, q, 3) == pytest.approx(_sphere_mean_3d(a, b, q), rel=1e-10)


def test_sphere_power_mean_zero_radius():
    assert sphere_power_mean(2.0, 0.0, 1.5, 3) == pytest.approx(2.0**1.5)
    assert sphere_power_mean(0.0, 3.0, 2.0, 2) == pytest.approx(9.0)


def test_sphere_power_mean_dot():
    for a, b, q in [(1.0, 0.6, 1.0), (1.0, 0.9, 0.3)]:
        assert sphere_power_mean_dot(a, b, q, 2) == pytest.approx(
            _circle_mean(a, b, q, weight=True), rel=1e-9
        )


def test_ball_power_energy_closed_values():
    """G_2 of the unit disc is pi^2, of the unit ball in R^3 it is 32 pi^2 / 15."""
    assert ball_power_energy(2, 2.0) == pytest.approx(math.pi**2, rel=1e-13)
    assert ball_power_energy(3, 2.0) == pytest.approx(32.0 * math.pi**2 / 15.0, rel=1e-13)
    assert ball_power_energy(2, 1.0) == pytest.approx(128.0 * math.pi / 45.0, rel=1e-13)
    assert ball_power_energy(2, -1.0) == pytest.approx(16.0 * math.pi / 3.0, rel=1e-13)


def test_ball_power_energy_diverges():
    with pytest.raises(DomainError):
        ball_power_energy(2, -2.0)


def test_ball_fractional_perimeter_limits():
    assert ball_fractional_perimeter(2, 1.0) == pytest.approx(2.0 * math.pi)
    assert ball_fractional_perimeter(3, 1.0) == pytest.approx(4.0 * math.pi)
    # continuous in s at s = 1
    assert ball_fractional_perimeter(2, 1.0 - 1e-7) == pytest.approx(2.0 * math.pi, rel=1e-5)
    with pytest.raises(DomainError):
        ball_fractional_perimeter(2, 0.0)


def test_sphere_ball_overlap():
    """Full sphere inside, fully outside, and a half circle through the center."""
    assert sphere_ball_overlap(0.5, 0.2, 1.0, 2) == pytest.approx(2.0 * math.pi * 0.5)
    assert sphere_ball_overlap(0.5, 3.0, 1.0, 3) == pytest.approx(0.0)
    # circle of radius 1 centered at distance 1 from the origin meets B_1 in an arc of angle 2 pi / 3
    assert sphere_ball_overlap(1.0, 1.0, 1.0, 2) == pytest.approx(2.0 * math.pi / 3.0)


def test_ball_lens_volume():
    assert ball_lens_volume(1.0, 1.0, 0.0, 2) == pytest.approx(math.pi)
    assert ball_lens_volume(1.0, 1.0, 2.5, 3) == 0.0
    # two unit discs at distance 1: 2 pi / 3 - sqrt(3) / 2
    assert ball_lens_volume(1.0, 1.0, 1.0, 2) == pytest.approx(2.0 * math.pi / 3.0 - math.sqrt(3.0) / 2.0)
    # two unit balls at distance 1: 5 pi / 12
    assert ball_lens_volume(1.0, 1.0, 1.0, 3) == pytest.approx(5.0 * math.pi / 12.0)


def test_sphere_power_mean_broadcasts():
    a = np.array([1.0, 2.0, 3.0])
    out = sphere_power_mean(a[:, None], a[None, :], 1.0, 3)
    assert out.shape == (3, 3)
    assert np.allclose(out, out.T)


if __name__ == "__main__":
    print("=" * 80)
    print("Running Kernel Tests")
    print("=" * 80)

    print("\nTest 1: Spherical means")
    test_sphere_power_mean_plane()
    test_sphere_power_mean_space()
    test_sphere_power_mean_zero_radius()
    test_sphere_power_mean_dot()
    test_sphere_power_mean_broadcasts()

    print("\nTest 2: Ball energies")
    test_ball_power_energy_closed_values()
    test_ball_power_energy_diverges()
    test_ball_fractional_perimeter_limits()

    print("\nTest 3: Overlaps")
    test_sphere_ball_overlap()
    test_ball_lens_volume()

    print("\n" + "=" * 80)
    print("All kernel tests completed successfully!")
    print("=" * 80)
