#!/usr/bin/env python3
"""
Test monotone transport maps on the line and Knothe-Rosenblatt maps in the plane.
"""

import numpy as np
import pytest

from nonlocal_energies.densities import Density1D, Density2D
from nonlocal_energies.errors import DomainError, MassMismatchError
from nonlocal_energies.transport import (
    TEST_FUNCTIONS,
    increasing_rearrangement_1d,
    knothe_rosenblatt_2d,
    verify_pushforward,
)


def _matched_pair(rng, n=5):
    source = Density2D.random(rng, n=n)
    target = Density2D.random(rng, n=n + 1, lo=-1.0, hi=2.0)
    target = Density2D(target.x_edges, target.y_edges, target.values * source.mass / target.mass)
    return source, target


def test_uniform_to_uniform_is_affine():
    """uniform[0,1] -> uniform[2,5] is T(x) = 2 + 3x."""
    T = increasing_rearrangement_1d(Density1D.uniform(0.0, 1.0), Density1D.uniform(2.0, 5.0))
    x = np.linspace(0.0, 1.0, 11)
    assert np.allclose(T(x), 2.0 + 3.0 * x, atol=1e-14)
    assert T.is_monotone()
    assert T.cdf_residual() < 1e-14


def test_random_maps_push_forward():
    rng = np.random.default_rng(123)
    for _ in range(10):
        mu = Density1D.random(rng)
        nu = Density1D.random(rng, lo=-2.0, hi=3.0)
        nu = Density1D(nu.edges, nu.values * mu.mass / nu.mass)
        T = increasing_rearrangement_1d(mu, nu)
        assert T.is_monotone()
        assert T.cdf_residual() < 1e-12
        table = T.table()
        assert table.shape[1] == 2
        assert np.all(np.diff(table[:, 1]) >= -1e-14)


def test_inverse_map_composes_to_identity():
    mu = Density1D([0.0, 0.5, 1.0], [1.0, 3.0])
    nu = Density1D([-1.0, 0.0, 1.0], [0.5, 1.5])
    T = increasing_rearrangement_1d(mu, nu)
    x = np.linspace(0.0, 1.0, 17)
    assert np.allclose(T.inverse()(T(x)), x, atol=1e-13)


def test_mass_mismatch():
    with pytest.raises(MassMismatchError):
        increasing_rearrangement_1d(Density1D.uniform(0.0, 1.0), Density1D.uniform(0.0, 1.0, mass=2.0))
    with pytest.raises(DomainError):
        knothe_rosenblatt_2d(Density2D.uniform(0.0, 1.0), Density2D.uniform(0.0, 1.0, mass=1.5))


def test_knothe_rosenblatt_dilation():
    """Uniform on the unit square to uniform on [0, 2]^2 is x -> 2x."""
    kr = knothe_rosenblatt_2d(Density2D.uniform(0.0, 1.0, n=3), Density2D.uniform(0.0, 2.0, n=2))
    pts = np.array([[0.1, 0.2], [0.5, 0.5], [0.9, 0.3]])
    assert np.allclose(kr(pts), 2.0 * pts, atol=1e-13)


def test_knothe_rosenblatt_is_triangular():
    """The first coordinate of T depends on x1 only."""
    rng = np.random.default_rng(9)
    source, target = _matched_pair(rng)
    kr = knothe_rosenblatt_2d(source, target)
    pts = np.array([[0.3, 0.1], [0.3, 0.6], [0.3, 0.95]])
    out = kr(pts)
    assert np.allclose(out[:, 0], out[0, 0])
    assert np.all(np.diff(out[:, 1]) >= 0.0)


def test_pushforward_on_seeded_pairs():
    rng = np.random.default_rng(2718)
    for _ in range(3):
        source, target = _matched_pair(rng)
        report = verify_pushforward(knothe_rosenblatt_2d(source, target))
        assert len(report.residuals) == len(TEST_FUNCTIONS)
        assert report.passed
        # polynomials of degree <= 3 are integrated exactly on the affine pieces
        for k in (0, 1, 2, 3, 4, 9):
            assert report.residuals[k] < 1e-10


def test_knothe_rosenblatt_skips_empty_target_column():
    """A source column boundary mapped onto an empty target column lands in the next occupied one."""
    source = Density2D([0.0, 2.0], [0.0, 1.0], [[1.0]])
    target = Density2D([0.0, 1.0, 2.0, 3.0], [0.0, 0.5, 1.0], [[1.0, 1.0], [0.0, 0.0], [1.0, 1.0]])
    kr = knothe_rosenblatt_2d(source, target)
    out = kr(np.array([[0.5, 0.25], [1.0, 0.25], [1.5, 0.75]]))
    assert np.allclose(out, [[0.5, 0.25], [1.0, 0.25], [2.5, 0.75]], atol=1e-13)
    assert verify_pushforward(kr).passed


if __name__ == "__main__":
    print("=" * 80)
    print("Running Transport Tests")
    print("=" * 80)

    print("\nTest 1: Maps on the line")
    test_uniform_to_uniform_is_affine()
    test_random_maps_push_forward()
    test_inverse_map_composes_to_identity()
    test_mass_mismatch()

    print("\nTest 2: Knothe-Rosenblatt maps")
    test_knothe_rosenblatt_dilation()
    test_knothe_rosenblatt_is_triangular()
    test_pushforward_on_seeded_pairs()
    test_knothe_rosenblatt_skips_empty_target_column()

    print("\n" + "=" * 80)
    print("All transport tests completed successfully!")
    print("=" * 80)
