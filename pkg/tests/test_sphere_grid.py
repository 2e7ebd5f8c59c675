#!/usr/bin/env python3
"""
Test sphere quadrature grids and the harmonics sampled on them.
"""

import math

import numpy as np
import pytest

from nonlocal_energies.errors import DomainError, PreconditionError
from nonlocal_energies.special_fn import spherical_poly
from nonlocal_energies.sphere_grid import SphereGrid


def test_grid_sizes_and_area():
    circle = SphereGrid(2, 64)
    assert len(circle) == 64
    assert circle.max_degree == 31
    assert circle.integrate(np.ones(len(circle))) == pytest.approx(2.0 * math.pi, rel=1e-14)

    sphere = SphereGrid(3, 12)
    assert len(sphere) == 12 * 24
    assert sphere.max_degree == 11
    assert sphere.integrate(np.ones(len(sphere))) == pytest.approx(4.0 * math.pi, rel=1e-13)
    assert np.allclose(np.linalg.norm(sphere.nodes, axis=1), 1.0)


def test_invalid_grids():
    with pytest.raises(DomainError):
        SphereGrid(4, 10)
    with pytest.raises(DomainError):
        SphereGrid(2, 2)


def test_harmonics_orthonormal():
    """Gram matrix of all harmonics up to max_degree is the identity."""
    for grid in (SphereGrid(2, 32), SphereGrid(3, 8)):
        Y = np.vstack([grid.harmonics(k) for k in range(grid.max_degree + 1)])
        gram = (Y * grid.weights) @ Y.T
        assert np.allclose(gram, np.eye(Y.shape[0]), atol=1e-12)


def test_harmonic_dimensions():
    grid = SphereGrid(3, 10)
    for k in range(6):
        assert grid.harmonics(k).shape == (2 * k + 1, len(grid))
    circle = SphereGrid(2, 16)
    assert circle.harmonics(0).shape[0] == 1
    assert circle.harmonics(3).shape[0] == 2


def test_harmonics_beyond_resolution():
    grid = SphereGrid(2, 16)
    with pytest.raises(PreconditionError):
        grid.harmonics(grid.max_degree + 1)
    with pytest.raises(DomainError):
        grid.harmonics(-1)


def test_project_synthesize_roundtrip():
    rng = np.random.default_rng(7)
    grid = SphereGrid(3, 10)
    coefficients = [rng.standard_normal(2 * k + 1) for k in range(5)]
    u = grid.synthesize(coefficients)
    for k in range(5):
        assert np.allclose(grid.project(u, k), coefficients[k], atol=1e-12)
    assert np.allclose(grid.project(u, 6), 0.0, atol=1e-12)


def test_zonal_addition_theorem():
    """The degree-k zonal function lies in the degree-k eigenspace."""
    grid = SphereGrid(3, 12)
    axis = np.array([0.0, 0.6, 0.8])
    z = grid.zonal(3, axis)
    assert np.allclose(z, spherical_poly(3, 3, grid.nodes @ axis))
    for k in (0, 1, 2, 4):
        assert np.allclose(grid.project(z, k), 0.0, atol=1e-12)
    assert grid.l2_norm_sq(z) == pytest.approx(4.0 * math.pi / 7.0, rel=1e-12)


def test_tangential_gradient_circle():
    grid = SphereGrid(2, 64)
    u = np.cos(3.0 * grid.phi)
    assert np.allclose(grid.tangential_gradient_sq(u), 9.0 * np.sin(3.0 * grid.phi) ** 2, atol=1e-11)


def test_tangential_gradient_sphere():
    """Dirichlet energy of a degree-k harmonic is k(k+1) times its L2 norm."""
    grid = SphereGrid(3, 12)
    for k in (1, 2, 4):
        u = grid.harmonics(k)[1]
        energy = grid.integrate(grid.tangential_gradient_sq(u))
        assert energy == pytest.approx(k * (k + 1), rel=1e-9)


def test_angular_derivative_only_on_circle():
    with pytest.raises(PreconditionError):
        SphereGrid(3, 6).angular_derivative(np.zeros(6 * 12))


def test_lipschitz_check():
    grid = SphereGrid(2, 64)
    grid.check_lipschitz(0.3 * np.cos(2.0 * grid.phi))
    jagged = np.where(np.arange(64) % 2 == 0, 0.4, -0.4)
    assert grid.max_neighbor_jump(jagged) == pytest.approx(0.8)
    with pytest.raises(PreconditionError):
        grid.check_lipschitz(jagged)


def test_random_band_limited():
    rng = np.random.default_rng(3)
    grid = SphereGrid(3, 12)
    u = grid.random_band_limited(rng, 2, 6, sup_norm=0.4)
    assert np.max(np.abs(u)) == pytest.approx(0.4)
    assert np.allclose(grid.project(u, 0), 0.0, atol=1e-12)
    assert np.allclose(grid.project(u, 1), 0.0, atol=1e-12)
    with pytest.raises(PreconditionError):
        grid.random_band_limited(rng, 2, 40)


def test_dict_roundtrip_layout():
    grid = SphereGrid(3, 9, n_phi=20)
    again = SphereGrid.from_dict(grid.to_dict())
    assert again.same_layout(grid)
    assert not SphereGrid(3, 9).same_layout(grid)


if __name__ == "__main__":
    print("=" * 80)
    print("Running Sphere Grid Tests")
    print("=" * 80)

    print("\nTest 1: Grid construction")
    test_grid_sizes_and_area()
    test_invalid_grids()
    test_dict_roundtrip_layout()

    print("\nTest 2: Harmonics")
    test_harmonics_orthonormal()
    test_harmonic_dimensions()
    test_harmonics_beyond_resolution()
    test_project_synthesize_roundtrip()
    test_zonal_addition_theorem()

    print("\nTest 3: Derivatives and regularity")
    test_tangential_gradient_circle()
    test_tangential_gradient_sphere()
    test_angular_derivative_only_on_circle()
    test_lipschitz_check()
    test_random_band_limited()

    print("\n" + "=" * 80)
    print("All sphere grid tests completed successfully!")
    print("=" * 80)
