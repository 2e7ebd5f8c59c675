#!/usr/bin/env python3
"""
Test attractive and Riesz energies of nearly-spherical shapes and ball
clusters, and the shape-kind dispatch.
"""

import math

import numpy as np
import pytest

from nonlocal_energies.ball_cluster import BallCluster
from nonlocal_energies.errors import DomainError
from nonlocal_energies.nearly_spherical import NearlySphericalShape
from nonlocal_energies.radial_profile import RadialProfile, annulus_family
from nonlocal_energies.shape_energy import (
    ball_pair_energy,
    cluster_energy,
    deficit_beta,
    energy_error_estimate,
    g_beta,
    g_beta_ball,
    g_beta_truncated,
    nearly_spherical_deficit,
    nearly_spherical_energy,
    v_alpha,
)
from nonlocal_energies.sphere_grid import SphereGrid


def _quadratic_energy(shape):
    """G_2(E) = 2 |E| int |x|^2 - 2 |int x|^2 from grid moments."""
    grid = shape.grid
    N = shape.N
    R = shape.radius
    second = grid.integrate(R ** (N + 2)) / (N + 2)
    first = (grid.weights * R ** (N + 1)) @ grid.nodes / (N + 1)
    return 2.0 * shape.volume() * second - 2.0 * float(first @ first)


def test_unperturbed_shape_is_the_ball():
    grid = SphereGrid(2, 64)
    ball = NearlySphericalShape.unit_ball(grid)
    assert nearly_spherical_energy(ball, 2.0) == pytest.approx(math.pi**2, rel=1e-13)
    assert nearly_spherical_energy(ball.rescale(2.0), 2.0) == pytest.approx(64.0 * math.pi**2, rel=1e-13)
    flat = NearlySphericalShape(grid, 0.3, np.zeros(len(grid)))
    assert nearly_spherical_energy(flat, 1.0) == pytest.approx(g_beta_ball(2, 1.0), rel=1e-13)
    assert nearly_spherical_deficit(ball, 1.0) == 0.0


def test_quadratic_kernel_plane():
    """u = cos(2 phi) / 2: G_2 = pi^2 (1 + a^2/2)(1 + 3a^2 + 3a^4/8) with a = t/2."""
    grid = SphereGrid(2, 64)
    t = 0.2
    a = 0.5 * t
    shape = NearlySphericalShape(grid, t, 0.5 * np.cos(2.0 * grid.phi))
    expected = math.pi**2 * (1.0 + 0.5 * a * a) * (1.0 + 3.0 * a * a + 3.0 * a**4 / 8.0)
    assert nearly_spherical_energy(shape, 2.0) == pytest.approx(expected, rel=1e-11)


def test_quadratic_kernel_random_shapes():
    rng = np.random.default_rng(21)
    for grid in (SphereGrid(2, 64), SphereGrid(3, 16)):
        for _ in range(3):
            shape = NearlySphericalShape(grid, 0.1, grid.random_band_limited(rng, 1, 5))
            assert nearly_spherical_energy(shape, 2.0) == pytest.approx(_quadratic_energy(shape), rel=1e-9)


def test_deficit_matches_energy_difference():
    rng = np.random.default_rng(4)
    grid = SphereGrid(2, 64)
    for beta in (0.5, 1.0, 3.0):
        shape = NearlySphericalShape(grid, 0.1, grid.random_band_limited(rng, 2, 6))
        direct = nearly_spherical_energy(shape, beta) - g_beta_ball(2, beta, shape.volume())
        assert nearly_spherical_deficit(shape, beta) == pytest.approx(direct, abs=1e-10)
        assert deficit_beta(shape, beta) > 0.0


def test_riesz_energy_below_ball():
    """Among sets of volume pi the disc maximizes V_1."""
    grid = SphereGrid(2, 128)
    shape = NearlySphericalShape(grid, 0.2, 0.5 * np.cos(3.0 * grid.phi))
    shape = shape.rescale((math.pi / shape.volume()) ** 0.5)
    ball = NearlySphericalShape.unit_ball(grid)
    assert v_alpha(ball, 1.0) == pytest.approx(16.0 * math.pi / 3.0, rel=1e-12)
    assert v_alpha(shape, 1.0) < v_alpha(ball, 1.0)


def test_error_estimate():
    grid = SphereGrid(2, 64)
    shape = NearlySphericalShape(grid, 0.1, 0.5 * np.cos(2.0 * grid.phi))
    assert energy_error_estimate(shape, 1.0) < 1e-8
    assert energy_error_estimate(NearlySphericalShape.unit_ball(grid), 1.0) == 0.0


def test_two_ball_cluster_quadratic():
    """Two discs of radius r at distance d: 4 pi^2 r^6 + 2 pi^2 r^4 d^2."""
    cluster = BallCluster.two_balls(4.0, 2)
    r = cluster.radius
    expected = 4.0 * math.pi**2 * r**6 + 2.0 * math.pi**2 * r**4 * 16.0
    assert cluster_energy(cluster, 2.0) == pytest.approx(expected, rel=1e-8)
    assert deficit_beta(cluster, 2.0) == pytest.approx(expected - math.pi**2, rel=1e-8)


def test_ball_pair_energy_symmetry_and_overlap():
    assert ball_pair_energy(3.0, 1.0, 3, 1.0) > ball_pair_energy(2.5, 1.0, 3, 1.0)
    with pytest.raises(DomainError):
        ball_pair_energy(1.0, 1.0, 2, 1.0)


def test_dispatch_by_kind():
    E = annulus_family(0.1, 2)
    assert g_beta(E, 1.0) > g_beta(RadialProfile.ball(2), 1.0)
    assert deficit_beta(E, 1.0) > 0.0
    with pytest.raises(DomainError):
        g_beta(E, -1.0)
    with pytest.raises(DomainError):
        v_alpha(E, 2.5)


def test_truncated_energy_of_shapes():
    grid = SphereGrid(2, 48)
    shape = NearlySphericalShape(grid, 0.1, 0.5 * np.cos(2.0 * grid.phi))
    full = g_beta(shape, 1.0)
    assert g_beta_truncated(shape, 1.0, 10.0) == pytest.approx(full, rel=1e-13)
    assert g_beta_truncated(shape, 1.0, 1.0) < full
    cluster = BallCluster.two_balls(3.0, 2)
    assert g_beta_truncated(cluster, 1.0, 1.0) < g_beta(cluster, 1.0)
    with pytest.raises(DomainError):
        g_beta_truncated(shape, 1.0, -1.0)


if __name__ == "__main__":
    print("=" * 80)
    print("Running Shape Energy Tests")
    print("=" * 80)

    print("\nTest 1: Nearly-spherical energies")
    test_unperturbed_shape_is_the_ball()
    test_quadratic_kernel_plane()
    test_quadratic_kernel_random_shapes()
    test_deficit_matches_energy_difference()
    test_riesz_energy_below_ball()
    test_error_estimate()

    print("\nTest 2: Ball clusters")
    test_two_ball_cluster_quadratic()
    test_ball_pair_energy_symmetry_and_overlap()

    print("\nTest 3: Dispatch and truncation")
    test_dispatch_by_kind()
    test_truncated_energy_of_shapes()

    print("\n" + "=" * 80)
    print("All shape energy tests completed successfully!")
    print("=" * 80)
