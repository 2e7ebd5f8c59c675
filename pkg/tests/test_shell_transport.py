#!/usr/bin/env python3
"""
Test sector-wise radial shell transport and the energy bound it controls.
"""

import math

import numpy as np
import pytest

from nonlocal_energies.errors import DomainError, MassMismatchError
from nonlocal_energies.radial_profile import RadialDensity, RadialProfile
from nonlocal_energies.shell_transport import (
    outer_to_inner_shells,
    shell_transport,
    transport_constant,
    transport_energy_bound_check,
    transport_exponent,
)

FULL_TURN = [0.0, 2.0 * math.pi]


def test_identity_map():
    shells = [[(0.5, 0.8), (1.0, 1.3)]]
    phi = shell_transport(FULL_TURN, shells, shells)
    pts = np.array([[0.6, 0.0], [0.0, -1.1], [-0.8, 0.8]])
    assert np.allclose(phi(pts), pts, atol=1e-14)
    assert phi.transport_cost() == pytest.approx(0.0, abs=1e-14)
    assert np.allclose(phi.displacement(pts), 0.0, atol=1e-14)


def test_outer_shell_onto_inner_shell():
    """(1, 1.2) onto (sqrt(0.56), 1): rho -> sqrt(rho^2 - 0.44)."""
    inner = math.sqrt(0.56)
    phi = shell_transport(FULL_TURN, [[(1.0, 1.2)]], [[(inner, 1.0)]])
    assert phi.radius_map(0, 1.1) == pytest.approx(math.sqrt(0.77), rel=1e-13)
    assert phi.radius_map(0, 1.2) == pytest.approx(1.0, rel=1e-13)
    assert phi.source_area() == pytest.approx(0.44 * math.pi, rel=1e-13)
    expected = 2.0 * math.pi * ((1.44**1.5 - 1.0) - (1.0 - 0.56**1.5)) / 3.0
    assert phi.transport_cost() == pytest.approx(expected, rel=1e-8)
    point = np.array([[0.0, 1.1]])
    assert np.allclose(phi(point), [[0.0, math.sqrt(0.77)]], atol=1e-13)
    table = phi.tables()[0]
    assert table[0, 0] == pytest.approx(1.0)
    assert table[0, 1] == pytest.approx(inner)


def test_sectors_and_wrapping():
    edges = [0.0, math.pi, 2.0 * math.pi]
    phi = shell_transport(edges, [[(1.0, 1.2)], []], [[(math.sqrt(0.56), 1.0)], []])
    assert phi.n_sectors == 2
    assert phi.sector_of([0.5, -0.5, 3.5]).tolist() == [0, 1, 1]
    # points in the empty sector stay put
    assert np.allclose(phi([[0.0, -1.1]]), [[0.0, -1.1]])
    assert phi.source_area() == pytest.approx(0.22 * math.pi, rel=1e-13)
    assert phi.outer_radius() == pytest.approx(1.2)


def test_invalid_shells():
    with pytest.raises(MassMismatchError):
        shell_transport(FULL_TURN, [[(1.0, 1.2)]], [[(0.5, 1.0)]])
    with pytest.raises(DomainError):
        shell_transport(FULL_TURN, [[(1.0, 1.2), (1.1, 1.3)]], [[(1.0, 1.2), (1.1, 1.3)]])
    with pytest.raises(DomainError):
        shell_transport([0.0, 1.0, 2.0 * math.pi], [[(1.0, 1.2)]], [[(1.0, 1.2)]])


def test_random_outer_to_inner_preserves_area():
    rng = np.random.default_rng(31)
    phi = outer_to_inner_shells(6, rng)
    for k in range(phi.n_sectors):
        (a,) = phi.source_shells[k]
        (b,) = phi.target_shells[k]
        assert a[1] ** 2 - a[0] ** 2 == pytest.approx(b[1] ** 2 - b[0] ** 2, rel=1e-12)
    assert phi.transport_cost() > 0.0


def test_exponent_and_constant():
    assert transport_exponent(2, 0.5) == pytest.approx(0.75)
    assert transport_exponent(2, 2.0) == 1.0
    assert transport_constant(1.5, 2, 2.0) == pytest.approx(2.0 * 3.0)
    assert transport_constant(1.5, 2, 0.5) == pytest.approx(0.5 * 2.0 * math.pi**0.25 / 1.5)


def test_energy_bound_on_seeded_cases():
    rng = np.random.default_rng(5)
    for beta in (0.5, 2.0):
        for _ in range(4):
            phi = outer_to_inner_shells(4, rng)
            e3 = RadialDensity.random(2, rng)
            report = transport_energy_bound_check(phi, e3, beta)
            assert report.passed
            assert report.lhs >= 0.0
            assert report.cost == pytest.approx(phi.transport_cost())


def test_energy_bound_needs_planar_density():
    phi = outer_to_inner_shells(2, np.random.default_rng(0))
    with pytest.raises(DomainError):
        transport_energy_bound_check(phi, RadialProfile.ball(3), 1.0)


if __name__ == "__main__":
    print("=" * 80)
    print("Running Shell Transport Tests")
    print("=" * 80)

    print("\nTest 1: Shell maps")
    test_identity_map()
    test_outer_shell_onto_inner_shell()
    test_sectors_and_wrapping()
    test_invalid_shells()
    test_random_outer_to_inner_preserves_area()

    print("\nTest 2: Energy bound")
    test_exponent_and_constant()
    test_energy_bound_on_seeded_cases()
    test_energy_bound_needs_planar_density()

    print("\n" + "=" * 80)
    print("All shell transport tests completed successfully!")
    print("=" * 80)
