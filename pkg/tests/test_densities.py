#!/usr/bin/env python3
"""
Test gridded densities and the radially decreasing rearrangement.
"""

import math

import numpy as np
import pytest

from nonlocal_energies.densities import (
    Density1D,
    Density2D,
    decreasing_rearrangement,
    distribution_function,
)
from nonlocal_energies.errors import DomainError
from nonlocal_energies.radial_profile import RadialDensity


def test_density1d_mass_and_cdf():
    density = Density1D([0.0, 1.0, 2.0, 3.0], [1.0, 0.0, 2.0])
    assert density.mass == pytest.approx(3.0)
    assert density.cdf(1.5) == pytest.approx(1.0)
    assert density.cdf(2.5) == pytest.approx(2.0)
    assert density.cdf(10.0) == pytest.approx(3.0)


def test_quantile_skips_empty_cells():
    density = Density1D([0.0, 1.0, 2.0, 3.0], [1.0, 0.0, 1.0])
    assert density.quantile(0.0) == 0.0
    assert density.quantile(1.0) == pytest.approx(1.0)
    assert density.quantile(1.5) == pytest.approx(2.5)
    assert np.allclose(density.quantile(np.array([0.5, 2.0])), [0.5, 3.0])


def test_density1d_validation():
    with pytest.raises(DomainError):
        Density1D([0.0, 0.0], [1.0])
    with pytest.raises(DomainError):
        Density1D([0.0, 1.0], [-1.0])
    with pytest.raises(DomainError):
        Density1D([0.0, 1.0], [1.0, 2.0])
    with pytest.raises(DomainError):
        Density1D([0.0, 1.0], [0.0]).normalized()


def test_density1d_helpers():
    uniform = Density1D.uniform(2.0, 5.0, mass=1.5, n_cells=3)
    assert uniform.mass == pytest.approx(1.5)
    assert uniform.normalized().mass == pytest.approx(1.0)
    assert uniform.scaled(2.0).mass == pytest.approx(3.0)
    rng = np.random.default_rng(0)
    for _ in range(10):
        density = Density1D.random(rng, lo=-1.0, hi=2.0)
        assert density.edges[0] == pytest.approx(-1.0)
        assert density.edges[-1] == pytest.approx(2.0)
        assert density.mass > 0.0


def test_density2d_basics():
    density = Density2D([0.0, 1.0, 3.0], [0.0, 2.0], [[0.5], [0.25]])
    assert density.mass == pytest.approx(0.5 * 2.0 + 0.25 * 4.0)
    marginal = density.marginal_x()
    assert marginal.mass == pytest.approx(density.mass)
    assert density.column(1).mass == pytest.approx(0.5)
    assert density.value_at([[0.5, 1.0], [2.0, 1.0], [5.0, 1.0]]).tolist() == [0.5, 0.25, 0.0]
    with pytest.raises(DomainError):
        Density2D([0.0, 1.0], [0.0, 1.0], [[1.0, 2.0]])


def test_rearrangement_of_planar_density():
    rng = np.random.default_rng(17)
    density = Density2D.random(rng, n=5)
    star = decreasing_rearrangement(density)
    assert star.N == 2
    assert star.volume() == pytest.approx(density.mass, rel=1e-13)
    assert np.all(np.diff(star.values) < 0.0)
    for level in (0.1, 0.4, 0.8):
        assert distribution_function(star, level) == pytest.approx(
            distribution_function(density, level), rel=1e-12
        )


def test_rearrangement_of_radial_density():
    """A shell with value 1 outside a core of value 1/2 becomes a ball with a halo."""
    density = RadialDensity(3, [1.0, 2.0], [0.5, 1.0])
    star = decreasing_rearrangement(density)
    assert star.values.tolist() == [1.0, 0.5]
    assert star.breakpoints[0] == pytest.approx(7.0 ** (1.0 / 3.0))
    assert star.breakpoints[1] == pytest.approx(2.0)
    assert star.volume() == pytest.approx(density.volume())


def test_rearrangement_merges_equal_levels():
    density = Density2D([0.0, 1.0, 2.0], [0.0, 1.0], [[1.0], [1.0]])
    star = decreasing_rearrangement(density)
    assert star.is_ball_indicator()
    assert star.breakpoints[0] == pytest.approx(math.sqrt(2.0 / math.pi))


def test_rearrangement_rejects():
    with pytest.raises(DomainError):
        decreasing_rearrangement(Density2D([0.0, 1.0], [0.0, 1.0], [[0.0]]))
    with pytest.raises(DomainError):
        decreasing_rearrangement(Density2D([0.0, 1.0], [0.0, 1.0], [[2.0]]))
    with pytest.raises(DomainError):
        decreasing_rearrangement(Density1D([0.0, 1.0], [1.0]))


if __name__ == "__main__":
    print("=" * 80)
    print("Running Density Tests")
    print("=" * 80)

    print("\nTest 1: One-dimensional densities")
    test_density1d_mass_and_cdf()
    test_quantile_skips_empty_cells()
    test_density1d_validation()
    test_density1d_helpers()

    print("\nTest 2: Planar densities")
    test_density2d_basics()

    print("\nTest 3: Decreasing rearrangement")
    test_rearrangement_of_planar_density()
    test_rearrangement_of_radial_density()
    test_rearrangement_merges_equal_levels()
    test_rearrangement_rejects()

    print("\n" + "=" * 80)
    print("All density tests completed successfully!")
    print("=" * 80)
