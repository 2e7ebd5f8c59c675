#!/usr/bin/env python3
"""
Test the eigenvalue tables of the zonal power kernel and of the difference
operator on the sphere.
"""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from nonlocal_energies.csv_output import reference_values
from nonlocal_energies.errors import DomainError, PreconditionError
from nonlocal_energies.kernels import ball_power_energy
from nonlocal_energies.special_fn import gauss_jacobi_rule, spherical_poly, unit_ball_volume
from nonlocal_energies.spectral import (
    SpectralParams,
    build_table,
    c_beta,
    d_beta,
    default_rule,
    lambda_sequence,
    marchaud_multipliers,
    mu_sequence,
    oscillation_profile,
    raabe_ratio,
    theta_closed,
    theta_quadrature,
    verify_gap,
)

BETAS = (0.5, 1.0, 2.0, 2.5, 4.0, 7.0)


def _theta_reference(N, beta, k):
    """Independent adaptive quadrature of the Funk-Hecke integral."""
    a = 0.5 * (N - 3)
    if N == 2:
        # t = cos(phi) removes the endpoint singularity of the weight
        value, _ = quad(
            lambda phi: (1.0 - math.cos(phi)) ** (0.5 * beta) * math.cos(k * phi),
            0.0, math.pi, epsabs=1e-14, epsrel=1e-13, limit=400,
        )
        return 2.0 * value

    def integrand(t):
        return (1.0 - t) ** (0.5 * beta) * (1.0 - t * t) ** a * spherical_poly(k, N, t)

    value, _ = quad(integrand, -1.0, 1.0, epsabs=1e-14, epsrel=1e-13, limit=400)
    return (N - 1) * unit_ball_volume(N - 1) * value


def test_desk_values():
    """N = 2, beta = 2: theta_0 = 2 pi, theta_1 = -pi, lambda_1 = 12 pi, lambda_2 = 8 pi, D = 4 pi."""
    ref = reference_values()
    table = build_table(2, 2.0, 50)
    key = "N=2;beta=2"
    assert table.theta[0] == pytest.approx(ref[("theta_0", key)], rel=1e-10)
    assert table.theta[1] == pytest.approx(ref[("theta_1", key)], rel=1e-10)
    assert table.lam[1] == pytest.approx(ref[("lambda_1", key)], rel=1e-10)
    assert table.lam[2] == pytest.approx(ref[("lambda_2", key)], rel=1e-10)
    assert table.D_beta == pytest.approx(ref[("D_beta", key)], rel=1e-10)
    assert _theta_reference(2, 2.0, 0) == pytest.approx(2.0 * math.pi, rel=1e-10)
    assert _theta_reference(2, 2.0, 1) == pytest.approx(-math.pi, rel=1e-10)


def test_closed_form_matches_quadrature():
    """Gamma closed form against the kernel-absorbing Gauss-Jacobi rule."""
    for N in (2, 3, 4, 5):
        for beta in BETAS:
            p = SpectralParams(N=N, beta=beta, k_max=20)
            scale = abs(theta_closed(p, 0))
            for k in range(21):
                closed = theta_closed(p, k)
                numeric = theta_quadrature(p, k, default_rule(p, k))
                assert abs(closed - numeric) <= 1e-8 * max(abs(closed), 1e-3 * scale)


def test_closed_form_matches_adaptive_quadrature():
    for N, beta in [(2, 1.0), (3, 2.5), (4, 0.5)]:
        p = SpectralParams(N=N, beta=beta, k_max=10)
        for k in range(6):
            assert theta_closed(p, k) == pytest.approx(_theta_reference(N, beta, k), rel=1e-8, abs=1e-12)


def test_table_recursion_matches_closed_form():
    for N in (2, 3):
        for beta in (1.0, 3.5, 7.0):
            p = SpectralParams(N=N, beta=beta, k_max=30)
            table = build_table(N, beta, 30)
            closed = np.array([theta_closed(p, k) for k in range(31)])
            assert np.allclose(table.theta, closed, rtol=1e-11, atol=1e-14 * abs(closed[0]))


def test_even_beta_truncation():
    """theta_k vanishes for k >= m + 1 when beta = 2m."""
    for N in (2, 3):
        for m in (1, 2, 3):
            table = build_table(N, 2.0 * m, 20)
            tail = np.abs(table.theta[m + 1 :])
            assert np.all(tail <= 1e-12 * abs(table.theta[0]))
            p = SpectralParams(N=N, beta=2.0 * m, k_max=20)
            assert theta_closed(p, m + 1) == 0.0


def test_n3_beta4_table():
    table = build_table(3, 4.0, 10)
    assert np.all(table.theta[3:] == 0.0)


def test_lambda_zero_and_sequence():
    p = SpectralParams(N=3, beta=1.5, k_max=40)
    lam = lambda_sequence(p)
    assert lam[0] == 0.0
    assert np.allclose(lam, build_table(3, 1.5, 40).lam)


def test_mu_recursion():
    p = SpectralParams(N=2, beta=3.0, k_max=10)
    mu = mu_sequence(p)
    for k in range(10):
        assert mu[k + 1] == pytest.approx((1.5 - k) / (1.5 + 1.0 + k) * mu[k], rel=1e-15)


def test_unsigned_theta_recursion_flips_sign():
    """Applying the mu ratio to theta directly gives theta_1 = +pi at N=2, beta=2; the kernel gives -pi."""
    p = SpectralParams(N=2, beta=2.0, k_max=10)
    theta0 = theta_quadrature(p, 0, default_rule(p, 0))
    unsigned = (0.5 * p.beta - 0) / ((p.beta + 2 * p.N - 2) / 2 + 0) * theta0
    quadrature = theta_quadrature(p, 1, default_rule(p, 1))
    assert unsigned == pytest.approx(math.pi, rel=1e-12)
    assert quadrature == pytest.approx(-math.pi, rel=1e-12)
    assert np.sign(unsigned) == -np.sign(quadrature)


def test_signed_mu_form_matches_quadrature():
    """theta_k = (-1)^k C_beta mu_k against the kernel integral."""
    for N, beta in [(2, 2.0), (2, 1.0), (3, 1.5), (4, 3.0)]:
        p = SpectralParams(N=N, beta=beta, k_max=10)
        C = c_beta(N, beta)
        mu = mu_sequence(p)
        for k in range(6):
            expected = theta_quadrature(p, k, default_rule(p, k))
            assert abs((-1) ** k * C * mu[k] - expected) <= 1e-8 * max(abs(expected), 1e-3 * C * mu[0])


def test_gap_inequality_across_grid():
    """lambda_1 is the largest eigenvalue and lambda_1 - lambda_k >= D_beta."""
    for N in (2, 3, 4, 5):
        for beta in BETAS:
            report = verify_gap(build_table(N, beta, 200))
            assert report.passed
            assert report.slack >= -1e-9


def test_gap_attained_at_k2_for_desk_case():
    report = verify_gap(build_table(2, 2.0, 50))
    assert report.argmin_k == 2
    assert report.min_gap == pytest.approx(4.0 * math.pi, rel=1e-12)


def test_gap_needs_enough_degrees():
    with pytest.raises(PreconditionError):
        verify_gap(build_table(2, 1.0, 5))


def test_lambda_1_identity_with_ball_energy():
    """lambda_1 = (beta+N)(beta+2N) / (N omega_N) G_beta(B)."""
    for N in (2, 3):
        for beta in (1.0, 2.0, 3.5):
            table = build_table(N, beta, 10)
            expected = (beta + N) * (beta + 2 * N) / (N * unit_ball_volume(N)) * ball_power_energy(N, beta)
            assert table.lam[1] == pytest.approx(expected, rel=1e-6)


def test_small_beta_decreasing():
    """For beta in (0, 2) the eigenvalues decrease from k = 1 on."""
    table = build_table(3, 0.5, 100)
    assert np.all(np.diff(table.lam[1:]) < 0.0)


def test_oscillation_alternates():
    report = oscillation_profile(build_table(2, 7.0, 60))
    assert report.alternates
    assert report.k_tilde == 4
    assert report.tail_monotone


def test_oscillation_even_plateau():
    report = oscillation_profile(build_table(2, 4.0, 30))
    assert report.plateau_start == 3
    assert report.tail_direction == "constant"


def test_decay_and_limit():
    """Raabe ratio tends to beta + N - 1 and lambda_k to lambda_inf."""
    table = build_table(2, 2.5, 600)
    assert raabe_ratio(table, 500) == pytest.approx(2.5 + 1.0, rel=1e-2)
    assert table.lam[600] == pytest.approx(table.lambda_inf, rel=1e-4)


def test_marchaud_multipliers_match_table():
    for N, beta in [(2, 1.0), (3, 2.5)]:
        assert np.allclose(marchaud_multipliers(N, beta, 20), build_table(N, beta, 20).lam, rtol=1e-12)


def test_marchaud_multipliers_domain():
    with pytest.raises(DomainError):
        marchaud_multipliers(2, -3.5, 10)


def test_gap_constant_branches_join():
    """D_beta is continuous where its formula changes, and 4 pi at the desk case."""
    assert d_beta(SpectralParams(2, 2.0, 10)) == pytest.approx(4.0 * math.pi, rel=1e-12)
    for N in (2, 3):
        for junction in (2.0, 4.0):
            below = d_beta(SpectralParams(N, junction - 1e-9, 10))
            above = d_beta(SpectralParams(N, junction + 1e-9, 10))
            assert below == pytest.approx(above, rel=1e-7)


def test_invalid_params():
    with pytest.raises(DomainError):
        SpectralParams(N=2, beta=0.0)
    with pytest.raises(DomainError):
        SpectralParams(N=1, beta=1.0)


def test_plain_jacobi_rule_accepted():
    p = SpectralParams(N=3, beta=2.0, k_max=10)
    value = theta_quadrature(p, 0, gauss_jacobi_rule(8, 3))
    assert value == pytest.approx(theta_closed(p, 0), rel=1e-12)
    with pytest.raises(PreconditionError):
        theta_quadrature(p, 0, gauss_jacobi_rule(8, 2))


if __name__ == "__main__":
    print("=" * 80)
    print("Running Spectral Tests")
    print("=" * 80)

    print("\nTest 1: Desk values")
    test_desk_values()

    print("\nTest 2: Closed form against quadrature")
    test_closed_form_matches_quadrature()
    test_closed_form_matches_adaptive_quadrature()
    test_table_recursion_matches_closed_form()
    test_plain_jacobi_rule_accepted()

    print("\nTest 3: Truncation, recursion and limits")
    test_even_beta_truncation()
    test_n3_beta4_table()
    test_lambda_zero_and_sequence()
    test_mu_recursion()
    test_unsigned_theta_recursion_flips_sign()
    test_signed_mu_form_matches_quadrature()
    test_decay_and_limit()

    print("\nTest 4: Gap inequality")
    test_gap_inequality_across_grid()
    test_gap_attained_at_k2_for_desk_case()
    test_gap_needs_enough_degrees()
    test_gap_constant_branches_join()
    test_lambda_1_identity_with_ball_energy()
    test_small_beta_decreasing()

    print("\nTest 5: Oscillation profile")
    test_oscillation_alternates()
    test_oscillation_even_plateau()

    print("\nTest 6: Multipliers")
    test_marchaud_multipliers_match_table()
    test_marchaud_multipliers_domain()
    test_invalid_params()

    print("\n" + "=" * 80)
    print("All spectral tests completed successfully!")
    print("=" * 80)
