"""
Seminorms of functions sampled on the sphere, in direct (double quadrature)
and spectral (Parseval) form.
"""

import logging
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .special_fn import unit_ball_volume
from .spectral import build_table, marchaud_multipliers
from .sphere_grid import SphereGrid

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ZonalCoefficients:
    """
    Degree-by-degree coefficients a_(k,j) of a function on the sphere.

    Attributes:
        coefficients: One array per degree 0..k_max
        reconstruction_error: Max abs deviation of the synthesized samples
    """

    coefficients: list[np.ndarray]
    reconstruction_error: float

    @property
    def k_max(self) -> int:
        return len(self.coefficients) - 1

    def degree_energy(self) -> np.ndarray:
        """sum_j a_(k,j)^2 for each degree k."""
        return np.array([float(np.sum(a**2)) for a in self.coefficients])

    def total_energy(self) -> float:
        return float(np.sum(self.degree_energy()))

    def weighted(self, multipliers) -> float:
        """sum_k m_k sum_j a_(k,j)^2."""
        m = np.asarray(multipliers, dtype=float)[: self.k_max + 1]
        return float(np.dot(m, self.degree_energy()))


def zonal_coefficients(grid: SphereGrid, u, k_max: int | None = None) -> ZonalCoefficients:
    """
    Project u on the real orthonormal harmonics of degree <= k_max.

    Raises PreconditionError (from the grid) when k_max exceeds what the grid
    resolves.
    """
    if k_max is None:
        k_max = grid.max_degree
    u = np.asarray(u, dtype=float)
    coefficients = [grid.project(u, k) for k in range(k_max + 1)]
    recon = grid.synthesize(coefficients)
    err = float(np.max(np.abs(recon - u))) if u.size else 0.0
    return ZonalCoefficients(coefficients=coefficients, reconstruction_error=err)


def _pair_distances(grid: SphereGrid) -> np.ndarray:
    dots = grid.nodes @ grid.nodes.T
    return np.sqrt(np.clip(2.0 - 2.0 * dots, 0.0, None))


def seminorm_beta_direct(grid: SphereGrid, u, beta: float) -> float:
    """[u]_beta^2 = int int |w - xi|^beta |u(w) - u(xi)|^2 by the grid product rule."""
    if not beta > 0:
        raise DomainError(f"beta must be > 0, got {beta}")
    u = np.asarray(u, dtype=float)
    kernel = _pair_distances(grid) ** beta * (u[:, None] - u[None, :]) ** 2
    return float(grid.weights @ kernel @ grid.weights)


def seminorm_beta_spectral(grid: SphereGrid, u, beta: float, k_max: int | None = None) -> float:
    """[u]_beta^2 = sum_k lambda_k sum_j a_(k,j)^2."""
    coeffs = zonal_coefficients(grid, u, k_max)
    table = build_table(grid.N, beta, max(coeffs.k_max, 1))
    return coeffs.weighted(table.lam)


def seminorm_beta(grid: SphereGrid, u, beta: float) -> tuple[float, float]:
    """Both forms of [u]_beta^2, (direct, spectral), for cross-validation."""
    return seminorm_beta_direct(grid, u, beta), seminorm_beta_spectral(grid, u, beta)


def fractional_multipliers(N: int, s: float, k_max: int) -> np.ndarray:
    """Multipliers of [[u]]_s^2 for 0 < s < 1, degree by degree."""
    if not 0.0 < s < 1.0:
        raise DomainError(f"s must lie in (0, 1), got {s}")
    lam = marchaud_multipliers(N, -(N - 1) - 2.0 * s, k_max)
    return (1.0 - s) / unit_ball_volume(N - 1) * lam


def gradient_multipliers(N: int, k_max: int) -> np.ndarray:
    k = np.arange(k_max + 1, dtype=float)
    return k * (k + N - 2)


def seminorm_s(grid: SphereGrid, u, s: float, k_max: int | None = None) -> float:
    """
    [[u]]_s^2 = (1-s)/omega_(N-1) int int |u(x) - u(y)|^2 / |x-y|^(N-1+2s)
    for s < 1 (spectral form), and ||grad_tau u||^2 at s = 1.
    """
    if not 0.0 < s <= 1.0:
        raise DomainError(f"s must lie in (0, 1], got {s}")
    if s == 1.0:
        return grid.integrate(grid.tangential_gradient_sq(u))
    coeffs = zonal_coefficients(grid, u, k_max)
    return coeffs.weighted(fractional_multipliers(grid.N, s, coeffs.k_max))


def gradient_seminorm_spectral(grid: SphereGrid, u, k_max: int | None = None) -> float:
    """sum_k k(k+N-2) sum_j a_(k,j)^2, the spectral form of ||grad_tau u||^2."""
    coeffs = zonal_coefficients(grid, u, k_max)
    return coeffs.weighted(gradient_multipliers(grid.N, coeffs.k_max))


@dataclass(frozen=True)
class ComparabilityReport:
    alpha: float
    s: float
    lhs: float
    rhs: float

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs * (1.0 + 1e-12)


def comparability_check(grid: SphereGrid, u, alpha: float, s: float) -> ComparabilityReport:
    """
    [[u]]^2_((1-alpha)/2) against ((1+alpha)/(1-s)) 2^(alpha+s) [[u]]^2_((1+s)/2)
    for alpha, s in (0, 1).
    """
    if not 0.0 < alpha < 1.0 or not 0.0 < s < 1.0:
        raise DomainError(f"alpha and s must lie in (0, 1), got alpha={alpha}, s={s}")
    lhs = seminorm_s(grid, u, 0.5 * (1.0 - alpha))
    rhs = (1.0 + alpha) / (1.0 - s) * 2.0 ** (alpha + s) * seminorm_s(grid, u, 0.5 * (1.0 + s))
    return ComparabilityReport(alpha=alpha, s=s, lhs=lhs, rhs=rhs)
