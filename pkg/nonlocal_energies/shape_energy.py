"""
Attractive and Riesz energies of nearly-spherical shapes and ball clusters,
and the dispatchers that accept any shape kind.

For a star-shaped set with boundary radius R on a sphere grid,

    G_q(E) = sum_ij w_i w_j F(R_i, R_j, |w_i - w_j|),
    F(a, b, d) = int_0^a int_0^b (|r - rho|^2 + r rho d^2)^(q/2) (r rho)^(N-1).

Splitting F(a, b) = (F(a, a) + F(b, b))/2 - Sq(a, b)/2 with Sq the integral
over the square [a, b]^2, the first part sums in closed form against the ball
energy and only the small squares between neighbouring radii are integrated
numerically.
"""

import logging
import math

import numpy as np

from .ball_cluster import BallCluster
from .errors import DomainError, PreconditionError
from .geometry import Shape
from .kernels import ball_power_energy, sphere_ball_overlap, sphere_power_mean_dot
from .nearly_spherical import NearlySphericalShape
from .radial_energy import (
    DEFAULT_ORDER,
    ball_potential,
    deficit_radial,
    energy_with_estimate,
    g_beta_truncated_radial,
    pair_energy,
)
from .radial_profile import RadialDensity
from .special_fn import gauss_legendre, sphere_area, unit_ball_volume
from .sphere_grid import SphereGrid

logger = logging.getLogger(__name__)

SQUARE_ORDER = 8
COARSE_SQUARE_ORDER = 5
CLUSTER_ANGLE_ORDER = 48
_CHUNK_SIZE = 2_000_000


def _check_exponent(N: int, q: float) -> None:
    if not q > -N:
        raise DomainError(f"energy diverges for kernel exponent q <= -N (q={q}, N={N})")


def _grid_distances(grid: SphereGrid, rows: slice) -> np.ndarray:
    dots = grid.nodes[rows] @ grid.nodes.T
    return np.sqrt(np.clip(2.0 - 2.0 * dots, 0.0, None))


def square_pairs(a, b, d, q: float, N: int, order: int = SQUARE_ORDER) -> np.ndarray:
    """
    Sq_d(a, b) = int int_[a,b]^2 (|r-rho|^2 + r rho d^2)^(q/2) (r rho)^(N-1)
    for broadcastable arrays, as twice the lower triangle in Duffy coordinates
    r = lo + L x, rho = lo + L x y.
    """
    a, b, d = np.broadcast_arrays(
        np.asarray(a, dtype=float), np.asarray(b, dtype=float), np.asarray(d, dtype=float)
    )
    lo = np.minimum(a, b)[..., None, None]
    span = np.abs(a - b)[..., None, None]
    dd = d[..., None, None]
    x, wx = gauss_legendre(order, 0.0, 1.0)
    X = x[:, None]
    Y = x[None, :]
    W = (wx * x)[:, None] * wx[None, :]
    r = lo + span * X
    rho = lo + span * X * Y
    gap = span * X * (1.0 - Y)
    kern = (gap**2 + r * rho * dd**2) ** (0.5 * q) * (r * rho) ** (N - 1)
    return 2.0 * np.abs(a - b) ** 2 * np.sum(W * kern, axis=(-2, -1))


def _off_diagonal_squares(shape: NearlySphericalShape, q: float, order: int) -> float:
    """-1/2 sum_(i != j) w_i w_j Sq_(d_ij)(R_i, R_j), without the scale factor."""
    grid = shape.grid
    R = 1.0 + shape.t * shape.u
    n = len(grid)
    rows_per_chunk = max(1, _CHUNK_SIZE // (n * order * order))
    total = 0.0
    for start in range(0, n, rows_per_chunk):
        rows = slice(start, min(n, start + rows_per_chunk))
        d = _grid_distances(grid, rows)
        idx = np.arange(rows.start, rows.stop)
        # diagonal terms vanish; keep the kernel finite there
        d[idx - rows.start, idx] = 1.0
        sq = square_pairs(R[rows, None], R[None, :], d, q, shape.N, order)
        total += float(grid.weights[rows] @ sq @ grid.weights)
    return -0.5 * total


def _scale_power(shape: NearlySphericalShape, q: float) -> float:
    return shape.scale ** (q + 2 * shape.N)


def nearly_spherical_energy(shape: NearlySphericalShape, q: float, order: int = SQUARE_ORDER) -> float:
    """G_q of a nearly-spherical shape for any q > -N."""
    N = shape.N
    _check_exponent(N, q)
    p = q + 2 * N
    R = 1.0 + shape.t * shape.u
    closed = ball_power_energy(N, q) / sphere_area(N) * shape.grid.integrate(R**p)
    squares = _off_diagonal_squares(shape, q, order) if shape.t > 0.0 else 0.0
    return _scale_power(shape, q) * (closed + squares)


def nearly_spherical_deficit(shape: NearlySphericalShape, q: float, order: int = SQUARE_ORDER) -> float:
    """
    G_q(E) - G_q(ball of the same volume), without subtracting two large
    numbers: with L = log R and means taken over the sphere,

        G_q(B) [mean(e^(pL)) - mean(e^(NL))^(p/N)] + squares.
    """
    N = shape.N
    _check_exponent(N, q)
    p = q + 2 * N
    L = np.log1p(shape.t * shape.u)
    frac = shape.grid.weights / sphere_area(N)
    x = float(frac @ np.expm1(p * L))
    y = math.expm1(p / N * math.log1p(float(frac @ np.expm1(N * L))))
    squares = _off_diagonal_squares(shape, q, order) if shape.t > 0.0 else 0.0
    return _scale_power(shape, q) * (ball_power_energy(N, q) * (x - y) + squares)


def nearly_spherical_error_estimate(
    shape: NearlySphericalShape, q: float, order: int = SQUARE_ORDER
) -> float:
    if shape.t == 0.0:
        return 0.0
    fine = _off_diagonal_squares(shape, q, order)
    coarse = _off_diagonal_squares(shape, q, max(1, order - (SQUARE_ORDER - COARSE_SQUARE_ORDER)))
    return _scale_power(shape, q) * abs(fine - coarse)


def ball_pair_energy(distance: float, radius: float, N: int, q: float) -> float:
    """
    int_(B_1) int_(B_2) |x - y|^q for two balls of a common radius whose
    centers are `distance` apart (closed balls must not overlap).

    The outer integral runs over spheres around the first center,
    rho = d - r cos(phi), weighted by the part of each sphere inside B_2.
    """
    if distance < 2.0 * radius:
        raise DomainError(f"balls overlap: distance {distance} < {2.0 * radius}")
    if not q > -N and distance == 2.0 * radius:
        raise DomainError("touching balls have infinite cross energy for q <= -N")
    phi, w = gauss_legendre(CLUSTER_ANGLE_ORDER, 0.0, math.pi)
    rho = distance - radius * np.cos(phi)
    weight = sphere_ball_overlap(rho, distance, radius, N) * radius * np.sin(phi)
    return float(np.dot(w, weight * ball_potential(rho, radius, N, q)))


def cluster_energy(cluster: BallCluster, q: float) -> float:
    """G_q of a union of disjoint equal balls: self energies plus pair cross terms."""
    N = cluster.N
    _check_exponent(N, q)
    r = cluster.radius
    total = cluster.n_balls * r ** (2 * N + q) * ball_power_energy(N, q)
    for i, j, dist in cluster.pair_distances():
        total += 2.0 * ball_pair_energy(dist, r, N, q)
        logger.debug("cluster pair (%d, %d) at distance %.6g", i, j, dist)
    return total


def shape_energy(shape: Shape, q: float, order: int | None = None) -> float:
    """
    G_q for any supported shape kind.

    order overrides the base quadrature order of nearly spherical and radial
    shapes; clusters ignore it.
    """
    if isinstance(shape, NearlySphericalShape):
        return nearly_spherical_energy(shape, q, order or SQUARE_ORDER)
    if isinstance(shape, RadialDensity):
        return pair_energy(shape, shape, q, order or DEFAULT_ORDER)
    if isinstance(shape, BallCluster):
        return cluster_energy(shape, q)
    raise DomainError(f"no energy evaluation for shape kind {type(shape).__name__}")


def g_beta(shape: Shape, beta: float, order: int | None = None) -> float:
    """Attractive energy G_beta(E) = int_E int_E |x - y|^beta."""
    if not beta > 0:
        raise DomainError(f"beta must be > 0, got {beta}")
    return shape_energy(shape, beta, order)


def v_alpha(shape: Shape, alpha: float, order: int | None = None) -> float:
    """Riesz potential V_alpha(E) = int_E int_E |x - y|^(alpha - N)."""
    if not 0.0 < alpha < shape.N:
        raise DomainError(f"alpha must lie in (0, N), got {alpha}")
    return shape_energy(shape, alpha - shape.N, order)


def g_beta_ball(N: int, beta: float, volume: float | None = None) -> float:
    """G_beta of the ball of the given volume (the unit ball by default)."""
    energy = ball_power_energy(N, beta)
    if volume is None:
        return energy
    return (volume / unit_ball_volume(N)) ** (2.0 + beta / N) * energy


def sphere_cross_energy(N: int, beta: float) -> float:
    """int int_(S x S) |xi - w|^(beta+2) (xi . w)."""
    return sphere_area(N) ** 2 * sphere_power_mean_dot(1.0, 1.0, beta + 2.0, N)


def _point_cloud(shape: Shape, n_radial: int = 12) -> tuple[np.ndarray, np.ndarray]:
    """Tensor quadrature points and weights covering the shape."""
    if isinstance(shape, NearlySphericalShape):
        grid = shape.grid
        x, w = gauss_legendre(n_radial, 0.0, 1.0)
        R = shape.radius
        r = R[:, None] * x[None, :]
        weights = (grid.weights * R)[:, None] * w[None, :] * r ** (shape.N - 1)
        pts = shape.center + r[..., None] * grid.nodes[:, None, :]
        return pts.reshape(-1, shape.N), weights.ravel()
    if isinstance(shape, BallCluster):
        grid = SphereGrid(shape.N, 48 if shape.N == 2 else 12)
        unit = NearlySphericalShape(grid, 0.0, np.zeros(len(grid)), scale=shape.radius)
        base, w = _point_cloud(unit, n_radial)
        pts = np.concatenate([base + c for c in shape.centers])
        return pts, np.tile(w, shape.n_balls)
    raise DomainError(f"no point quadrature for shape kind {type(shape).__name__}")


def truncation_excess(shape: Shape, beta: float, L: float) -> float:
    """int_E int_E (|x - y|^beta - L^beta)_+ by point-pair quadrature."""
    pts, w = _point_cloud(shape)
    n = len(w)
    rows_per_chunk = max(1, _CHUNK_SIZE // n)
    total = 0.0
    cap = L**beta
    for start in range(0, n, rows_per_chunk):
        block = pts[start : start + rows_per_chunk]
        dist = np.linalg.norm(block[:, None, :] - pts[None, :, :], axis=-1)
        excess = np.maximum(dist**beta - cap, 0.0)
        total += float(w[start : start + rows_per_chunk] @ excess @ w)
    return total


def g_beta_truncated(shape: Shape, beta: float, M: float) -> float:
    """G_beta^M with kernel (|x - y| min M^(1/beta))^beta."""
    if not M > 0:
        raise DomainError(f"truncation level must be > 0, got {M}")
    if isinstance(shape, RadialDensity):
        return g_beta_truncated_radial(shape, beta, M)
    L = M ** (1.0 / beta)
    return g_beta(shape, beta) - truncation_excess(shape, beta, L)


def deficit_beta(shape: Shape, beta: float) -> float:
    """D_beta(E) = G_beta(E) - G_beta(ball of the same volume)."""
    if isinstance(shape, NearlySphericalShape):
        return nearly_spherical_deficit(shape, beta)
    if isinstance(shape, RadialDensity):
        return deficit_radial(shape, beta)
    if isinstance(shape, BallCluster):
        return cluster_energy(shape, beta) - g_beta_ball(shape.N, beta, shape.volume())
    raise PreconditionError(f"no deficit evaluation for shape kind {type(shape).__name__}")


def energy_error_estimate(shape: Shape, q: float, order: int | None = None) -> float:
    """Quadrature error estimate from two refinement levels."""
    if isinstance(shape, NearlySphericalShape):
        return nearly_spherical_error_estimate(shape, q, order or SQUARE_ORDER)
    if isinstance(shape, RadialDensity):
        return energy_with_estimate(shape, q, order or DEFAULT_ORDER)[1]
    return 0.0
