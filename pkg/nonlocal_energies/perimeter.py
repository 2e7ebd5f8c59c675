"""
Classical (s = 1) and fractional (0 < s < 1) perimeters.

For s < 1 the double integral over E x E^c is moved to the boundary,

    int_E int_(E^c) |x-y|^(-N-s) = 1/(s (N+s-2)) int int_(dE x dE) |x-y|^(2-N-s) nu(x).nu(y),

which is exact on radial profiles and needs only a weakly singular boundary
quadrature on planar nearly-spherical curves.
"""

import logging
import math

import numpy as np
from scipy.special import gammaln

from .ball_cluster import BallCluster
from .errors import DomainError, PreconditionError
from .geometry import Shape
from .kernels import ball_fractional_perimeter, sphere_power_mean_dot
from .nearly_spherical import NearlySphericalShape
from .radial_profile import RadialDensity
from .shape_energy import ball_pair_energy
from .special_fn import sphere_area, unit_ball_volume
from .sphere_grid import SphereGrid

logger = logging.getLogger(__name__)


def perimeter_constant(N: int, s: float) -> float:
    """Normalization (1-s)/omega_(N-1) of the fractional perimeter."""
    return (1.0 - s) / unit_ball_volume(N - 1)


def _check_s(s: float) -> None:
    if not 0.0 < s <= 1.0:
        raise DomainError(f"s must lie in (0, 1], got {s}")


def radial_perimeter(profile: RadialDensity, s: float) -> float:
    """P_s of a finite union of centred annuli."""
    _check_s(s)
    if not np.all((profile.values == 0.0) | (profile.values == 1.0)):
        raise DomainError("perimeter needs an indicator profile, got a fractional density")
    N = profile.N
    jumps = profile.boundary_jumps()
    keep = jumps != 0.0
    r = profile.breakpoints[keep]
    sigma = jumps[keep]
    area = sphere_area(N)
    if s == 1.0:
        return area * float(np.sum(r ** (N - 1)))
    dot = sphere_power_mean_dot(r[:, None], r[None, :], 2.0 - N - s, N)
    weights = sigma * r ** (N - 1)
    boundary = area**2 * float(weights @ dot @ weights)
    return perimeter_constant(N, s) * boundary / (s * (N + s - 2.0))


def _curve_perimeter_fractional(shape: NearlySphericalShape, s: float) -> float:
    """
    Boundary double integral on the curve g(phi) = R(phi)(cos phi, sin phi).

    The near-diagonal behaviour |g'(a)|^(2-s) |2 sin((a-b)/2)|^(-s) is
    subtracted and its exact integral added back.
    """
    grid = shape.grid
    R = shape.radius
    dR = grid.angular_derivative(R)
    c = np.cos(grid.phi)
    sn = np.sin(grid.phi)
    gx, gy = R * c, R * sn
    tx, ty = dR * c - R * sn, dR * sn + R * c
    speed = np.hypot(tx, ty)

    diff = grid.phi[:, None] - grid.phi[None, :]
    chord = np.hypot(gx[:, None] - gx[None, :], gy[:, None] - gy[None, :])
    model_dist = np.abs(2.0 * np.sin(0.5 * diff))
    np.fill_diagonal(chord, 1.0)
    np.fill_diagonal(model_dist, 1.0)
    dots = tx[:, None] * tx[None, :] + ty[:, None] * ty[None, :]
    integrand = chord ** (-s) * dots - speed[:, None] ** (2.0 - s) * model_dist ** (-s)
    np.fill_diagonal(integrand, 0.0)

    h = grid.weights[0]
    model_total = 2.0 * math.pi * math.exp(gammaln(1.0 - s) - 2.0 * gammaln(1.0 - 0.5 * s))
    boundary = h * h * float(integrand.sum()) + h * model_total * float(np.sum(speed ** (2.0 - s)))
    return perimeter_constant(2, s) * boundary / (s * s)


def nearly_spherical_perimeter(shape: NearlySphericalShape, s: float) -> float:
    """P_s of a nearly-spherical shape with Lipschitz boundary samples."""
    _check_s(s)
    shape.check_lipschitz()
    grid = shape.grid
    R = shape.radius
    N = shape.N
    if s == 1.0:
        grad_sq = grid.tangential_gradient_sq(R)
        return grid.integrate(R ** (N - 2) * np.sqrt(R**2 + grad_sq))
    if N != 2:
        raise PreconditionError("fractional perimeter of nearly-spherical shapes is available for N = 2")
    return _curve_perimeter_fractional(shape, s)


def cluster_perimeter(cluster: BallCluster, s: float) -> float:
    """P_s of disjoint balls: single-ball perimeters minus twice the pair interactions."""
    _check_s(s)
    N = cluster.N
    r = cluster.radius
    single = r ** (N - s) * ball_fractional_perimeter(N, s)
    total = cluster.n_balls * single
    if s == 1.0:
        return total
    if cluster.n_balls > 1 and cluster.min_gap() <= 0.0:
        raise PreconditionError("fractional perimeter of touching balls needs a positive gap")
    cross = sum(ball_pair_energy(d, r, N, -N - s) for _, _, d in cluster.pair_distances())
    return total - 2.0 * perimeter_constant(N, s) * cross


def p_s(shape: Shape, s: float) -> float:
    """Fractional perimeter P_s for s in (0, 1); classical perimeter at s = 1."""
    if isinstance(shape, NearlySphericalShape):
        return nearly_spherical_perimeter(shape, s)
    if isinstance(shape, RadialDensity):
        return radial_perimeter(shape, s)
    if isinstance(shape, BallCluster):
        return cluster_perimeter(shape, s)
    raise DomainError(f"no perimeter evaluation for shape kind {type(shape).__name__}")


def p_s_with_estimate(shape: Shape, s: float) -> tuple[float, float]:
    """P_s and the change against a grid with every other node dropped (N = 2 shapes)."""
    value = p_s(shape, s)
    if not isinstance(shape, NearlySphericalShape) or shape.N != 2 or len(shape.grid) % 2:
        return value, 0.0
    coarse_grid = SphereGrid(2, len(shape.grid) // 2)
    coarse = NearlySphericalShape(
        coarse_grid, shape.t, shape.u[::2], center=shape.center, scale=shape.scale
    )
    if s == 1.0:
        coarse_value = coarse_grid.integrate(np.hypot(coarse.radius, coarse_grid.angular_derivative(coarse.radius)))
    else:
        coarse_value = _curve_perimeter_fractional(coarse, s)
    return value, abs(value - coarse_value)
