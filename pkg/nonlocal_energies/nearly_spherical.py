"""
Nearly-spherical sets

    E = center + scale * { rho z : z in S^(N-1), 0 < rho <= 1 + t u(z) }

with ||u||_inf <= 1/2 sampled on a SphereGrid.
"""

import logging
import math

import numpy as np

from .errors import DomainError
from .geometry import Shape, register_shape
from .sphere_grid import SphereGrid

logger = logging.getLogger(__name__)

SUP_NORM_MAX = 0.5
# rounding allowance on the closed constraint ||u||_inf <= 1/2
_SUP_NORM_SLACK = 1e-12


@register_shape
class NearlySphericalShape(Shape):
    """
    Star-shaped set with radial boundary scale * (1 + t u(z)).

    Args:
        grid: Sphere grid carrying the samples of u
        t: Amplitude in [0, 1)
        u: Samples of the boundary perturbation, ||u||_inf <= 1/2
        center: Translation of the set (defaults to the origin)
        scale: Dilation factor applied after building the radial boundary
    """

    kind = "nearly_spherical"

    def __init__(
        self,
        grid: SphereGrid,
        t: float,
        u,
        center=None,
        scale: float = 1.0,
    ):
        super().__init__(grid.N)
        u = np.asarray(u, dtype=float)
        if u.shape != (len(grid),):
            raise DomainError(f"u must have {len(grid)} samples, got shape {u.shape}")
        if not 0.0 <= t < 1.0:
            raise DomainError(f"t must lie in [0, 1), got {t}")
        sup = float(np.max(np.abs(u))) if u.size else 0.0
        if sup > SUP_NORM_MAX + _SUP_NORM_SLACK:
            raise DomainError(f"||u||_inf = {sup:.6g} exceeds {SUP_NORM_MAX}")
        if not scale > 0:
            raise DomainError(f"scale must be > 0, got {scale}")
        if np.any(1.0 + t * u <= 0.0):
            raise DomainError("1 + t u must be positive at every node")

        self.grid: SphereGrid = grid
        self.t: float = float(t)
        self.u: np.ndarray = u
        self.center: np.ndarray = (
            np.zeros(grid.N) if center is None else np.asarray(center, dtype=float)
        )
        self.scale: float = float(scale)

    @classmethod
    def from_function(cls, grid: SphereGrid, t: float, func, **kwargs) -> "NearlySphericalShape":
        """Sample func(nodes) on the grid and build the shape."""
        return cls(grid, t, func(grid.nodes), **kwargs)

    @classmethod
    def unit_ball(cls, grid: SphereGrid) -> "NearlySphericalShape":
        return cls(grid, 0.0, np.zeros(len(grid)))

    @property
    def radius(self) -> np.ndarray:
        """Boundary radius at each grid node."""
        return self.scale * (1.0 + self.t * self.u)

    @property
    def log_radius(self) -> np.ndarray:
        return math.log(self.scale) + np.log1p(self.t * self.u)

    def volume(self) -> float:
        """(1/N) times the sphere integral of R^N."""
        return self.grid.integrate(self.radius**self.N) / self.N

    def barycenter(self) -> np.ndarray:
        moment = (self.grid.weights * self.radius ** (self.N + 1)) @ self.grid.nodes
        return self.center + moment / ((self.N + 1) * self.volume())

    def rescale(self, lam: float) -> "NearlySphericalShape":
        return NearlySphericalShape(
            self.grid, self.t, self.u, center=lam * self.center, scale=lam * self.scale
        )

    def translate(self, v) -> "NearlySphericalShape":
        return NearlySphericalShape(
            self.grid, self.t, self.u, center=self.center + np.asarray(v), scale=self.scale
        )

    def with_perturbation(self, t: float, u) -> "NearlySphericalShape":
        return NearlySphericalShape(self.grid, t, u, center=self.center, scale=self.scale)

    def intersection_with_unit_ball(self, x) -> float:
        """
        |E cap B(x)| integrating exactly along each ray from the center.

        The ray center + rho z meets B(x) for rho in [rho_-, rho_+]; the set
        occupies rho in (0, R(z)].
        """
        p = np.asarray(x, dtype=float) - self.center
        proj = self.grid.nodes @ p
        disc = proj**2 - p @ p + 1.0
        inside = disc > 0.0
        root = np.sqrt(np.where(inside, disc, 0.0))
        lo = np.maximum(proj - root, 0.0)
        hi = np.minimum(self.radius, proj + root)
        seg = np.where(inside & (hi > lo), hi**self.N - lo**self.N, 0.0)
        return self.grid.integrate(seg) / self.N

    def symmetric_difference_with_ball_of_center(self) -> float:
        """|E delta B(center)| by exact radial integration, equal to the L1 norm of R^N - 1 over N."""
        return self.grid.integrate(np.abs(self.radius**self.N - 1.0)) / self.N

    def symmetric_difference(self, other: "NearlySphericalShape") -> float:
        """|E delta F| for two shapes sharing grid and center."""
        if not self.grid.same_layout(other.grid):
            raise DomainError("symmetric difference needs shapes on the same grid")
        if not np.allclose(self.center, other.center):
            raise DomainError("symmetric difference needs shapes with the same center")
        return self.grid.integrate(np.abs(self.radius**self.N - other.radius**self.N)) / self.N

    def candidate_centers(self) -> list[np.ndarray]:
        return [self.center.copy()]

    def check_lipschitz(self) -> None:
        self.grid.check_lipschitz(self.u)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "N": self.N,
            "grid": self.grid.to_dict(),
            "t": self.t,
            "scale": self.scale,
            "center": self.center.tolist(),
            "u": self.u.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "NearlySphericalShape":
        grid = SphereGrid.from_dict(data["grid"])
        return cls(
            grid,
            data["t"],
            np.asarray(data["u"], dtype=float),
            center=data.get("center"),
            scale=data.get("scale", 1.0),
        )

    def to_filename(self) -> str:
        return f"nearly_spherical_N{self.N}_t{self.t:g}_n{len(self.grid)}"
