import logging
import math

import numpy as np

from .errors import DomainError
from .geometry import Shape, register_shape
from .kernels import ball_lens_volume
from .special_fn import unit_ball_volume

logger = logging.getLogger(__name__)


@register_shape
class BallCluster(Shape):
    """
    Finite union of pairwise disjoint balls of a common radius.

    Args:
        centers: Array of shape (n, N)
        radius: Common radius of the balls
    """

    kind = "ball_cluster"

    def __init__(self, centers, radius: float):
        c = np.atleast_2d(np.asarray(centers, dtype=float))
        super().__init__(c.shape[1])
        if not radius > 0:
            raise DomainError(f"radius must be > 0, got {radius}")
        self.centers: np.ndarray = c
        self.radius: float = float(radius)
        if self.min_gap() < 0.0:
            raise DomainError("balls of a cluster must be disjoint")

    @property
    def n_balls(self) -> int:
        return self.centers.shape[0]

    def pair_distances(self) -> list[tuple[int, int, float]]:
        out = []
        for i in range(self.n_balls):
            for j in range(i + 1, self.n_balls):
                out.append((i, j, float(np.linalg.norm(self.centers[i] - self.centers[j]))))
        return out

    def min_gap(self) -> float:
        """Smallest distance between points of two different balls."""
        pairs = self.pair_distances()
        if not pairs:
            return math.inf
        return min(d for _, _, d in pairs) - 2.0 * self.radius

    def volume(self) -> float:
        return self.n_balls * unit_ball_volume(self.N) * self.radius**self.N

    def barycenter(self) -> np.ndarray:
        return self.centers.mean(axis=0)

    def rescale(self, lam: float) -> "BallCluster":
        return BallCluster(lam * self.centers, lam * self.radius)

    def translate(self, v) -> "BallCluster":
        return BallCluster(self.centers + np.asarray(v, dtype=float), self.radius)

    def intersection_with_unit_ball(self, x) -> float:
        x = np.asarray(x, dtype=float)
        return sum(
            ball_lens_volume(self.radius, 1.0, float(np.linalg.norm(c - x)), self.N)
            for c in self.centers
        )

    def candidate_centers(self) -> list[np.ndarray]:
        return [c.copy() for c in self.centers]

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "N": self.N,
            "radius": self.radius,
            "centers": self.centers.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "BallCluster":
        return cls(data["centers"], data["radius"])

    def to_filename(self) -> str:
        return f"ball_cluster_N{self.N}_n{self.n_balls}_r{self.radius:g}"

    @classmethod
    def scattered(cls, n_balls: int, N: int, gap: float, total_volume: float | None = None):
        """
        n equal balls of total volume omega_N (by default) with centers on a
        regular polygon in the first coordinate plane, neighbours `gap` apart
        at their closest points.
        """
        if n_balls < 1:
            raise DomainError(f"need at least one ball, got {n_balls}")
        if total_volume is None:
            total_volume = unit_ball_volume(N)
        r = (total_volume / (n_balls * unit_ball_volume(N))) ** (1.0 / N)
        if n_balls == 1:
            return cls(np.zeros((1, N)), r)
        chord = 2.0 * r + gap
        circ = chord / (2.0 * math.sin(math.pi / n_balls))
        angles = 2.0 * math.pi * np.arange(n_balls) / n_balls
        centers = np.zeros((n_balls, N))
        centers[:, 0] = circ * np.cos(angles)
        centers[:, 1] = circ * np.sin(angles)
        return cls(centers, r)

    @classmethod
    def two_balls(cls, distance: float, N: int, total_volume: float | None = None):
        """Two equal balls of total volume omega_N with centers `distance` apart."""
        if total_volume is None:
            total_volume = unit_ball_volume(N)
        r = (0.5 * total_volume / unit_ball_volume(N)) ** (1.0 / N)
        centers = np.zeros((2, N))
        centers[0, 0] = -0.5 * distance
        centers[1, 0] = 0.5 * distance
        return cls(centers, r)
