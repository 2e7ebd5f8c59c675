"""
Piecewise-constant densities on intervals and rectangles, and the radially
decreasing rearrangement.
"""

import logging

import numpy as np

from .errors import DomainError
from .radial_profile import RadialDensity
from .special_fn import unit_ball_volume

logger = logging.getLogger(__name__)


class Density1D:
    """
    Nonnegative density constant on the cells [edges[k], edges[k+1]].

    Args:
        edges: Strictly increasing cell boundaries
        values: Density value on each cell
    """

    def __init__(self, edges, values):
        e = np.asarray(edges, dtype=float)
        v = np.asarray(values, dtype=float)
        if e.ndim != 1 or e.size < 2 or np.any(np.diff(e) <= 0.0):
            raise DomainError("edges must be a strictly increasing sequence of length >= 2")
        if v.shape != (e.size - 1,):
            raise DomainError(f"need {e.size - 1} cell values, got shape {v.shape}")
        if np.any(v < 0.0) or not np.all(np.isfinite(v)):
            raise DomainError("density values must be finite and nonnegative")
        self.edges: np.ndarray = e
        self.values: np.ndarray = v
        self.cell_mass: np.ndarray = v * np.diff(e)
        self.cumulative: np.ndarray = np.concatenate([[0.0], np.cumsum(self.cell_mass)])

    @property
    def mass(self) -> float:
        return float(self.cumulative[-1])

    @classmethod
    def uniform(cls, lo: float, hi: float, mass: float = 1.0, n_cells: int = 1) -> "Density1D":
        edges = np.linspace(lo, hi, n_cells + 1)
        return cls(edges, np.full(n_cells, mass / (hi - lo)))

    @classmethod
    def random(cls, rng: np.random.Generator, n_cells: int = 8, lo: float = 0.0, hi: float = 1.0):
        """Random cells and values; zero values are allowed, the total mass is positive."""
        widths = rng.uniform(0.2, 1.0, size=n_cells)
        edges = lo + (hi - lo) * np.concatenate([[0.0], np.cumsum(widths)]) / widths.sum()
        values = rng.uniform(0.0, 1.0, size=n_cells)
        values[rng.uniform(size=n_cells) < 0.2] = 0.0
        if not np.any(values > 0.0):
            values[0] = 1.0
        return cls(edges, values)

    def normalized(self) -> "Density1D":
        if self.mass <= 0.0:
            raise DomainError("cannot normalize a density of zero mass")
        return Density1D(self.edges, self.values / self.mass)

    def scaled(self, factor: float) -> "Density1D":
        return Density1D(self.edges, self.values * factor)

    def cdf(self, x):
        """F(x) = mass of (-inf, x], piecewise linear."""
        return np.interp(x, self.edges, self.cumulative)

    def quantile(self, p):
        """
        Generalized inverse inf{x : F(x) >= p}, for p in [0, mass].

        Flat stretches of F (zero-density cells) are skipped to their left end.
        """
        p = np.asarray(p, dtype=float)
        p = np.clip(p, 0.0, self.mass)
        k = np.searchsorted(self.cumulative, p, side="left")
        k = np.clip(k, 1, len(self.edges) - 1)
        cell = k - 1
        dens = self.values[cell]
        start = self.cumulative[cell]
        with np.errstate(divide="ignore", invalid="ignore"):
            offset = np.where(dens > 0.0, (p - start) / np.where(dens > 0.0, dens, 1.0), 0.0)
        x = self.edges[cell] + offset
        x = np.where(p <= 0.0, self.edges[0], x)
        if x.ndim == 0:
            return float(x)
        return x


class Density2D:
    """
    Nonnegative density constant on the rectangles of a tensor grid.

    Args:
        x_edges, y_edges: Strictly increasing cell boundaries
        values: Array of shape (len(x_edges)-1, len(y_edges)-1)
    """

    def __init__(self, x_edges, y_edges, values):
        self.x_edges: np.ndarray = np.asarray(x_edges, dtype=float)
        self.y_edges: np.ndarray = np.asarray(y_edges, dtype=float)
        v = np.asarray(values, dtype=float)
        for e in (self.x_edges, self.y_edges):
            if e.ndim != 1 or e.size < 2 or np.any(np.diff(e) <= 0.0):
                raise DomainError("edges must be strictly increasing sequences of length >= 2")
        shape = (self.x_edges.size - 1, self.y_edges.size - 1)
        if v.shape != shape:
            raise DomainError(f"values must have shape {shape}, got {v.shape}")
        if np.any(v < 0.0) or not np.all(np.isfinite(v)):
            raise DomainError("density values must be finite and nonnegative")
        self.values: np.ndarray = v

    @property
    def cell_areas(self) -> np.ndarray:
        return np.outer(np.diff(self.x_edges), np.diff(self.y_edges))

    @property
    def cell_mass(self) -> np.ndarray:
        return self.values * self.cell_areas

    @property
    def mass(self) -> float:
        return float(self.cell_mass.sum())

    def marginal_x(self) -> Density1D:
        """First marginal: column masses spread over the column width."""
        col_mass = self.cell_mass.sum(axis=1)
        return Density1D(self.x_edges, col_mass / np.diff(self.x_edges))

    def column(self, i: int) -> Density1D:
        """Density in the second variable on column i (not normalized)."""
        return Density1D(self.y_edges, self.values[i])

    @classmethod
    def uniform(cls, lo: float, hi: float, mass: float = 1.0, n: int = 4) -> "Density2D":
        e = np.linspace(lo, hi, n + 1)
        return cls(e, e, np.full((n, n), mass / (hi - lo) ** 2))

    @classmethod
    def random(
        cls, rng: np.random.Generator, n: int = 6, lo: float = 0.0, hi: float = 1.0
    ) -> "Density2D":
        """Random [0,1]-valued density on an n x n grid with jittered edges."""
        def edges():
            w = rng.uniform(0.3, 1.0, size=n)
            return lo + (hi - lo) * np.concatenate([[0.0], np.cumsum(w)]) / w.sum()

        values = rng.uniform(0.05, 1.0, size=(n, n))
        return cls(edges(), edges(), values)

    def value_at(self, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        i = np.searchsorted(self.x_edges, pts[:, 0], side="right") - 1
        j = np.searchsorted(self.y_edges, pts[:, 1], side="right") - 1
        inside = (i >= 0) & (i < self.values.shape[0]) & (j >= 0) & (j < self.values.shape[1])
        out = np.zeros(len(pts))
        out[inside] = self.values[i[inside], j[inside]]
        return out


def _rearrange_levels(levels, volumes, N: int) -> RadialDensity:
    """Sort (level, volume) pairs decreasingly and stack them as centred shells."""
    levels = np.asarray(levels, dtype=float)
    volumes = np.asarray(volumes, dtype=float)
    keep = (levels > 0.0) & (volumes > 0.0)
    levels = levels[keep]
    volumes = volumes[keep]
    if levels.size == 0:
        raise DomainError("decreasing rearrangement of a zero density")
    if np.any(levels > 1.0):
        raise DomainError("rearranged densities must take values in [0, 1]")
    order = np.argsort(-levels, kind="stable")
    levels = levels[order]
    volumes = volumes[order]
    # merge equal levels so the breakpoints strictly increase
    merged_levels = [levels[0]]
    merged_volumes = [volumes[0]]
    for lev, vol in zip(levels[1:], volumes[1:]):
        if lev == merged_levels[-1]:
            merged_volumes[-1] += vol
        else:
            merged_levels.append(lev)
            merged_volumes.append(vol)
    cum = np.cumsum(merged_volumes)
    radii = (cum / unit_ball_volume(N)) ** (1.0 / N)
    return RadialDensity(N, radii, merged_levels)


def decreasing_rearrangement(density) -> RadialDensity:
    """
    Radially symmetric decreasing density equimeasurable with the input.

    Accepts a Density2D (rearranged in the plane) or a RadialDensity in any
    dimension.
    """
    if isinstance(density, Density2D):
        return _rearrange_levels(density.values.ravel(), density.cell_areas.ravel(), 2)
    if isinstance(density, RadialDensity):
        e = density.edges**density.N
        return _rearrange_levels(
            density.values, unit_ball_volume(density.N) * np.diff(e), density.N
        )
    raise DomainError(f"cannot rearrange {type(density).__name__}")


def distribution_function(density, level: float) -> float:
    """|{f > level}| by counting cells."""
    if isinstance(density, Density2D):
        return float(density.cell_areas[density.values > level].sum())
    if isinstance(density, RadialDensity):
        vol = unit_ball_volume(density.N) * np.diff(density.edges**density.N)
        return float(vol[density.values > level].sum())
    raise DomainError(f"no distribution function for {type(density).__name__}")