"""
Radial shell transport in the plane.

The disc is cut into angular sectors. Inside each sector a source set and a
target set are unions of radial shells, and points move along their own ray:
the radius map is the increasing rearrangement in the area coordinate
v = rho^2 / 2, so every sector map preserves area exactly.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from .densities import Density1D
from .errors import DomainError, MassMismatchError
from .radial_energy import potential
from .radial_profile import RadialDensity
from .special_fn import gauss_legendre, unit_ball_volume
from .transport import MASS_RTOL, TransportMap1D

logger = logging.getLogger(__name__)

_PIECE_ORDER = 6


def _shell_density(shells) -> Density1D | None:
    """Indicator of the shells in the area coordinate, or None for an empty sector."""
    shells = sorted((float(a), float(b)) for a, b in shells)
    if not shells:
        return None
    edges = []
    values = []
    prev = None
    for a, b in shells:
        if not 0.0 <= a < b:
            raise DomainError(f"invalid shell ({a}, {b})")
        if prev is not None and a < prev:
            raise DomainError("shells of one sector must be disjoint")
        if prev is not None and a > prev:
            values.append(0.0)
        if prev is None or a > prev:
            edges.append(0.5 * a * a)
        edges.append(0.5 * b * b)
        values.append(1.0)
        prev = b
    return Density1D(edges, values)


class ShellMap:
    """
    Sector-wise radial transport between two planar shell sets.

    Args:
        sector_edges: Increasing angles covering [0, 2 pi]
        source_shells: For each sector a list of (inner, outer) radii
        target_shells: Same for the target set
    """

    def __init__(self, sector_edges, source_shells, target_shells):
        edges = np.asarray(sector_edges, dtype=float)
        if edges.ndim != 1 or edges.size < 2 or np.any(np.diff(edges) <= 0.0):
            raise DomainError("sector edges must be increasing")
        n = edges.size - 1
        if len(source_shells) != n or len(target_shells) != n:
            raise DomainError(f"need shells for each of the {n} sectors")
        self.sector_edges: np.ndarray = edges
        self.source_shells = [list(s) for s in source_shells]
        self.target_shells = [list(s) for s in target_shells]
        self.maps: list[TransportMap1D | None] = []
        for k, (src, dst) in enumerate(zip(source_shells, target_shells)):
            a = _shell_density(src)
            b = _shell_density(dst)
            mass_a = a.mass if a is not None else 0.0
            mass_b = b.mass if b is not None else 0.0
            if abs(mass_a - mass_b) > MASS_RTOL * max(mass_a, mass_b, 1.0):
                raise MassMismatchError(
                    f"sector {k}: source area {mass_a:.15g} differs from target area {mass_b:.15g}"
                )
            # empty sectors map trivially
            self.maps.append(TransportMap1D(a, b) if a is not None else None)

    @property
    def n_sectors(self) -> int:
        return len(self.maps)

    def sector_width(self, k: int) -> float:
        return float(self.sector_edges[k + 1] - self.sector_edges[k])

    def radius_map(self, k: int, rho):
        """Target radius of the source radius rho in sector k."""
        m = self.maps[k]
        rho = np.asarray(rho, dtype=float)
        if m is None:
            return rho
        return np.sqrt(2.0 * np.asarray(m(0.5 * rho**2)))

    def sector_of(self, angles) -> np.ndarray:
        a = np.mod(np.asarray(angles, dtype=float) - self.sector_edges[0], 2.0 * math.pi)
        a = a + self.sector_edges[0]
        k = np.searchsorted(self.sector_edges, a, side="right") - 1
        return np.clip(k, 0, self.n_sectors - 1)

    def __call__(self, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        rho = np.hypot(pts[:, 0], pts[:, 1])
        ang = np.arctan2(pts[:, 1], pts[:, 0])
        k = self.sector_of(ang)
        new_rho = np.empty_like(rho)
        for s in np.unique(k):
            mask = k == s
            new_rho[mask] = self.radius_map(int(s), rho[mask])
        with np.errstate(invalid="ignore", divide="ignore"):
            scale = np.where(rho > 0.0, new_rho / np.where(rho > 0.0, rho, 1.0), 1.0)
        return pts * scale[:, None]

    def displacement(self, points) -> np.ndarray:
        """|y - Phi(y)|."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return np.linalg.norm(pts - self(pts), axis=1)

    def source_integral(self, func) -> float:
        """
        Sum over sectors of width * int_(source shells) func(rho, phi(rho)) rho drho,
        integrated in the area coordinate on pieces where the map is affine.
        """
        total = 0.0
        for k, m in enumerate(self.maps):
            if m is None:
                continue
            v_cuts = m.breakpoints
            dens = m.source
            sector_total = 0.0
            for lo, hi in zip(v_cuts[:-1], v_cuts[1:]):
                cell = np.searchsorted(dens.edges, 0.5 * (lo + hi), side="right") - 1
                if dens.values[cell] <= 0.0:
                    continue
                v, w = gauss_legendre(_PIECE_ORDER, lo, hi)
                rho = np.sqrt(2.0 * v)
                sector_total += float(np.dot(w, func(rho, self.radius_map(k, rho))))
            total += self.sector_width(k) * sector_total
        return total

    def source_area(self) -> float:
        return self.source_integral(lambda r, p: np.ones_like(r))

    def transport_cost(self) -> float:
        """int over the source set of |y - Phi(y)|."""
        return self.source_integral(lambda r, p: np.abs(r - p))

    def outer_radius(self) -> float:
        radii = [b for shells in self.source_shells + self.target_shells for _, b in shells]
        return max(radii) if radii else 0.0

    def tables(self) -> list[np.ndarray]:
        """Per sector (source radius, target radius) rows at the map breakpoints."""
        out = []
        for m in self.maps:
            if m is None:
                out.append(np.empty((0, 2)))
                continue
            v = m.breakpoints
            out.append(np.column_stack([np.sqrt(2.0 * v), np.sqrt(2.0 * np.asarray(m(v)))]))
        return out


def shell_transport(sector_edges, source_shells, target_shells) -> ShellMap:
    return ShellMap(sector_edges, source_shells, target_shells)


def outer_to_inner_shells(
    n_sectors: int, rng: np.random.Generator, max_width: float = 0.2
) -> ShellMap:
    """
    Random sectors moving an outer shell (1, 1 + a_k) onto the inner shell
    (1 - b_k, 1) of the same area.
    """
    edges = np.linspace(0.0, 2.0 * math.pi, n_sectors + 1)
    source = []
    target = []
    for _ in range(n_sectors):
        a = rng.uniform(0.01, max_width)
        # (1+a)^2 - 1 = 1 - (1-b)^2
        b = 1.0 - math.sqrt(2.0 - (1.0 + a) ** 2)
        source.append([(1.0, 1.0 + a)])
        target.append([(1.0 - b, 1.0)])
    return ShellMap(edges, source, target)


def transport_exponent(N: int, beta: float) -> float:
    """min{1, 1 + (beta - 1)/N}."""
    return min(1.0, 1.0 + (beta - 1.0) / N)


def transport_constant(R: float, N: int, beta: float) -> float:
    if beta >= 1.0:
        return beta * (2.0 * R) ** (beta - 1.0)
    return beta * N * unit_ball_volume(N) ** ((1.0 - beta) / N) / (N + beta - 1.0)


@dataclass(frozen=True)
class TransportBoundReport:
    lhs: float
    rhs: float
    constant: float
    exponent: float
    cost: float

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    @property
    def passed(self) -> bool:
        return self.lhs <= self.rhs * (1.0 + 1e-9) + 1e-14


def transport_energy_bound_check(
    shell_map: ShellMap, e3: RadialDensity, beta: float, R: float | None = None
) -> TransportBoundReport:
    """
    |G(E1, E3) - G(E2, E3)| against C(R, beta, N) |E3|^exponent int_E1 |y - Phi(y)|.

    With E3 radial, G(E1, E3) - G(E2, E3) = int_E1 h(|y|) - h(|Phi(y)|) for the
    potential h of E3.
    """
    if e3.N != 2:
        raise DomainError("shell transport lives in the plane; E3 must have N = 2")
    if R is None:
        R = max(shell_map.outer_radius(), e3.outer_radius)
    lhs = abs(shell_map.source_integral(lambda r, p: potential(e3, r, beta) - potential(e3, p, beta)))
    cost = shell_map.transport_cost()
    const = transport_constant(R, 2, beta)
    expo = transport_exponent(2, beta)
    rhs = const * e3.volume() ** expo * cost
    logger.debug("transport bound beta=%g: lhs=%.6g rhs=%.6g", beta, lhs, rhs)
    return TransportBoundReport(lhs=lhs, rhs=rhs, constant=const, exponent=expo, cost=cost)
