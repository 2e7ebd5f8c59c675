"""
Scans of the mixed energy G_beta + V_alpha + epsilon(m) P_s over a battery of
competitors, and quasi-minimality ratios of the fractional perimeter.
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .ball_cluster import BallCluster
from .errors import DomainError, PreconditionError
from .geometry import Shape
from .nearly_spherical import SUP_NORM_MAX, NearlySphericalShape
from .perimeter import p_s
from .radial_profile import annulus_family
from .report import epsilon_of_m, mixed_energy_ball
from .shape_energy import g_beta, v_alpha
from .special_fn import unit_ball_volume
from .sphere_grid import SphereGrid

logger = logging.getLogger(__name__)

DEFAULT_GRID_RESOLUTION = 128
MARGIN_RTOL = 1e-9


@dataclass(frozen=True)
class Competitor:
    """A unit-volume (omega_N) competitor with its three energy components."""

    name: str
    g: float
    v: float
    p: float

    def energy_at(self, m: float, N: int, beta: float, alpha: float, s: float, epsilon: float) -> float:
        """Mixed energy of the competitor dilated to volume m."""
        ratio = m / unit_ball_volume(N)
        return (
            ratio ** (2.0 + beta / N) * self.g
            + ratio ** (1.0 + alpha / N) * self.v
            + epsilon * ratio ** (1.0 - s / N) * self.p
        )


def _to_unit_volume(shape: Shape) -> Shape:
    return shape.rescale((shape.ball_volume / shape.volume()) ** (1.0 / shape.N))


def default_battery(N: int, s: float, resolution: int = DEFAULT_GRID_RESOLUTION) -> list[tuple[str, Shape]]:
    """
    Annuli, split balls and (in the plane, or at s = 1) nearly-spherical
    modes, each dilated to volume omega_N.
    """
    shapes: list[tuple[str, Shape]] = []
    for h in (0.05, 0.2):
        shapes.append((f"annulus_h{h:g}", annulus_family(h, N)))
    r = 2.0 ** (-1.0 / N)
    for gap in (0.5, 2.0):
        shapes.append((f"two_balls_gap{gap:g}", BallCluster.two_balls(2.0 * r + gap, N)))
    if N == 2 or s == 1.0:
        grid = SphereGrid(N, resolution) if N == 2 else SphereGrid(N, 24)
        for k in range(2, 6):
            if N == 2:
                u = SUP_NORM_MAX * np.cos(k * grid.phi)
            else:
                u = SUP_NORM_MAX * grid.zonal(k) / np.max(np.abs(grid.zonal(k)))
            for t in (0.05, 0.2):
                shape = NearlySphericalShape(grid, t, u)
                shapes.append((f"mode{k}_t{t:g}", _to_unit_volume(shape)))
    return shapes


def competitor_components(name: str, shape: Shape, beta: float, alpha: float, s: float) -> Competitor:
    if abs(shape.volume() - shape.ball_volume) > 1e-9 * shape.ball_volume:
        raise PreconditionError(f"competitor {name} must have volume omega_N")
    return Competitor(name=name, g=g_beta(shape, beta), v=v_alpha(shape, alpha), p=p_s(shape, s))


@dataclass(frozen=True)
class ScanRow:
    m: float
    epsilon: float
    ball_energy: float
    best_energy: float
    best_name: str

    @property
    def margin(self) -> float:
        """Best competitor minus ball; positive when the ball wins."""
        return self.best_energy - self.ball_energy

    @property
    def ball_wins(self) -> bool:
        return self.margin >= -MARGIN_RTOL * abs(self.ball_energy)


@dataclass
class MixedScanReport:
    N: int
    beta: float
    alpha: float
    s: float
    rows: list[ScanRow] = field(default_factory=list)

    @property
    def threshold(self) -> float | None:
        """Smallest scanned m from which the ball beats every competitor at every larger m."""
        m_star = None
        for row in reversed(self.rows):
            if not row.ball_wins:
                break
            m_star = row.m
        return m_star

    @property
    def violations(self) -> list[ScanRow]:
        t = self.threshold
        return [r for r in self.rows if not r.ball_wins and (t is None or r.m < t)]

    def to_rows(self) -> np.ndarray:
        return np.array([[r.m, r.epsilon, r.ball_energy, r.best_energy, r.margin] for r in self.rows])


def ball_minimality_scan(
    N: int,
    beta: float,
    alpha: float,
    s: float,
    m_grid,
    battery: list[tuple[str, Shape]] | None = None,
) -> MixedScanReport:
    """
    Compare the ball of volume m with every competitor dilated to volume m,
    with the perimeter weighted by epsilon(m).
    """
    if not 0.0 < alpha < N:
        raise DomainError(f"alpha must lie in (0, N), got {alpha}")
    if not 0.0 < s <= 1.0:
        raise DomainError(f"s must lie in (0, 1], got {s}")
    masses = np.sort(np.asarray(m_grid, dtype=float))
    if masses.size == 0 or np.any(masses <= 0.0):
        raise DomainError("masses must be positive")
    if battery is None:
        battery = default_battery(N, s)
    competitors = [competitor_components(name, shape, beta, alpha, s) for name, shape in battery]
    logger.info("mixed scan over %d competitors and %d masses", len(competitors), masses.size)

    report = MixedScanReport(N=N, beta=beta, alpha=alpha, s=s)
    for m in masses:
        eps = epsilon_of_m(float(m), N, beta, s)
        ball = mixed_energy_ball(float(m), N, beta, alpha, s, eps)
        energies = [c.energy_at(float(m), N, beta, alpha, s, eps) for c in competitors]
        best = int(np.argmin(energies))
        report.rows.append(
            ScanRow(
                m=float(m),
                epsilon=eps,
                ball_energy=ball,
                best_energy=float(energies[best]),
                best_name=competitors[best].name,
            )
        )
    if report.violations:
        logger.warning("ball beaten below m=%s at %d masses", report.threshold, len(report.violations))
    return report


def bump_battery(grid: SphereGrid, rng: np.random.Generator, n: int, amplitude: float = 0.02):
    """n localized bumps A (1 - (d/r)^2)^2 on random caps, outward by default sign."""
    if grid.N != 2:
        raise PreconditionError("bump batteries are built on planar grids")
    bumps = []
    for _ in range(n):
        center = rng.uniform(0.0, 2.0 * math.pi)
        width = rng.uniform(0.2, 0.8)
        d = np.abs(np.angle(np.exp(1j * (grid.phi - center))))
        bumps.append(amplitude * np.clip(1.0 - (d / width) ** 2, 0.0, None) ** 2)
    return bumps


def _perturbed(shape: NearlySphericalShape, bump) -> NearlySphericalShape:
    """Same center and scale, radius scale * (1 + t u + bump)."""
    offset = shape.t * shape.u + np.asarray(bump, dtype=float)
    peak = float(np.max(np.abs(offset)))
    if peak == 0.0:
        return shape
    t = peak / SUP_NORM_MAX
    if t >= 1.0:
        raise PreconditionError("perturbation too large for a nearly-spherical description")
    return shape.with_perturbation(t, offset / t)


@dataclass
class QuasiminReport:
    ratios: np.ndarray

    @property
    def lambda_hat(self) -> float:
        return float(np.max(self.ratios)) if self.ratios.size else -math.inf


def quasimin_ratio(shape: NearlySphericalShape, bumps, s: float) -> QuasiminReport:
    """
    (P_s(E) - P_s(F)) / |E delta F| for each perturbation F of E by one bump;
    the largest ratio is the empirical quasi-minimality constant.
    """
    base = p_s(shape, s)
    ratios = []
    for bump in bumps:
        other = _perturbed(shape, bump)
        diff = shape.symmetric_difference(other)
        if diff <= 0.0:
            continue
        ratios.append((base - p_s(other, s)) / diff)
    return QuasiminReport(ratios=np.asarray(ratios))
