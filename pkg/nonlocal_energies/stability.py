"""
Stability harnesses: the quadratic deficit bound for nearly-spherical sets,
the spectral gap form behind it, the sharpness of the exponent on the annulus
family and the bound for sets far from any ball.
"""

import logging
import math
import warnings
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.optimize import brentq

from .asymmetry import fraenkel_asymmetry
from .ball_cluster import BallCluster
from .errors import BoundViolation, ConvergenceError, PreconditionError
from .nearly_spherical import SUP_NORM_MAX, NearlySphericalShape
from .radial_energy import deficit_radial
from .radial_profile import annulus_family
from .seminorms import ZonalCoefficients, zonal_coefficients
from .shape_energy import cluster_energy, g_beta_ball, nearly_spherical_deficit, nearly_spherical_error_estimate
from .special_fn import unit_ball_volume
from .spectral import build_table
from .sphere_grid import SphereGrid

logger = logging.getLogger(__name__)

T_MAX = 0.05
RICHARDSON_TS = (0.02, 0.01, 0.005)
CONSTRAINT_TOLERANCE = 1e-12
MIN_FIT_POINTS = 6
_MAX_CONSTRAINT_STEPS = 20


def stability_constant(N: int, beta: float) -> float:
    """D_beta / 8."""
    return build_table(N, beta, 10).D_beta / 8.0


def _remove_low_degrees(grid: SphereGrid, u) -> np.ndarray:
    low = [grid.project(u, 0), grid.project(u, 1)]
    return np.asarray(u, dtype=float) - grid.synthesize(low)


def _enforce_constraints(grid: SphereGrid, u: np.ndarray, t: float) -> np.ndarray:
    """Additive constant for the volume (root find) and degree-1 shifts for the barycenter."""
    omega = unit_ball_volume(grid.N)
    N = grid.N
    coords = grid.nodes.T
    for _ in range(_MAX_CONSTRAINT_STEPS):

        def volume_gap(c):
            return grid.integrate((1.0 + t * (u + c)) ** N) / N - omega

        span = 0.4 / t
        c = brentq(volume_gap, -span, span, xtol=1e-15)
        u = u + c
        shape = NearlySphericalShape(grid, t, np.clip(u, -SUP_NORM_MAX, SUP_NORM_MAX))
        bary = shape.barycenter()
        if np.max(np.abs(bary)) <= CONSTRAINT_TOLERANCE and abs(c) <= CONSTRAINT_TOLERANCE:
            break
        u = u - (bary / t) @ coords
    return u


def constraint_project(grid: SphereGrid, u, t: float | None = None) -> np.ndarray:
    """
    Remove the degree-0 and degree-1 components of u; with an amplitude t,
    also enforce |E_(t,u)| = omega_N and zero barycenter exactly.

    A result with ||u||_inf > 1/2 is rescaled to 1/2 with a warning.
    """
    u = _remove_low_degrees(grid, u)
    peak = float(np.max(np.abs(u))) if u.size else 0.0
    if peak > SUP_NORM_MAX:
        warnings.warn(
            f"projected perturbation has sup norm {peak:.4g} > {SUP_NORM_MAX}; rescaling",
            UserWarning,
        )
        u = u * (SUP_NORM_MAX / peak)
    if t is None or t == 0.0 or not np.any(u):
        return u
    u = _enforce_constraints(grid, u, t)
    # the volume shift is O(t) and can lift the peak just past 1/2
    for _ in range(_MAX_CONSTRAINT_STEPS):
        peak = float(np.max(np.abs(u)))
        if peak <= SUP_NORM_MAX:
            break
        logger.debug("constrained perturbation has sup norm %.6g at t=%g; shrinking", peak, t)
        u = _enforce_constraints(grid, u * (SUP_NORM_MAX / peak) * (1.0 - 1e-6), t)
    else:
        raise ConvergenceError(
            f"could not keep the constrained perturbation within sup norm {SUP_NORM_MAX}",
            diagnostics={"t": t, "peak": peak},
        )
    return u


@dataclass(frozen=True)
class FugledeCase:
    N: int
    beta: float
    t: float
    u_norm_sq: float
    deficit: float
    bound: float
    quadrature_error: float
    volume_error: float
    barycenter_norm: float

    @property
    def ratio(self) -> float:
        """D_beta(E_t) / (t^2 ||u||^2)."""
        return self.deficit / (self.t**2 * self.u_norm_sq) if self.u_norm_sq > 0 else 0.0

    @property
    def slack(self) -> float:
        return self.deficit - self.bound + self.quadrature_error

    @property
    def passed(self) -> bool:
        return self.slack >= 0.0

    def to_dict(self) -> dict:
        data = asdict(self)
        data.update(ratio=self.ratio, slack=self.slack, passed=self.passed)
        return data


@dataclass
class FugledeSweep:
    cases: list[FugledeCase]
    predicted_limit: float
    extrapolated_limit: float | None = None
    constant: float = 0.0
    failures: list[FugledeCase] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def worst_slack(self) -> float:
        return min((c.slack for c in self.cases), default=math.inf)


def second_variation_limit(grid: SphereGrid, u, beta: float) -> float:
    """(lambda_1 ||u||^2 - [u]_beta^2) / (2 ||u||^2) from the harmonic coefficients of u."""
    coeffs = zonal_coefficients(grid, u)
    table = build_table(grid.N, beta, max(coeffs.k_max, 1))
    energy = coeffs.total_energy()
    if energy == 0.0:
        return 0.0
    return 0.5 * (table.lam[1] * energy - coeffs.weighted(table.lam)) / energy


def _richardson(ts, ratios) -> float:
    coef = np.polyfit(np.asarray(ts), np.asarray(ratios), 2)
    return float(coef[-1])


def fuglede_check(
    grid: SphereGrid,
    beta: float,
    u,
    t_grid=RICHARDSON_TS,
    raise_on_violation: bool = True,
) -> FugledeSweep:
    """
    Deficit of E_(t,u) against (D_beta/8) t^2 ||u||^2 for each t, with the
    t -> 0 limit of the ratio compared to the second-variation prediction.
    """
    ts = [float(t) for t in t_grid]
    if any(not 0.0 < t <= T_MAX for t in ts):
        raise PreconditionError(f"amplitudes must lie in (0, {T_MAX}], got {ts}")
    N = grid.N
    const = stability_constant(N, beta)
    base = constraint_project(grid, u)
    predicted = second_variation_limit(grid, base, beta)
    omega = unit_ball_volume(N)

    cases = []
    for t in ts:
        ut = constraint_project(grid, base, t)
        shape = NearlySphericalShape(grid, t, ut)
        norm_sq = grid.l2_norm_sq(ut)
        deficit = nearly_spherical_deficit(shape, beta)
        case = FugledeCase(
            N=N,
            beta=beta,
            t=t,
            u_norm_sq=norm_sq,
            deficit=deficit,
            bound=const * t**2 * norm_sq,
            quadrature_error=nearly_spherical_error_estimate(shape, beta),
            volume_error=abs(shape.volume() - omega),
            barycenter_norm=float(np.linalg.norm(shape.barycenter())),
        )
        logger.debug("fuglede t=%g ratio=%.8g bound slack=%.3g", t, case.ratio, case.slack)
        cases.append(case)

    sweep = FugledeSweep(cases=cases, predicted_limit=predicted, constant=const)
    if len(ts) >= 3 and all(c.u_norm_sq > 0 for c in cases):
        sweep.extrapolated_limit = _richardson(ts, [c.ratio for c in cases])
    sweep.failures = [c for c in cases if not c.passed]
    if sweep.failures and raise_on_violation:
        worst = min(sweep.failures, key=lambda c: c.slack)
        raise BoundViolation(
            f"deficit bound violated at t={worst.t} (slack {worst.slack:.3g})", case=worst.to_dict()
        )
    return sweep


@dataclass(frozen=True)
class GapFormReport:
    value: float
    bound: float
    energy: float
    constrained: bool

    @property
    def passed(self) -> bool:
        return not self.constrained or self.value >= self.bound * (1.0 - 1e-9)


def spectral_gap_form(coeffs: ZonalCoefficients, N: int, beta: float) -> GapFormReport:
    """
    lambda_1 sum a^2 - sum lambda_k a^2, checked against D_beta sum a^2 when
    the degree-0 and degree-1 coefficients vanish.
    """
    table = build_table(N, beta, max(coeffs.k_max, 1))
    energy = coeffs.total_energy()
    value = table.lam[1] * energy - coeffs.weighted(table.lam)
    low = coeffs.degree_energy()[:2].sum()
    constrained = low <= 1e-20 + 1e-10 * energy
    report = GapFormReport(
        value=float(value), bound=table.D_beta * energy, energy=energy, constrained=constrained
    )
    if not report.passed:
        raise BoundViolation(
            f"spectral gap form {value:.6g} below D_beta sum a^2 = {report.bound:.6g}",
            case={"N": N, "beta": beta, **asdict(report)},
        )
    return report


@dataclass
class SlopeFit:
    asymmetries: np.ndarray
    deficits: np.ndarray
    slope: float
    intercept: float
    residual: float

    def to_rows(self) -> np.ndarray:
        return np.column_stack([self.asymmetries, self.deficits])


def sharpness_fit(N: int, beta: float, h_grid=None, measure_asymmetry: bool = False) -> SlopeFit:
    """
    Log-log slope of the deficit against the asymmetry on the annulus family;
    the two extreme amplitudes are left out of the fit.

    The asymmetry is |E delta B| for the centred unit ball, 2 omega_N h, unless
    measure_asymmetry is set, in which case the Fraenkel asymmetry is
    minimized over centers for every amplitude.
    """
    if h_grid is None:
        h_grid = np.geomspace(5e-4, 5e-2, 8)
    hs = np.sort(np.asarray(h_grid, dtype=float))
    if hs.size < MIN_FIT_POINTS:
        raise PreconditionError(f"need at least {MIN_FIT_POINTS} amplitudes, got {hs.size}")
    if hs[0] <= 1e-4 or hs[-1] > 1e-1:
        raise PreconditionError("amplitudes must lie in (1e-4, 1e-1]")
    omega = unit_ball_volume(N)
    deltas = []
    deficits = []
    for h in hs:
        d = deficit_radial(annulus_family(float(h), N), beta)
        if d <= 0.0:
            warnings.warn(f"non-positive deficit {d:.3g} at h={h:g}; point dropped", UserWarning)
            continue
        delta = 2.0 * omega * h
        if measure_asymmetry:
            result = fraenkel_asymmetry(annulus_family(float(h), N))
            logger.debug("h=%g: asymmetry %.10g, centred ball %.10g", h, result.value, delta)
            delta = result.value
        deltas.append(delta)
        deficits.append(d)
    x = np.log(np.asarray(deltas))
    y = np.log(np.asarray(deficits))
    if x.size < MIN_FIT_POINTS:
        raise PreconditionError(f"only {x.size} usable points for the slope fit")
    inner = slice(1, -1)
    coef, res, *_ = np.polyfit(x[inner], y[inner], 1, full=True)
    residual = float(res[0]) if len(res) else 0.0
    logger.info("sharpness N=%d beta=%g: slope %.6f", N, beta, coef[0])
    return SlopeFit(
        asymmetries=np.asarray(deltas),
        deficits=np.asarray(deficits),
        slope=float(coef[0]),
        intercept=float(coef[1]),
        residual=residual,
    )


@dataclass(frozen=True)
class BigAsymmetryReport:
    N: int
    beta: float
    n_balls: int
    deficit: float
    bound: float

    @property
    def slack(self) -> float:
        return self.deficit - self.bound

    @property
    def passed(self) -> bool:
        return self.slack >= 0.0


def big_asymmetry_bound(N: int, beta: float) -> float:
    """(3^beta - 2^beta)/2 omega_N^2."""
    return 0.5 * (3.0**beta - 2.0**beta) * unit_ball_volume(N) ** 2


def cluster_deficit(cluster: BallCluster, beta: float) -> float:
    return cluster_energy(cluster, beta) - g_beta_ball(cluster.N, beta, cluster.volume())


def big_asymmetry_check(N: int, beta: float, n_balls: int = 4, gap: float = 3.0) -> BigAsymmetryReport:
    """Deficit of n scattered balls of total volume omega_N, at least `gap` apart."""
    if n_balls < 2:
        raise PreconditionError("a single ball has zero asymmetry")
    cluster = BallCluster.scattered(n_balls, N, gap)
    report = BigAsymmetryReport(
        N=N,
        beta=beta,
        n_balls=n_balls,
        deficit=cluster_deficit(cluster, beta),
        bound=big_asymmetry_bound(N, beta),
    )
    if not report.passed:
        raise BoundViolation(
            f"deficit {report.deficit:.6g} below {report.bound:.6g}", case=asdict(report)
        )
    return report


def two_ball_deficits(N: int, beta: float, distances) -> np.ndarray:
    """Deficits of two half-volume balls with centers at the given distances."""
    return np.array([cluster_deficit(BallCluster.two_balls(d, N), beta) for d in distances])
