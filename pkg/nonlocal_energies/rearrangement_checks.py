"""
Numerical checks of rearrangement inequalities and the lower bounds they
produce for the attractive energy.
"""

import logging
from dataclasses import dataclass

import numpy as np

from .ball_cluster import BallCluster
from .densities import Density2D, decreasing_rearrangement
from .errors import DomainError
from .radial_energy import deficit_radial, g_beta_radial, pair_energy, radial_moment, tau, zeta_f
from .radial_profile import RadialDensity
from .shape_energy import g_beta, g_beta_ball
from .special_fn import gauss_legendre

logger = logging.getLogger(__name__)

EQUALITY_RTOL = 1e-9
_CELL_ORDER = 3
_CHUNK_SIZE = 4_000_000


def density2d_energy(density: Density2D, beta: float, order: int = _CELL_ORDER) -> float:
    """G_beta of a gridded planar density by a tensor Gauss rule on every cell."""
    pts = []
    wts = []
    for i in range(density.values.shape[0]):
        x, wx = gauss_legendre(order, density.x_edges[i], density.x_edges[i + 1])
        for j in range(density.values.shape[1]):
            v = density.values[i, j]
            if v == 0.0:
                continue
            y, wy = gauss_legendre(order, density.y_edges[j], density.y_edges[j + 1])
            X, Y = np.meshgrid(x, y, indexing="ij")
            pts.append(np.column_stack([X.ravel(), Y.ravel()]))
            wts.append(v * np.outer(wx, wy).ravel())
    p = np.concatenate(pts)
    w = np.concatenate(wts)
    rows = max(1, _CHUNK_SIZE // len(w))
    total = 0.0
    for start in range(0, len(w), rows):
        d = np.linalg.norm(p[start : start + rows, None, :] - p[None, :, :], axis=-1)
        total += float(w[start : start + rows] @ d**beta @ w)
    return total


@dataclass(frozen=True)
class RieszReport:
    g_f: float
    g_star: float
    equality: bool

    @property
    def gap(self) -> float:
        return self.g_f - self.g_star

    @property
    def passed(self) -> bool:
        return self.gap >= -EQUALITY_RTOL * abs(self.g_star)


def riesz_increasing_check(f, beta: float) -> RieszReport:
    """
    G_beta(f) >= G_beta(f*) for the decreasing rearrangement f*; equality is
    flagged when f is a centred ball indicator.
    """
    if isinstance(f, RadialDensity):
        star = decreasing_rearrangement(f)
        g_star = g_beta_radial(star, beta)
        g_f = g_beta_radial(f, beta)
        equality = f.is_ball_indicator()
    elif isinstance(f, Density2D):
        g_star = g_beta_radial(decreasing_rearrangement(f), beta)
        g_f = density2d_energy(f, beta)
        equality = False
    elif isinstance(f, BallCluster):
        g_star = g_beta_ball(f.N, beta, f.volume())
        g_f = g_beta(f, beta)
        equality = f.n_balls == 1
    else:
        raise DomainError(f"no rearrangement check for {type(f).__name__}")
    report = RieszReport(g_f=g_f, g_star=g_star, equality=equality)
    logger.debug("riesz check beta=%g gap=%.6g", beta, report.gap)
    return report


@dataclass(frozen=True)
class LowerBoundReport:
    value: float
    bound: float

    @property
    def slack(self) -> float:
        return self.value - self.bound

    @property
    def passed(self) -> bool:
        return self.slack >= -EQUALITY_RTOL * max(abs(self.bound), 1.0)


def density_ball_bound_check(g: RadialDensity, beta: float) -> LowerBoundReport:
    """G_beta(g) >= G_beta(B_r) with |B_r| = ||g||_1, for [0,1]-valued radial g."""
    bound = g_beta_ball(g.N, beta, g.volume())
    return LowerBoundReport(value=bound + deficit_radial(g, beta), bound=bound)


def pair_lower_bound_check(G: RadialDensity, H: RadialDensity, beta: float) -> LowerBoundReport:
    """G_beta(G, H) >= |G| tau(|H|)."""
    return LowerBoundReport(
        value=pair_energy(G, H, beta), bound=G.volume() * tau(H.volume(), H.N, beta)
    )


def pointwise_lower_bound(E: RadialDensity, beta: float) -> LowerBoundReport:
    """int_E |x|^beta dx >= N omega_N/(beta+N) (|E|/omega_N)^((beta+N)/N)."""
    return LowerBoundReport(value=radial_moment(E, beta), bound=tau(E.volume(), E.N, beta))


def zeta_monotone_check(f: RadialDensity, beta: float, rho_grid) -> bool:
    """True when the shell-averaged potential of f is nondecreasing on rho_grid."""
    vals = np.asarray(zeta_f(f, np.asarray(rho_grid, dtype=float), beta))
    return bool(np.all(np.diff(vals) >= -1e-12 * np.max(np.abs(vals))))
