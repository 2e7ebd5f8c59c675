"""
Monotone transport maps between gridded densities.

The 1D map is the increasing rearrangement T = G^<- o F. In the plane the
Knothe-Rosenblatt map applies it to the first marginals and then, column by
column, to the conditional densities of the second variable.
"""

import logging
from dataclasses import dataclass

import numpy as np

from .densities import Density1D, Density2D
from .errors import MassMismatchError
from .special_fn import gauss_legendre

logger = logging.getLogger(__name__)

MASS_RTOL = 1e-10
_PIECE_ORDER = 4


def _check_masses(a: float, b: float) -> None:
    if abs(a - b) > MASS_RTOL * max(abs(a), abs(b), 1.0):
        raise MassMismatchError(f"source and target masses differ: {a:.15g} vs {b:.15g}")


class TransportMap1D:
    """
    Increasing rearrangement of `source` onto `target`.

    The map is piecewise linear; its breakpoints are the source edges together
    with the preimages of the target edges.
    """

    def __init__(self, source: Density1D, target: Density1D):
        _check_masses(source.mass, target.mass)
        self.source: Density1D = source
        self.target: Density1D = target
        pre = source.quantile(np.clip(target.cumulative, 0.0, source.mass))
        self.breakpoints: np.ndarray = np.unique(np.concatenate([source.edges, pre]))

    def __call__(self, x):
        return self.target.quantile(self.source.cdf(x))

    def inverse(self) -> "TransportMap1D":
        return TransportMap1D(self.target, self.source)

    def cdf_residual(self) -> float:
        """max |G(T(x)) - F(x)| over the breakpoints on the source support."""
        x = self.breakpoints
        return float(np.max(np.abs(self.target.cdf(self(x)) - self.source.cdf(x))))

    def is_monotone(self) -> bool:
        y = self(self.breakpoints)
        return bool(np.all(np.diff(y) >= -1e-14 * max(1.0, np.max(np.abs(y)))))

    def table(self) -> np.ndarray:
        """(source radius, target radius) rows at the breakpoints."""
        return np.column_stack([self.breakpoints, self(self.breakpoints)])


def increasing_rearrangement_1d(mu: Density1D, nu: Density1D) -> TransportMap1D:
    return TransportMap1D(mu, nu)


class KnotheRosenblatt2D:
    """
    T(x1, x2) = (T1(x1), T2(x2 | x1)) between two gridded planar densities.

    T2(. | x1) depends on the source column of x1 and on the target column of
    T1(x1), so one conditional map is stored for each such pair.
    """

    def __init__(self, source: Density2D, target: Density2D):
        _check_masses(source.mass, target.mass)
        self.source: Density2D = source
        self.target: Density2D = target
        self.first: TransportMap1D = TransportMap1D(source.marginal_x(), target.marginal_x())
        self._conditional: dict[tuple[int, int], TransportMap1D] = {}
        marginal = target.marginal_x()
        self._target_cumulative: np.ndarray = marginal.cumulative[1:]
        self._last_target_column: int = int(np.nonzero(marginal.cell_mass > 0.0)[0][-1])

    def _mass_level(self, x1):
        """Source x-mass left of x1, on the scale of the target mass."""
        return self.first.source.cdf(x1) * (self.target.mass / self.source.mass)

    def _target_column(self, level):
        """Target column holding x-mass `level`; columns without mass are skipped."""
        j = np.searchsorted(self._target_cumulative, level, side="right")
        return np.minimum(j, self._last_target_column)

    def _source_column(self, x1):
        i = np.searchsorted(self.source.x_edges, x1, side="right") - 1
        return np.clip(i, 0, self.source.values.shape[0] - 1)

    def conditional(self, i: int, j: int) -> TransportMap1D:
        """Map between the normalized source column i and target column j."""
        key = (int(i), int(j))
        if key not in self._conditional:
            src = self.source.column(key[0])
            dst = self.target.column(key[1])
            self._conditional[key] = TransportMap1D(src.normalized(), dst.normalized())
        return self._conditional[key]

    def __call__(self, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        y1 = np.asarray(self.first(pts[:, 0]), dtype=float).reshape(-1)
        i_src = self._source_column(pts[:, 0])
        j_dst = np.atleast_1d(self._target_column(self._mass_level(pts[:, 0])))
        y2 = np.empty(len(pts))
        for i, j in set(zip(i_src.tolist(), j_dst.tolist())):
            mask = (i_src == i) & (j_dst == j)
            if self.source.cell_mass[i].sum() <= 0.0:
                y2[mask] = pts[mask, 1]
                continue
            y2[mask] = self.conditional(i, j)(pts[mask, 1])
        return np.column_stack([y1, y2])

    def _source_pieces(self):
        """
        Rectangles of the source grid on which T is affine in each variable,
        as (x_lo, x_hi, y_lo, y_hi, density).
        """
        src = self.source
        x_cuts = self.first.source.quantile(self.target.marginal_x().cumulative)
        for i in range(src.values.shape[0]):
            x_lo, x_hi = src.x_edges[i], src.x_edges[i + 1]
            if src.cell_mass[i].sum() <= 0.0:
                continue
            inner = x_cuts[(x_cuts > x_lo) & (x_cuts < x_hi)]
            xs = np.concatenate([[x_lo], np.unique(inner), [x_hi]])
            for a, b in zip(xs[:-1], xs[1:]):
                j = int(self._target_column(self._mass_level(0.5 * (a + b))))
                cmap = self.conditional(i, j)
                y_cuts = np.unique(np.concatenate([src.y_edges, cmap.breakpoints]))
                for c, d in zip(y_cuts[:-1], y_cuts[1:]):
                    dens = float(src.value_at([[0.5 * (a + b), 0.5 * (c + d)]])[0])
                    if dens > 0.0:
                        yield a, b, c, d, dens

    def pushforward_residual(self, test_function) -> float:
        """
        |int phi(T(y)) f(y) dy - int phi(z) g(z) dz| for one test function,
        both sides by Gauss-Legendre on pieces where the integrand is smooth.
        """
        lhs = 0.0
        for a, b, c, d, dens in self._source_pieces():
            lhs += dens * _tensor_integral(lambda p: test_function(self(p)), a, b, c, d)
        rhs = 0.0
        tgt = self.target
        for i in range(tgt.values.shape[0]):
            for j in range(tgt.values.shape[1]):
                if tgt.values[i, j] <= 0.0:
                    continue
                rhs += tgt.values[i, j] * _tensor_integral(
                    test_function, tgt.x_edges[i], tgt.x_edges[i + 1], tgt.y_edges[j], tgt.y_edges[j + 1]
                )
        return abs(lhs - rhs)


def _tensor_integral(func, a, b, c, d, order: int = _PIECE_ORDER) -> float:
    x, wx = gauss_legendre(order, a, b)
    y, wy = gauss_legendre(order, c, d)
    X, Y = np.meshgrid(x, y, indexing="ij")
    vals = np.asarray(func(np.column_stack([X.ravel(), Y.ravel()])), dtype=float)
    return float(np.outer(wx, wy).ravel() @ vals)


def knothe_rosenblatt_2d(mu: Density2D, nu: Density2D) -> KnotheRosenblatt2D:
    return KnotheRosenblatt2D(mu, nu)


TEST_FUNCTIONS = (
    lambda z: np.ones(len(z)),
    lambda z: z[:, 0],
    lambda z: z[:, 1],
    lambda z: z[:, 0] * z[:, 1],
    lambda z: z[:, 0] ** 2 + z[:, 1] ** 2,
    lambda z: np.sin(3.0 * z[:, 0]) * np.cos(2.0 * z[:, 1]),
    lambda z: np.exp(-((z[:, 0] - 0.5) ** 2 + (z[:, 1] - 0.5) ** 2)),
    lambda z: np.cos(z[:, 0] + 2.0 * z[:, 1]),
    lambda z: 1.0 / (1.0 + z[:, 0] ** 2 + z[:, 1] ** 2),
    lambda z: z[:, 1] ** 3 - z[:, 0],
)


@dataclass(frozen=True)
class PushforwardReport:
    residuals: tuple[float, ...]
    cell_mass: float

    @property
    def worst(self) -> float:
        return max(self.residuals)

    @property
    def passed(self) -> bool:
        return self.worst <= 2.0 * self.cell_mass


def verify_pushforward(kr: KnotheRosenblatt2D, functions=TEST_FUNCTIONS) -> PushforwardReport:
    """Change of variables check on the test battery; tolerance twice the largest cell mass."""
    residuals = tuple(kr.pushforward_residual(f) for f in functions)
    logger.debug("pushforward residuals: %s", residuals)
    return PushforwardReport(residuals=residuals, cell_mass=float(kr.target.cell_mass.max()))
