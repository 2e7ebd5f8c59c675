"""
Fraenkel asymmetry: the smallest |E delta B(x)| over unit balls B(x).

The objective is Lipschitz in x but not smooth, so the center search uses
Nelder-Mead from several seeds (barycenter, origin, shape-specific centers)
and keeps the best probe seen by any run.
"""

import logging
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .errors import PreconditionError
from .geometry import Shape

logger = logging.getLogger(__name__)

VALUE_TOLERANCE = 1e-8
VOLUME_TOLERANCE = 1e-8
_SIMPLEX_STEP = 0.05


@dataclass(frozen=True)
class AsymmetryResult:
    value: float
    optimal_center: np.ndarray
    converged: bool
    n_probes: int


def fraenkel_asymmetry(shape: Shape, tol: float = VALUE_TOLERANCE) -> AsymmetryResult:
    """
    Minimize |E delta B(x)| over centers x.

    Args:
        shape: Any shape with volume omega_N
        tol: Absolute tolerance on the objective value

    Returns:
        AsymmetryResult; `converged` is False (with a warning) when no run
        met the tolerance, in which case the best value found is returned
    """
    vol = shape.volume()
    if abs(vol - shape.ball_volume) > VOLUME_TOLERANCE * max(1.0, shape.ball_volume):
        raise PreconditionError(
            f"asymmetry needs |E| = omega_N, got |E| = {vol:.12g} vs {shape.ball_volume:.12g}"
        )

    best_value = np.inf
    best_x = None
    n_probes = 0

    def objective(x):
        nonlocal best_value, best_x, n_probes
        val = shape.symmetric_difference_with_unit_ball(x)
        n_probes += 1
        if val < best_value:
            best_value = val
            best_x = np.array(x, dtype=float)
        return val

    seeds = [shape.barycenter(), np.zeros(shape.N)] + shape.candidate_centers()
    converged = False
    for seed in _unique_points(seeds):
        simplex = np.vstack([seed] + [seed + _SIMPLEX_STEP * e for e in np.eye(shape.N)])
        res = minimize(
            objective,
            seed,
            method="Nelder-Mead",
            options={
                "initial_simplex": simplex,
                "xatol": 1e-9,
                "fatol": tol,
                "maxiter": 400 * shape.N,
            },
        )
        converged = converged or bool(res.success)
        logger.debug("asymmetry run from %s: value=%.12g success=%s", seed, res.fun, res.success)

    if not converged:
        warnings.warn(
            f"asymmetry center search did not converge; returning best value {best_value:.6g}",
            UserWarning,
        )
    return AsymmetryResult(
        value=float(max(best_value, 0.0)),
        optimal_center=best_x,
        converged=converged,
        n_probes=n_probes,
    )


def _unique_points(points, tol: float = 1e-12):
    out = []
    for p in points:
        p = np.asarray(p, dtype=float)
        if all(np.linalg.norm(p - q) > tol for q in out):
            out.append(p)
    return out
