"""
Monte Carlo reference values for power-kernel energies of the unit ball.

Points are drawn with stratified radii (|x| = U^(1/N) with U stratified on
[0, 1]) and Gaussian directions. Seeds are explicit so every value can be
recorded next to the seed that produced it.
"""

import logging
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .special_fn import sphere_area, unit_ball_volume

logger = logging.getLogger(__name__)

DEFAULT_PAIRS = 10_000_000
_BATCH = 1_000_000


@dataclass(frozen=True)
class MonteCarloEstimate:
    value: float
    standard_error: float
    n_pairs: int
    seed: int

    def agrees_with(self, reference: float, n_sigma: float = 3.0) -> bool:
        return abs(self.value - reference) <= n_sigma * self.standard_error


def sample_ball(rng: np.random.Generator, n: int, N: int) -> np.ndarray:
    """n uniform points in the unit ball of R^N with stratified radii."""
    strata = (rng.permutation(n) + rng.uniform(size=n)) / n
    radii = strata ** (1.0 / N)
    directions = rng.standard_normal((n, N))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    return radii[:, None] * directions


def ball_energy_mc(
    N: int,
    q: float,
    n_pairs: int = DEFAULT_PAIRS,
    seed: int = 0,
    cutoff: float | None = None,
) -> MonteCarloEstimate:
    """
    Estimate int_B int_B |x - y|^q.

    For q < 0 pairs closer than `cutoff` are rejected and the excluded part
    is added back as omega_N |S| cutoff^(q+N) / (q+N), its value for an
    interior point.
    """
    if not q > -N:
        raise DomainError(f"ball energy diverges for q <= -N (q={q})")
    if q < 0.0 and cutoff is None:
        cutoff = 1e-3
    rng = np.random.default_rng(seed)
    omega = unit_ball_volume(N)
    total = 0.0
    total_sq = 0.0
    done = 0
    while done < n_pairs:
        n = min(_BATCH, n_pairs - done)
        x = sample_ball(rng, n, N)
        y = sample_ball(rng, n, N)
        dist = np.linalg.norm(x - y, axis=1)
        if q < 0.0:
            vals = np.where(dist >= cutoff, np.maximum(dist, cutoff) ** q, 0.0)
        else:
            vals = dist**q
        total += float(vals.sum())
        total_sq += float(np.dot(vals, vals))
        done += n
        logger.debug("monte carlo N=%d q=%g: %d/%d pairs", N, q, done, n_pairs)
    mean = total / n_pairs
    var = max(total_sq / n_pairs - mean**2, 0.0)
    value = omega**2 * mean
    if q < 0.0:
        p = q + N
        value += omega * sphere_area(N) * cutoff**p / p
    return MonteCarloEstimate(
        value=value,
        standard_error=omega**2 * float(np.sqrt(var / n_pairs)),
        n_pairs=n_pairs,
        seed=seed,
    )


def psi_mc(t: float, N: int, beta: float, n_points: int = 1_000_000, seed: int = 0) -> MonteCarloEstimate:
    """Estimate int_B |y - t e_1|^beta dy."""
    rng = np.random.default_rng(seed)
    y = sample_ball(rng, n_points, N)
    y[:, 0] -= t
    vals = np.linalg.norm(y, axis=1) ** beta
    omega = unit_ball_volume(N)
    return MonteCarloEstimate(
        value=omega * float(vals.mean()),
        standard_error=omega * float(vals.std() / np.sqrt(n_points)),
        n_pairs=n_points,
        seed=seed,
    )
