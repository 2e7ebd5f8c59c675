"""
Radially symmetric densities with values in [0, 1], piecewise constant in the
radius, and the indicator subclass RadialProfile (finite unions of annuli).

A density is given by breakpoints r_0 < r_1 < ... < r_m and one value per
interval [0, r_0], [r_0, r_1], ..., [r_(m-1), r_m]; it vanishes beyond r_m.
"""

import logging
import math

import numpy as np

from .errors import DomainError
from .geometry import Shape, register_shape
from .kernels import ball_lens_volume
from .special_fn import unit_ball_volume

logger = logging.getLogger(__name__)


@register_shape
class RadialDensity(Shape):
    kind = "radial_density"

    def __init__(self, N: int, breakpoints, values):
        super().__init__(N)
        r = np.asarray(breakpoints, dtype=float)
        v = np.asarray(values, dtype=float)
        if r.ndim != 1 or r.size == 0:
            raise DomainError("breakpoints must be a non-empty 1D sequence")
        if np.any(r <= 0.0) or np.any(np.diff(r) <= 0.0):
            raise DomainError("breakpoints must be positive and strictly increasing")
        if v.shape != r.shape:
            raise DomainError(f"need one value per interval ({r.size}), got {v.size}")
        if np.any(v < 0.0) or np.any(v > 1.0):
            raise DomainError("density values must lie in [0, 1]")
        self.breakpoints: np.ndarray = r
        self.values: np.ndarray = v

    @property
    def edges(self) -> np.ndarray:
        """Interval ends including the origin."""
        return np.concatenate([[0.0], self.breakpoints])

    def intervals(self):
        """Yield (a, b, value) for every interval with nonzero value."""
        e = self.edges
        for a, b, v in zip(e[:-1], e[1:], self.values):
            if v != 0.0:
                yield float(a), float(b), float(v)

    @property
    def outer_radius(self) -> float:
        nz = np.nonzero(self.values)[0]
        return float(self.breakpoints[nz[-1]]) if nz.size else 0.0

    def value_at(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        idx = np.searchsorted(self.breakpoints, r, side="left")
        padded = np.concatenate([self.values, [0.0]])
        return padded[idx]

    def volume(self) -> float:
        """Mass omega_N sum v_i (b_i^N - a_i^N)."""
        e = self.edges**self.N
        return unit_ball_volume(self.N) * float(np.dot(self.values, np.diff(e)))

    def barycenter(self) -> np.ndarray:
        return np.zeros(self.N)

    def equal_volume_radius(self) -> float:
        return (self.volume() / unit_ball_volume(self.N)) ** (1.0 / self.N)

    def rescale(self, lam: float):
        return type(self)._rebuild(self.N, lam * self.breakpoints, self.values)

    def translate(self, v):
        raise DomainError("radial densities are centred at the origin; translate a BallCluster instead")

    @classmethod
    def _rebuild(cls, N, breakpoints, values):
        return cls(N, breakpoints, values)

    def l1_distance_to_ball(self, radius: float = 1.0) -> float:
        """Integral of |f - chi_(B_radius)| computed exactly from the breakpoints."""
        cuts = np.union1d(self.edges, [radius])
        mids = 0.5 * (cuts[:-1] + cuts[1:])
        f = self.value_at(mids)
        g = (mids < radius).astype(float)
        return unit_ball_volume(self.N) * float(np.dot(np.abs(f - g), np.diff(cuts**self.N)))

    def intersection_with_unit_ball(self, x) -> float:
        """Integral of f over B(x) from exact lens volumes of concentric balls."""
        d = float(np.linalg.norm(np.asarray(x, dtype=float)))
        total = 0.0
        for a, b, v in self.intervals():
            inner = ball_lens_volume(a, 1.0, d, self.N) if a > 0.0 else 0.0
            total += v * (ball_lens_volume(b, 1.0, d, self.N) - inner)
        return total

    def candidate_centers(self) -> list[np.ndarray]:
        return [np.zeros(self.N)]

    def boundary_jumps(self) -> np.ndarray:
        """Drop v_i - v_(i+1) of the density across each breakpoint r_i."""
        return self.values - np.concatenate([self.values[1:], [0.0]])

    def is_ball_indicator(self, tol: float = 1e-12) -> bool:
        """True when the density is chi of a centred ball."""
        nz = self.values > tol
        if not np.any(nz):
            return False
        last = np.nonzero(nz)[0][-1]
        return bool(np.all(np.abs(self.values[: last + 1] - 1.0) <= tol))

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "N": self.N,
            "breakpoints": self.breakpoints.tolist(),
            "values": self.values.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict):
        return cls(data["N"], data["breakpoints"], data["values"])

    def to_filename(self) -> str:
        return f"{self.kind}_N{self.N}_m{self.breakpoints.size}"

    @classmethod
    def random(
        cls, N: int, rng: np.random.Generator, n_intervals: int = 6, r_max: float = 2.0
    ) -> "RadialDensity":
        """Random [0,1]-valued density on n_intervals shells inside B_(r_max)."""
        r = np.cumsum(rng.uniform(0.05, 1.0, size=n_intervals))
        r *= r_max / r[-1]
        v = rng.uniform(0.0, 1.0, size=n_intervals)
        return cls(N, r, v)


@register_shape
class RadialProfile(RadialDensity):
    """
    Finite union of centred annuli (and possibly a central ball).

    Args:
        N: Ambient dimension
        breakpoints: Strictly increasing radii r_0 < ... < r_m
        flags: Membership of [0, r_0], [r_0, r_1], ...; an optional trailing
            False for [r_m, inf) is accepted. Adjacent equal flags are merged.
    """

    kind = "radial_profile"

    def __init__(self, N: int, breakpoints, flags):
        r = np.asarray(breakpoints, dtype=float)
        f = [bool(x) for x in flags]
        if len(f) == r.size + 1:
            if f[-1]:
                raise DomainError("the unbounded last interval must be flagged outside")
            f = f[:-1]
        if len(f) != r.size:
            raise DomainError(f"need {r.size} flags (or {r.size + 1} with a trailing False)")
        # merge repeated flags so membership alternates
        keep_r = []
        keep_f = []
        for i, (ri, fi) in enumerate(zip(r, f)):
            if i + 1 < len(f) and f[i + 1] == fi:
                continue
            keep_r.append(ri)
            keep_f.append(fi)
        while keep_f and not keep_f[-1]:
            keep_f.pop()
            keep_r.pop()
        if not keep_f:
            raise DomainError("profile has zero volume")
        super().__init__(N, keep_r, np.asarray(keep_f, dtype=float))

    @property
    def flags(self) -> list[bool]:
        return [bool(v) for v in self.values]

    @classmethod
    def _rebuild(cls, N, breakpoints, values):
        return cls(N, breakpoints, [bool(v) for v in values])

    @classmethod
    def ball(cls, N: int, radius: float = 1.0) -> "RadialProfile":
        return cls(N, [radius], [True])

    @classmethod
    def random(
        cls, N: int, rng: np.random.Generator, n_intervals: int = 5, r_max: float = 2.0
    ) -> "RadialProfile":
        """Random union of annuli with alternating membership inside B_(r_max)."""
        r = np.cumsum(rng.uniform(0.05, 1.0, size=n_intervals))
        r *= r_max / r[-1]
        flags = [(n_intervals - 1 - i) % 2 == 0 for i in range(n_intervals)]
        return cls(N, r, flags)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "N": self.N,
            "breakpoints": self.breakpoints.tolist(),
            "flags": self.flags,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RadialProfile":
        return cls(data["N"], data["breakpoints"], data["flags"])

    def to_filename(self) -> str:
        return f"radial_profile_N{self.N}_m{self.breakpoints.size}"


def annulus_family(h: float, N: int) -> RadialProfile:
    """
    Unit ball with the annulus B_1 \\ B_(r1) moved outside to B_(r2) \\ B_1,
    r1 = (1-h)^(1/N), r2 = (1+h)^(1/N). The volume stays omega_N and
    |E_h delta B| = 2 omega_N h.
    """
    if not 0.0 < h < 0.5:
        raise DomainError(f"h must lie in (0, 1/2), got {h}")
    r1 = math.exp(math.log1p(-h) / N)
    r2 = math.exp(math.log1p(h) / N)
    return RadialProfile(N, [r1, 1.0, r2], [True, False, True])
