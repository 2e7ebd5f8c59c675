"""
Closed forms for power kernels on spheres and balls.

The spherical mean of |a e - b xi|^q over xi in S^(N-1) is the building block
of every radial reduction in the package. It is a Gauss hypergeometric
function of (b/a)^2; in dimension 3 it is elementary.
"""

import logging
import math

import numpy as np
from scipy.special import betainc, betaln, hyp2f1

from .errors import DomainError
from .special_fn import sphere_area, unit_ball_volume

logger = logging.getLogger(__name__)

# below this ratio (lo/hi)^2 the elementary 3D form loses digits to cancellation
_ELEMENTARY_RATIO_MIN = 1.0 / 16.0


def _mean_3d(hi, lo, q):
    s = hi + lo
    d = hi - lo
    if q == -2.0:
        return np.log(s / d) / (2.0 * hi * lo)
    p = q + 2.0
    return (s**p - d**p) / (2.0 * p * hi * lo)


def sphere_power_mean(a, b, q: float, N: int):
    """
    Average of |a e - b xi|^q over xi uniformly distributed on S^(N-1).

    Args:
        a, b: Nonnegative radii (scalars or broadcastable arrays)
        q: Kernel exponent; at a == b the mean is finite only for q > 1 - N
        N: Ambient dimension

    Returns:
        max(a,b)^q 2F1(-q/2, 1-N/2-q/2; N/2; (min/max)^2)
    """
    if N < 2:
        raise DomainError(f"dimension must be >= 2, got {N}")
    a_arr, b_arr = np.broadcast_arrays(np.asarray(a, dtype=float), np.asarray(b, dtype=float))
    hi = np.maximum(a_arr, b_arr)
    lo = np.minimum(a_arr, b_arr)
    out = np.empty(hi.shape)

    zero = lo == 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        out[zero] = hi[zero] ** q
        rest = ~zero
        z = (lo[rest] / hi[rest]) ** 2
        vals = hi[rest] ** q * hyp2f1(-0.5 * q, 1.0 - 0.5 * N - 0.5 * q, 0.5 * N, z)
        if N == 3:
            elementary = z >= _ELEMENTARY_RATIO_MIN
            h = hi[rest][elementary]
            l = lo[rest][elementary]
            vals[elementary] = _mean_3d(h, l, q)
        out[rest] = vals
    if out.ndim == 0:
        return float(out)
    return out


def sphere_power_mean_dot(a, b, q: float, N: int):
    """
    Average of (e . xi) |a e - b xi|^q over the unit sphere.

    Uses 2ab (e . xi) = a^2 + b^2 - |a e - b xi|^2.
    """
    a_arr = np.asarray(a, dtype=float)
    b_arr = np.asarray(b, dtype=float)
    m_q = sphere_power_mean(a_arr, b_arr, q, N)
    m_q2 = sphere_power_mean(a_arr, b_arr, q + 2.0, N)
    out = ((a_arr**2 + b_arr**2) * m_q - m_q2) / (2.0 * a_arr * b_arr)
    if np.ndim(out) == 0:
        return float(out)
    return out


def ball_power_energy(N: int, q: float) -> float:
    """
    Closed form of the double integral of |x-y|^q over the unit ball.

    Valid for q > -N. For q = beta > 0 this is G_beta(B); for q = alpha - N it
    is the Riesz potential V_alpha(B).
    """
    if not q > -N:
        raise DomainError(f"ball energy diverges for q <= -N (q={q}, N={N})")
    log_val = (
        math.log(unit_ball_volume(N - 1))
        + math.log(sphere_area(N))
        + (q + N) * math.log(2.0)
        - math.log(q + N)
        + betaln(0.5 * (q + N + 1.0), 0.5 * (N + 1.0))
    )
    return math.exp(log_val)


def ball_fractional_perimeter(N: int, s: float) -> float:
    """
    Fractional perimeter of the unit ball,
    (1-s)/omega_(N-1) times the integral over B x B^c of |x-y|^(-N-s).

    Tends to the classical perimeter N omega_N as s -> 1.
    """
    if not 0.0 < s <= 1.0:
        raise DomainError(f"s must lie in (0, 1], got {s}")
    if s == 1.0:
        return sphere_area(N)
    log_val = (
        math.log1p(-s)
        - math.log(s)
        + math.log(sphere_area(N))
        - s * math.log(2.0)
        + betaln(0.5 * (1.0 - s), 0.5 * (N + 1.0))
    )
    return math.exp(log_val)


def sphere_ball_overlap(rho, d: float, R: float, N: int):
    """
    Surface measure of the part of a sphere of radius rho, centered at distance d
    from the origin, that lies inside the ball B_R(0).

    Args:
        rho: Sphere radius (scalar or array), rho > 0
        d: Distance of the sphere center from the origin, d > 0
        R: Radius of the ball
        N: Ambient dimension

    Returns:
        H^(N-1)(dB_rho(p) cap B_R), same shape as rho
    """
    rho = np.asarray(rho, dtype=float)
    c0 = np.clip((rho**2 + d**2 - R**2) / (2.0 * rho * d), -1.0, 1.0)
    if N == 2:
        out = 2.0 * rho * np.arccos(c0)
    elif N == 3:
        out = 2.0 * math.pi * rho**2 * (1.0 - c0)
    else:
        full = sphere_area(N) * rho ** (N - 1)
        cap = 0.5 * full * betainc(0.5 * (N - 1), 0.5, 1.0 - c0**2)
        out = np.where(c0 >= 0.0, cap, full - cap)
    if out.ndim == 0:
        return float(out)
    return out


def ball_lens_volume(r1: float, r2: float, d: float, N: int) -> float:
    """
    Volume of the intersection of two balls with radii r1, r2 whose centers
    are d apart. Supported for N in {2, 3}.
    """
    if d >= r1 + r2:
        return 0.0
    if d <= abs(r1 - r2):
        return unit_ball_volume(N) * min(r1, r2) ** N
    if N == 2:
        c1 = np.clip((d * d + r1 * r1 - r2 * r2) / (2.0 * d * r1), -1.0, 1.0)
        c2 = np.clip((d * d + r2 * r2 - r1 * r1) / (2.0 * d * r2), -1.0, 1.0)
        kite = (-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2)
        return float(
            r1 * r1 * np.arccos(c1) + r2 * r2 * np.arccos(c2) - 0.5 * math.sqrt(max(kite, 0.0))
        )
    if N == 3:
        return (
            math.pi
            * (r1 + r2 - d) ** 2
            * (d * d + 2.0 * d * (r1 + r2) - 3.0 * (r1 - r2) ** 2)
            / (12.0 * d)
        )
    raise DomainError(f"lens volume supported for N in {{2, 3}}, got {N}")
