"""
Eigenvalues of the zonal power kernel K_beta(t) = (1-t)^(beta/2) and of the
difference operator

    I_beta[u](w) = 2 * integral over S^(N-1) of |w - xi|^beta (u(w) - u(xi)) dxi

on the unit sphere. Both operators are diagonal in spherical harmonics; the
degree-k eigenvalues are theta_k (for K_beta) and
lambda_k = 2^(1+beta/2) (theta_0 - theta_k) (for I_beta).

theta_k factors as (-1)^k C_beta mu_k where mu_k obeys the rational recursion
mu_{k+1} = (beta/2 - k) / (beta/2 + N - 1 + k) mu_k. The same recursion is
sometimes written directly for theta_k; that form is missing the alternating
sign, so the recursion is applied to mu only.
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln, gammasgn

from .errors import BoundViolation, DomainError, PreconditionError
from .special_fn import QuadratureRule, kernel_rule, spherical_poly, unit_ball_volume

logger = logging.getLogger(__name__)

DEFAULT_K_MAX = 200
GAP_TOLERANCE = 1e-9


@dataclass(frozen=True)
class SpectralParams:
    """Dimension, kernel exponent and table depth for one spectral table."""

    N: int
    beta: float
    k_max: int = DEFAULT_K_MAX

    def __post_init__(self):
        if self.N < 2:
            raise DomainError(f"N must be >= 2, got {self.N}")
        if not self.beta > 0:
            raise DomainError(f"beta must be > 0, got {self.beta}")
        if self.k_max < 2:
            raise DomainError(f"k_max must be >= 2, got {self.k_max}")


def _log_c_beta(N: int, beta: float) -> float:
    return (
        math.log(N - 1)
        + math.log(unit_ball_volume(N - 1))
        + 0.5 * (beta + 2 * N - 4) * math.log(2.0)
        + gammaln(0.5 * (beta + N - 1))
        + gammaln(0.5 * (N - 1))
        + gammaln(0.5 * beta + 1.0)
    )


def c_beta(N: int, beta: float) -> float:
    """Prefactor C_beta with theta_k = (-1)^k C_beta mu_k."""
    return math.exp(_log_c_beta(N, beta))


def _is_nonpositive_integer(x: float) -> bool:
    return x <= 0 and float(x).is_integer()


def theta_closed(p: SpectralParams, k: int) -> float:
    """
    Degree-k eigenvalue of K_beta from the Gamma-function closed form.

    Evaluated in log-Gamma space. For even beta = 2m the reciprocal
    Gamma(beta/2 + 1 - k) vanishes for k >= m + 1, and theta_k is exactly 0.

    Args:
        p: Spectral parameters
        k: Degree (k >= 0)

    Returns:
        theta_k
    """
    if k < 0:
        raise DomainError(f"degree must be >= 0, got {k}")
    pole_arg = 0.5 * p.beta + 1.0 - k
    if _is_nonpositive_integer(pole_arg):
        return 0.0
    other = 0.5 * p.beta + p.N - 1.0 + k
    log_abs = _log_c_beta(p.N, p.beta) - gammaln(pole_arg) - gammaln(other)
    sign = (-1.0) ** k * gammasgn(pole_arg)
    return float(sign * math.exp(log_abs))


def theta_quadrature(p: SpectralParams, k: int, rule: QuadratureRule) -> float:
    """
    Funk-Hecke integral (N-1) omega_(N-1) int K_beta(t) (1-t^2)^((N-3)/2) P_k(t) dt
    evaluated with the given rule.

    A rule from `kernel_rule` carries the (1-t)^(beta/2) factor in its weight
    and is exact once 2*order-1 >= k; a plain Jacobi rule samples the kernel.
    """
    expected = 0.5 * (p.N - 3)
    if rule.jacobi_exponent != expected:
        raise PreconditionError(
            f"rule built for jacobi exponent {rule.jacobi_exponent}, "
            f"dimension {p.N} needs {expected}"
        )
    t = rule.nodes
    kernel = (1.0 - t) ** (0.5 * p.beta - rule.kernel_exponent)
    integral = rule.integrate(kernel * spherical_poly(k, p.N, t))
    return (p.N - 1) * unit_ball_volume(p.N - 1) * integral


def mu_sequence(p: SpectralParams) -> np.ndarray:
    """
    mu_0 .. mu_kmax with mu_0 = 1 / (Gamma(beta/2+1) Gamma(beta/2+N-1)) and the
    exact rational recursion for the rest.
    """
    half = 0.5 * p.beta
    mu = np.empty(p.k_max + 1)
    mu[0] = math.exp(-gammaln(half + 1.0) - gammaln(half + p.N - 1.0))
    for k in range(p.k_max):
        mu[k + 1] = (half - k) / (half + p.N - 1.0 + k) * mu[k]
    return mu


def lambda_sequence(p: SpectralParams) -> np.ndarray:
    """Eigenvalues lambda_k = 2^(1+beta/2) (theta_0 - theta_k); lambda_0 is exactly 0."""
    mu = mu_sequence(p)
    signs = np.where(np.arange(p.k_max + 1) % 2 == 0, 1.0, -1.0)
    theta = signs * c_beta(p.N, p.beta) * mu
    lam = 2.0 ** (1.0 + 0.5 * p.beta) * (theta[0] - theta)
    lam[0] = 0.0
    return lam


def d_beta(p: SpectralParams) -> float:
    """
    Uniform lower bound D_beta on lambda_1 - lambda_k over k >= 2.

    Three branches: beta in (0, 2), [2, 4] and beyond 4. The branches agree at
    the junctions.
    """
    beta = p.beta
    N = p.N
    mu0 = math.exp(-gammaln(0.5 * beta + 1.0) - gammaln(0.5 * beta + N - 1.0))
    c_tilde = 2.0 ** (1.0 + 0.5 * beta) * c_beta(N, beta)
    base = beta * mu0 * c_tilde / (beta + 2 * N - 2)
    if beta < 2.0:
        factor = 1.0 - (2.0 - beta) / (beta + 2 * N)
    elif beta <= 4.0:
        factor = 1.0
    else:
        factor = 1.0 - (beta - 2.0) * (beta - 4.0) / ((beta + 2 * N) * (beta + 2 * N + 2))
    return base * factor


@dataclass(frozen=True, eq=False)
class SpectralTable:
    """Eigenvalue table and constants for one (N, beta)."""

    params: SpectralParams
    theta: np.ndarray
    mu: np.ndarray
    lam: np.ndarray
    C_beta: float
    C_tilde: float
    D_beta: float
    lambda_inf: float
    omega_N: float
    omega_Nm1: float
    # lambda_k - lambda_inf computed without cancellation
    lambda_deviation: np.ndarray = field(repr=False)

    @classmethod
    def build(cls, p: SpectralParams) -> "SpectralTable":
        mu = mu_sequence(p)
        signs = np.where(np.arange(p.k_max + 1) % 2 == 0, 1.0, -1.0)
        cb = c_beta(p.N, p.beta)
        theta = signs * cb * mu
        scale = 2.0 ** (1.0 + 0.5 * p.beta)
        lam = scale * (theta[0] - theta)
        lam[0] = 0.0
        table = cls(
            params=p,
            theta=theta,
            mu=mu,
            lam=lam,
            C_beta=cb,
            C_tilde=scale * cb,
            D_beta=d_beta(p),
            lambda_inf=scale * cb * mu[0],
            omega_N=unit_ball_volume(p.N),
            omega_Nm1=unit_ball_volume(p.N - 1),
            lambda_deviation=-scale * theta,
        )
        logger.debug(
            "built spectral table N=%d beta=%g k_max=%d lambda_1=%.6g D=%.6g",
            p.N, p.beta, p.k_max, lam[1], table.D_beta,
        )
        return table

    def __len__(self) -> int:
        return len(self.theta)


def build_table(N: int, beta: float, k_max: int = DEFAULT_K_MAX) -> SpectralTable:
    return SpectralTable.build(SpectralParams(N=N, beta=beta, k_max=k_max))


@dataclass(frozen=True)
class GapReport:
    N: int
    beta: float
    min_gap: float
    argmin_k: int
    D_beta: float
    slack: float
    lambda_1_is_max: bool

    @property
    def passed(self) -> bool:
        return self.lambda_1_is_max and self.slack >= -self.tolerance

    @property
    def tolerance(self) -> float:
        return GAP_TOLERANCE


def verify_gap(table: SpectralTable) -> GapReport:
    """
    Check that lambda_1 is the largest eigenvalue and that
    lambda_1 - lambda_k >= D_beta for every 2 <= k <= k_max.

    Raises:
        BoundViolation: naming (N, beta, k) of the worst case
    """
    p = table.params
    if p.k_max < 10:
        raise PreconditionError(f"gap check needs k_max >= 10, got {p.k_max}")
    lam = table.lam
    tol = GAP_TOLERANCE + 1e-12 * abs(lam[1])
    gaps = lam[1] - lam[2:]
    idx = int(np.argmin(gaps))
    min_gap = float(gaps[idx])
    argmin_k = idx + 2
    is_max = bool(np.all(lam <= lam[1] + tol))
    slack = min_gap - table.D_beta
    report = GapReport(
        N=p.N,
        beta=p.beta,
        min_gap=min_gap,
        argmin_k=argmin_k,
        D_beta=table.D_beta,
        slack=slack,
        lambda_1_is_max=is_max,
    )
    if not is_max or slack < -tol:
        worst_k = int(np.argmax(lam)) if not is_max else argmin_k
        raise BoundViolation(
            f"spectral gap violated for N={p.N}, beta={p.beta} at k={worst_k}",
            case={"N": p.N, "beta": p.beta, "k": worst_k, "min_gap": min_gap, "D_beta": table.D_beta},
        )
    return report


@dataclass(frozen=True)
class OscillationReport:
    """
    Sign structure of lambda_k - lambda_inf.

    Attributes:
        k_tilde: ceil(beta/2)
        deviation_signs: sign of lambda_k - lambda_inf for 1 <= k < beta/2 + 1
        alternates: whether (-1)^k (lambda_k - lambda_inf) < 0 on that range
        plateau_start: first k with lambda_k == lambda_inf (even beta), else None
        tail_direction: "increasing", "decreasing" or "constant" beyond k_tilde
        tail_monotone: whether the tail is monotone up to k_max
    """

    k_tilde: int
    deviation_signs: tuple[int, ...]
    alternates: bool
    plateau_start: int | None
    tail_direction: str
    tail_monotone: bool


def oscillation_profile(table: SpectralTable) -> OscillationReport:
    """Describe the alternation of lambda_k around lambda_inf and the monotone tail."""
    p = table.params
    if not p.k_max > 0.5 * p.beta + 2:
        raise PreconditionError(f"k_max={p.k_max} too small for beta={p.beta}")
    dev = table.lambda_deviation
    k_tilde = math.ceil(0.5 * p.beta)
    head = [k for k in range(1, p.k_max + 1) if k < 0.5 * p.beta + 1]
    signs = tuple(int(np.sign(dev[k])) for k in head)
    alternates = all((-1) ** k * dev[k] < 0 for k in head)

    plateau_start = None
    if (0.5 * p.beta).is_integer():
        plateau_start = int(0.5 * p.beta) + 1

    tail = table.lam[k_tilde + 1:]
    steps = np.diff(tail)
    scale = abs(table.lambda_inf)
    flat = np.abs(steps) <= 1e-13 * scale
    if np.all(flat):
        direction = "constant"
        monotone = True
    else:
        # beyond k_tilde the deviations keep the sign -(-1)^k_tilde
        direction = "increasing" if np.sum(steps[~flat]) > 0 else "decreasing"
        if direction == "increasing":
            monotone = bool(np.all(steps >= -1e-13 * scale))
        else:
            monotone = bool(np.all(steps <= 1e-13 * scale))
    return OscillationReport(
        k_tilde=k_tilde,
        deviation_signs=signs,
        alternates=alternates,
        plateau_start=plateau_start,
        tail_direction=direction,
        tail_monotone=monotone,
    )


def marchaud_multipliers(N: int, exponent: float, k_max: int) -> np.ndarray:
    """
    Eigenvalues of u -> 2 int |w - xi|^q (u(w) - u(xi)) dxi for q > -N - 1.

    The closed form is continued analytically through the hypersingular range
    q in (-N-1, 1-N), where it gives the spherical fractional Laplacian
    multipliers. Reciprocal Gamma poles are mapped to exact zeros.

    Args:
        N: Ambient dimension
        exponent: Kernel power q
        k_max: Highest degree

    Returns:
        Array of lambda_0 .. lambda_kmax
    """
    q = exponent
    if not q > -N - 1:
        raise DomainError(f"exponent must exceed -N-1, got {q}")
    if N < 2:
        raise DomainError(f"N must be >= 2, got {N}")
    half = 0.5 * q
    a_arg = 0.5 * (q + N - 1)
    if _is_nonpositive_integer(a_arg):
        raise DomainError(f"exponent {q} hits a pole of the prefactor")
    log_a = (
        math.log(N - 1)
        + math.log(unit_ball_volume(N - 1))
        + 0.5 * (q + 2 * N - 4) * math.log(2.0)
        + gammaln(a_arg)
        + gammaln(0.5 * (N - 1))
    )
    sign_a = gammasgn(a_arg)

    theta = np.zeros(k_max + 1)
    log_prod = 0.0
    sign_prod = 1.0
    prod_zero = False
    for k in range(k_max + 1):
        if k > 0:
            factor = half - (k - 1)
            if factor == 0.0:
                prod_zero = True
            else:
                log_prod += math.log(abs(factor))
                sign_prod *= math.copysign(1.0, factor)
        g_arg = half + N - 1.0 + k
        if prod_zero or _is_nonpositive_integer(g_arg):
            continue
        log_val = log_a + log_prod - gammaln(g_arg)
        theta[k] = (-1.0) ** k * sign_a * sign_prod * gammasgn(g_arg) * math.exp(log_val)
    lam = 2.0 ** (1.0 + half) * (theta[0] - theta)
    lam[0] = 0.0
    return lam


def raabe_ratio(table: SpectralTable, k: int) -> float:
    """k (|theta_k| / |theta_{k+1}| - 1), which tends to beta + N - 1."""
    mu = table.mu
    return k * (abs(mu[k]) / abs(mu[k + 1]) - 1.0)


def default_rule(p: SpectralParams, k: int) -> QuadratureRule:
    """Kernel-absorbing rule exact for degree k."""
    return kernel_rule(max(k // 2 + 2, 4), p.N, p.beta)
