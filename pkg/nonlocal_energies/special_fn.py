"""
Special functions, spherical polynomials and Gauss-Jacobi rules.

Every Gamma value downstream goes through scipy's log-Gamma so that large
arguments never overflow. Jacobi rules are assembled with the Golub-Welsch
method: the nodes are the eigenvalues of the symmetric tridiagonal Jacobi
matrix and the weights come from the first eigenvector components.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import gammaln

from .errors import DomainError


def log_gamma(x: float) -> float:
    """
    Natural logarithm of the Gamma function for positive arguments.

    Args:
        x: Positive real argument

    Returns:
        ln Gamma(x)
    """
    if not x > 0:
        raise DomainError(f"log_gamma requires x > 0, got {x}")
    return float(gammaln(x))


def pochhammer(a: float, j: int) -> float:
    """
    Rising factorial (a)_j = a (a+1) ... (a+j-1) as a literal product.

    The product form stays exact for non-positive integer bases where the
    Gamma ratio has poles.
    """
    if j < 0:
        raise DomainError(f"pochhammer requires j >= 0, got {j}")
    return float(math.prod(a + i for i in range(j)))


def unit_ball_volume(n: int) -> float:
    """Volume of the n-dimensional unit ball, pi^(n/2) / Gamma(n/2 + 1)."""
    if n < 0:
        raise DomainError(f"dimension must be >= 0, got {n}")
    return math.exp(0.5 * n * math.log(math.pi) - gammaln(0.5 * n + 1.0))


def sphere_area(N: int) -> float:
    """Surface measure of S^(N-1) in R^N, which equals N * omega_N."""
    return N * unit_ball_volume(N)


def spherical_poly(k: int, N: int, t):
    """
    Spherical polynomial P_k in dimension N, normalized so P_k(1) = 1.

    Uses the three-term recurrence
    (n+N-2) P_{n+1} = (2n+N-2) t P_n - n P_{n-1},
    which reduces to the Chebyshev recurrence for N = 2.

    Args:
        k: Degree (k >= 0)
        N: Ambient dimension (N >= 2)
        t: Scalar or array with |t| <= 1

    Returns:
        P_k(t), same shape as t
    """
    if k < 0:
        raise DomainError(f"degree must be >= 0, got {k}")
    if N < 2:
        raise DomainError(f"dimension must be >= 2, got {N}")
    t_arr = np.asarray(t, dtype=float)
    p_prev = np.ones_like(t_arr)
    if k == 0:
        return p_prev if t_arr.ndim else float(p_prev)
    p_curr = t_arr.copy()
    for n in range(1, k):
        p_next = ((2 * n + N - 2) * t_arr * p_curr - n * p_prev) / (n + N - 2)
        p_prev, p_curr = p_curr, p_next
    return p_curr if t_arr.ndim else float(p_curr)


@lru_cache(maxsize=256)
def _jacobi_nodes_weights(order: int, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
    """Golub-Welsch rule for the weight (1-t)^a (1+t)^b on [-1, 1]."""
    k = np.arange(order, dtype=float)
    ab = a + b
    diag = np.empty(order)
    diag[0] = (b - a) / (ab + 2.0)
    if order > 1:
        kk = k[1:]
        diag[1:] = (b * b - a * a) / ((2 * kk + ab) * (2 * kk + ab + 2.0))

    off_sq = np.empty(max(order - 1, 0))
    if order > 1:
        off_sq[0] = 4.0 * (a + 1.0) * (b + 1.0) / ((ab + 2.0) ** 2 * (ab + 3.0))
        if order > 2:
            kk = k[2:]
            off_sq[1:] = (
                4.0 * kk * (kk + a) * (kk + b) * (kk + ab)
                / ((2 * kk + ab) ** 2 * (2 * kk + ab + 1.0) * (2 * kk + ab - 1.0))
            )

    mass = math.exp(
        (ab + 1.0) * math.log(2.0) + gammaln(a + 1.0) + gammaln(b + 1.0) - gammaln(ab + 2.0)
    )
    if order == 1:
        nodes = diag.copy()
        weights = np.array([mass])
    else:
        nodes, vectors = eigh_tridiagonal(diag, np.sqrt(off_sq))
        weights = mass * vectors[0, :] ** 2
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def jacobi_moment(a: float, b: float) -> float:
    """Integral of (1-t)^a (1+t)^b over [-1, 1]."""
    return math.exp(
        (a + b + 1.0) * math.log(2.0) + gammaln(a + 1.0) + gammaln(b + 1.0) - gammaln(a + b + 2.0)
    )


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """
    Gauss rule for the sphere weight (1-t^2)^jacobi_exponent on [-1, 1].

    A rule may additionally absorb a kernel factor (1-t)^kernel_exponent, in
    which case it integrates against (1-t)^(jacobi_exponent+kernel_exponent)
    (1+t)^jacobi_exponent.
    """

    nodes: np.ndarray
    weights: np.ndarray
    jacobi_exponent: float
    order: int
    kernel_exponent: float = 0.0

    def __post_init__(self):
        if self.order < 1:
            raise DomainError(f"order must be >= 1, got {self.order}")
        if len(self.nodes) != self.order or len(self.weights) != self.order:
            raise DomainError("nodes and weights must have length equal to order")
        if np.any(np.diff(self.nodes) <= 0):
            raise DomainError("quadrature nodes must be strictly increasing")
        if np.any(np.abs(self.nodes) >= 1.0):
            raise DomainError("quadrature nodes must lie in (-1, 1)")
        if np.any(self.weights <= 0):
            raise DomainError("quadrature weights must be positive")

    def weight_function(self, t):
        """Weight the rule integrates against, evaluated at t."""
        t = np.asarray(t, dtype=float)
        a = self.jacobi_exponent
        return (1.0 - t) ** (a + self.kernel_exponent) * (1.0 + t) ** a

    def total_weight(self) -> float:
        """Exact integral of the weight function."""
        a = self.jacobi_exponent
        return jacobi_moment(a + self.kernel_exponent, a)

    def integrate(self, values) -> float:
        """Apply the rule to samples taken at self.nodes."""
        return float(np.dot(self.weights, values))


def gauss_jacobi_rule(order: int, N: int) -> QuadratureRule:
    """
    Gauss rule exact for polynomials of degree <= 2*order-1 against
    (1-t^2)^((N-3)/2).

    Args:
        order: Number of nodes
        N: Ambient dimension (N >= 2)

    Returns:
        QuadratureRule for the Funk-Hecke weight of S^(N-1)
    """
    if order < 1:
        raise DomainError(f"order must be >= 1, got {order}")
    if N < 2:
        raise DomainError(f"dimension must be >= 2, got {N}")
    a = 0.5 * (N - 3)
    nodes, weights = _jacobi_nodes_weights(order, a, a)
    return QuadratureRule(nodes=nodes, weights=weights, jacobi_exponent=a, order=order)


def kernel_rule(order: int, N: int, beta: float) -> QuadratureRule:
    """
    Gauss rule that absorbs the kernel factor (1-t)^(beta/2) into the weight.

    Integrands of the form (1-t)^(beta/2) P(t) (1-t^2)^((N-3)/2) with P a
    polynomial of degree <= 2*order-1 are then integrated exactly.
    """
    if order < 1:
        raise DomainError(f"order must be >= 1, got {order}")
    a = 0.5 * (N - 3)
    c = 0.5 * beta
    if a + c <= -1.0:
        raise DomainError(f"kernel exponent {c} not integrable against the weight")
    nodes, weights = _jacobi_nodes_weights(order, a + c, a)
    return QuadratureRule(
        nodes=nodes, weights=weights, jacobi_exponent=a, order=order, kernel_exponent=c
    )


def gauss_legendre(order: int, lo: float, hi: float) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights mapped to [lo, hi]."""
    x, w = _jacobi_nodes_weights(order, 0.0, 0.0)
    half = 0.5 * (hi - lo)
    return lo + half * (x + 1.0), half * w


def graded_rule(
    lo: float,
    hi: float,
    toward: str,
    levels: int,
    order: int,
    singular_exponent: float | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """
    Composite rule on [lo, hi] refined geometrically (ratio 2) toward one end.

    The innermost piece uses a Gauss-Jacobi rule for |x - end|^singular_exponent
    when an exponent in (-1, 0) is given; its weights are divided by that
    factor so the rule applies to the full integrand directly.

    Args:
        lo, hi: Interval ends (lo < hi)
        toward: "lo" or "hi", the end carrying the singularity
        levels: Number of halvings
        order: Gauss points per piece
        singular_exponent: Algebraic exponent of the endpoint singularity

    Returns:
        (nodes, weights)
    """
    if not hi > lo:
        raise DomainError(f"graded_rule needs lo < hi, got [{lo}, {hi}]")
    if toward not in ("lo", "hi"):
        raise DomainError(f"toward must be 'lo' or 'hi', got {toward!r}")
    length = hi - lo
    # distances from the singular end, outermost first
    cuts = [length * 0.5**j for j in range(levels + 1)]
    nodes_list = []
    weights_list = []
    for outer, inner in zip(cuts[:-1], cuts[1:]):
        x, w = gauss_legendre(order, inner, outer)
        nodes_list.append(x)
        weights_list.append(w)

    eps = cuts[-1]
    if singular_exponent is not None and -1.0 < singular_exponent < 0.0:
        g = singular_exponent
        x, w = _jacobi_nodes_weights(order, 0.0, g)
        dist = 0.5 * eps * (x + 1.0)
        w_full = (0.5 * eps) ** (g + 1.0) * w / dist**g
        nodes_list.append(dist)
        weights_list.append(w_full)
    else:
        x, w = gauss_legendre(order, 0.0, eps)
        nodes_list.append(x)
        weights_list.append(w)

    dist = np.concatenate(nodes_list)
    weights = np.concatenate(weights_list)
    nodes = lo + dist if toward == "lo" else hi - dist
    order_idx = np.argsort(nodes)
    return nodes[order_idx], weights[order_idx]
