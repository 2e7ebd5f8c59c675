"""
Power-kernel energies of radial densities.

For radial f, g the pair energy

    G_q(f, g) = int int f(x) g(y) |x - y|^q dx dy

reduces to |S|^2 sum_ij f_i g_j int_Ii int_Ij r^(N-1) rho^(N-1) m_q(r, rho),
with m_q the spherical mean of the kernel. m_q(r, rho) behaves like
|r - rho|^(q+N-1) near the diagonal, so every double integral is written in
terms of "square" integrals over [a, b]^2, which are split along the diagonal
and graded toward it.
"""

import logging
import math
from functools import lru_cache

import numpy as np
from scipy.special import betaln

from .errors import DomainError
from .kernels import sphere_power_mean
from .radial_profile import RadialDensity
from .special_fn import gauss_legendre, graded_rule, sphere_area, unit_ball_volume

logger = logging.getLogger(__name__)

DEFAULT_ORDER = 10
# separation (relative to interval length) beyond which a plain tensor rule is used
_SEPARATED = 0.5
_ANGLE_ORDER = 24
_TRUNCATION_PIECES = 8


def _levels(gamma: float) -> int:
    return 30 if gamma <= 0.0 else 16


def _singular(gamma: float) -> float | None:
    return gamma if -1.0 < gamma < 0.0 else None


@lru_cache(maxsize=64)
def _unit_rule(levels: int, order: int, toward: str, gamma: float | None):
    x, w = graded_rule(0.0, 1.0, toward, levels, order, gamma)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@lru_cache(maxsize=65536)
def square_integral(a: float, b: float, q: float, N: int, order: int = DEFAULT_ORDER) -> float:
    """
    int_a^b int_a^b r^(N-1) rho^(N-1) m_q(r, rho) drho dr, without the |S|^2 factor.

    Evaluated as twice the lower triangle: the inner rho-integral runs over
    [a, r] graded toward the diagonal, the outer r-integral is graded toward a.
    """
    if b <= a:
        return 0.0
    gamma = q + N - 1.0
    levels = _levels(gamma)
    r, wr = graded_rule(a, b, "lo", levels, order)
    x, w = _unit_rule(levels, order, "hi", _singular(gamma))
    span = (r - a)[:, None]
    rho = a + span * x[None, :]
    vals = rho ** (N - 1) * sphere_power_mean(r[:, None], rho, q, N)
    inner = np.sum(span * w[None, :] * vals, axis=1)
    return 2.0 * float(np.dot(wr, r ** (N - 1) * inner))


def _separated_integral(a, b, c, d, q, N, order):
    x1, w1 = gauss_legendre(order, a, b)
    x2, w2 = gauss_legendre(order, c, d)
    vals = sphere_power_mean(x1[:, None], x2[None, :], q, N)
    return float(w1 * x1 ** (N - 1) @ vals @ (w2 * x2 ** (N - 1)))


def interval_pair_integral(
    a: float, b: float, c: float, d: float, q: float, N: int, order: int = DEFAULT_ORDER
) -> float:
    """
    int_a^b int_c^d r^(N-1) rho^(N-1) m_q(r, rho) for intervals that are equal
    or have disjoint interiors.
    """
    if (a, b) == (c, d):
        return square_integral(a, b, q, N, order)
    if c < a:
        a, b, c, d = c, d, a, b
    if b > c:
        raise DomainError(f"intervals [{a}, {b}] and [{c}, {d}] overlap")
    if c - b > _SEPARATED * max(b - a, d - c):
        return _separated_integral(a, b, c, d, q, N, 2 * order)
    # [a,b] x [c,d] by inclusion-exclusion of squares on the common hull
    return 0.5 * (
        square_integral(a, d, q, N, order)
        - square_integral(a, c, q, N, order)
        - square_integral(b, d, q, N, order)
        + square_integral(b, c, q, N, order)
    )


def _pieces(f: RadialDensity) -> tuple[np.ndarray, np.ndarray]:
    return f.edges, f.values


def _common_refinement(edges_f, values_f, edges_g, values_g):
    cuts = np.union1d(edges_f, edges_g)
    mids = 0.5 * (cuts[:-1] + cuts[1:])
    fv = _values_at(edges_f, values_f, mids)
    gv = _values_at(edges_g, values_g, mids)
    return cuts, fv, gv


def _values_at(edges, values, r):
    idx = np.searchsorted(edges[1:], r, side="left")
    padded = np.concatenate([values, [0.0]])
    return padded[idx]


def _pair_from_pieces(edges_f, values_f, edges_g, values_g, q, N, order):
    cuts, fv, gv = _common_refinement(edges_f, values_f, edges_g, values_g)
    n = len(fv)
    total = 0.0
    # i <= j with symmetric coefficients so that the result is symmetric in (f, g)
    for i in range(n):
        for j in range(i, n):
            coef = fv[i] * gv[i] if i == j else fv[i] * gv[j] + fv[j] * gv[i]
            if coef == 0.0:
                continue
            total += coef * interval_pair_integral(
                float(cuts[i]), float(cuts[i + 1]), float(cuts[j]), float(cuts[j + 1]), q, N, order
            )
    return sphere_area(N) ** 2 * total


def pair_energy(f: RadialDensity, g: RadialDensity, q: float, order: int = DEFAULT_ORDER) -> float:
    """G_q(f, g) for two radial densities in the same dimension."""
    if f.N != g.N:
        raise DomainError(f"dimension mismatch {f.N} vs {g.N}")
    if not q > -f.N:
        raise DomainError(f"pair energy diverges for q <= -N (q={q})")
    return _pair_from_pieces(*_pieces(f), *_pieces(g), q, f.N, order)


def g_beta_pair(f: RadialDensity, g: RadialDensity, beta: float) -> float:
    if not beta > 0:
        raise DomainError(f"beta must be > 0, got {beta}")
    return pair_energy(f, g, beta)


def g_beta_radial(f: RadialDensity, beta: float) -> float:
    """Attractive energy G_beta(f) of a radial density."""
    return g_beta_pair(f, f, beta)


def v_alpha_radial(f: RadialDensity, alpha: float) -> float:
    """Riesz potential V_alpha(f) = G_(alpha-N)(f) for 0 < alpha < N."""
    if not 0.0 < alpha < f.N:
        raise DomainError(f"alpha must lie in (0, N), got {alpha}")
    return pair_energy(f, f, alpha - f.N)


def energy_with_estimate(f: RadialDensity, q: float, order: int = DEFAULT_ORDER) -> tuple[float, float]:
    """Pair energy at the given order and an error estimate from a coarser order."""
    fine = pair_energy(f, f, q, order)
    coarse = pair_energy(f, f, q, max(1, order - 4))
    return fine, abs(fine - coarse)


def line_integral(a: float, b: float, t: float, q: float, N: int, order: int = DEFAULT_ORDER) -> float:
    """int_a^b r^(N-1) m_q(r, t) dr, split at r = t and graded toward it."""
    if b <= a:
        return 0.0
    if a < t < b:
        return line_integral(a, t, t, q, N, order) + line_integral(t, b, t, q, N, order)
    gamma = q + N - 1.0
    toward = "hi" if b <= t else "lo"
    touching = (b == t) or (a == t)
    r, w = graded_rule(a, b, toward, _levels(gamma), order, _singular(gamma) if touching else None)
    return float(np.dot(w, r ** (N - 1) * sphere_power_mean(r, t, q, N)))


def potential(f: RadialDensity, t, q: float) -> np.ndarray | float:
    """
    Potential int f(z) |z - y|^q dz at |y| = t (scalar or array).

    For radial f this is also the average over the sphere |y| = t.
    """
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    area = sphere_area(f.N)
    out = np.empty(t_arr.shape)
    for idx, tv in enumerate(t_arr):
        out[idx] = area * sum(v * line_integral(a, b, float(tv), q, f.N) for a, b, v in f.intervals())
    return float(out[0]) if np.ndim(t) == 0 else out


def zeta_f(f: RadialDensity, rho, beta: float):
    """Average over the sphere of radius rho of the attractive potential of f."""
    return potential(f, rho, beta)


def psi(t, N: int, beta: float):
    """psi(t) = int_B |y - t e_1|^beta dy over the unit ball."""
    return potential(_unit_ball(N), t, beta)


def psi_prime(t, N: int, beta: float):
    """
    Derivative of psi:
    |S| int_0^1 r^(N-1) beta/(2t) [M_beta + (t^2 - r^2) M_(beta-2)] dr,
    with psi'(0) = 0.
    """
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    area = sphere_area(N)
    out = np.zeros(t_arr.shape)
    gamma = beta + N - 2.0
    for idx, tv in enumerate(t_arr):
        if tv == 0.0:
            continue
        total = 0.0
        for a, b in ((0.0, min(tv, 1.0)), (min(tv, 1.0), 1.0)):
            if b <= a:
                continue
            toward = "hi" if b <= tv else "lo"
            r, w = graded_rule(a, b, toward, _levels(gamma), DEFAULT_ORDER, _singular(gamma))
            m_b = sphere_power_mean(r, tv, beta, N)
            m_b2 = sphere_power_mean(r, tv, beta - 2.0, N)
            total += float(np.dot(w, r ** (N - 1) * (m_b + (tv**2 - r**2) * m_b2)))
        out[idx] = area * beta / (2.0 * tv) * total
    return float(out[0]) if np.ndim(t) == 0 else out


@lru_cache(maxsize=8)
def _unit_ball(N: int) -> RadialDensity:
    return RadialDensity(N, [1.0], [1.0])


def ball_potential(r, radius: float, N: int, q: float):
    """Potential of the ball B_radius at distance r from its center, radius^(N+q) psi_q(r/radius)."""
    return radius ** (N + q) * potential(_unit_ball(N), np.asarray(r) / radius, q)


def radial_moment(f: RadialDensity, beta: float) -> float:
    """int f(y) |y|^beta dy."""
    p = f.N + beta
    return sphere_area(f.N) / p * sum(v * (b**p - a**p) for a, b, v in f.intervals())


def deficit_radial(f: RadialDensity, beta: float, order: int = DEFAULT_ORDER) -> float:
    """
    G_beta(f) - G_beta(B_R) with |B_R| = ||f||_1, through the difference
    density g = f - chi_(B_R):

        D = G(g, g) + 2 G(chi_(B_R), g),

    where the cross term integrates g against the ball potential.
    """
    N = f.N
    R = f.equal_volume_radius()
    ball_edges = np.array([0.0, R])
    cuts, fv, bv = _common_refinement(f.edges, f.values, ball_edges, np.array([1.0]))
    gv = fv - bv
    self_term = _pair_from_pieces(cuts, gv, cuts, gv, beta, N, order)

    cross = 0.0
    for a, b, v in zip(cuts[:-1], cuts[1:], gv):
        if v == 0.0:
            continue
        r, w = gauss_legendre(2 * order, float(a), float(b))
        cross += v * float(np.dot(w, r ** (N - 1) * ball_potential(r, R, N, beta)))
    cross *= sphere_area(N)
    deficit = self_term + 2.0 * cross
    logger.debug("radial deficit beta=%g: self=%.6g cross=%.6g", beta, self_term, cross)
    return deficit


def _truncation_mean(r, rho, beta, L, N):
    """Spherical mean of (|r e - rho xi|^beta - L^beta)_+ in the angle variable."""
    cos_star = np.clip((r**2 + rho**2 - L**2) / (2.0 * r * rho), -1.0, 1.0)
    phi_star = np.arccos(cos_star)
    x, w = gauss_legendre(_ANGLE_ORDER, 0.0, 1.0)
    phi = phi_star[..., None] + (math.pi - phi_star)[..., None] * x
    dist_sq = r[..., None] ** 2 + rho[..., None] ** 2 - 2.0 * r[..., None] * rho[..., None] * np.cos(phi)
    excess = np.maximum(dist_sq, 0.0) ** (0.5 * beta) - L**beta
    integrand = np.maximum(excess, 0.0) * np.sin(phi) ** (N - 2)
    total = (math.pi - phi_star) * np.sum(w * integrand, axis=-1)
    norm = math.exp(betaln(0.5, 0.5 * (N - 1)))
    return total / norm


def _truncation_excess(f: RadialDensity, beta: float, L: float) -> float:
    N = f.N
    pieces = []
    for a, b, v in f.intervals():
        edges = np.linspace(a, b, _TRUNCATION_PIECES + 1)
        xs = []
        ws = []
        for lo, hi in zip(edges[:-1], edges[1:]):
            x, w = gauss_legendre(8, lo, hi)
            xs.append(x)
            ws.append(w)
        pieces.append((np.concatenate(xs), np.concatenate(ws) * v))
    r = np.concatenate([p[0] for p in pieces])
    w = np.concatenate([p[1] for p in pieces])
    if 2.0 * r.max() <= L:
        return 0.0
    rr, pp = np.meshgrid(r, r, indexing="ij")
    active = rr + pp > L
    mean = np.zeros(rr.shape)
    mean[active] = _truncation_mean(rr[active], pp[active], beta, L, N)
    weights = (w * r ** (N - 1))
    return sphere_area(N) ** 2 * float(weights @ mean @ weights)


def g_beta_truncated_radial(f: RadialDensity, beta: float, M: float) -> float:
    """
    G_beta^M(f) with kernel (|x - y| min M^(1/beta))^beta, computed as
    G_beta(f) minus the excess of the kernel over M.
    """
    if not M > 0:
        raise DomainError(f"truncation level must be > 0, got {M}")
    L = M ** (1.0 / beta)
    return g_beta_radial(f, beta) - _truncation_excess(f, beta, L)


def tau(volume: float, N: int, beta: float) -> float:
    """N omega_N^(1-(beta+N)/N) / (beta+N) * volume^((beta+N)/N)."""
    p = (beta + N) / N
    return N * unit_ball_volume(N) ** (1.0 - p) / (beta + N) * volume**p
