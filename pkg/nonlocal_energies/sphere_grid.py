"""
Quadrature grids on S^1 and S^2 together with real orthonormal spherical
harmonics sampled on them.
"""

import logging
import math

import numpy as np
from scipy.special import gammaln, lpmv

from .errors import DomainError, PreconditionError
from .special_fn import gauss_legendre, sphere_area, spherical_poly

logger = logging.getLogger(__name__)

# largest sample jump between neighbouring nodes accepted as Lipschitz data
LIPSCHITZ_JUMP_MAX = 0.25


class SphereGrid:
    """
    Product quadrature on the unit sphere of R^N for N in {2, 3}.

    N = 2 uses `resolution` equispaced angles (trapezoid rule). N = 3 uses
    Gauss-Legendre nodes in cos(polar angle) times `n_phi` equispaced azimuths.
    Band-limited functions of degree <= max_degree are integrated exactly,
    including products of two of them.
    """

    def __init__(self, N: int, resolution: int, n_phi: int | None = None):
        if N not in (2, 3):
            raise DomainError(f"sphere grids support N in {{2, 3}}, got {N}")
        if resolution < 3:
            raise DomainError(f"resolution must be >= 3, got {resolution}")
        self.N: int = N
        self.resolution: int = resolution

        if N == 2:
            self.n_phi: int = resolution
            self.phi: np.ndarray = 2.0 * math.pi * np.arange(resolution) / resolution
            self.cos_theta: np.ndarray | None = None
            self.nodes: np.ndarray = np.column_stack([np.cos(self.phi), np.sin(self.phi)])
            self.weights: np.ndarray = np.full(resolution, 2.0 * math.pi / resolution)
            self.max_degree: int = (resolution - 1) // 2
        else:
            self.n_phi = n_phi if n_phi is not None else 2 * resolution
            x, w = gauss_legendre(resolution, -1.0, 1.0)
            azimuth = 2.0 * math.pi * np.arange(self.n_phi) / self.n_phi
            ct, az = np.meshgrid(x, azimuth, indexing="ij")
            st = np.sqrt(1.0 - ct**2)
            self.cos_theta = ct.ravel()
            self.phi = az.ravel()
            self.nodes = np.column_stack(
                [st.ravel() * np.cos(self.phi), st.ravel() * np.sin(self.phi), self.cos_theta]
            )
            self.weights = np.outer(w, np.full(self.n_phi, 2.0 * math.pi / self.n_phi)).ravel()
            self.max_degree = min(resolution - 1, (self.n_phi - 1) // 2)

        self._harmonic_cache: dict[int, np.ndarray] = {}

    def __len__(self) -> int:
        return len(self.weights)

    def __repr__(self) -> str:
        return f"SphereGrid(N={self.N}, size={len(self)}, max_degree={self.max_degree})"

    @property
    def surface_area(self) -> float:
        return sphere_area(self.N)

    def to_dict(self) -> dict:
        data = {"N": self.N, "resolution": self.resolution}
        if self.N == 3:
            data["n_phi"] = self.n_phi
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "SphereGrid":
        return cls(data["N"], data["resolution"], data.get("n_phi"))

    def same_layout(self, other: "SphereGrid") -> bool:
        return self.to_dict() == other.to_dict()

    def integrate(self, values) -> float:
        """Quadrature of samples taken at the grid nodes."""
        return float(np.dot(self.weights, values))

    def l2_norm_sq(self, u) -> float:
        return self.integrate(np.asarray(u) ** 2)

    def harmonics(self, k: int) -> np.ndarray:
        """
        Real orthonormal spherical harmonics of degree k at the nodes.

        Returns:
            Array of shape (dim_k, len(grid))
        """
        if k < 0:
            raise DomainError(f"degree must be >= 0, got {k}")
        if k > self.max_degree:
            raise PreconditionError(
                f"degree {k} exceeds grid resolution (max_degree={self.max_degree})"
            )
        if k not in self._harmonic_cache:
            self._harmonic_cache[k] = self._build_harmonics(k)
        return self._harmonic_cache[k]

    def _build_harmonics(self, k: int) -> np.ndarray:
        if self.N == 2:
            if k == 0:
                return np.full((1, len(self)), 1.0 / math.sqrt(2.0 * math.pi))
            c = 1.0 / math.sqrt(math.pi)
            return np.vstack([c * np.cos(k * self.phi), c * np.sin(k * self.phi)])

        rows = [self._legendre_norm(k, 0) * lpmv(0, k, self.cos_theta)]
        for m in range(1, k + 1):
            base = math.sqrt(2.0) * self._legendre_norm(k, m) * lpmv(m, k, self.cos_theta)
            rows.append(base * np.cos(m * self.phi))
            rows.append(base * np.sin(m * self.phi))
        return np.vstack(rows)

    @staticmethod
    def _legendre_norm(k: int, m: int) -> float:
        log_ratio = gammaln(k - m + 1) - gammaln(k + m + 1)
        return math.sqrt((2 * k + 1) / (4.0 * math.pi) * math.exp(log_ratio))

    def project(self, u, k: int) -> np.ndarray:
        """Coefficients of u against the degree-k harmonics."""
        return self.harmonics(k) @ (self.weights * np.asarray(u, dtype=float))

    def synthesize(self, coefficients: list[np.ndarray]) -> np.ndarray:
        """Inverse of project: sum over degrees of coefficients times harmonics."""
        out = np.zeros(len(self))
        for k, a in enumerate(coefficients):
            if a is None or len(a) == 0:
                continue
            out += np.asarray(a) @ self.harmonics(k)
        return out

    def zonal(self, k: int, axis=None) -> np.ndarray:
        """Samples of the spherical polynomial P_k(z . axis), axis defaults to e_1."""
        if axis is None:
            axis = np.eye(self.N)[0]
        return spherical_poly(k, self.N, self.nodes @ np.asarray(axis, dtype=float))

    def tangential_gradient_sq(self, u) -> np.ndarray:
        """
        |grad_tau u|^2 at the nodes for u band-limited to max_degree.

        N = 2 differentiates the trigonometric interpolant; N = 3 differentiates
        the harmonic expansion term by term.
        """
        u = np.asarray(u, dtype=float)
        if self.N == 2:
            return self.angular_derivative(u) ** 2

        d_theta = np.zeros(len(self))
        d_phi = np.zeros(len(self))
        ct = self.cos_theta
        st = np.sqrt(1.0 - ct**2)
        for k in range(1, self.max_degree + 1):
            a = self.project(u, k)
            # (x^2-1) dP_k^m/dx = k x P_k^m - (k+m) P_{k-1}^m, and d/dtheta = -sin(theta) d/dx
            for m in range(0, k + 1):
                norm = self._legendre_norm(k, m)
                p_km = lpmv(m, k, ct)
                p_prev = lpmv(m, k - 1, ct) if m <= k - 1 else np.zeros_like(ct)
                dp_dtheta = norm * (k * ct * p_km - (k + m) * p_prev) / st
                if m == 0:
                    d_theta += a[0] * dp_dtheta
                    continue
                c_coef = a[2 * m - 1]
                s_coef = a[2 * m]
                scale = math.sqrt(2.0)
                cos_m = np.cos(m * self.phi)
                sin_m = np.sin(m * self.phi)
                d_theta += scale * dp_dtheta * (c_coef * cos_m + s_coef * sin_m)
                d_phi += scale * norm * p_km * m * (-c_coef * sin_m + s_coef * cos_m)
        return d_theta**2 + (d_phi / st) ** 2

    def angular_derivative(self, u) -> np.ndarray:
        """du/dphi on S^1 by differentiating the trigonometric interpolant."""
        if self.N != 2:
            raise PreconditionError("angular_derivative is defined on S^1 only")
        u = np.asarray(u, dtype=float)
        M = len(u)
        freqs = np.fft.fftfreq(M, d=1.0 / M)
        if M % 2 == 0:
            freqs[M // 2] = 0.0
        return np.real(np.fft.ifft(1j * freqs * np.fft.fft(u)))

    def max_neighbor_jump(self, u) -> float:
        """Largest difference of u between adjacent nodes."""
        u = np.asarray(u, dtype=float)
        if self.N == 2:
            return float(np.max(np.abs(u - np.roll(u, 1))))
        field = u.reshape(self.resolution, self.n_phi)
        along_phi = np.abs(field - np.roll(field, 1, axis=1))
        along_theta = np.abs(np.diff(field, axis=0))
        return float(max(along_phi.max(), along_theta.max() if along_theta.size else 0.0))

    def check_lipschitz(self, u) -> None:
        jump = self.max_neighbor_jump(u)
        if jump > LIPSCHITZ_JUMP_MAX:
            raise PreconditionError(
                f"samples are not Lipschitz on this grid (max neighbour jump {jump:.3g})"
            )

    def random_band_limited(
        self, rng: np.random.Generator, k_min: int, k_max: int, sup_norm: float = 0.5
    ) -> np.ndarray:
        """
        Random field with Gaussian coefficients in degrees k_min..k_max,
        scaled to the given sup norm on the grid.
        """
        if k_max > self.max_degree:
            raise PreconditionError(
                f"k_max={k_max} exceeds grid resolution (max_degree={self.max_degree})"
            )
        coefficients = []
        for k in range(k_max + 1):
            dim = self.harmonics(k).shape[0]
            if k < k_min:
                coefficients.append(np.zeros(dim))
            else:
                coefficients.append(rng.standard_normal(dim) / (1.0 + k))
        u = self.synthesize(coefficients)
        peak = np.max(np.abs(u))
        if peak == 0.0:
            return u
        return u * (sup_norm / peak)
