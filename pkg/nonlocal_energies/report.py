import hashlib
import json
import logging
from dataclasses import asdict, dataclass

from .csv_output import ReferenceRecord, reference_records
from .errors import BoundViolation, ConvergenceError, DomainError
from .geometry import Shape
from .kernels import ball_fractional_perimeter, ball_power_energy
from .perimeter import p_s, p_s_with_estimate
from .radial_profile import RadialDensity
from .shape_energy import (
    deficit_beta,
    energy_error_estimate,
    g_beta,
    g_beta_ball,
    g_beta_truncated,
    v_alpha,
)
from .special_fn import unit_ball_volume

logger = logging.getLogger(__name__)

KERNEL_KINDS = ("attractive", "riesz", "frac_perimeter", "truncated_attractive")
BALL_REFERENCE_RTOL = 1e-8


@dataclass(frozen=True)
class KernelSpec:
    """
    One of the interaction kernels.

    Args:
        kind: attractive (|z|^beta), riesz (|z|^(alpha-N)), frac_perimeter
            (|z|^(-N-s) over E x E^c) or truncated_attractive
        exponent: beta, alpha or s depending on the kind
        truncation: Level M of the truncated kernel
        dimension: Ambient dimension N, required for the riesz kind
    """

    kind: str
    exponent: float
    truncation: float | None = None
    dimension: int | None = None

    def __post_init__(self):
        if self.kind not in KERNEL_KINDS:
            raise DomainError(f"unknown kernel kind {self.kind!r}, expected one of {KERNEL_KINDS}")
        e = self.exponent
        if self.kind in ("attractive", "truncated_attractive") and not e > 0:
            raise DomainError(f"attractive exponent must be > 0, got {e}")
        if self.kind == "frac_perimeter" and not 0.0 < e <= 1.0:
            raise DomainError(f"perimeter exponent s must lie in (0, 1], got {e}")
        if self.kind == "riesz":
            if self.dimension is None:
                raise DomainError("riesz kernel needs the dimension N")
            if not 0.0 < e < self.dimension:
                raise DomainError(f"riesz exponent must lie in (0, N={self.dimension}), got {e}")
        if self.kind == "truncated_attractive" and not (self.truncation or 0.0) > 0:
            raise DomainError(f"truncated kernel needs M > 0, got {self.truncation}")

    def power(self, N: int) -> float:
        """Exponent of |x - y| in the kernel."""
        if self.dimension is not None and N != self.dimension:
            raise DomainError(f"kernel built for N={self.dimension}, asked for N={N}")
        if self.kind == "riesz":
            return self.exponent - N
        if self.kind == "frac_perimeter":
            return -N - self.exponent
        return self.exponent

    def evaluate(self, shape: Shape) -> float:
        if self.dimension is not None and shape.N != self.dimension:
            raise DomainError(f"kernel built for N={self.dimension}, shape has N={shape.N}")
        if self.kind == "attractive":
            return g_beta(shape, self.exponent)
        if self.kind == "riesz":
            return v_alpha(shape, self.exponent)
        if self.kind == "frac_perimeter":
            return p_s(shape, self.exponent)
        return g_beta_truncated(shape, self.exponent, self.truncation)


@dataclass
class EnergyReport:
    """Energies of one shape with the deficit and a quadrature error estimate."""

    shape_kind: str
    N: int
    volume: float
    beta: float
    g_beta: float
    deficit_beta: float
    quadrature_error_estimate: float
    alpha: float | None = None
    v_alpha: float | None = None
    s: float | None = None
    p_s: float | None = None
    fingerprint: str = ""

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def fingerprint(shape: Shape, config: dict) -> str:
    """Stable digest of the shape description and the evaluation settings."""
    payload = json.dumps({"shape": shape.to_dict(), "config": config}, sort_keys=True)
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


def _check_converged(quantity: str, value: float, estimate: float, tolerance: float | None, order) -> None:
    if tolerance is None or estimate <= tolerance * abs(value):
        return
    raise ConvergenceError(
        f"{quantity}: successive quadrature orders differ by {estimate:.3g}, "
        f"above {tolerance:g} of |{quantity}| = {abs(value):.6g}",
        diagnostics={"quantity": quantity, "value": value, "estimate": estimate, "tolerance": tolerance, "order": order},
    )


def evaluate(
    shape: Shape,
    beta: float,
    alpha: float | None = None,
    s: float | None = None,
    order: int | None = None,
    tolerance: float | None = None,
) -> EnergyReport:
    """
    Full energy report: G_beta, the deficit, and optionally V_alpha and P_s.

    Args:
        order: Base quadrature order for nearly spherical and radial shapes
        tolerance: Relative bound on the gap between two successive orders;
            ConvergenceError is raised when any evaluated energy exceeds it
    """
    g = g_beta(shape, beta, order)
    deficit = deficit_beta(shape, beta)
    err = energy_error_estimate(shape, beta, order)
    _check_converged("G_beta", g, err, tolerance, order)
    report = EnergyReport(
        shape_kind=shape.kind,
        N=shape.N,
        volume=shape.volume(),
        beta=beta,
        g_beta=g,
        deficit_beta=deficit,
        quadrature_error_estimate=err,
    )
    if alpha is not None:
        report.alpha = alpha
        report.v_alpha = v_alpha(shape, alpha, order)
        v_err = energy_error_estimate(shape, alpha - shape.N, order)
        _check_converged("V_alpha", report.v_alpha, v_err, tolerance, order)
        report.quadrature_error_estimate += v_err
    if s is not None:
        report.s = s
        report.p_s, p_err = p_s_with_estimate(shape, s)
        _check_converged("P_s", report.p_s, p_err, tolerance, order)
        report.quadrature_error_estimate += p_err
    report.fingerprint = fingerprint(shape, {"beta": beta, "alpha": alpha, "s": s, "order": order})
    logger.info(
        "%s: G=%.10g D=%.6g (est %.2g)", shape.kind, g, deficit, report.quadrature_error_estimate
    )
    return report


def ball_reference_check(
    report: EnergyReport,
    shape: Shape,
    records: list[ReferenceRecord] | None = None,
    rtol: float = BALL_REFERENCE_RTOL,
) -> list[ReferenceRecord]:
    """
    Compare a report on the unit ball with the closed-form reference records
    whose settings match it; other shapes return no matches.

    Raises:
        BoundViolation: A matched record disagrees beyond rtol
    """
    if not (
        isinstance(shape, RadialDensity)
        and shape.is_ball_indicator()
        and abs(shape.outer_radius - 1.0) <= 1e-12
    ):
        return []
    N = report.N
    computed = {("g_beta_ball", f"N={N};beta={report.beta:g}"): report.g_beta}
    if report.alpha is not None:
        computed[("v_alpha_ball", f"N={N};alpha={report.alpha:g}")] = report.v_alpha
    if report.s is not None:
        computed[("p_s_ball", f"N={N};s={report.s:g}")] = report.p_s
    matched = []
    for record in reference_records() if records is None else records:
        value = computed.get((record.quantity, record.params))
        if record.oracle != "closed_form" or value is None:
            continue
        logger.info("reference %s %s: %.17g vs %.17g", record.quantity, record.params, value, record.value)
        if abs(value - record.value) > rtol * abs(record.value):
            raise BoundViolation(
                f"{record.quantity} {record.params} = {value:.12g} disagrees with reference {record.value:.12g}",
                case={"quantity": record.quantity, "params": record.params, "value": value, "reference": record.value},
            )
        matched.append(record)
    return matched


def epsilon_of_m(m: float, N: int, beta: float, s: float) -> float:
    """Perimeter weight (m/omega_N)^(1 + (beta+s)/N)."""
    if not m > 0:
        raise DomainError(f"mass must be > 0, got {m}")
    return (m / unit_ball_volume(N)) ** (1.0 + (beta + s) / N)


def mixed_energy(shape: Shape, beta: float, alpha: float, s: float, epsilon: float) -> float:
    """G_beta + V_alpha + epsilon P_s; the perimeter is skipped when epsilon = 0."""
    total = g_beta(shape, beta) + v_alpha(shape, alpha)
    if epsilon != 0.0:
        total += epsilon * p_s(shape, s)
    return total


def mixed_energy_ball(m: float, N: int, beta: float, alpha: float, s: float, epsilon: float) -> float:
    """Scaling form of the mixed energy of the ball of volume m."""
    ratio = m / unit_ball_volume(N)
    return (
        ratio ** (2.0 + beta / N) * g_beta_ball(N, beta)
        + ratio ** (1.0 + alpha / N) * ball_power_energy(N, alpha - N)
        + epsilon * ratio ** (1.0 - s / N) * ball_fractional_perimeter(N, s)
    )
