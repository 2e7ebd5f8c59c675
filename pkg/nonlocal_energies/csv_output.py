"""CSV emission with round-trip exact floats and documented headers."""

import io
import logging
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .spectral import SpectralTable

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"


def format_rows(header: list[str], rows, comments: list[str] | None = None) -> str:
    """
    Render rows as CSV text; comment lines start with '#' and document the
    columns, then the header line follows.
    """
    buf = io.StringIO()
    for line in comments or []:
        buf.write(f"# {line}\n")
    data = np.atleast_2d(np.asarray(rows, dtype=float))
    if data.size == 0:
        buf.write(",".join(header) + "\n")
        return buf.getvalue()
    np.savetxt(buf, data, delimiter=",", fmt=FLOAT_FORMAT, header=",".join(header), comments="")
    return buf.getvalue()


def write_rows(path: str | None, header: list[str], rows, comments: list[str] | None = None) -> str:
    """Write to path (creating parent directories), or return the text when path is None."""
    text = format_rows(header, rows, comments)
    if path:
        parent = os.path.dirname(path)
        if parent:
            os.makedirs(parent, exist_ok=True)
        with open(path, "w") as f:
            f.write(text)
        logger.debug("wrote %s", path)
    return text


def spectral_table_rows(table: SpectralTable) -> np.ndarray:
    k = np.arange(len(table))
    return np.column_stack([k, table.theta, table.mu, table.lam, table.lambda_deviation])


SPECTRAL_HEADER = ["k", "theta_k", "mu_k", "lambda_k", "lambda_k_minus_lambda_inf"]


def spectral_comments(table: SpectralTable) -> list[str]:
    p = table.params
    return [
        f"N={p.N} beta={p.beta:.17g} k_max={p.k_max}",
        "theta_k: eigenvalue of the zonal kernel |w - xi|^beta on degree-k harmonics",
        "mu_k: theta_k / ((-1)^k C_beta); lambda_k = 2^(1+beta/2) (theta_0 - theta_k)",
        f"C_beta={table.C_beta:.17g} D_beta={table.D_beta:.17g} lambda_inf={table.lambda_inf:.17g}",
    ]


REFERENCE_VALUES_PATH = Path(__file__).parent / "data" / "reference_values.csv"
MISSING = "-"


@dataclass(frozen=True)
class ReferenceRecord:
    """
    One row of the reference table.

    Args:
        quantity: Name such as lambda_1 or g_beta_ball
        params: Semicolon separated settings, e.g. "N=2;beta=2"
        value: Reference value
        oracle: closed_form, or monte_carlo for rows reproduced by a seeded sampler
        seed: Sampler seed (monte_carlo rows only)
        samples: Number of pairs or points drawn (monte_carlo rows only)
    """

    quantity: str
    params: str
    value: float
    oracle: str
    seed: int | None = None
    samples: int | None = None

    def parameters(self) -> dict[str, float]:
        out = {}
        for item in self.params.split(";"):
            name, _, text = item.partition("=")
            out[name] = float(text)
        return out


def _optional_int(text: str) -> int | None:
    text = text.strip()
    return None if text in ("", MISSING) else int(text)


def reference_records(path: str | Path = REFERENCE_VALUES_PATH) -> list[ReferenceRecord]:
    with open(path, encoding="utf-8") as f:
        header = f.readline().strip().split(",")
    rows = np.loadtxt(path, dtype=str, delimiter=",", skiprows=1, ndmin=2, encoding="utf-8")
    col = {name: i for i, name in enumerate(header)}
    return [
        ReferenceRecord(
            quantity=row[col["quantity"]],
            params=row[col["params"]],
            value=float(row[col["value"]]),
            oracle=row[col["oracle"]],
            seed=_optional_int(row[col["seed"]]),
            samples=_optional_int(row[col["samples"]]),
        )
        for row in rows
    ]


def reference_values(path: str | Path = REFERENCE_VALUES_PATH) -> dict[tuple[str, str], float]:
    """
    Closed-form reference values keyed by (quantity, params), e.g.
    ("lambda_1", "N=2;beta=2").
    """
    return {(r.quantity, r.params): r.value for r in reference_records(path) if r.oracle == "closed_form"}
