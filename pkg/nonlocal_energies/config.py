"""
Run configuration for the batch front end.

A RunConfig is built from a flat JSON file, then overridden by command-line
flags, then validated as a whole before any command runs.
"""

import json
import logging
import os
from dataclasses import asdict, dataclass, field, fields

from .errors import DomainError
from .spectral import DEFAULT_K_MAX

logger = logging.getLogger(__name__)

COMMANDS = ("spectrum", "energy", "fuglede", "sharpness", "mixed", "transport", "bigasym")
RANDOMIZED_COMMANDS = ("fuglede", "transport")


def _find_thread_count() -> int:
    """
    Default worker count for parameter sweeps.

    Search order:
    1. NONLOCAL_ENERGIES_THREADS environment variable
    2. os.cpu_count()
    """
    env_value = os.environ.get("NONLOCAL_ENERGIES_THREADS")
    if env_value:
        try:
            count = int(env_value)
        except ValueError:
            raise DomainError(f"NONLOCAL_ENERGIES_THREADS must be an integer, got {env_value!r}")
        if count < 1:
            raise DomainError(f"NONLOCAL_ENERGIES_THREADS must be >= 1, got {count}")
        return count
    return os.cpu_count() or 1


@dataclass
class RunConfig:
    """
    Parameters of one command.

    Grids are lists of floats; `shape` is the path of a shape JSON file for
    the energy command.
    """

    command: str = "spectrum"
    N: int = 2
    beta: float = 2.0
    alpha: float | None = None
    s: float | None = None
    M: float | None = None
    epsilon: float | None = None
    k_max: int = DEFAULT_K_MAX
    resolution: int = 128
    t_grid: list[float] = field(default_factory=lambda: [0.02, 0.01, 0.005])
    h_grid: list[float] | None = None
    m_grid: list[float] | None = None
    modes: list[int] = field(default_factory=lambda: [2, 3, 4, 5])
    n_random: int = 4
    n_cases: int = 10
    n_balls: int = 4
    seed: int | None = None
    shape: str | None = None
    output: str | None = None
    threads: int | None = None
    order: int | None = None
    tolerance: float = 1e-3

    @classmethod
    def from_file(cls, path: str) -> "RunConfig":
        with open(path) as f:
            data = json.load(f)
        if not isinstance(data, dict):
            raise DomainError(f"config file {path} must hold a flat JSON object")
        return cls.from_dict(data)

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        names = {f.name for f in fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise DomainError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    def override(self, flags: dict) -> "RunConfig":
        """New config with every flag that is not None replacing the stored value."""
        data = asdict(self)
        data.update({k: v for k, v in flags.items() if v is not None and k in data})
        return RunConfig(**data)

    @property
    def worker_count(self) -> int:
        return self.threads if self.threads is not None else _find_thread_count()

    def validate(self) -> "RunConfig":
        """Raise DomainError on the first parameter outside its domain."""
        if self.command not in COMMANDS:
            raise DomainError(f"unknown command {self.command!r}")
        if self.N < 2:
            raise DomainError(f"N must be >= 2, got {self.N}")
        if not self.beta > 0:
            raise DomainError(f"beta must be > 0, got {self.beta}")
        if self.alpha is not None and not 0.0 < self.alpha < self.N:
            raise DomainError(f"alpha must lie in (0, N), got {self.alpha}")
        if self.s is not None and not 0.0 < self.s <= 1.0:
            raise DomainError(f"s must lie in (0, 1], got {self.s}")
        if self.M is not None and not self.M > 0:
            raise DomainError(f"M must be > 0, got {self.M}")
        if self.epsilon is not None and self.epsilon < 0:
            raise DomainError(f"epsilon must be >= 0, got {self.epsilon}")
        if self.k_max < 2:
            raise DomainError(f"k_max must be >= 2, got {self.k_max}")
        if self.order is not None and self.order < 1:
            raise DomainError(f"order must be >= 1, got {self.order}")
        if not self.tolerance > 0:
            raise DomainError(f"tolerance must be > 0, got {self.tolerance}")
        if self.resolution < 3:
            raise DomainError(f"resolution must be >= 3, got {self.resolution}")
        if self.threads is not None and self.threads < 1:
            raise DomainError(f"threads must be >= 1, got {self.threads}")
        if self.command in RANDOMIZED_COMMANDS and self.seed is None:
            raise DomainError(f"command {self.command!r} draws random cases and needs a seed")
        if self.command == "energy" and not self.shape:
            raise DomainError("energy needs a shape file")
        if self.command == "mixed" and (self.alpha is None or self.s is None):
            raise DomainError("mixed needs alpha and s")
        if self.command in ("fuglede", "mixed") and self.N not in (2, 3):
            raise DomainError(f"{self.command} runs on sphere grids with N in {{2, 3}}")
        if self.command == "transport" and self.N != 2:
            raise DomainError("transport runs in the plane (N = 2)")
        for name in ("t_grid", "h_grid", "m_grid"):
            grid = getattr(self, name)
            if grid is not None and any(not x > 0 for x in grid):
                raise DomainError(f"{name} must hold positive values")
        return self

    def to_dict(self) -> dict:
        return asdict(self)
