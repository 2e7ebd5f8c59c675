import json
import logging
import os
import uuid
from abc import ABC, abstractmethod

import numpy as np

from .errors import DomainError
from .special_fn import unit_ball_volume

logger = logging.getLogger(__name__)

_SHAPE_KINDS: dict[str, type["Shape"]] = {}


def register_shape(cls):
    """Class decorator adding a Shape subclass to the serialization registry."""
    _SHAPE_KINDS[cls.kind] = cls
    return cls


class Shape(ABC):
    """
    A bounded set in R^N with exact or quadrature-based volume, barycenter and
    overlap with unit balls.
    """

    kind: str = ""

    def __init__(self, N: int):
        if N < 2:
            raise DomainError(f"dimension must be >= 2, got {N}")
        self.N: int = N
        self._uuid: str = uuid.uuid4().hex[:8]

    @property
    def shape_id(self) -> str:
        """Returns this shape's unique identifier."""
        return self._uuid

    @property
    def ball_volume(self) -> float:
        """Volume of the unit ball in R^N."""
        return unit_ball_volume(self.N)

    @abstractmethod
    def volume(self) -> float:
        pass

    @abstractmethod
    def barycenter(self) -> np.ndarray:
        pass

    @abstractmethod
    def rescale(self, lam: float) -> "Shape":
        pass

    @abstractmethod
    def translate(self, v) -> "Shape":
        pass

    @abstractmethod
    def intersection_with_unit_ball(self, x) -> float:
        """|E cap B(x)| for the unit ball centred at x."""
        pass

    @abstractmethod
    def to_dict(self) -> dict:
        pass

    @abstractmethod
    def to_filename(self) -> str:
        """
        Return filename parameters (without extension or UUID) for this shape.

        Returns:
            Filename string with the shape kind and its key parameters
        """
        pass

    def candidate_centers(self) -> list[np.ndarray]:
        """Extra seeds for the asymmetry center search."""
        return []

    def symmetric_difference_with_unit_ball(self, x) -> float:
        """|E delta B(x)| = |E| + omega_N - 2 |E cap B(x)|."""
        return self.volume() + self.ball_volume - 2.0 * self.intersection_with_unit_ball(x)

    def get_full_filename(self) -> str:
        """
        Return complete filename with UUID appended.

        Returns:
            Complete filename (without extension) including UUID
        """
        return f"{self.to_filename()}_{self._uuid}"

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def save(self, output_dir: str) -> str:
        """Write the shape as JSON and return the file path."""
        os.makedirs(output_dir, exist_ok=True)
        filepath = os.path.join(output_dir, f"{self.get_full_filename()}.json")
        with open(filepath, "w") as f:
            f.write(self.to_json())
        logger.debug("saved %s shape to %s", self.kind, filepath)
        return filepath


def shape_from_dict(data: dict) -> Shape:
    """Rebuild a shape from its dictionary form."""
    kind = data.get("kind")
    if kind not in _SHAPE_KINDS:
        raise DomainError(f"unknown shape kind {kind!r}")
    return _SHAPE_KINDS[kind].from_dict(data)


def load_shape(path: str) -> Shape:
    with open(path) as f:
        data = json.load(f)
    return shape_from_dict(data)


def volume(shape: Shape) -> float:
    return shape.volume()


def barycenter(shape: Shape) -> np.ndarray:
    return shape.barycenter()


def rescale(shape: Shape, lam: float) -> Shape:
    """Dilate a shape about the origin by lam > 0."""
    if not lam > 0:
        raise DomainError(f"scale factor must be > 0, got {lam}")
    return shape.rescale(lam)


def translate(shape: Shape, v) -> Shape:
    v = np.asarray(v, dtype=float)
    if v.shape != (shape.N,):
        raise DomainError(f"translation must have {shape.N} components, got {v.shape}")
    return shape.translate(v)
