"""The weighted k-means cost over segments and the R^{4k} parameterization of centers."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _kernels
from .errors import InvalidInputError
from .geometry import Segment, segments_to_array


@dataclass(frozen=True)
class WeightedSegment:
    seg: Segment
    weight: float = 1.0

    def __post_init__(self):
        w = float(self.weight)
        if not math.isfinite(w) or w <= 0:
            raise InvalidInputError(f"weight must be positive and finite, got {self.weight!r}")
        object.__setattr__(self, "weight", w)


@dataclass(frozen=True)
class Assignment:
    """Nearest-center index and squared distance for every input item."""

    labels: np.ndarray
    sq_dists: np.ndarray

    def __len__(self):
        return len(self.labels)


def embed(centers: Sequence[Segment]) -> np.ndarray:
    """Flatten k segments into (x(a1), y(a1), x(b1), y(b1), ..., y(bk))."""
    if len(centers) == 0:
        raise InvalidInputError("need at least one center")
    return segments_to_array(centers).reshape(-1)


def extract(z) -> list[Segment]:
    z = np.asarray(z, dtype=float).reshape(-1)
    if z.size == 0 or z.size % 4:
        raise InvalidInputError(f"parameter vector length {z.size} is not a positive multiple of 4")
    return [Segment.from_array(row) for row in z.reshape(-1, 2, 2)]


@dataclass(frozen=True)
class CenterTuple:
    """An ordered k-tuple of center segments; equivalently a point of R^{4k}."""

    centers: tuple[Segment, ...]

    def __post_init__(self):
        object.__setattr__(self, "centers", tuple(self.centers))
        if not self.centers:
            raise InvalidInputError("need at least one center")

    @classmethod
    def from_param(cls, z) -> CenterTuple:
        return cls(tuple(extract(z)))

    @property
    def param(self) -> np.ndarray:
        return embed(self.centers)

    @property
    def k(self) -> int:
        return len(self.centers)

    def to_array(self) -> np.ndarray:
        return segments_to_array(self.centers)


def as_arrays(S: Sequence[WeightedSegment]) -> tuple[np.ndarray, np.ndarray]:
    """Split weighted segments into an ``(n, 2, 2)`` coordinate array and an ``(n,)`` weight array."""
    X = segments_to_array([ws.seg for ws in S])
    w = np.array([ws.weight for ws in S], dtype=float)
    return X, w


def _center_array(c) -> np.ndarray:
    if isinstance(c, CenterTuple):
        return c.to_array()
    if isinstance(c, np.ndarray):
        return c
    return segments_to_array(list(c))


# array-level core, shared with the polyline code path

def assign_arrays(X: np.ndarray, C: np.ndarray) -> Assignment:
    D = _kernels.sqdist_matrix(X, C)
    labels = np.argmin(D, axis=1)  # first minimum: ties go to the lowest center index
    return Assignment(labels, D[np.arange(len(X)), labels])


def cost_arrays(X: np.ndarray, w: np.ndarray, C: np.ndarray) -> float:
    return float(np.sum(w * assign_arrays(X, C).sq_dists))


def assign(S: Sequence[WeightedSegment], c) -> Assignment:
    X, _ = as_arrays(S)
    return assign_arrays(X, _center_array(c))


def cost(S: Sequence[WeightedSegment], c) -> float:
    """sum_s w_s * min_i d_H(s, c_i)^2."""
    X, w = as_arrays(S)
    return cost_arrays(X, w, _center_array(c))
