"""Clustering polylines with at most ``ell`` segments under the Hausdorff distance.

Everything runs on the same array-level code as segments: a polyline with ell
segments is an ``(ell + 1, 2)`` vertex array, and a segment is the case ell = 1.
Inputs with fewer than ell segments are padded by splitting their longest piece,
which leaves the point set, and therefore every distance, unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _kernels
from .coreset import Coreset, construct_coreset_arrays
from .errors import InvalidInputError
from .geometry import Point, Segment, _as_point
from .objective import Assignment, assign_arrays, cost_arrays
from .optimizer import ClusteringResult, GridSpec, OptimizerConfig, grid_brute_force_arrays, local_search_arrays


@dataclass(frozen=True)
class Polyline:
    vertices: tuple[Point, ...]

    def __post_init__(self):
        pts = tuple(_as_point(p) for p in self.vertices)
        if len(pts) < 2:
            raise InvalidInputError("a polyline needs at least two vertices")
        for i, (p, q) in enumerate(zip(pts, pts[1:])):
            if p == q:
                raise InvalidInputError(f"zero-length piece {i} at {tuple(p)}")
        object.__setattr__(self, "vertices", pts)

    @classmethod
    def from_array(cls, arr) -> Polyline:
        return cls(tuple(Point(*row) for row in np.asarray(arr, dtype=float).tolist()))

    @classmethod
    def from_segment(cls, s: Segment) -> Polyline:
        return cls((s.a, s.b))

    def to_array(self) -> np.ndarray:
        return np.array(self.vertices, dtype=float)

    @property
    def n_segments(self) -> int:
        return len(self.vertices) - 1

    def segments(self) -> list[Segment]:
        return [Segment(p, q) for p, q in zip(self.vertices, self.vertices[1:])]

    def reversed(self) -> Polyline:
        return Polyline(self.vertices[::-1])


def pad_vertices(arr, ell: int) -> np.ndarray:
    """Split the longest piece at its midpoint until there are exactly ``ell`` pieces."""
    arr = np.asarray(arr, dtype=float)
    if len(arr) - 1 > ell:
        raise InvalidInputError(f"polyline has {len(arr) - 1} segments, more than ell={ell}")
    while len(arr) - 1 < ell:
        lengths = np.hypot(*np.diff(arr, axis=0).T)
        i = int(np.argmax(lengths))
        arr = np.insert(arr, i + 1, (arr[i] + arr[i + 1]) / 2, axis=0)
    return arr


def polylines_to_array(polylines: Sequence[Polyline], ell: int | None = None) -> np.ndarray:
    if ell is None:
        ell = max(p.n_segments for p in polylines)
    if ell < 1:
        raise InvalidInputError("ell must be >= 1")
    return np.stack([pad_vertices(p.to_array(), ell) for p in polylines])


def _weights(weights, n) -> np.ndarray:
    if weights is None:
        return np.ones(n)
    w = np.asarray(weights, dtype=float)
    if w.shape != (n,) or not np.all(np.isfinite(w)) or np.any(w <= 0):
        raise InvalidInputError("weights must be positive, finite and one per polyline")
    return w


def hausdorff_polylines_sq(p: Polyline, q: Polyline) -> float:
    return float(_kernels.hausdorff_sq(p.to_array(), q.to_array()))


def hausdorff_polylines(p: Polyline, q: Polyline) -> float:
    """Hausdorff distance between the point sets of two polylines (exact)."""
    return math.sqrt(hausdorff_polylines_sq(p, q))


def hausdorff_polylines_maxmin(p: Polyline, q: Polyline) -> float:
    """max-min combination of piece-to-piece segment distances.

    An upper bound on :func:`hausdorff_polylines`; kept for comparison.
    """
    P = np.stack([s.to_array() for s in p.segments()])
    Q = np.stack([s.to_array() for s in q.segments()])
    D = _kernels.hausdorff_sq(P[:, None], Q[None, :])
    return math.sqrt(max(D.min(axis=1).max(), D.min(axis=0).max()))


def embed(centers: Sequence[Polyline], ell: int) -> np.ndarray:
    """Flatten k polylines with exactly ``ell`` pieces into R^{2k(ell+1)}."""
    arr = np.stack([c.to_array() for c in centers])
    if arr.shape[1] != ell + 1:
        raise InvalidInputError(f"centers must have exactly {ell} segments")
    return arr.reshape(-1)


def extract(z, ell: int) -> list[Polyline]:
    z = np.asarray(z, dtype=float).reshape(-1)
    width = 2 * (ell + 1)
    if z.size == 0 or z.size % width:
        raise InvalidInputError(f"parameter length {z.size} is not a positive multiple of {width}")
    return [Polyline.from_array(row) for row in z.reshape(-1, ell + 1, 2)]


def polyline_assign(P: Sequence[Polyline], centers: Sequence[Polyline], ell: int | None = None) -> Assignment:
    ell = ell or max(x.n_segments for x in list(P) + list(centers))
    return assign_arrays(polylines_to_array(P, ell), polylines_to_array(centers, ell))


def polyline_cost(P: Sequence[Polyline], centers: Sequence[Polyline], weights=None, ell: int | None = None) -> float:
    ell = ell or max(x.n_segments for x in list(P) + list(centers))
    X = polylines_to_array(P, ell)
    return cost_arrays(X, _weights(weights, len(X)), polylines_to_array(centers, ell))


def polyline_coreset(P: Sequence[Polyline], k: int, epsilon: float, delta: float, weights=None,
                     ell: int | None = None, seed: int = 0, **kwargs) -> Coreset:
    X = _kernels.canonical_orientation(polylines_to_array(P, ell))
    core, _, _ = construct_coreset_arrays(X, _weights(weights, len(X)), k, epsilon, delta, seed, **kwargs)
    return core


def polyline_local_search(P: Sequence[Polyline], k: int, weights=None, ell: int | None = None,
                          cfg: OptimizerConfig | None = None, trace_cb=None) -> ClusteringResult:
    X = polylines_to_array(P, ell)
    return local_search_arrays(X, _weights(weights, len(X)), k, cfg, trace_cb)


def polyline_grid_brute_force(P: Sequence[Polyline], k: int, grid: GridSpec, weights=None,
                              ell: int | None = None, **kwargs) -> ClusteringResult:
    X = polylines_to_array(P, ell)
    return grid_brute_force_arrays(X, _weights(weights, len(X)), k, grid, **kwargs)


def center_polylines(result: ClusteringResult) -> list[Polyline]:
    return [Polyline.from_array(c) for c in result.centers]
