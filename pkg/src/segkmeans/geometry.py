"""Points, segments and the exact distance primitives between them."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _kernels
from .errors import InvalidInputError

#: Library-wide tolerance for treating two distances as equal.
TOLERANCE = 1e-9


class Point(NamedTuple):
    x: float
    y: float


def _as_point(p) -> Point:
    if isinstance(p, Point):
        pt = p
    else:
        try:
            x, y = p
        except (TypeError, ValueError):
            raise InvalidInputError(f"not a 2D point: {p!r}") from None
        pt = Point(float(x), float(y))
    if not (math.isfinite(pt.x) and math.isfinite(pt.y)):
        raise InvalidInputError(f"non-finite coordinate in {pt!r}")
    return pt


@dataclass(frozen=True)
class Segment:
    """Closed segment ``ab`` with positive length. Orientation is kept but is irrelevant to distances."""

    a: Point
    b: Point

    def __post_init__(self):
        a, b = _as_point(self.a), _as_point(self.b)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        if a == b:
            raise InvalidInputError(f"zero-length segment at {tuple(a)}")

    @classmethod
    def from_array(cls, arr) -> Segment:
        arr = np.asarray(arr, dtype=float).reshape(2, 2)
        return cls(Point(*arr[0].tolist()), Point(*arr[1].tolist()))

    def to_array(self) -> np.ndarray:
        return np.array([[self.a.x, self.a.y], [self.b.x, self.b.y]], dtype=float)

    def reversed(self) -> Segment:
        return Segment(self.b, self.a)

    @property
    def length(self) -> float:
        return math.hypot(self.b.x - self.a.x, self.b.y - self.a.y)

    @property
    def midpoint(self) -> Point:
        return Point((self.a.x + self.b.x) / 2, (self.a.y + self.b.y) / 2)

    def translated(self, dx: float, dy: float) -> Segment:
        return Segment((self.a.x + dx, self.a.y + dy), (self.b.x + dx, self.b.y + dy))


class RegionLabel(enum.Enum):
    """Which closed face of the plane, relative to a segment ab, contains a point."""

    SLAB_SIGMA = "slab"
    HALFPLANE_TAU_A = "tau_a"
    HALFPLANE_TAU_B = "tau_b"


class CandidateFamily(NamedTuple):
    """The eight algebraic expressions one of which realizes d_H(ab, a'b')."""

    aa: float
    ab: float
    ba: float
    bb: float
    a_to_line2: float
    b_to_line2: float
    a2_to_line1: float
    b2_to_line1: float

    def contains(self, value: float, tol: float | None = None) -> bool:
        tol = TOLERANCE if tol is None else tol
        return any(abs(v - value) <= tol for v in self)


def _psi(p: Point, a: Point, b: Point) -> float:
    # scalar product (p - a).(b - a); its sign tells the side of the perpendicular at a
    return (p.x - a.x) * (b.x - a.x) + (p.y - a.y) * (b.y - a.y)


def classify_point(p, s: Segment) -> RegionLabel:
    """Locate ``p`` in sigma(ab), tau(a, ab) or tau(b, ab); boundary points go to the slab."""
    p = _as_point(p)
    if _psi(p, s.a, s.b) < 0:
        return RegionLabel.HALFPLANE_TAU_A
    if _psi(p, s.b, s.a) < 0:
        return RegionLabel.HALFPLANE_TAU_B
    return RegionLabel.SLAB_SIGMA


def squared_line_distance(p, a, b) -> float:
    """Squared distance from ``p`` to the line through ``a`` and ``b`` (closed form, no sqrt)."""
    p, a, b = _as_point(p), _as_point(a), _as_point(b)
    num = (b.x - a.x) * (a.y - p.y) - (a.x - p.x) * (b.y - a.y)
    den = (a.x - b.x) ** 2 + (a.y - b.y) ** 2
    if den == 0:
        raise InvalidInputError("line through coincident points")
    return num * num / den


def point_segment_distance(p, s: Segment) -> float:
    p = _as_point(p)
    region = classify_point(p, s)
    if region is RegionLabel.HALFPLANE_TAU_A:
        d2 = (p.x - s.a.x) ** 2 + (p.y - s.a.y) ** 2
    elif region is RegionLabel.HALFPLANE_TAU_B:
        d2 = (p.x - s.b.x) ** 2 + (p.y - s.b.y) ** 2
    else:
        d2 = squared_line_distance(p, s.a, s.b)
    return math.sqrt(d2)


def hausdorff_segments_sq(s1: Segment, s2: Segment) -> float:
    return float(_kernels.hausdorff_sq(s1.to_array(), s2.to_array()))


def hausdorff_segments(s1: Segment, s2: Segment) -> float:
    """Hausdorff distance between two segments.

    The largest of the four endpoint-to-other-segment distances.
    """
    return math.sqrt(hausdorff_segments_sq(s1, s2))


def candidate_family(s1: Segment, s2: Segment) -> CandidateFamily:
    a, b, a2, b2 = s1.a, s1.b, s2.a, s2.b
    return CandidateFamily(
        math.dist(a, a2),
        math.dist(a, b2),
        math.dist(b, a2),
        math.dist(b, b2),
        math.sqrt(squared_line_distance(a, a2, b2)),
        math.sqrt(squared_line_distance(b, a2, b2)),
        math.sqrt(squared_line_distance(a2, a, b)),
        math.sqrt(squared_line_distance(b2, a, b)),
    )


def segments_to_array(segments) -> np.ndarray:
    """Stack segments into an ``(n, 2, 2)`` float array."""
    if len(segments) == 0:
        return np.zeros((0, 2, 2))
    return np.stack([s.to_array() for s in segments])
