"""Fréchet means of two perpendicular unit-half-length segments crossing at their midpoints.

For s1 = (-1,0)(1,0) and s2 = (0,-1)(0,1) the minimum of d_H(s,s1)^2 + d_H(s,s2)^2
is 1, and it is attained exactly by the segments through the origin whose
endpoints lie in two different closed regions A_1..A_4.  A_i is the part of the
unit disk in quadrant i outside the two radius-1/2 disks centered at the
half-endpoints bounding that quadrant.
"""

from __future__ import annotations

import math

import numpy as np

from .geometry import TOLERANCE, Point, Segment, _as_point, hausdorff_segments_sq, point_segment_distance

S1 = Segment((-1.0, 0.0), (1.0, 0.0))
S2 = Segment((0.0, -1.0), (0.0, 1.0))
OPTIMUM = 1.0

# quadrant -> (sign x, sign y, centers of the two excluded disks)
_QUADRANTS = {
    1: (1, 1, ((0.5, 0.0), (0.0, 0.5))),
    2: (-1, 1, ((-0.5, 0.0), (0.0, 0.5))),
    3: (-1, -1, ((-0.5, 0.0), (0.0, -0.5))),
    4: (1, -1, ((0.5, 0.0), (0.0, -0.5))),
}
_INNER = 1 / math.sqrt(2)


def perpendicular_instance() -> tuple[Segment, Segment]:
    return S1, S2


def region_membership(p, tol: float = TOLERANCE) -> frozenset[int]:
    """Indices i of the closed regions A_i containing ``p``.

    Boundary points belong to every region whose closure they touch, e.g. (1, 0)
    is in A_1 and A_4.  The origin is in none: the disk inequalities alone would
    admit it as an isolated point, but every point of a closure A_i is at least
    1/sqrt(2) from the origin.
    """
    p = _as_point(p)
    r = math.hypot(p.x, p.y)
    if r > 1 + tol or r < _INNER - tol:
        return frozenset()
    out = set()
    for i, (sx, sy, disks) in _QUADRANTS.items():
        if sx * p.x < -tol or sy * p.y < -tol:
            continue
        if all(math.hypot(p.x - cx, p.y - cy) >= 0.5 - tol for cx, cy in disks):
            out.add(i)
    return frozenset(out)


def passes_through_origin(s: Segment, tol: float = TOLERANCE) -> bool:
    return point_segment_distance(Point(0.0, 0.0), s) <= tol


def is_frechet_mean(s: Segment, tol: float = TOLERANCE) -> bool:
    """Membership test for the set of Fréchet means of {S1, S2}.

    Accepts when ``s`` passes through the origin and its endpoints can be given
    two different region labels.
    """
    if not passes_through_origin(s, tol):
        return False
    la, lb = region_membership(s.a, tol), region_membership(s.b, tol)
    return any(i != j for i in la for j in lb)


def frechet_cost(s: Segment) -> float:
    return hausdorff_segments_sq(s, S1) + hausdorff_segments_sq(s, S2)


def center_translate(s: Segment, t: Segment) -> Segment:
    """``t`` translated so that its midpoint coincides with the midpoint of ``s``."""
    ms, mt = s.midpoint, t.midpoint
    return t.translated(ms.x - mt.x, ms.y - mt.y)


def sample_frechet_mean(rng: np.random.Generator) -> Segment:
    """A random Fréchet mean: a direction through the origin, radii inside the regions."""
    theta = rng.uniform(0.0, math.pi / 2)
    # rotate by a multiple of 90 degrees to reach the other quadrant pair
    theta += rng.integers(0, 4) * math.pi / 2
    c, s = math.cos(theta), math.sin(theta)
    lo = max(abs(c), abs(s))
    ra, rb = rng.uniform(lo, 1.0, size=2)
    return Segment((ra * c, ra * s), (-rb * c, -rb * s))


def rotate90(p) -> Point:
    p = _as_point(p)
    return Point(-p.y, p.x)
