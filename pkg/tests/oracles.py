"""Independent reference computations used by the tests.

Nothing here imports the package: the Hausdorff oracle works on dense point
samples of both sets and the line distance uses the |cross| / length formula.
"""

import math

import numpy as np
from numba import njit


@njit(cache=True)
def _piece_counts(V, n):
    L = np.empty(len(V) - 1)
    for i in range(len(V) - 1):
        L[i] = math.hypot(V[i + 1, 0] - V[i, 0], V[i + 1, 1] - V[i, 1])
    tot = L.sum()
    cnt = np.empty(len(L), dtype=np.int64)
    for i in range(len(L)):
        cnt[i] = max(2, int(round(n * L[i] / tot)))
    return cnt


@njit(cache=True)
def _nearest_sample_sq(px, py, V, cnt):
    # nearest of cnt[j] equally spaced samples (endpoints included) on each piece j:
    # the sample index nearest to the projection parameter is the nearest sample
    best = np.inf
    for j in range(len(V) - 1):
        ax, ay = V[j, 0], V[j, 1]
        ex, ey = V[j + 1, 0] - ax, V[j + 1, 1] - ay
        ee = ex * ex + ey * ey
        u = ((px - ax) * ex + (py - ay) * ey) / ee
        u = min(1.0, max(0.0, u))
        m = cnt[j] - 1
        t = round(u * m) / m
        dx = ax + t * ex - px
        dy = ay + t * ey - py
        d = dx * dx + dy * dy
        if d < best:
            best = d
    return best


@njit(cache=True)
def _directed_sampled_sq(P, Q, n):
    cp = _piece_counts(P, n)
    cq = _piece_counts(Q, n)
    worst = 0.0
    for j in range(len(P) - 1):
        m = cp[j] - 1
        for i in range(cp[j]):
            t = i / m
            px = P[j, 0] + t * (P[j + 1, 0] - P[j, 0])
            py = P[j, 1] + t * (P[j + 1, 1] - P[j, 1])
            d = _nearest_sample_sq(px, py, Q, cq)
            if d > worst:
                worst = d
    return worst


def sampled_hausdorff(P, Q, n=100_000):
    """Hausdorff distance between ~n-point uniform samples of two polylines."""
    P = np.ascontiguousarray(P, dtype=np.float64)
    Q = np.ascontiguousarray(Q, dtype=np.float64)
    return math.sqrt(max(_directed_sampled_sq(P, Q, n), _directed_sampled_sq(Q, P, n)))


def line_distance(p, a, b):
    """Distance from p to the infinite line through a and b."""
    (px, py), (ax, ay), (bx, by) = p, a, b
    return abs((bx - ax) * (py - ay) - (by - ay) * (px - ax)) / math.hypot(bx - ax, by - ay)


def eight_candidates(s, t):
    """Endpoint-endpoint distances and endpoint-to-other-line distances for segments s, t."""
    (a, b), (c, d) = s, t
    return [
        math.dist(a, c), math.dist(a, d), math.dist(b, c), math.dist(b, d),
        line_distance(a, c, d), line_distance(b, c, d),
        line_distance(c, a, b), line_distance(d, a, b),
    ]


def point_segment_clamped(p, a, b):
    """Distance from p to segment ab by clamped projection."""
    p, a, b = (np.asarray(v, dtype=float) for v in (p, a, b))
    e = b - a
    t = min(1.0, max(0.0, float(np.dot(p - a, e) / np.dot(e, e))))
    return float(np.linalg.norm(a + t * e - p))


def brute_cost(X, w, C):
    """Weighted k-means cost of segments, pair by pair with clamped projections."""
    total = 0.0
    for x, wi in zip(X, w):
        best = math.inf
        for c in C:
            d = max(point_segment_clamped(x[0], c[0], c[1]), point_segment_clamped(x[1], c[0], c[1]),
                    point_segment_clamped(c[0], x[0], x[1]), point_segment_clamped(c[1], x[0], x[1]))
            best = min(best, d * d)
        total += wi * best
    return total
