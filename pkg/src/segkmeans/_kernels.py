"""Vectorized distance kernels.

Objects are arrays of vertices with shape ``(..., V, 2)``; a segment is the case
``V == 2``.  All kernels broadcast over the leading dimensions and work in
squared distances.  Segment pairs go through vectorized numpy; longer chains
through compiled loops.
"""

import math

import numpy as np
from numba import njit


def _dot(u, v):
    return u[..., 0] * v[..., 0] + u[..., 1] * v[..., 1]


def _cross(u, v):
    return u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0]


def point_segment_sqdist(p, a, b):
    """Squared distance from points ``p`` to segments ``ab`` (all broadcast, last axis = xy).

    Branches on the sign of the scalar products (p-a).(b-a) and (p-b).(a-b):
    a negative value puts ``p`` in the half-plane beyond that endpoint, otherwise
    ``p`` is in the closed slab and the distance is to the supporting line.
    Zero-length segments degrade to the point distance.
    """
    p = np.asarray(p, dtype=float)
    e = b - a
    pa = p - a
    pb = p - b
    ee = _dot(e, e)
    psi_a = _dot(pa, e)
    psi_b = -_dot(pb, e)
    d_a = _dot(pa, pa)
    d_b = _dot(pb, pb)
    with np.errstate(divide="ignore", invalid="ignore"):
        d_line = _cross(e, pa) ** 2 / ee
    out = np.where(psi_a < 0, d_a, np.where(psi_b < 0, d_b, d_line))
    return np.where(ee > 0, out, d_a)


@njit(cache=True)
def _pt_seg_sq(px, py, ax, ay, bx, by):
    # scalar twin of point_segment_sqdist
    ex, ey = bx - ax, by - ay
    ee = ex * ex + ey * ey
    dax, day = px - ax, py - ay
    if ee == 0.0 or dax * ex + day * ey < 0.0:
        return dax * dax + day * day
    dbx, dby = px - bx, py - by
    if -(dbx * ex + dby * ey) < 0.0:
        return dbx * dbx + dby * dby
    cr = ex * day - ey * dax
    return cr * cr / ee


@njit(cache=True)
def _pt_chain_sq(px, py, Q):
    best = np.inf
    for j in range(Q.shape[0] - 1):
        d = _pt_seg_sq(px, py, Q[j, 0], Q[j, 1], Q[j + 1, 0], Q[j + 1, 1])
        if d < best:
            best = d
    return best


@njit(cache=True)
def _has_piece(Q, ax, ay, bx, by):
    for j in range(Q.shape[0] - 1):
        cx, cy, dx, dy = Q[j, 0], Q[j, 1], Q[j + 1, 0], Q[j + 1, 1]
        if (ax == cx and ay == cy and bx == dx and by == dy) or (ax == dx and ay == dy and bx == cx and by == cy):
            return True
    return False


@njit(cache=True)
def _pieces(x0, y0, vx, vy, cx, cy, dx, dy, out):
    # quadratic coefficients (A, B, C) in t of the squared distance from x0 + t v to:
    # row 0 the point c, row 1 the point d, row 2 the line through c and d
    vv = vx * vx + vy * vy
    wcx, wcy = x0 - cx, y0 - cy
    wdx, wdy = x0 - dx, y0 - dy
    out[0, 0], out[0, 1], out[0, 2] = vv, 2.0 * (wcx * vx + wcy * vy), wcx * wcx + wcy * wcy
    out[1, 0], out[1, 1], out[1, 2] = vv, 2.0 * (wdx * vx + wdy * vy), wdx * wdx + wdy * wdy
    ex, ey = dx - cx, dy - cy
    ee = ex * ex + ey * ey
    if ee > 0.0:
        cr0 = ex * wcy - ey * wcx
        cr1 = ex * vy - ey * vx
        out[2, 0], out[2, 1], out[2, 2] = cr1 * cr1 / ee, 2.0 * cr0 * cr1 / ee, cr0 * cr0 / ee
    else:
        out[2, 0], out[2, 1], out[2, 2] = out[0, 0], out[0, 1], out[0, 2]


@njit(cache=True)
def _directed_chain_sq(P, Q):
    """max over x in chain P of the squared distance from x to chain Q (exact)."""
    worst = 0.0
    if Q.shape[0] == 2:
        # distance to one segment is convex along every piece: vertices suffice
        for i in range(P.shape[0]):
            d = _pt_seg_sq(P[i, 0], P[i, 1], Q[0, 0], Q[0, 1], Q[1, 0], Q[1, 1])
            if d > worst:
                worst = d
        return worst
    lq = Q.shape[0] - 1
    coef = np.empty((lq, 3, 3))
    for i in range(P.shape[0] - 1):
        x0, y0 = P[i, 0], P[i, 1]
        vx, vy = P[i + 1, 0] - x0, P[i + 1, 1] - y0
        if _has_piece(Q, x0, y0, P[i + 1, 0], P[i + 1, 1]):
            continue  # a piece shared with Q contributes exactly 0
        scale = vx * vx + vy * vy
        for e in range(2):
            d = _pt_chain_sq(x0 + e * vx, y0 + e * vy, Q)
            if d > worst:
                worst = d
        for j in range(lq):
            _pieces(x0, y0, vx, vy, Q[j, 0], Q[j, 1], Q[j + 1, 0], Q[j + 1, 1], coef[j])
        # the maximum of a min of convex piecewise quadratics sits at a piece end or where
        # two of the quadratics cross: try every root of every pairwise difference
        for j1 in range(lq):
            for j2 in range(j1 + 1, lq):
                for p1 in range(3):
                    for p2 in range(3):
                        a = coef[j1, p1, 0] - coef[j2, p2, 0]
                        b = coef[j1, p1, 1] - coef[j2, p2, 1]
                        c = coef[j1, p1, 2] - coef[j2, p2, 2]
                        if abs(a) <= 1e-12 * scale:
                            if b == 0.0:
                                continue
                            r1 = -c / b
                            r2 = r1
                        else:
                            disc = b * b - 4.0 * a * c
                            if disc < 0.0:
                                disc = 0.0
                            q = -0.5 * (b + math.copysign(math.sqrt(disc), b))
                            r1 = q / a
                            r2 = c / q if q != 0.0 else r1
                        for t in (r1, r2):
                            if not (t > 0.0 and t < 1.0):
                                continue
                            d = _pt_chain_sq(x0 + t * vx, y0 + t * vy, Q)
                            if d > worst:
                                worst = d
    return worst


@njit(cache=True)
def _directed_pairs_sq(P, Q):
    out = np.empty(P.shape[0])
    for i in range(P.shape[0]):
        out[i] = _directed_chain_sq(P[i], Q[i])
    return out


@njit(cache=True)
def _chain_pairs_sq(P, Q):
    # P: (m, Vp, 2), Q: (m, Vq, 2) elementwise
    out = np.empty(P.shape[0])
    for i in range(P.shape[0]):
        out[i] = max(_directed_chain_sq(P[i], Q[i]), _directed_chain_sq(Q[i], P[i]))
    return out


@njit(cache=True)
def _chain_matrix_sq(X, C):
    out = np.empty((X.shape[0], C.shape[0]))
    for i in range(X.shape[0]):
        for j in range(C.shape[0]):
            out[i, j] = max(_directed_chain_sq(X[i], C[j]), _directed_chain_sq(C[j], X[i]))
    return out


def _segment_directed_sq(P, Q):
    d = point_segment_sqdist(P, Q[..., None, 0, :], Q[..., None, 1, :])
    return d.max(axis=-1)


def directed_sq(P, Q):
    """Squared directed Hausdorff distance max_{x in P} min_{y in Q} |xy|^2 (exact, broadcasting).

    With a single-segment ``Q`` the distance to Q is convex along every piece of
    P, so only the vertices of P matter.  Otherwise the maximum over a piece of P
    sits at a piece endpoint or where two of the (convex) distance functions to
    Q's segments cross; those crossings are roots of differences of the
    piecewise-quadratic squared distances, and all of them are tried.
    """
    P = np.asarray(P, dtype=float)
    Q = np.asarray(Q, dtype=float)
    if Q.shape[-2] == 2:
        return _segment_directed_sq(P, Q)
    lead = np.broadcast_shapes(P.shape[:-2], Q.shape[:-2])
    Pb = np.ascontiguousarray(np.broadcast_to(P, lead + P.shape[-2:])).reshape((-1,) + P.shape[-2:])
    Qb = np.ascontiguousarray(np.broadcast_to(Q, lead + Q.shape[-2:])).reshape((-1,) + Q.shape[-2:])
    return _directed_pairs_sq(Pb, Qb).reshape(lead)


def hausdorff_sq(P, Q):
    """Squared Hausdorff distance between vertex chains (broadcasting over leading axes)."""
    P = np.asarray(P, dtype=float)
    Q = np.asarray(Q, dtype=float)
    if P.shape[-2] == 2 and Q.shape[-2] == 2:
        return np.maximum(_segment_directed_sq(P, Q), _segment_directed_sq(Q, P))
    lead = np.broadcast_shapes(P.shape[:-2], Q.shape[:-2])
    Pb = np.ascontiguousarray(np.broadcast_to(P, lead + P.shape[-2:])).reshape((-1,) + P.shape[-2:])
    Qb = np.ascontiguousarray(np.broadcast_to(Q, lead + Q.shape[-2:])).reshape((-1,) + Q.shape[-2:])
    return _chain_pairs_sq(Pb, Qb).reshape(lead)


def sqdist_matrix(X, C):
    """(n, k) matrix of squared Hausdorff distances between items X and centers C."""
    X = np.asarray(X, dtype=float)
    C = np.asarray(C, dtype=float)
    if X.shape[1] == 2 and C.shape[1] == 2:
        return hausdorff_sq(X[:, None], C[None, :])
    return _chain_matrix_sq(np.ascontiguousarray(X), np.ascontiguousarray(C))


def canonical_orientation(X):
    """Reverse each chain whose reversal is lexicographically smaller.

    The Hausdorff distance ignores orientation, so working on canonical copies
    makes every downstream computation exactly invariant to input orientation.
    """
    X = np.array(X, dtype=float, copy=True)
    if X.ndim == 2:
        return canonical_orientation(X[None])[0]
    flat = X.reshape(X.shape[0], -1)
    rev = X[:, ::-1].reshape(X.shape[0], -1)
    diff = rev - flat
    nz = diff != 0
    first = np.argmax(nz, axis=1)
    sign = diff[np.arange(X.shape[0]), first]
    flip = nz.any(axis=1) & (sign < 0)
    X[flip] = X[flip, ::-1]
    return X
