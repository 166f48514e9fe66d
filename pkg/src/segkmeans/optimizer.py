"""Continuous minimization of the clustering cost, and a grid brute-force oracle.

``local_search`` is alternating minimization: assign every item to its nearest
center, then move each center to a (local) minimizer of its cluster's weighted
sum of squared Hausdorff distances with Nelder-Mead, repeat.  The cost is only
piecewise smooth, so no gradients are used.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize

from . import _kernels
from ._rng import derive_rng
from .errors import InvalidInputError, ResourceLimitError
from .geometry import Segment
from .objective import WeightedSegment, as_arrays, assign_arrays
from .seeding import d2_sample

# relative length below which a center piece counts as collapsed
LENGTH_FLOOR = 1e-7
DEFAULT_GRID_BUDGET = 2_000_000_000


@dataclass
class OptimizerConfig:
    restarts: int = 5
    max_iters: int = 50
    cost_tol_rel: float = 1e-6
    simplex_scale: float = 0.1
    seed: int = 0
    max_evals_per_dim: int = 150

    def __post_init__(self):
        if self.restarts < 1 or self.max_iters < 1:
            raise InvalidInputError("restarts and max_iters must be >= 1")
        if not self.cost_tol_rel > 0:
            raise InvalidInputError("cost_tol_rel must be positive")
        if not self.simplex_scale > 0:
            raise InvalidInputError("simplex_scale must be positive")


@dataclass
class ClusteringResult:
    """Centers (as an ``(k, V, 2)`` vertex array), their cost and the induced assignment.

    Pipeline runs additionally fill in the coreset and repetition bookkeeping.
    """

    centers: np.ndarray
    cost: float
    labels: np.ndarray
    sq_dists: np.ndarray
    trace: list[float] = field(default_factory=list)
    seed: int | None = None
    restarts: int | None = None
    restart_index: int | None = None
    restart_costs: list[float] = field(default_factory=list)
    coreset_meta: dict | None = None
    repetition_index: int | None = None
    repetition_costs: list[float] = field(default_factory=list)
    epsilon_prime: float | None = None
    error_factor: float | None = None
    wall_clock: float | None = None

    @property
    def k(self) -> int:
        return len(self.centers)

    @property
    def center_segments(self) -> list[Segment]:
        if self.centers.shape[1] != 2:
            raise InvalidInputError("centers are polylines, not segments")
        return [Segment.from_array(c) for c in self.centers]


def _bbox_diagonal(X) -> float:
    pts = np.asarray(X).reshape(-1, 2)
    return float(np.hypot(*(pts.max(axis=0) - pts.min(axis=0))))


def distinct_count(X) -> int:
    Xc = _kernels.canonical_orientation(X)
    return len(np.unique(Xc.reshape(len(Xc), -1), axis=0))


def _enforce_length_floor(center, previous, floor):
    """Re-inflate pieces shorter than ``floor`` along the previous piece direction."""
    center = center.copy()
    for i in range(len(center) - 1):
        d = center[i + 1] - center[i]
        if np.hypot(*d) >= floor:
            continue
        ref = previous[i + 1] - previous[i]
        n = np.hypot(*ref)
        u = ref / n if n > 0 else np.array([1.0, 0.0])
        mid = (center[i] + center[i + 1]) / 2
        center[i] = mid - u * floor / 2
        center[i + 1] = mid + u * floor / 2
    return center


def _align(Xc, ref):
    """Flip members so that their vertex order matches ``ref`` as closely as possible."""
    fwd = ((Xc - ref) ** 2).sum(axis=(1, 2))
    rev = ((Xc[:, ::-1] - ref) ** 2).sum(axis=(1, 2))
    return np.where((rev < fwd)[:, None, None], Xc[:, ::-1], Xc)


def _best_member(Xc, wc, max_candidates=300):
    m = len(Xc)
    cand = np.arange(m) if m <= max_candidates else np.linspace(0, m - 1, max_candidates).round().astype(int)
    D = _kernels.sqdist_matrix(Xc[cand], Xc)
    return int(cand[np.argmin(D @ wc)])


def one_mean(Xc, wc, current, cfg: OptimizerConfig, floor: float):
    """Improve one center for a fixed cluster; never returns a worse center.

    Nelder-Mead is started from the cluster's best member and from the weighted
    vertex-wise mean of the (orientation-aligned) members.  It stops on cost
    stagnation only, so plateaus of minimizers do not stall it.
    """
    shape = current.shape

    def f(z):
        return float(np.dot(wc, _kernels.hausdorff_sq(Xc, z.reshape(shape))))

    cur_cost = f(current.ravel())
    best, best_cost = current, cur_cost

    ref = Xc[_best_member(Xc, wc)]
    mean = np.tensordot(wc, _align(Xc, ref), axes=1) / wc.sum()
    pts = Xc.reshape(-1, 2)
    scale = cfg.simplex_scale * float(np.hypot(*(pts.max(axis=0) - pts.min(axis=0))))
    if scale <= 0:
        scale = max(cfg.simplex_scale * floor * 1e7, 1e-12)

    for start in (ref, mean):
        z0 = start.ravel()
        f0 = f(z0)
        dim = z0.size
        simplex = np.vstack([z0, z0 + scale * np.eye(dim)])
        res = minimize(f, z0, method="Nelder-Mead", options={
            "initial_simplex": simplex,
            "xatol": np.inf,  # stagnation of the cost alone terminates
            "fatol": cfg.cost_tol_rel * max(f0, 1e-300),
            "maxfev": cfg.max_evals_per_dim * dim,
        })
        cand = res.x if res.fun <= f0 else z0
        cand = _enforce_length_floor(cand.reshape(shape), current, floor)
        c = f(cand.ravel())
        if c < best_cost:
            best, best_cost = cand, c

    # ignore changes at the level of rounding noise
    if best_cost >= cur_cost - 1e-12 * cur_cost:
        return current, cur_cost
    return best, best_cost


def _alternate(X, w, C, cfg: OptimizerConfig, floor, trace_cb=None, restart=0):
    k = len(C)
    asg = assign_arrays(X, C)
    cost = float(np.sum(w * asg.sq_dists))
    trace = [cost]
    if trace_cb:
        trace_cb({"restart": restart, "iter": 0, "cost": cost, "centers": C.tolist()})
    for it in range(1, cfg.max_iters + 1):
        newC = C.copy()
        labels = asg.labels
        contrib = w * asg.sq_dists
        for j in range(k):
            members = labels == j
            if not members.any():
                # reseed an empty cluster with the worst-served item
                far = int(np.argmax(contrib))
                if contrib[far] > 0:
                    newC[j] = X[far]
                    contrib[far] = 0.0
                continue
            newC[j], _ = one_mean(X[members], w[members], C[j], cfg, floor)
        new_asg = assign_arrays(X, newC)
        new_cost = float(np.sum(w * new_asg.sq_dists))
        if new_cost > cost:
            break  # numerical safeguard: keep the previous, better state
        improved = cost - new_cost
        C, asg = newC, new_asg
        cost = new_cost
        trace.append(cost)
        if trace_cb:
            trace_cb({"restart": restart, "iter": it, "cost": cost, "centers": C.tolist()})
        if improved <= cfg.cost_tol_rel * cost:
            break
    return C, asg, cost, trace


def local_search_arrays(X, w, k: int, cfg: OptimizerConfig | None = None,
                        trace_cb: Callable[[dict], None] | None = None) -> ClusteringResult:
    """Best of ``cfg.restarts`` D^2-seeded alternating minimizations.

    ``X`` is an ``(n, V, 2)`` vertex array; centers get the same vertex count.
    """
    cfg = cfg or OptimizerConfig()
    X = _kernels.canonical_orientation(np.asarray(X, dtype=float))
    w = np.asarray(w, dtype=float)
    if k < 1:
        raise InvalidInputError("k must be >= 1")
    if k > distinct_count(X):
        raise InvalidInputError(f"k={k} exceeds the number of distinct inputs")
    floor = LENGTH_FLOOR * max(_bbox_diagonal(X), 1e-300)

    best = None
    restart_costs = []
    for r in range(cfg.restarts):
        chosen, _, _ = d2_sample(X, w, k, derive_rng(cfg.seed, r))
        C, asg, cost, trace = _alternate(X, w, X[chosen].copy(), cfg, floor, trace_cb, r)
        restart_costs.append(cost)
        key = (cost, tuple(C.ravel()))
        if best is None or key < best[0]:
            best = (key, r, C, asg, trace)
    _, r, C, asg, trace = best
    return ClusteringResult(
        centers=C, cost=float(np.sum(w * asg.sq_dists)), labels=asg.labels, sq_dists=asg.sq_dists,
        trace=trace, seed=cfg.seed, restarts=cfg.restarts, restart_index=r, restart_costs=restart_costs,
    )


def local_search(T: Sequence[WeightedSegment], k: int, cfg: OptimizerConfig | None = None,
                 trace_cb: Callable[[dict], None] | None = None) -> ClusteringResult:
    X, w = as_arrays(T)
    return local_search_arrays(X, w, k, cfg, trace_cb)


@dataclass(frozen=True)
class GridSpec:
    """Axis-aligned box and the number of grid points per axis."""

    xmin: float
    xmax: float
    ymin: float
    ymax: float
    resolution: int

    def __post_init__(self):
        if self.resolution < 2:
            raise InvalidInputError("grid resolution must be >= 2")
        if not (self.xmax > self.xmin and self.ymax > self.ymin):
            raise InvalidInputError("grid box is empty")

    @classmethod
    def for_instance(cls, X, resolution: int, inflate: bool = True) -> GridSpec:
        """Bounding box of all vertices, grown on every side by the box diagonal when ``inflate``."""
        pts = np.asarray(X, dtype=float).reshape(-1, 2)
        lo, hi = pts.min(axis=0), pts.max(axis=0)
        pad = float(np.hypot(*(hi - lo))) if inflate else 0.0
        # keep the box non-empty for axis-parallel inputs
        span = np.maximum(hi - lo, 1e-9 * max(1.0, float(np.abs(pts).max())))
        hi = np.maximum(hi, lo + span)
        return cls(lo[0] - pad, hi[0] + pad, lo[1] - pad, hi[1] + pad, resolution)

    def points(self) -> np.ndarray:
        xs = np.linspace(self.xmin, self.xmax, self.resolution)
        ys = np.linspace(self.ymin, self.ymax, self.resolution)
        gx, gy = np.meshgrid(xs, ys, indexing="ij")
        return np.stack([gx.ravel(), gy.ravel()], axis=1)


def _grid_candidates(points, n_vertices):
    """All vertex chains on the grid: consecutive vertices distinct, one orientation each."""
    g = len(points)
    if n_vertices == 2:
        i, j = np.triu_indices(g, 1)
        return np.stack([points[i], points[j]], axis=1)
    idx = np.array(list(itertools.product(range(g), repeat=n_vertices)))
    ok = np.all(idx[:, 1:] != idx[:, :-1], axis=1)
    idx = idx[ok]
    rev = idx[:, ::-1]
    # lexicographic idx <= reversed idx
    diff = rev - idx
    nz = diff != 0
    first = np.argmax(nz, axis=1)
    keep = ~nz.any(axis=1) | (diff[np.arange(len(idx)), first] > 0)
    return points[idx[keep]]


def _partition_dp(best1, n, k):
    """min over partitions of the item set into <= k groups of sum(best1[group]).

    Returns (cost, list of group masks).
    """
    full = (1 << n) - 1
    # f[j][mask]: best cost covering mask with <= j groups
    f = {1: best1}
    choice = {}
    for j in range(2, k + 1):
        prev = f[j - 1]
        cur = prev.copy()
        ch = np.zeros(full + 1, dtype=np.int64)
        masks = range(1, full + 1) if j < k else [full]
        for mask in masks:
            low = mask & -mask
            rest = mask ^ low
            sub = rest
            # enumerate groups containing the lowest item
            while True:
                g = sub | low
                v = best1[g] + prev[mask ^ g]
                if v < cur[mask]:
                    cur[mask] = v
                    ch[mask] = g
                if sub == 0:
                    break
                sub = (sub - 1) & rest
        f[j] = cur
        choice[j] = ch
    def groups_of(j, mask):
        if mask == 0:
            return []
        if j == 1:
            return [mask]
        g = int(choice[j][mask])
        if g == 0:  # inherited from fewer groups
            return groups_of(j - 1, mask)
        return [g] + groups_of(j - 1, mask ^ g)

    groups = groups_of(k, full)
    return float(f[k][full]), groups


def grid_brute_force_arrays(X, w, k: int, grid: GridSpec, budget: int = DEFAULT_GRID_BUDGET,
                            chunk: int = 4096) -> ClusteringResult:
    """Exact minimum of the cost over all k-tuples of centers with vertices on the grid.

    Any tuple induces a partition of the items and any partition is served best by
    the per-group best grid center, so the minimum over tuples equals the minimum
    over partitions of per-group minima.  The latter needs one pass over the grid
    centers (against all 2^n item subsets) plus a subset DP.
    """
    X = _kernels.canonical_orientation(np.asarray(X, dtype=float))
    w = np.asarray(w, dtype=float)
    n, V = X.shape[0], X.shape[1]
    if not 1 <= k:
        raise InvalidInputError("k must be >= 1")
    g = grid.resolution ** 2
    n_cand = g * (g - 1) // 2 if V == 2 else g * (g - 1) ** (V - 1) // 2
    work = n_cand * (1 << n) + 3 ** n
    if n > 24 or work > budget:
        raise ResourceLimitError(f"grid oracle needs ~{work:.3g} operations, budget is {budget:.3g}")

    cands = _grid_candidates(grid.points(), V)
    subsets = ((np.arange(1 << n)[None, :] >> np.arange(n)[:, None]) & 1).astype(float)
    best1 = np.full(1 << n, np.inf)
    arg1 = np.zeros(1 << n, dtype=np.int64)
    for s in range(0, len(cands), chunk):
        D = _kernels.sqdist_matrix(cands[s:s + chunk], X)  # (chunk, n)
        sub_cost = (D * w) @ subsets
        j = np.argmin(sub_cost, axis=0)
        v = sub_cost[j, np.arange(1 << n)]
        better = v < best1
        best1[better] = v[better]
        arg1[better] = j[better] + s
    best1[0] = 0.0

    _, groups = _partition_dp(best1, n, min(k, n))
    C = [cands[arg1[gm]] for gm in groups]
    fill = 0
    while len(C) < k:
        C.append(cands[fill])  # unused extra centers cannot raise the cost
        fill += 1
    C = np.stack(C)
    asg = assign_arrays(X, C)
    return ClusteringResult(centers=C, cost=float(np.sum(w * asg.sq_dists)),
                            labels=asg.labels, sq_dists=asg.sq_dists)


def grid_brute_force(S: Sequence[WeightedSegment], k: int, grid: GridSpec,
                     budget: int = DEFAULT_GRID_BUDGET) -> ClusteringResult:
    X, w = as_arrays(S)
    return grid_brute_force_arrays(X, w, k, grid, budget)


def certify(result: ClusteringResult, oracle: ClusteringResult, epsilon: float, abs_tol: float = 1e-9) -> bool:
    """True iff result.cost <= (1 + epsilon) * oracle.cost + abs_tol."""
    return bool(result.cost <= (1 + epsilon) * oracle.cost + abs_tol)


def instance_diameter(X) -> float:
    return _bbox_diagonal(X)

