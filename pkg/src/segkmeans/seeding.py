"""Bicriteria seeding: ceil(beta * k) discrete centers picked by weighted D^2 sampling."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _kernels
from ._rng import derive_rng
from .errors import InvalidInputError
from .objective import WeightedSegment, as_arrays

DEFAULT_BETA = 4.0


def default_rounds(delta: float) -> int:
    return math.ceil(10 * math.log2(2 / delta))


@dataclass
class BicriteriaResult:
    """Discrete centers (input indices) and the partition they induce.

    ``cluster_costs[i]`` is the weighted cost of cluster i w.r.t. its center and
    ``sq_dists`` the squared distance of every item to its own center.
    ``alpha_empirical`` is only filled in when a reference optimum is supplied.
    """

    centers: list[int]
    labels: np.ndarray
    sq_dists: np.ndarray
    cluster_costs: np.ndarray
    cluster_sizes: np.ndarray
    cost: float
    k: int
    beta: float
    round_index: int = 0
    alpha_empirical: float | None = None
    clusters: list[np.ndarray] = field(init=False, repr=False)

    def __post_init__(self):
        self.clusters = [np.flatnonzero(self.labels == i) for i in range(len(self.centers))]

    @property
    def k_prime(self) -> int:
        return len(self.centers)


def d2_sample(X: np.ndarray, w: np.ndarray, n_centers: int, rng: np.random.Generator):
    """Weighted D^2 sampling of up to ``n_centers`` distinct items.

    Exactly one uniform draw is consumed per center, so runs sharing a seed
    share their prefix of chosen centers.  Stops early once every item is at
    distance zero from a chosen center.

    Returns (chosen indices, labels, squared distance to own center).
    """
    n = len(X)
    chosen: list[int] = []
    labels = np.zeros(n, dtype=np.int64)
    min_d = np.full(n, np.inf)
    for i in range(n_centers):
        mass = w if i == 0 else w * min_d
        cum = np.cumsum(mass)
        total = cum[-1]
        if not total > 0:
            break
        idx = int(np.searchsorted(cum, rng.random() * total, side="right"))
        idx = min(idx, n - 1)
        while mass[idx] <= 0:  # guard against landing on a zero-mass slot through rounding
            idx -= 1
        chosen.append(idx)
        d = _kernels.hausdorff_sq(X, X[idx])
        closer = d < min_d
        labels[closer] = i
        min_d = np.where(closer, d, min_d)
    return chosen, labels, min_d


def bicriteria_arrays(X, w, k: int, beta: float = DEFAULT_BETA, rounds: int | None = None,
                      seed: int = 0, delta: float = 0.25) -> BicriteriaResult:
    n = len(X)
    if not 1 <= k <= n:
        raise InvalidInputError(f"need 1 <= k <= n, got k={k}, n={n}")
    if beta < 1:
        raise InvalidInputError(f"beta must be >= 1, got {beta}")
    rounds = default_rounds(delta) if rounds is None else int(rounds)
    if rounds < 1:
        raise InvalidInputError("rounds must be >= 1")
    k_prime = min(n, math.ceil(beta * k))

    best = None
    for r in range(rounds):
        chosen, labels, sq = d2_sample(X, w, k_prime, derive_rng(seed, r))
        c = float(np.sum(w * sq))
        if best is None or c < best[0]:
            best = (c, r, chosen, labels, sq)
    c, r, chosen, labels, sq = best
    kp = len(chosen)
    return BicriteriaResult(
        centers=chosen,
        labels=labels,
        sq_dists=sq,
        cluster_costs=np.bincount(labels, weights=w * sq, minlength=kp),
        cluster_sizes=np.bincount(labels, minlength=kp),
        cost=c,
        k=k,
        beta=float(beta),
        round_index=r,
    )


def bicriteria_seed(S: Sequence[WeightedSegment], k: int, beta: float = DEFAULT_BETA,
                    rounds: int | None = None, seed: int = 0, delta: float = 0.25,
                    reference_cost: float | None = None) -> BicriteriaResult:
    """Best-of-``rounds`` weighted D^2 seeding with ``min(n, ceil(beta*k))`` centers.

    If ``reference_cost`` (e.g. a grid-oracle optimum for k centers) is given,
    the ratio cost / reference_cost is recorded as ``alpha_empirical``.
    """
    X, w = as_arrays(S)
    res = bicriteria_arrays(_kernels.canonical_orientation(X), w, k, beta, rounds, seed, delta)
    if reference_cost is not None:
        res.alpha_empirical = empirical_alpha(res, reference_cost)
    return res


def empirical_alpha(res: BicriteriaResult, reference_cost: float) -> float:
    if reference_cost <= 0:
        return 1.0 if res.cost <= 0 else math.inf
    return res.cost / reference_cost
