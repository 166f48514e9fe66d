"""Coreset-then-optimize pipeline with repetitions and full-input selection."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from . import _kernels
from ._rng import child_seed
from .coreset import DEFAULT_ALPHA, DEFAULT_CORESET_CONSTANT, Coreset, construct_coreset_arrays
from .errors import InvalidInputError
from .objective import WeightedSegment, as_arrays, assign_arrays
from .optimizer import ClusteringResult, OptimizerConfig, distinct_count, local_search_arrays
from .polyline import Polyline, _weights, polylines_to_array
from .seeding import DEFAULT_BETA


def error_factor(eps_prime: float) -> float:
    return (1 + eps_prime) ** 2 / (1 - eps_prime)


def split_epsilon(epsilon: float) -> float:
    """Largest e' with (1+e')^2/(1-e') <= 1+epsilon.

    Closed form from the quadratic e'^2 + (3+eps) e' - eps = 0, then nudged
    down if rounding put it a hair above the bound.
    """
    if not 0 < epsilon < 0.5:
        raise InvalidInputError(f"epsilon must lie in (0, 1/2), got {epsilon}")
    b = 3 + epsilon
    e = (-b + math.sqrt(b * b + 4 * epsilon)) / 2
    while error_factor(e) > 1 + epsilon:
        e = math.nextafter(e, 0.0)
    return e


@dataclass
class PipelineConfig:
    k: int
    epsilon: float = 0.1
    delta: float = 0.25
    ell: int = 1
    seed: int = 0
    coreset_constant: float = DEFAULT_CORESET_CONSTANT
    alpha: float = DEFAULT_ALPHA
    beta: float = DEFAULT_BETA
    seeding_rounds: int | None = None
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    repetitions: int | None = None
    epsilon_prime: float = field(init=False)

    def __post_init__(self):
        if self.k < 1:
            raise InvalidInputError("k must be >= 1")
        if not 0 < self.delta < 0.5:
            raise InvalidInputError(f"delta must lie in (0, 1/2), got {self.delta}")
        if self.ell < 1:
            raise InvalidInputError("ell must be >= 1")
        if not self.coreset_constant > 0:
            raise InvalidInputError("coreset constant must be positive")
        if self.repetitions is None:
            self.repetitions = max(1, math.ceil(math.log2(1 / self.delta)))
        if self.repetitions < 1:
            raise InvalidInputError("repetitions must be >= 1")
        self.epsilon_prime = split_epsilon(self.epsilon)


def _pad_centers(X, w, C, k):
    # the coreset may hold fewer than k distinct items: add the worst-served inputs
    C = list(C)
    while len(C) < k:
        d = w * assign_arrays(X, np.stack(C)).sq_dists
        C.append(X[int(np.argmax(d))])
    return np.stack(C)


def _tag_repetition(trace_cb, r):
    return lambda rec: trace_cb({"repetition": r, **rec})


def repetition_coreset(X, w, cfg: PipelineConfig, r: int) -> Coreset:
    """The coreset drawn in repetition ``r`` (``X`` in canonical orientation)."""
    core, _, _ = construct_coreset_arrays(
        X, w, cfg.k, cfg.epsilon_prime, cfg.delta, child_seed(cfg.seed, r, 0),
        alpha=cfg.alpha, beta=cfg.beta, c=cfg.coreset_constant, rounds=cfg.seeding_rounds)
    return core


def run_pipeline_arrays(X, w, cfg: PipelineConfig,
                        trace_cb: Callable[[dict], None] | None = None) -> ClusteringResult:
    """Run all repetitions on an ``(n, ell+1, 2)`` array and keep the best full-input cost."""
    t0 = time.perf_counter()
    X = np.asarray(X, dtype=float)
    w = np.asarray(w, dtype=float)
    if len(X) == 0:
        raise InvalidInputError("empty input")
    X = _kernels.canonical_orientation(X)
    if cfg.k > distinct_count(X):
        raise InvalidInputError(f"k={cfg.k} exceeds the number of distinct inputs")

    eps = cfg.epsilon_prime
    best = None
    rep_costs = []
    for r in range(cfg.repetitions):
        core = repetition_coreset(X, w, cfg, r)
        Xt, wt = X[core.indices], core.weights
        kk = min(cfg.k, distinct_count(Xt))
        opt = replace(cfg.optimizer, seed=child_seed(cfg.seed, r, 1),
                      cost_tol_rel=min(cfg.optimizer.cost_tol_rel, eps))
        cb = None if trace_cb is None else _tag_repetition(trace_cb, r)
        res = local_search_arrays(Xt, wt, kk, opt, cb)
        C = _pad_centers(X, w, res.centers, cfg.k)
        asg = assign_arrays(X, C)
        full = float(np.sum(w * asg.sq_dists))
        rep_costs.append(full)
        if best is None or full < best[0]:
            best = (full, r, C, asg, res, core)

    full, r, C, asg, res, core = best
    return ClusteringResult(
        centers=C, cost=full, labels=asg.labels, sq_dists=asg.sq_dists, trace=res.trace,
        seed=cfg.seed, restarts=cfg.optimizer.restarts, restart_index=res.restart_index,
        restart_costs=res.restart_costs, coreset_meta=core.meta, repetition_index=r,
        repetition_costs=rep_costs, epsilon_prime=eps, error_factor=error_factor(eps),
        wall_clock=time.perf_counter() - t0,
    )


def input_arrays(S: Sequence, ell: int = 1, weights=None):
    """Vertex array and weights for a list of WeightedSegments or Polylines."""
    if len(S) == 0:
        raise InvalidInputError("empty input")
    if all(isinstance(s, WeightedSegment) for s in S):
        X, w = as_arrays(S)
        if ell > 1:
            X = polylines_to_array([Polyline.from_array(x) for x in X], ell)
        return X, w
    if all(isinstance(s, Polyline) for s in S):
        X = polylines_to_array(S, ell)
        return X, _weights(weights, len(X))
    raise InvalidInputError("input must be all WeightedSegments or all Polylines")


def run_pipeline(S: Sequence, cfg: PipelineConfig, weights=None,
                 trace_cb: Callable[[dict], None] | None = None) -> ClusteringResult:
    """Cluster segments or polylines: coreset per repetition, optimize on it, select on the full input."""
    X, w = input_arrays(S, cfg.ell, weights)
    return run_pipeline_arrays(X, w, cfg, trace_cb)
