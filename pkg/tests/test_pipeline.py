import math

import numpy as np
import pytest

from segkmeans import _kernels
from segkmeans.errors import InvalidInputError
from segkmeans.frechet_bench import S1, S2, is_frechet_mean
from segkmeans.geometry import Segment
from segkmeans.io import dumps_result
from segkmeans.objective import WeightedSegment, cost_arrays
from segkmeans.optimizer import OptimizerConfig, local_search_arrays
from segkmeans.pipeline import PipelineConfig, error_factor, run_pipeline, run_pipeline_arrays, split_epsilon
from segkmeans.synthetic import as_polylines, as_weighted_segments, clustered_segment_array, random_segment_array

PERP = [WeightedSegment(S1), WeightedSegment(S2)]


@pytest.mark.parametrize("eps", [1e-6, 0.01, 0.1, 0.2, 0.3, 0.499])
def test_split_epsilon(eps):
    e = split_epsilon(eps)
    assert 0 < e < eps
    assert error_factor(e) <= 1 + eps
    # tight: a slightly larger value would break the bound
    assert error_factor(e * (1 + 1e-9)) > 1 + eps


def test_split_epsilon_reference_value():
    # root of e^2 + 3.1 e - 0.1 = 0
    assert split_epsilon(0.1) == pytest.approx((-3.1 + math.sqrt(3.1**2 + 0.4)) / 2, rel=1e-15)


def test_config_validation():
    for bad in (dict(k=0), dict(k=1, epsilon=0.5), dict(k=1, delta=0.0), dict(k=1, ell=0),
                dict(k=1, repetitions=0), dict(k=1, coreset_constant=-1.0)):
        with pytest.raises(InvalidInputError):
            PipelineConfig(**bad)


def test_default_repetitions():
    assert PipelineConfig(k=1, delta=0.25).repetitions == 2
    assert PipelineConfig(k=1, delta=0.1).repetitions == 4
    assert PipelineConfig(k=1, delta=0.49).repetitions == 2
    assert PipelineConfig(k=1, delta=0.25, repetitions=1).repetitions == 1


def test_perpendicular_instance():
    res = run_pipeline(PERP, PipelineConfig(k=1, epsilon=0.1, delta=0.25, seed=2))
    assert res.cost <= 1.1
    assert is_frechet_mean(Segment.from_array(res.centers[0]))
    assert res.error_factor <= 1.1


def test_k_distinct_segments(rng):
    S = as_weighted_segments(random_segment_array(4, rng))
    assert run_pipeline(S, PipelineConfig(k=4)).cost == 0.0


def test_errors():
    with pytest.raises(InvalidInputError):
        run_pipeline([], PipelineConfig(k=1))
    with pytest.raises(InvalidInputError):
        run_pipeline(PERP, PipelineConfig(k=3))


def test_best_of_repetitions_and_full_cost(rng):
    X = random_segment_array(60, rng)
    w = rng.uniform(0.5, 2, 60)
    res = run_pipeline_arrays(X, w, PipelineConfig(k=3, epsilon=0.3, repetitions=3, seed=5))
    assert len(res.repetition_costs) == 3
    assert all(res.cost <= c for c in res.repetition_costs)
    assert res.cost == res.repetition_costs[res.repetition_index]
    assert res.cost == pytest.approx(cost_arrays(X, w, res.centers), rel=1e-12)
    assert res.coreset_meta["size"] >= 1
    assert len(res.labels) == 60


def test_close_to_direct_local_search():
    good = 0
    seeds = range(6)
    for seed in seeds:
        rng = np.random.default_rng(300 + seed)
        X, _ = clustered_segment_array(200, 3, rng, spread=0.15)
        w = np.ones(200)
        direct = local_search_arrays(X, w, 2, OptimizerConfig(seed=seed))
        res = run_pipeline_arrays(X, w, PipelineConfig(k=2, epsilon=0.2, delta=0.25, seed=seed))
        good += res.cost <= 1.25 * direct.cost
    assert good >= math.ceil(0.75 * len(seeds))


def test_deterministic(rng):
    X = random_segment_array(50, rng)
    w = np.ones(50)
    cfg = PipelineConfig(k=2, epsilon=0.3, seed=17)
    a = run_pipeline_arrays(X, w, cfg)
    b = run_pipeline_arrays(X.copy(), w.copy(), PipelineConfig(k=2, epsilon=0.3, seed=17))
    assert dumps_result(a) == dumps_result(b)


def test_segments_and_ell_one_polylines_agree(rng):
    X = random_segment_array(40, rng)
    w = rng.uniform(0.5, 2, 40)
    cfg = PipelineConfig(k=2, epsilon=0.3, seed=3)
    a = run_pipeline(as_weighted_segments(X, w), cfg)
    b = run_pipeline(as_polylines(X), cfg, weights=w)
    assert dumps_result(a) == dumps_result(b)


def test_polyline_pipeline(rng):
    P = as_polylines(rng.uniform(-1, 1, (30, 3, 2)))
    res = run_pipeline(P, PipelineConfig(k=2, ell=2, epsilon=0.3, repetitions=1))
    assert res.centers.shape == (2, 3, 2)
    X = np.stack([p.to_array() for p in P])
    assert res.cost == pytest.approx(cost_arrays(_kernels.canonical_orientation(X), np.ones(30), res.centers))


def test_segments_padded_to_ell(rng):
    S = as_weighted_segments(random_segment_array(12, rng))
    res = run_pipeline(S, PipelineConfig(k=2, ell=2, epsilon=0.3, repetitions=1))
    assert res.centers.shape == (2, 3, 2)


def test_trace_callback(rng):
    X = random_segment_array(30, rng)
    recs = []
    run_pipeline_arrays(X, np.ones(30), PipelineConfig(k=2, epsilon=0.3, repetitions=2), recs.append)
    assert {r["repetition"] for r in recs} == {0, 1}
    assert set(recs[0]) == {"repetition", "restart", "iter", "cost", "centers"}
