"""Random instance generators for tests and benchmarks."""

import numpy as np

from .geometry import Segment
from .objective import WeightedSegment
from .polyline import Polyline


def random_segment_array(n, rng, low=-1.0, high=1.0):
    """(n, 2, 2) array of segments with endpoints uniform in [low, high]^2."""
    X = rng.uniform(low, high, size=(n, 2, 2))
    bad = np.all(X[:, 0] == X[:, 1], axis=1)
    while bad.any():  # measure zero, but cheap to guard
        X[bad, 1] = rng.uniform(low, high, size=(int(bad.sum()), 2))
        bad = np.all(X[:, 0] == X[:, 1], axis=1)
    return X


def clustered_segment_array(n, k, rng, spread=0.1, box=1.0):
    """Segments scattered around k random prototype segments."""
    protos = random_segment_array(k, rng, -box, box)
    labels = rng.integers(0, k, size=n)
    X = protos[labels] + rng.normal(0.0, spread, size=(n, 2, 2))
    return X, labels


def random_polyline_array(n, ell, rng, low=-1.0, high=1.0):
    return rng.uniform(low, high, size=(n, ell + 1, 2))


def as_weighted_segments(X, w=None):
    if w is None:
        w = np.ones(len(X))
    return [WeightedSegment(Segment.from_array(x), float(wi)) for x, wi in zip(X, w)]


def as_polylines(X):
    return [Polyline.from_array(x) for x in X]
