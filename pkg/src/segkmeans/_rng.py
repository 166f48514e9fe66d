import numpy as np


def derive_rng(seed: int, *keys: int) -> np.random.Generator:
    """Independent, reproducible stream for (seed, *keys)."""
    return np.random.default_rng(np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in keys)))


def child_seed(seed: int, *keys: int) -> int:
    """A 63-bit integer seed for a sub-stage, derived from (seed, *keys)."""
    return int(derive_rng(seed, *keys).integers(2**63))
