"""
Seeded, splittable random streams
"""

import numpy as np


# Stream tags keep sub-streams of one replica apart
STREAM_ENSEMBLE = 1
STREAM_UNIFORMS = 2
STREAM_POISSON = 3
STREAM_OUTSIDE = 4
STREAM_PAIRS = 5
STREAM_WALK = 6
STREAM_BRANCHING = 7
STREAM_CHECKS = 8

MAX_SEED = 2 ** 64


def substream(seed: int, *key: int) -> np.random.Generator:
    """Return an independent generator for the sub-stream ``(seed, *key)``"""
    if not 0 <= int(seed) < MAX_SEED:
        raise ValueError(f"seed must be a 64-bit unsigned value, got {seed}")
    seq = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.PCG64(seq))


def derive_seed(seed: int, *key: int) -> int:
    """Derive a 64-bit child seed, used to label replicas in reports"""
    seq = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in key))
    return int(seq.generate_state(1, dtype=np.uint64)[0])
