"""Project-wide random streams.

All randomness derives from a root seed through Philox, numpy's counter-based
bit generator. A stream is addressed by ``(root_seed, stream, *indices)``; the
tuple becomes the ``spawn_key`` of a ``SeedSequence``, so distinct addresses
give statistically independent, bit-stable streams regardless of call order.
"""

from enum import IntEnum

import numpy as np


class Stream(IntEnum):
    """Named sub-streams of the root seed."""

    GRAPH = 0
    SPLIT = 1
    INIT = 2
    BATCH = 3
    TWO_HOP = 4
    FEATURES = 5
    LABELS = 6


def make_rng(seed: int, stream: Stream, *indices: int) -> np.random.Generator:
    """Return the generator for one addressed stream.

    Args:
        seed: Root seed (non-negative integer)
        stream: Named sub-stream
        indices: Further addressing (split index, grid index, ...)

    Returns:
        A fresh ``Generator`` over ``Philox``
    """
    if seed < 0:
        raise ValueError(f"Seed must be non-negative, got {seed}")
    seq = np.random.SeedSequence(entropy=seed, spawn_key=(int(stream), *(int(i) for i in indices)))
    return np.random.Generator(np.random.Philox(seq))
