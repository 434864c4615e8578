"""
Seeded random substreams.

Every random stage draws from its own numpy Generator derived from the user
seed with SeedSequence(seed, spawn_key=(stage_id,)). Passing the same seed to
the sampler, the edge coloring and the vertex split therefore gives three
independent streams, and identical (seed, stage) pairs reproduce bit-identical
draws on every platform numpy supports.
"""

from typing import Optional

import numpy as np


STAGES = {
    'sampling': 0,
    'coloring': 1,
    'splitting': 2,
    'spectral': 3,
    'corruption': 4,
}


def substream(seed: int, stage: str, index: Optional[int] = None) -> np.random.Generator:
    """
    Generator for one random stage.

    Args:
        seed: Non-negative user seed
        stage: Stage name, one of STAGES
        index: Optional sub-index for stages that need several streams

    Returns:
        numpy Generator (PCG64)
    """
    if stage not in STAGES:
        raise ValueError(f"unknown random stage '{stage}'")
    if seed < 0:
        raise ValueError(f"seed must be non-negative, got {seed}")
    key = (STAGES[stage],) if index is None else (STAGES[stage], index)
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=key))
