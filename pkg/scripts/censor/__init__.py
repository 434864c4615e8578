"""
Censor block model recovery pipeline.
"""

from .partition import (
    CensorConfig,
    build_observation_matrix,
    observation_matrix,
    partition_censor,
    spectral_partition_censor,
)

__all__ = [
    'CensorConfig',
    'build_observation_matrix',
    'observation_matrix',
    'partition_censor',
    'spectral_partition_censor',
]
