"""
Two-community recovery pipeline.
"""

from .partition import (
    TwoBlockConfig,
    correction_two,
    gamma_bound_two,
    partition_two,
    spectral_bisection,
    spectral_partition_two,
)
from .expected import expected_operator, expected_subspace, expected_vectors, keep_mask

__all__ = [
    'TwoBlockConfig',
    'correction_two',
    'gamma_bound_two',
    'partition_two',
    'spectral_bisection',
    'spectral_partition_two',
    'expected_operator',
    'expected_subspace',
    'expected_vectors',
    'keep_mask',
]
