"""
k-community recovery pipeline.
"""

from .config import MultiConfig
from .candidates import (
    CandidateSet,
    blue_density_filter,
    concentrated_floor,
    induced_edge_count,
    rank_by_blue_count,
    select_disjoint,
)
from .partition import (
    ColumnSpace,
    column_signal,
    column_space,
    correction_multi,
    draw_columns,
    gamma_bound_components,
    gamma_bound_multi,
    merge_multi,
    partition_multi,
    spectral_partition_multi,
    top_coordinates,
)

__all__ = [
    'MultiConfig',
    'CandidateSet',
    'blue_density_filter',
    'concentrated_floor',
    'induced_edge_count',
    'rank_by_blue_count',
    'select_disjoint',
    'ColumnSpace',
    'column_signal',
    'column_space',
    'correction_multi',
    'draw_columns',
    'gamma_bound_components',
    'gamma_bound_multi',
    'merge_multi',
    'partition_multi',
    'spectral_partition_multi',
    'top_coordinates',
]
