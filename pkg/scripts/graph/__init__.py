"""
Graph representation, random-model samplers and random splitting primitives.
"""

from .model import CensorInstance, Clustering, Graph, SbmParams, half_count
from .samplers import sample_censor, sample_sbm
from .splitting import color_edges, split_vertices
from .streams import substream
from .io import (
    read_censor_observations,
    read_clustering,
    read_graph,
    write_censor,
    write_clustering,
    write_graph,
)

__all__ = [
    'CensorInstance',
    'Clustering',
    'Graph',
    'SbmParams',
    'half_count',
    'sample_censor',
    'sample_sbm',
    'color_edges',
    'split_vertices',
    'substream',
    'read_censor_observations',
    'read_clustering',
    'read_graph',
    'write_censor',
    'write_clustering',
    'write_graph',
]
