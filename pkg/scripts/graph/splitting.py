"""
Random splitting primitives: Red/Blue edge coloring and Y/Z vertex halving.
"""

from typing import Tuple

import numpy as np

from .model import Graph
from .streams import substream


def color_edges(g: Graph, seed: int) -> Tuple[Graph, Graph]:
    """
    Color every edge Red or Blue independently with probability 1/2.

    Edges are visited in ascending (u, v) order, so the coloring depends only
    on the graph and the 'coloring' substream of seed.

    Returns:
        (red, blue) graphs on g's vertex set; edge-disjoint, union is g
    """
    rng = substream(seed, 'coloring')
    red_mask = rng.random(g.edge_count) < 0.5
    return g.edge_subgraph(red_mask), g.edge_subgraph(~red_mask)


def split_vertices(num_vertices: int, seed: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Place every vertex in Y or Z independently with probability 1/2.

    Returns:
        (y_set, z_set) as ascending vertex arrays
    """
    if num_vertices < 0:
        raise ValueError(f"num_vertices must be non-negative, got {num_vertices}")
    rng = substream(seed, 'splitting')
    in_y = rng.random(num_vertices) < 0.5
    return np.flatnonzero(in_y), np.flatnonzero(~in_y)
