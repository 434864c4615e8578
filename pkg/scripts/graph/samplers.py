"""
Random graph samplers: stochastic block model and censor block model.

Both samplers draw, per block pair, a binomial edge count and then that many
distinct vertex pairs without replacement, which is exactly the law of
independent Bernoulli edges and avoids touching all O(N^2) pairs.
"""

from typing import Tuple

import numpy as np

from common import get_logger
from .model import CensorInstance, Clustering, Graph, SbmParams
from .streams import substream

logger = get_logger(__name__)


def _triangle_pairs(index: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Decode t in [0, C(m, 2)) to the pair (v, u), v < u, with t = u(u-1)/2 + v."""
    u = np.floor((1.0 + np.sqrt(1.0 + 8.0 * index.astype(np.float64))) / 2.0).astype(np.int64)
    # float rounding can be off by one either way for large t
    u = np.where(u * (u - 1) // 2 > index, u - 1, u)
    u = np.where((u + 1) * u // 2 <= index, u + 1, u)
    v = index - u * (u - 1) // 2
    return v, u


def _sample_pair_indices(rng: np.random.Generator, population: int, p: float) -> np.ndarray:
    if population == 0 or p <= 0:
        return np.empty(0, dtype=np.int64)
    count = int(rng.binomial(population, min(p, 1.0)))
    if count == 0:
        return np.empty(0, dtype=np.int64)
    return np.sort(rng.choice(population, size=count, replace=False)).astype(np.int64)


def _within_block(rng: np.random.Generator, start: int, size: int, p: float):
    index = _sample_pair_indices(rng, size * (size - 1) // 2, p)
    v, u = _triangle_pairs(index)
    return v + start, u + start


def _across_blocks(rng: np.random.Generator, start_i: int, start_j: int,
                   rows: int, cols: int, p: float):
    index = _sample_pair_indices(rng, rows * cols, p)
    return index // cols + start_i, index % cols + start_j


def sample_sbm(params: SbmParams, seed: int) -> Tuple[Graph, Clustering]:
    """
    Sample a graph from the stochastic block model.

    Vertex v belongs to block v // block_size. Within-block pairs are edges
    with probability a / n_ref, cross pairs with b / n_ref.

    Args:
        params: Model parameters
        seed: Seed for the 'sampling' substream

    Returns:
        (graph, ground-truth clustering)
    """
    rng = substream(seed, 'sampling')
    size = params.block_size
    us, vs = [], []

    for i in range(params.k):
        u, v = _within_block(rng, i * size, size, params.p_in)
        us.append(u)
        vs.append(v)
        for j in range(i + 1, params.k):
            u, v = _across_blocks(rng, i * size, j * size, size, size, params.p_out)
            us.append(u)
            vs.append(v)

    graph = Graph.from_edges(params.num_vertices, np.concatenate(us), np.concatenate(vs))
    logger.debug(
        f"Sampled SBM with {graph.num_vertices} vertices, {graph.edge_count} edges "
        f"(k={params.k}, a={params.a}, b={params.b})"
    )
    return graph, Clustering.contiguous(params.k, size)


def sample_censor(n: int, p: float, epsilon: float, seed: int) -> CensorInstance:
    """
    Sample a censor block model instance on 2n vertices.

    The graph is Erdos-Renyi G(2n, p). Vertices 0..n-1 have hidden bit 0,
    vertices n..2n-1 have hidden bit 1. Each edge carries x_u xor x_v,
    flipped with probability epsilon.

    Raises:
        ValueError: If p is outside (0, 1] or epsilon outside (0, 1/2)
    """
    if not 0 < p <= 1:
        raise ValueError(f"edge probability p must lie in (0, 1], got {p}")
    if not 0 < epsilon < 0.5:
        raise ValueError(f"flip probability epsilon must lie in (0, 1/2), got {epsilon}")
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")

    rng = substream(seed, 'sampling')
    total = 2 * n
    u, v = _triangle_pairs(_sample_pair_indices(rng, total * (total - 1) // 2, p))
    graph = Graph.from_edges(total, u, v)

    hidden = np.repeat(np.array([0, 1], dtype=np.int8), n)
    eu, ev = graph.edges()
    flips = rng.random(eu.size) < epsilon
    labels = (hidden[eu] ^ hidden[ev] ^ flips.astype(np.int8)).astype(np.int8)

    logger.debug(f"Sampled censor instance with {total} vertices, {graph.edge_count} edges")
    return CensorInstance(graph=graph, edge_labels=labels, hidden_x=hidden, p=p, epsilon=epsilon)
