"""
Candidate block sets: Blue-density ranking and greedy disjoint selection.
"""

import math
from dataclasses import dataclass, replace
from typing import List, Optional, Sequence

import numpy as np

from common import SelectionError, get_logger
from graph import Graph
from .config import MultiConfig

logger = get_logger(__name__)

# Block share separating concentrated candidates (>= 0.95) from mixed ones (<= 0.9)
CONCENTRATION = 0.925


@dataclass(frozen=True, eq=False)
class CandidateSet:
    """Top coordinates of one projected column, as sorted positions in Z."""

    vertices: np.ndarray
    source_column: int
    blue_edge_count: int = 0

    def __post_init__(self):
        vertices = np.unique(np.asarray(self.vertices, dtype=np.int64))
        vertices.setflags(write=False)
        object.__setattr__(self, 'vertices', vertices)

    @property
    def size(self) -> int:
        return int(self.vertices.size)

    def overlap(self, other: 'CandidateSet') -> int:
        return int(np.intersect1d(self.vertices, other.vertices, assume_unique=True).size)


def _induced_count(adjacency, vertices: np.ndarray) -> int:
    if len(vertices) == 0:
        return 0
    return int(adjacency[vertices][:, vertices].nnz // 2)


def induced_edge_count(g: Graph, vertices: np.ndarray) -> int:
    """Number of edges of g with both endpoints in vertices."""
    return _induced_count(g.adjacency(), np.asarray(vertices, dtype=np.int64))


def rank_by_blue_count(candidates: Sequence[CandidateSet], blue_in_z: Graph) -> List[CandidateSet]:
    """
    All candidates with their induced Blue edge counts, ordered by count
    descending then source_column ascending.
    """
    adjacency = blue_in_z.adjacency()
    counted = [
        replace(c, blue_edge_count=_induced_count(adjacency, c.vertices))
        for c in candidates
    ]
    return sorted(counted, key=lambda c: (-c.blue_edge_count, c.source_column))


def blue_density_filter(candidates: Sequence[CandidateSet], blue_in_z: Graph) -> List[CandidateSet]:
    """
    Keep the upper half (ceil(len/2)) of candidates by induced Blue edge count.

    Ties are broken by source_column ascending.
    """
    if not candidates:
        raise ValueError("blue_density_filter needs at least one candidate")
    ranked = rank_by_blue_count(candidates, blue_in_z)
    return ranked[:math.ceil(len(ranked) / 2)]


def concentrated_floor(cfg: MultiConfig, set_size: Optional[int] = None) -> float:
    """
    Expected induced Blue edge count of a set with a CONCENTRATION share in
    one block and the rest spread evenly over the other blocks.

    Blue edges carry half the model density: a/2n within, b/2n across.
    """
    s = cfg.set_size if set_size is None else set_size
    shares = np.full(cfg.k, (1 - CONCENTRATION) / (cfg.k - 1)) * s
    shares[0] = CONCENTRATION * s
    within = float(np.sum(shares * (shares - 1) / 2))
    total = s * (s - 1) / 2
    return within * cfg.a / (2 * cfg.n) + (total - within) * cfg.b / (2 * cfg.n)


def select_disjoint(candidates: Sequence[CandidateSet], k: int, overlap_limit: int) -> List[CandidateSet]:
    """
    Greedily accept candidates whose overlap with every accepted set is
    below overlap_limit, in the given order, until k are accepted.

    Raises:
        SelectionError: If fewer than k candidates are accepted
    """
    accepted: List[CandidateSet] = []
    for candidate in candidates:
        if all(candidate.overlap(chosen) < overlap_limit for chosen in accepted):
            accepted.append(candidate)
            if len(accepted) == k:
                logger.debug(f"Selected columns {[c.source_column for c in accepted]}")
                return accepted
    raise SelectionError(
        f"accepted {len(accepted)} of {k} required sets from {len(candidates)} candidates "
        f"(overlap limit {overlap_limit})",
        accepted=len(accepted),
        required=k,
    )
