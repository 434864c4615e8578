"""
Censor block model recovery.

The expected observation matrix is (p/2)J - (p(1-2eps)/2) s s^T for the +-1
block vector s, so the block signal sits on a negative eigenvalue. The
spectral step therefore ranks eigenvalues by magnitude.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from common import get_logger
from graph import CensorInstance, Clustering, Graph, half_count
from spectral import SparseSym, trim_high_degree
from twoblock import spectral_bisection

logger = get_logger(__name__)

DEGREE_SOURCES = ('graph', 'labels')


@dataclass(frozen=True)
class CensorConfig:
    """
    Vertices whose degree exceeds trim_factor * p * N are trimmed, N the
    vertex count. degree selects G-degrees ('graph') or the count of
    y = 1 entries per row ('labels').
    """

    trim_factor: float = 20.0
    degree: str = 'graph'
    tol: float = 1e-6

    def __post_init__(self):
        if self.degree not in DEGREE_SOURCES:
            raise ValueError(f"degree must be one of {DEGREE_SOURCES}, got '{self.degree}'")
        if self.trim_factor <= 0 or self.tol <= 0:
            raise ValueError("trim_factor and tol must be positive")


def observation_matrix(g: Graph, edge_labels: np.ndarray) -> SparseSym:
    """
    Symmetric 0/1 matrix with a one at every edge of g labeled 1.

    edge_labels is aligned with g.edges().
    """
    edge_labels = np.asarray(edge_labels)
    if edge_labels.size != g.edge_count:
        raise ValueError(f"{edge_labels.size} edge labels for {g.edge_count} edges")
    u, v = g.edges()
    ones = edge_labels == 1
    return SparseSym.from_entries(g.num_vertices, u[ones], v[ones], np.ones(int(ones.sum())))


def build_observation_matrix(inst: CensorInstance) -> SparseSym:
    """Symmetric 0/1 matrix with a one at every edge observed with y = 1."""
    return observation_matrix(inst.graph, inst.edge_labels)


def spectral_partition_censor(
    y: SparseSym,
    p: float,
    g: Graph,
    cfg: Optional[CensorConfig] = None
) -> Clustering:
    """
    Trim high-degree vertices and bisect the top-2 (by magnitude)
    eigenspace of the observation matrix.

    Args:
        y: Observation matrix on 2n vertices
        p: Edge probability of G
        g: Observation graph, for 'graph' degrees
        cfg: Optional configuration

    Returns:
        2-clustering with the trimmed vertices recorded
    """
    if cfg is None:
        cfg = CensorConfig()
    if not 0 < p <= 1:
        raise ValueError(f"edge probability p must lie in (0, 1], got {p}")
    if g.num_vertices != y.dimension:
        raise ValueError(f"graph has {g.num_vertices} vertices, matrix dimension {y.dimension}")
    half_count(y.dimension)

    threshold = cfg.trim_factor * p * y.dimension
    degrees = g.degrees() if cfg.degree == 'graph' else y.degrees()
    matrix, trimmed = trim_high_degree(y, threshold, degrees)
    logger.debug(f"Censor partition: {len(trimmed)} vertices trimmed at degree {threshold:g}")
    return spectral_bisection(matrix, trimmed, 'magnitude', cfg.tol)


def partition_censor(inst: CensorInstance, cfg: Optional[CensorConfig] = None) -> Clustering:
    """Build the observation matrix of inst and run spectral_partition_censor."""
    return spectral_partition_censor(build_observation_matrix(inst), inst.p, inst.graph, cfg)
