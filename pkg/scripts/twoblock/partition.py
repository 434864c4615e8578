"""
Two-community recovery: spectral bisection, neighbor-count correction and
the Red/Blue composition of the two.
"""

import math
from dataclasses import dataclass, replace
from typing import FrozenSet, Optional

import numpy as np

from common import get_logger
from graph import Clustering, Graph, color_edges, half_count
from spectral import SparseSym, project, top_eigenspace, trim_high_degree

logger = get_logger(__name__)

PIPELINE_TOL = 1e-6
DEGENERATE_PROJECTION = 1e-8


@dataclass(frozen=True)
class TwoBlockConfig:
    """
    Parameters of the two-block pipeline.

    d is the expected degree of the uncolored graph; partition_two halves it
    for the Red graph. A vertex is corrected when it has at least
    correction_threshold Blue neighbors in the opposite class.
    """

    a: float
    b: float
    d: Optional[float] = None
    trim_factor: float = 20.0
    correction_threshold: Optional[float] = None
    correction_rounds: int = 1
    tol: float = PIPELINE_TOL

    def __post_init__(self):
        if not self.a > self.b > 0:
            raise ValueError(f"rates must satisfy a > b > 0, got a={self.a}, b={self.b}")
        if self.d is None:
            object.__setattr__(self, 'd', self.a + self.b)
        if self.correction_threshold is None:
            object.__setattr__(self, 'correction_threshold', (self.a + self.b) / 4)
        if self.d <= 0 or self.trim_factor <= 0:
            raise ValueError("d and trim_factor must be positive")
        if self.correction_rounds < 1:
            raise ValueError(f"correction_rounds must be at least 1, got {self.correction_rounds}")

    @property
    def trim_threshold(self) -> float:
        return self.trim_factor * self.d


def spectral_bisection(
    m: SparseSym,
    trimmed: FrozenSet[int] = frozenset(),
    which: str = 'algebraic',
    tol: float = PIPELINE_TOL
) -> Clustering:
    """
    Split the vertices into two equal halves from the top-2 eigenspace of m.

    v1 is the normalized projection of the all-ones vector onto the
    eigenspace W and v2 the unit vector of W orthogonal to v1. Vertices are
    sorted by their v2 coordinate (descending, ties by index) and the top
    half is labeled 0.
    """
    total = m.dimension
    half = half_count(total)
    space = top_eigenspace(m, 2, tol=tol, which=which)

    ones = np.ones(total)
    v1 = project(space, ones)
    norm = np.linalg.norm(v1)
    if norm < DEGENERATE_PROJECTION * math.sqrt(total):
        logger.warning("All-ones vector is nearly orthogonal to the eigenspace; using first basis vector")
        v1 = space.basis[:, 0]
    else:
        v1 = v1 / norm

    c1 = space.basis.T @ v1
    v2 = space.basis @ np.array([-c1[1], c1[0]])

    order = np.lexsort((np.arange(total), -v2))
    labels = np.ones(total, dtype=np.int64)
    labels[order[:half]] = 0
    return Clustering(labels, 2, trimmed)


def spectral_partition_two(g: Graph, cfg: TwoBlockConfig) -> Clustering:
    """
    Trim vertices above trim_factor * d and bisect the trimmed adjacency.

    Trimmed vertices are still labeled and recorded in the output.
    """
    half_count(g.num_vertices)
    matrix, trimmed = trim_high_degree(g, cfg.trim_threshold)
    logger.debug(
        f"Spectral partition on {g.num_vertices} vertices, "
        f"{len(trimmed)} trimmed at degree {cfg.trim_threshold:g}"
    )
    return spectral_bisection(matrix, trimmed, 'algebraic', cfg.tol)


def correction_two(part: Clustering, blue: Graph, cfg: TwoBlockConfig) -> Clustering:
    """
    Flip every vertex with at least correction_threshold Blue neighbors in
    the opposite class.

    Each round decides all flips against the labels at the start of the
    round.
    """
    if part.k != 2:
        raise ValueError(f"correction_two needs a 2-clustering, got k={part.k}")
    if blue.num_vertices != part.num_vertices:
        raise ValueError(
            f"blue graph has {blue.num_vertices} vertices, clustering has {part.num_vertices}"
        )

    adjacency = blue.adjacency()
    labels = part.labels.copy()
    vertices = np.arange(labels.size)
    for round_index in range(cfg.correction_rounds):
        counts = np.asarray((adjacency @ Clustering(labels, 2).one_hot()).todense())
        opposite = counts[vertices, 1 - labels]
        flips = opposite >= cfg.correction_threshold
        logger.debug(f"Correction round {round_index + 1}: {int(flips.sum())} vertices flipped")
        if not flips.any():
            break
        labels = np.where(flips, 1 - labels, labels)
    return Clustering(labels, 2, part.trimmed)


def partition_two(
    g: Graph,
    a: float,
    b: float,
    seed: int,
    cfg: Optional[TwoBlockConfig] = None
) -> Clustering:
    """
    Color edges Red/Blue, bisect the Red graph and correct with the Blue graph.

    The Red graph has half the edge density, so its trimming threshold uses
    d / 2.

    Args:
        g: Observed graph with an even vertex count
        a: Within-block rate
        b: Cross-block rate
        seed: Seed for the 'coloring' substream
        cfg: Optional configuration overriding the defaults for (a, b)

    Returns:
        Corrected 2-clustering
    """
    if cfg is None:
        cfg = TwoBlockConfig(a=a, b=b)
    half_count(g.num_vertices)
    red, blue = color_edges(g, seed)
    logger.debug(f"Colored {red.edge_count} red and {blue.edge_count} blue edges")
    part = spectral_partition_two(red, replace(cfg, d=cfg.d / 2))
    return correction_two(part, blue, cfg)


def gamma_bound_two(a: float, b: float) -> float:
    """2 exp(-0.072 (a-b)^2 / (a+b)), clamped to [0, 1]."""
    if b < 0 or a < b or a + b <= 0:
        raise ValueError(f"rates must satisfy a >= b >= 0 and a > 0, got a={a}, b={b}")
    return min(1.0, 2.0 * math.exp(-0.072 * (a - b) ** 2 / (a + b)))
