"""
gamma-correctness of a clustering against ground truth.

A clustering is gamma-correct when, under some matching pi of output classes
to true blocks, every block V_i keeps at least (1 - gamma)|V_i| of its
vertices in class pi(i). The reported gamma is the smallest such value.
"""

import itertools
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from graph import Clustering, substream

EXHAUSTIVE_MAX_K = 8


@dataclass(frozen=True)
class GammaReport:
    """
    gamma and the matching achieving it.

    matching[i] is the output class matched to true block i and
    per_block_overlap[i] = |V_i ∩ V'_matching[i]|.
    """

    gamma: float
    matching: Tuple[int, ...]
    per_block_overlap: Tuple[int, ...]
    misclassified: int
    num_vertices: int

    @property
    def misclassified_fraction(self) -> float:
        return self.misclassified / self.num_vertices if self.num_vertices else 0.0

    def to_dict(self) -> dict:
        return {
            'gamma': self.gamma,
            'matching': list(self.matching),
            'per_block_overlap': list(self.per_block_overlap),
            'misclassified': self.misclassified,
            'misclassified_fraction': self.misclassified_fraction,
        }


def overlap_matrix(pred: Clustering, truth: Clustering) -> np.ndarray:
    """k x k counts |V_i ∩ V'_j|, truth blocks on rows."""
    k = truth.k
    counts = np.zeros((k, k), dtype=np.int64)
    np.add.at(counts, (truth.labels, pred.labels), 1)
    return counts


def _errors(overlaps: np.ndarray, sizes: np.ndarray) -> np.ndarray:
    safe = np.where(sizes > 0, sizes, 1)
    return np.where(sizes[:, None] > 0, 1.0 - overlaps / safe[:, None], 0.0)


def _exhaustive(errors: np.ndarray, overlaps: np.ndarray) -> Tuple[int, ...]:
    k = errors.shape[0]
    rows = np.arange(k)
    best, best_key = None, None
    for perm in itertools.permutations(range(k)):
        cols = np.array(perm)
        key = (errors[rows, cols].max(), -int(overlaps[rows, cols].sum()))
        if best_key is None or key < best_key:
            best, best_key = perm, key
    return best


def _bottleneck(errors: np.ndarray, overlaps: np.ndarray) -> Tuple[int, ...]:
    """Smallest threshold admitting a perfect matching, then most overlap under it."""
    k = errors.shape[0]
    levels = np.unique(errors)
    lo, hi = 0, levels.size - 1
    while lo < hi:
        mid = (lo + hi) // 2
        allowed = csr_matrix((errors <= levels[mid]).astype(np.int8))
        if np.all(maximum_bipartite_matching(allowed, perm_type='column') >= 0):
            hi = mid
        else:
            lo = mid + 1
    cost = np.where(errors <= levels[lo], -overlaps.astype(float), float(overlaps.sum() + k + 1))
    rows, cols = linear_sum_assignment(cost)
    return tuple(int(c) for c in cols[np.argsort(rows)])


def gamma_correctness(pred: Clustering, truth: Clustering) -> GammaReport:
    """
    Minimal gamma over matchings of pred's classes to truth's blocks.

    Exhaustive over permutations for k <= 8, threshold search with bipartite
    matching above. Ties in gamma go to the matching with most matched
    vertices.

    Raises:
        ValueError: On vertex-count or k mismatch
    """
    if pred.num_vertices != truth.num_vertices:
        raise ValueError(
            f"clusterings cover {pred.num_vertices} and {truth.num_vertices} vertices"
        )
    if pred.k != truth.k:
        raise ValueError(f"k mismatch: predicted {pred.k}, truth {truth.k}")

    overlaps = overlap_matrix(pred, truth)
    sizes = truth.sizes()
    errors = _errors(overlaps, sizes)
    if truth.k <= EXHAUSTIVE_MAX_K:
        matching = _exhaustive(errors, overlaps)
    else:
        matching = _bottleneck(errors, overlaps)

    rows = np.arange(truth.k)
    cols = np.array(matching)
    matched = overlaps[rows, cols]
    return GammaReport(
        gamma=float(errors[rows, cols].max()),
        matching=tuple(int(c) for c in matching),
        per_block_overlap=tuple(int(x) for x in matched),
        misclassified=int(sizes.sum() - matched.sum()),
        num_vertices=truth.num_vertices,
    )


def corrupt_clustering(truth: Clustering, fraction: float, seed: int) -> Clustering:
    """
    Move floor(fraction * |V_i|) vertices of every block to another block.

    Moved vertices and their destinations (uniform over the other k-1
    blocks) come from the 'corruption' substream.
    """
    if not 0 <= fraction <= 1:
        raise ValueError(f"fraction must lie in [0, 1], got {fraction}")
    rng = substream(seed, 'corruption')
    labels = truth.labels.copy()
    for block, members in enumerate(truth.classes()):
        count = int(fraction * members.size)
        if count == 0:
            continue
        moved = rng.choice(members, size=count, replace=False)
        shift = rng.integers(1, truth.k, size=count)
        labels[moved] = (block + shift) % truth.k
    return Clustering(labels, truth.k, truth.trimmed)
