"""
Sparse matrix containers and degree trimming.
"""

from dataclasses import dataclass, field
from typing import FrozenSet, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.sparse as sp

from common import get_logger
from graph import Graph

logger = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class SparseSym:
    """Symmetric sparse matrix; rows/columns listed in zeroed hold no nonzeros."""

    matrix: sp.csr_matrix
    zeroed: FrozenSet[int] = field(default_factory=frozenset)

    def __post_init__(self):
        matrix = sp.csr_matrix(self.matrix, dtype=np.float64)
        if matrix.shape[0] != matrix.shape[1]:
            raise ValueError(f"symmetric matrix must be square, got {matrix.shape}")
        matrix.eliminate_zeros()
        matrix.sort_indices()
        object.__setattr__(self, 'matrix', matrix)
        object.__setattr__(self, 'zeroed', frozenset(int(v) for v in self.zeroed))

    @classmethod
    def from_graph(cls, g: Graph) -> 'SparseSym':
        return cls(g.adjacency())

    @classmethod
    def from_entries(cls, dimension: int, rows: Sequence[int], cols: Sequence[int],
                     values: Sequence[float]) -> 'SparseSym':
        """Build from one value per unordered pair; (i, j) also sets (j, i)."""
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        values = np.asarray(values, dtype=np.float64)
        off = rows != cols
        r = np.concatenate([rows, cols[off]])
        c = np.concatenate([cols, rows[off]])
        v = np.concatenate([values, values[off]])
        return cls(sp.csr_matrix((v, (r, c)), shape=(dimension, dimension)))

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    def degrees(self) -> np.ndarray:
        """Count of nonzero entries per row."""
        return np.diff(self.matrix.indptr)

    def toarray(self) -> np.ndarray:
        return self.matrix.toarray()


@dataclass(frozen=True, eq=False)
class BipartiteSparse:
    """rows x cols sparse matrix, e.g. the Red Z-by-Y adjacency."""

    matrix: sp.csr_matrix

    def __post_init__(self):
        matrix = sp.csr_matrix(self.matrix, dtype=np.float64)
        matrix.eliminate_zeros()
        matrix.sort_indices()
        object.__setattr__(self, 'matrix', matrix)

    @classmethod
    def from_graph(cls, g: Graph, row_vertices: np.ndarray,
                   col_vertices: np.ndarray) -> 'BipartiteSparse':
        """Edges of g between row_vertices (rows, in order) and col_vertices (columns)."""
        adjacency = g.adjacency()
        return cls(adjacency[np.asarray(row_vertices)][:, np.asarray(col_vertices)])

    @property
    def rows(self) -> int:
        return self.matrix.shape[0]

    @property
    def cols(self) -> int:
        return self.matrix.shape[1]

    def select_columns(self, columns: np.ndarray) -> 'BipartiteSparse':
        return BipartiteSparse(self.matrix[:, np.asarray(columns)])

    def column(self, j: int) -> np.ndarray:
        return self.matrix[:, j].toarray().ravel()

    def transpose(self) -> 'BipartiteSparse':
        return BipartiteSparse(self.matrix.T.tocsr())


def _keep_mask(size: int, drop: np.ndarray) -> sp.dia_matrix:
    keep = np.ones(size)
    keep[drop] = 0.0
    return sp.diags(keep)


def trim_high_degree(
    m: Union[SparseSym, Graph],
    threshold: float,
    degrees: Optional[np.ndarray] = None
) -> Tuple[SparseSym, FrozenSet[int]]:
    """
    Zero out the rows and columns of vertices whose degree exceeds threshold.

    Args:
        m: Matrix or graph to trim
        threshold: Degree limit; vertices strictly above it are trimmed
        degrees: Optional per-vertex degrees to test instead of the row
            nonzero counts of m (e.g. observation-graph degrees)

    Returns:
        (trimmed matrix, set of trimmed vertices)
    """
    if threshold <= 0:
        raise ValueError(f"trim threshold must be positive, got {threshold}")
    if isinstance(m, Graph):
        m = SparseSym.from_graph(m)

    if degrees is None:
        degrees = m.degrees()
    elif len(degrees) != m.dimension:
        raise ValueError(f"{len(degrees)} degrees for dimension {m.dimension}")

    heavy = np.flatnonzero(np.asarray(degrees) > threshold)
    if heavy.size == 0:
        return SparseSym(m.matrix, m.zeroed), frozenset()

    keep = _keep_mask(m.dimension, heavy)
    trimmed = frozenset(int(v) for v in heavy)
    logger.debug(f"Trimmed {heavy.size} of {m.dimension} vertices above degree {threshold}")
    return SparseSym(keep @ m.matrix @ keep, m.zeroed | trimmed), trimmed


def trim_bipartite(
    b: BipartiteSparse,
    threshold: float
) -> Tuple[BipartiteSparse, FrozenSet[int], FrozenSet[int]]:
    """
    Zero out rows and columns whose own nonzero count exceeds threshold.

    Degrees are measured before any zeroing.

    Returns:
        (trimmed matrix, trimmed row indices, trimmed column indices)
    """
    if threshold <= 0:
        raise ValueError(f"trim threshold must be positive, got {threshold}")
    csc = b.matrix.tocsc()
    heavy_rows = np.flatnonzero(np.diff(b.matrix.indptr) > threshold)
    heavy_cols = np.flatnonzero(np.diff(csc.indptr) > threshold)
    if heavy_rows.size == 0 and heavy_cols.size == 0:
        return b, frozenset(), frozenset()

    logger.debug(
        f"Trimmed {heavy_rows.size} rows and {heavy_cols.size} columns above degree {threshold}"
    )
    trimmed = _keep_mask(b.rows, heavy_rows) @ b.matrix @ _keep_mask(b.cols, heavy_cols)
    return (
        BipartiteSparse(trimmed),
        frozenset(int(r) for r in heavy_rows),
        frozenset(int(c) for c in heavy_cols),
    )
