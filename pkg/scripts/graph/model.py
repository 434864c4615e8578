"""
Core value types: graphs, block-model parameters, clusterings and censor
instances.

All types are immutable after construction. Array fields are stored as
read-only numpy arrays so instances can be shared across workers.
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import FrozenSet, Iterable, List, Tuple

import numpy as np
import scipy.sparse as sp


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class Graph:
    """
    Undirected simple graph in compressed adjacency form.

    indptr/indices follow the CSR convention: the neighbors of v are
    indices[indptr[v]:indptr[v + 1]], sorted ascending.
    """

    num_vertices: int
    indptr: np.ndarray
    indices: np.ndarray

    @classmethod
    def from_edges(cls, num_vertices: int, u: Iterable[int], v: Iterable[int]) -> 'Graph':
        """
        Build a graph from endpoint arrays.

        Duplicate pairs collapse to one edge; (u, v) and (v, u) are the same edge.

        Raises:
            ValueError: On self-loops or endpoints outside 0..num_vertices-1
        """
        if num_vertices < 0:
            raise ValueError(f"num_vertices must be non-negative, got {num_vertices}")
        u = np.asarray(list(u) if not isinstance(u, np.ndarray) else u, dtype=np.int64)
        v = np.asarray(list(v) if not isinstance(v, np.ndarray) else v, dtype=np.int64)
        if u.shape != v.shape:
            raise ValueError("endpoint arrays differ in length")
        if u.size:
            if min(u.min(), v.min()) < 0 or max(u.max(), v.max()) >= num_vertices:
                raise ValueError(f"edge endpoint outside 0..{num_vertices - 1}")
            if np.any(u == v):
                raise ValueError("self-loops are not allowed")

        lo = np.minimum(u, v)
        hi = np.maximum(u, v)
        keys = np.unique(lo * max(num_vertices, 1) + hi)
        lo = keys // max(num_vertices, 1)
        hi = keys % max(num_vertices, 1)

        rows = np.concatenate([lo, hi])
        cols = np.concatenate([hi, lo])
        adjacency = sp.csr_matrix(
            (np.ones(rows.size, dtype=np.float64), (rows, cols)),
            shape=(num_vertices, num_vertices),
        )
        adjacency.sort_indices()
        return cls(
            num_vertices=num_vertices,
            indptr=_frozen(adjacency.indptr.astype(np.int64)),
            indices=_frozen(adjacency.indices.astype(np.int64)),
        )

    @classmethod
    def empty(cls, num_vertices: int) -> 'Graph':
        return cls.from_edges(num_vertices, np.empty(0, np.int64), np.empty(0, np.int64))

    @property
    def edge_count(self) -> int:
        return int(self.indices.size // 2)

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def neighbors(self, vertex: int) -> np.ndarray:
        return self.indices[self.indptr[vertex]:self.indptr[vertex + 1]]

    def edges(self) -> Tuple[np.ndarray, np.ndarray]:
        """Return (u, v) endpoint arrays with u < v, in ascending (u, v) order."""
        rows = np.repeat(np.arange(self.num_vertices, dtype=np.int64), self.degrees())
        upper = self.indices > rows
        return rows[upper], self.indices[upper]

    @cached_property
    def _adjacency(self) -> sp.csr_matrix:
        matrix = sp.csr_matrix(
            (np.ones(self.indices.size, dtype=np.float64), self.indices, self.indptr),
            shape=(self.num_vertices, self.num_vertices),
        )
        return matrix

    def adjacency(self) -> sp.csr_matrix:
        """Adjacency matrix as a scipy CSR matrix (a fresh copy)."""
        return self._adjacency.copy()

    def induced(self, vertices: Iterable[int]) -> 'Graph':
        """
        Subgraph induced by an ordered vertex list, relabeled to positions 0..len-1.
        """
        order = np.asarray(list(vertices) if not isinstance(vertices, np.ndarray) else vertices,
                           dtype=np.int64)
        sub = self._adjacency[order][:, order].tocoo()
        return Graph.from_edges(order.size, sub.row, sub.col)

    def edge_subgraph(self, mask: np.ndarray) -> 'Graph':
        """Graph on the same vertex set keeping the edges where mask is True (edges() order)."""
        u, v = self.edges()
        mask = np.asarray(mask, dtype=bool)
        if mask.shape != u.shape:
            raise ValueError(f"mask has {mask.size} entries for {u.size} edges")
        return Graph.from_edges(self.num_vertices, u[mask], v[mask])


@dataclass(frozen=True)
class SbmParams:
    """
    Stochastic block model parameters.

    Within-block pairs are edges with probability a / n_ref, cross pairs with
    b / n_ref. Use two_block or k_block rather than the raw constructor.
    """

    block_size: int
    k: int
    a: float
    b: float
    n_ref: int

    def __post_init__(self):
        if self.k < 2:
            raise ValueError(f"block count k must be at least 2, got {self.k}")
        if self.block_size < 1 or self.n_ref < 1:
            raise ValueError("block_size and n_ref must be positive")
        if self.b < 0 or self.a < self.b:
            raise ValueError(f"rates must satisfy a >= b >= 0, got a={self.a}, b={self.b}")
        if self.a / self.n_ref > 1 or self.b / self.n_ref > 1:
            raise ValueError(
                f"edge probabilities exceed 1: a/n_ref={self.a / self.n_ref}, "
                f"b/n_ref={self.b / self.n_ref}"
            )

    @classmethod
    def two_block(cls, n: int, a: float, b: float) -> 'SbmParams':
        """Two blocks of n vertices each (2n vertices total), probabilities a/n and b/n."""
        return cls(block_size=n, k=2, a=a, b=b, n_ref=n)

    @classmethod
    def k_block(cls, n: int, k: int, a: float, b: float) -> 'SbmParams':
        """k blocks of n/k vertices (n total), probabilities a/n and b/n."""
        if k < 2 or n % k:
            raise ValueError(f"k must be >= 2 and divide n, got n={n}, k={k}")
        return cls(block_size=n // k, k=k, a=a, b=b, n_ref=n)

    @property
    def num_vertices(self) -> int:
        return self.block_size * self.k

    @property
    def p_in(self) -> float:
        return self.a / self.n_ref

    @property
    def p_out(self) -> float:
        return self.b / self.n_ref

    @property
    def expected_degree(self) -> float:
        """The d of the trimming rule: a + b for two blocks, a + (k-1)b in general."""
        return self.a + (self.k - 1) * self.b

    def block_of(self, vertices: np.ndarray) -> np.ndarray:
        return np.asarray(vertices) // self.block_size


@dataclass(frozen=True, eq=False)
class Clustering:
    """Per-vertex block labels; trimmed vertices are labeled but flagged."""

    labels: np.ndarray
    k: int
    trimmed: FrozenSet[int] = field(default_factory=frozenset)

    def __post_init__(self):
        labels = np.array(self.labels, dtype=np.int64)
        if labels.ndim != 1:
            raise ValueError("labels must be a flat sequence")
        if self.k < 1:
            raise ValueError(f"k must be positive, got {self.k}")
        if labels.size and (labels.min() < 0 or labels.max() >= self.k):
            raise ValueError(f"labels must lie in 0..{self.k - 1}")
        object.__setattr__(self, 'labels', _frozen(labels))
        object.__setattr__(self, 'trimmed', frozenset(int(v) for v in self.trimmed))

    @classmethod
    def contiguous(cls, k: int, block_size: int) -> 'Clustering':
        """Ground truth with vertex v in block v // block_size."""
        return cls(np.repeat(np.arange(k), block_size), k)

    @property
    def num_vertices(self) -> int:
        return int(self.labels.size)

    def classes(self) -> List[np.ndarray]:
        return [np.flatnonzero(self.labels == i) for i in range(self.k)]

    def sizes(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.k)

    def one_hot(self) -> sp.csr_matrix:
        """num_vertices x k indicator matrix."""
        n = self.num_vertices
        return sp.csr_matrix(
            (np.ones(n), (np.arange(n), self.labels)), shape=(n, self.k)
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Clustering):
            return NotImplemented
        return (self.k == other.k and self.trimmed == other.trimmed
                and np.array_equal(self.labels, other.labels))

    __hash__ = None


@dataclass(frozen=True, eq=False)
class CensorInstance:
    """
    Censor block model observation.

    edge_labels is aligned with graph.edges(): edge_labels[i] is the observed
    parity on the i-th edge in ascending (u, v) order. hidden_x is kept for
    evaluation only.
    """

    graph: Graph
    edge_labels: np.ndarray
    hidden_x: np.ndarray
    p: float
    epsilon: float

    def __post_init__(self):
        labels = np.array(self.edge_labels, dtype=np.int8)
        hidden = np.array(self.hidden_x, dtype=np.int8)
        if labels.size != self.graph.edge_count:
            raise ValueError(
                f"{labels.size} edge labels for {self.graph.edge_count} edges"
            )
        if hidden.size != self.graph.num_vertices:
            raise ValueError("hidden_x must have one entry per vertex")
        if not 0 < self.epsilon < 0.5:
            raise ValueError(f"epsilon must lie in (0, 1/2), got {self.epsilon}")
        if int(hidden.sum()) * 2 != hidden.size:
            raise ValueError("exactly half of the vertices must have hidden_x = 1")
        object.__setattr__(self, 'edge_labels', _frozen(labels))
        object.__setattr__(self, 'hidden_x', _frozen(hidden))

    @property
    def half(self) -> int:
        return self.graph.num_vertices // 2

    def truth(self) -> Clustering:
        return Clustering(self.hidden_x.astype(np.int64), 2)


def half_count(num_vertices: int) -> int:
    """Half the vertex count; rejects odd counts."""
    if num_vertices % 2:
        raise ValueError(f"vertex count must be even, got {num_vertices}")
    return num_vertices // 2
