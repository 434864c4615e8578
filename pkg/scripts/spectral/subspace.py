"""
Orthonormal subspaces, projections and subspace angles.

sin(W1, W2) is the operator norm of P_W1 - P_W2. It is evaluated on the
joint span of both bases, where the projector difference is a small dense
symmetric matrix, so small angles keep full relative accuracy (the
arccos-of-singular-values route loses half the digits near zero).
"""

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

ORTHO_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class Subspace:
    """
    Orthonormal basis stored as the columns of a dimension x rank array.

    values holds the Ritz values (or singular values) matching the columns
    when the subspace came out of an eigensolver.
    """

    basis: np.ndarray
    values: Optional[np.ndarray] = None

    def __post_init__(self):
        basis = np.array(self.basis, dtype=np.float64)
        if basis.ndim == 1:
            basis = basis[:, None]
        gram = basis.T @ basis
        if basis.shape[1] and np.abs(gram - np.eye(basis.shape[1])).max() > ORTHO_TOL:
            raise ValueError("basis columns are not orthonormal")
        basis.setflags(write=False)
        object.__setattr__(self, 'basis', basis)
        if self.values is not None:
            values = np.array(self.values, dtype=np.float64)
            values.setflags(write=False)
            object.__setattr__(self, 'values', values)

    @classmethod
    def from_vectors(cls, vectors: Sequence[np.ndarray]) -> 'Subspace':
        """Orthonormalize the given vectors (columns of the span) via QR."""
        stacked = np.column_stack([np.asarray(v, dtype=np.float64) for v in vectors])
        q, r = np.linalg.qr(stacked)
        if np.any(np.abs(np.diag(r)) <= 1e-12 * max(np.abs(r).max(), 1.0)):
            raise ValueError("vectors are linearly dependent")
        return cls(q)

    @property
    def dimension(self) -> int:
        return self.basis.shape[0]

    @property
    def rank(self) -> int:
        return self.basis.shape[1]


def project(w: Subspace, v: np.ndarray) -> np.ndarray:
    """
    Orthogonal projection P_W v = sum_i <q_i, v> q_i.

    Raises:
        ValueError: If v's length differs from the ambient dimension
    """
    v = np.asarray(v, dtype=np.float64)
    if v.shape[0] != w.dimension:
        raise ValueError(f"vector of length {v.shape[0]} for ambient dimension {w.dimension}")
    return w.basis @ (w.basis.T @ v)


def subspace_angle(w1: Subspace, w2: Subspace) -> float:
    """
    sin of the largest principal angle, as the operator norm of P_W1 - P_W2.

    Raises:
        ValueError: On ambient dimension or rank mismatch
    """
    if w1.dimension != w2.dimension:
        raise ValueError(f"ambient dimensions differ: {w1.dimension} vs {w2.dimension}")
    if w1.rank != w2.rank:
        raise ValueError(f"ranks differ: {w1.rank} vs {w2.rank}")
    if w1.rank == 0:
        return 0.0

    joint = np.hstack([w1.basis, w2.basis])
    u, s, _ = np.linalg.svd(joint, full_matrices=False)
    u = u[:, s > 1e-12 * s[0]]
    c1 = u.T @ w1.basis
    c2 = u.T @ w2.basis
    diff = c1 @ c1.T - c2 @ c2.T
    return float(np.abs(np.linalg.eigvalsh((diff + diff.T) / 2)).max())
