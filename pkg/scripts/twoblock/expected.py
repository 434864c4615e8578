"""
Expected adjacency structure of the two-block model.

The expected adjacency (diagonal included) is (a+b) u1 u1^T + (a-b) u2 u2^T
with u1 = 1/sqrt(2n) on every vertex and u2 = +-1/sqrt(2n) by block. Trimming
zeroes the rows and columns of trimmed vertices, giving D A0 D for the 0/1
keep-diagonal D. Both are applied as rank-two operators.
"""

from typing import Iterable, Optional, Tuple

import numpy as np
from scipy.sparse.linalg import LinearOperator

from graph import SbmParams
from spectral import Subspace


def _require_two_block(params: SbmParams) -> None:
    if params.k != 2 or params.n_ref != params.block_size:
        raise ValueError("expected structure is defined for two_block parameters only")


def expected_vectors(params: SbmParams) -> Tuple[np.ndarray, np.ndarray]:
    """(u1, u2) and eigenvalues (a+b, a-b) of the expected adjacency."""
    _require_two_block(params)
    n = params.block_size
    u1 = np.full(2 * n, 1.0 / np.sqrt(2 * n))
    u2 = np.concatenate([u1[:n], -u1[n:]])
    return np.column_stack([u1, u2]), np.array([params.a + params.b, params.a - params.b])


def expected_subspace(params: SbmParams) -> Subspace:
    """span{u1, u2}."""
    vectors, values = expected_vectors(params)
    return Subspace(vectors, values)


def keep_mask(num_vertices: int, trimmed: Iterable[int]) -> np.ndarray:
    keep = np.ones(num_vertices)
    keep[list(trimmed)] = 0.0
    return keep


def expected_operator(params: SbmParams, keep: Optional[np.ndarray] = None) -> LinearOperator:
    """
    Expected adjacency as an operator, optionally restricted to kept vertices.

    Args:
        params: two_block parameters
        keep: Optional 0/1 vector; trimmed vertices carry 0
    """
    vectors, values = expected_vectors(params)
    total = vectors.shape[0]
    if keep is None:
        keep = np.ones(total)
    elif keep.shape != (total,):
        raise ValueError(f"keep mask has shape {keep.shape}, expected ({total},)")
    basis = vectors * keep[:, None]

    def matmat(x: np.ndarray) -> np.ndarray:
        x = np.asarray(x).reshape(total, -1)
        return basis @ (values[:, None] * (basis.T @ x))

    return LinearOperator(
        shape=(total, total),
        matvec=lambda x: matmat(x).ravel(),
        matmat=matmat,
        dtype=np.float64,
    )
