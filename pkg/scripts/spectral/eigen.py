"""
Top eigen/singular subspaces by subspace iteration.

Each step applies the operator once to an orthonormal block, performs a
Rayleigh-Ritz rotation and re-orthonormalizes with QR. The block carries a
few guard vectors beyond the requested rank so that a small gap between the
r-th and (r+1)-th eigenvalue slows convergence only through the gap to the
first vector outside the block.

For the algebraic ordering the operator is shifted by a lower bound on its
smallest eigenvalue (Gershgorin when entries are available) so that the
algebraically largest eigenvalues dominate in magnitude.
"""

from typing import Optional, Union

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import LinearOperator, aslinearoperator

from common import ConvergenceError, RankDeficientError, get_logger
from .matrices import BipartiteSparse, SparseSym
from .subspace import Subspace

logger = get_logger(__name__)

DEFAULT_TOL = 1e-8
MAX_ITER = 10_000
START_SEED = 20240611
GUARD_VECTORS = 8
RANK_TOL = np.sqrt(np.finfo(np.float64).eps)
WHICH = ('algebraic', 'magnitude')

Operand = Union[SparseSym, sp.spmatrix, np.ndarray, LinearOperator]


def _as_operator(m: Operand) -> LinearOperator:
    if isinstance(m, SparseSym):
        m = m.matrix
    if isinstance(m, LinearOperator):
        op = m
    else:
        op = aslinearoperator(m)
    if op.shape[0] != op.shape[1]:
        raise ValueError(f"operator must be square, got {op.shape}")
    return op


def _gershgorin_shift(m: Operand) -> Optional[float]:
    """Upper bound on max(0, -lambda_min) when entries are available, else None."""
    if isinstance(m, SparseSym):
        m = m.matrix
    if sp.issparse(m):
        m = sp.csr_matrix(m)
        diagonal = m.diagonal()
        radius = np.asarray(abs(m).sum(axis=1)).ravel() - np.abs(diagonal)
        return float(max(0.0, (radius - diagonal).max(initial=0.0)))
    if isinstance(m, np.ndarray):
        diagonal = np.diag(m)
        radius = np.abs(m).sum(axis=1) - np.abs(diagonal)
        return float(max(0.0, (radius - diagonal).max(initial=0.0)))
    return None


def _order(values: np.ndarray, which: str) -> np.ndarray:
    keys = values if which == 'algebraic' else np.abs(values)
    return np.argsort(-keys, kind='stable')


def _subspace_iteration(
    op: LinearOperator,
    r: int,
    tol: float,
    which: str,
    shift: float,
    max_iter: int,
    guard: Optional[int] = None
) -> Subspace:
    dim = op.shape[0]
    if guard is None:
        guard = min(r, GUARD_VECTORS)
    block = min(dim, r + guard + 2)
    rng = np.random.default_rng(START_SEED)
    q, _ = np.linalg.qr(rng.standard_normal((dim, block)))

    residual = np.inf
    for iteration in range(1, max_iter + 1):
        mq = np.asarray(op.matmat(q))
        h = q.T @ mq
        theta, s = np.linalg.eigh((h + h.T) / 2)
        order = _order(theta, which)
        theta, s = theta[order], s[:, order]
        q = q @ s
        mq = mq @ s

        scale = np.abs(theta).max(initial=0.0)
        residuals = np.linalg.norm(mq[:, :r] - q[:, :r] * theta[:r], axis=0)
        residual = float(residuals.max())
        if residual <= tol * scale or block == dim:
            logger.debug(f"Subspace iteration converged after {iteration} steps (rank {r})")
            if block > r:
                keys = theta if which == 'algebraic' else np.abs(theta)
                if keys[r - 1] - keys[r] <= tol * max(scale, 1.0):
                    logger.warning(
                        f"Degenerate eigen-gap at rank {r}: "
                        f"{theta[r - 1]:.6g} vs {theta[r]:.6g}"
                    )
            return Subspace(q[:, :r], theta[:r])

        q, _ = np.linalg.qr(mq + shift * q)

    raise ConvergenceError(
        f"subspace iteration did not converge in {max_iter} steps "
        f"(residual {residual:.3g})",
        iterations=max_iter,
        residual=residual,
    )


def top_eigenspace(
    m: Operand,
    r: int,
    tol: float = DEFAULT_TOL,
    which: str = 'algebraic',
    max_iter: int = MAX_ITER
) -> Subspace:
    """
    Invariant subspace of the r top eigenvalues of a symmetric operator.

    Args:
        m: Symmetric matrix or operator
        r: Subspace rank, 1 <= r <= dimension
        tol: Relative residual tolerance, ||M q - lambda q|| <= tol * ||M||
        which: 'algebraic' for the algebraically largest eigenvalues,
            'magnitude' for the largest in absolute value
        max_iter: Iteration cap

    Returns:
        Subspace whose values are the Ritz values, in descending order

    Raises:
        ConvergenceError: If the cap is reached first
    """
    if which not in WHICH:
        raise ValueError(f"which must be one of {WHICH}, got '{which}'")
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    op = _as_operator(m)
    if not 1 <= r <= op.shape[0]:
        raise ValueError(f"rank r must lie in 1..{op.shape[0]}, got {r}")

    shift = 0.0
    if which == 'algebraic':
        shift = _gershgorin_shift(m)
        if shift is None:
            shift = 1.1 * spectral_norm(op, tol=1e-4, max_iter=max_iter)
    return _subspace_iteration(op, r, tol, which, shift, max_iter)


def top_left_singular_space(
    b: Union[BipartiteSparse, sp.spmatrix, np.ndarray],
    r: int,
    tol: float = DEFAULT_TOL,
    max_iter: int = MAX_ITER
) -> Subspace:
    """
    Span of the top r left singular vectors of b, via the operator B B^T.

    The Gram operator is applied as two sparse products and never formed.
    Subspace values are the singular values.

    Raises:
        RankDeficientError: If b has fewer than r nonzero singular values
        ConvergenceError: If the cap is reached first
    """
    if isinstance(b, BipartiteSparse):
        b = b.matrix
    rows = b.shape[0]
    if not 1 <= r <= rows:
        raise ValueError(f"rank r must lie in 1..{rows}, got {r}")
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")

    bt = b.T
    gram = LinearOperator(
        shape=(rows, rows),
        matvec=lambda x: b @ (bt @ x),
        matmat=lambda x: b @ (bt @ x),
        dtype=np.float64,
    )
    # B B^T is positive semidefinite; no shift needed
    space = _subspace_iteration(gram, r, tol, 'algebraic', 0.0, max_iter)
    values = np.sqrt(np.clip(space.values, 0.0, None))
    if values[0] == 0.0 or values[-1] <= RANK_TOL * values[0]:
        raise RankDeficientError(
            f"matrix has fewer than {r} nonzero singular values "
            f"(sigma_r = {values[-1]:.3g})"
        )
    return Subspace(space.basis, values)


def spectral_norm(m: Operand, tol: float = DEFAULT_TOL, max_iter: int = MAX_ITER) -> float:
    """Largest absolute eigenvalue of a symmetric operator."""
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    op = _as_operator(m)
    if op.shape[0] == 0:
        return 0.0
    space = _subspace_iteration(op, 1, tol, 'magnitude', 0.0, max_iter, guard=GUARD_VECTORS)
    return float(abs(space.values[0]))
