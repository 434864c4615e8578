import logging

import numpy as np
import pytest
import scipy.sparse as sp
from scipy.sparse.linalg import aslinearoperator

from common import ConvergenceError, RankDeficientError
from spectral import (
    BipartiteSparse,
    SparseSym,
    Subspace,
    spectral_norm,
    subspace_angle,
    top_eigenspace,
    top_left_singular_space,
)

ORACLE_TOL = 1e-12


def planted_symmetric(rng, dim, r):
    """Random eigenbasis; top r eigenvalues 10, 9, ... above a bulk in [-5, 5]."""
    q, _ = np.linalg.qr(rng.standard_normal((dim, dim)))
    values = np.concatenate([10.0 - np.arange(r), rng.uniform(-5, 5, dim - r)])
    return (q * values) @ q.T, q[:, :r]


def planted_rectangular(rng, rows, cols, r):
    u, _ = np.linalg.qr(rng.standard_normal((rows, rows)))
    v, _ = np.linalg.qr(rng.standard_normal((cols, cols)))
    count = min(rows, cols)
    values = np.concatenate([8.0 - np.arange(r), rng.uniform(0, 3, count - r)])
    return (u[:, :count] * values) @ v[:, :count].T, u[:, :r]


def test_diagonal():
    w = top_eigenspace(np.diag([3.0, 2.0, 1.0]), 2)
    assert subspace_angle(w, Subspace(np.eye(3)[:, :2])) < 1e-12
    assert w.values.tolist() == pytest.approx([3.0, 2.0])


def test_two_by_two():
    w = top_eigenspace(sp.csr_matrix([[2.0, 1.0], [1.0, 2.0]]), 1)
    assert w.values[0] == pytest.approx(3.0)
    assert subspace_angle(w, Subspace(np.array([1.0, 1.0]) / np.sqrt(2))) < 1e-12


def test_random_gaussian_symmetric():
    rng = np.random.default_rng(50)
    a = rng.standard_normal((50, 50))
    m = (a + a.T) / 2
    values, vectors = np.linalg.eigh(m)
    w = top_eigenspace(m, 3, tol=ORACLE_TOL)
    assert subspace_angle(w, Subspace(vectors[:, ::-1][:, :3])) < 1e-8
    assert w.values == pytest.approx(values[::-1][:3], rel=1e-10)


@pytest.mark.parametrize('case', range(100))
def test_symmetric_oracle(case):
    rng = np.random.default_rng(1000 + case)
    dim = int(rng.integers(8, 65))
    r = int(rng.integers(1, 5))
    m, top = planted_symmetric(rng, dim, r)
    w = top_eigenspace(sp.csr_matrix(m), r, tol=ORACLE_TOL)
    assert subspace_angle(w, Subspace(top)) < 1e-8
    assert np.abs(w.basis.T @ w.basis - np.eye(r)).max() < 1e-10


@pytest.mark.parametrize('case', range(50))
def test_singular_oracle(case):
    rng = np.random.default_rng(2000 + case)
    rows = int(rng.integers(6, 41))
    cols = int(rng.integers(4, 31))
    r = int(rng.integers(1, min(4, rows, cols)))
    b, top = planted_rectangular(rng, rows, cols, r)
    w = top_left_singular_space(b, r, tol=ORACLE_TOL)
    assert subspace_angle(w, Subspace(top)) < 1e-8
    assert w.values == pytest.approx(8.0 - np.arange(r), rel=1e-8)


def test_sparse_zero_one_bipartite():
    rng = np.random.default_rng(40)
    b = sp.csr_matrix((rng.random((40, 30)) < 0.3).astype(float))
    u, s, _ = np.linalg.svd(b.toarray())
    w = top_left_singular_space(BipartiteSparse(b), 4, tol=ORACLE_TOL)
    gap = s[3] ** 2 - s[4] ** 2
    limit = max(1e-8, 10 * ORACLE_TOL * s[0] ** 2 / gap)
    assert subspace_angle(w, Subspace(u[:, :4])) < limit
    assert w.values == pytest.approx(s[:4], rel=1e-8)


def test_identity_like_rectangular():
    b = np.zeros((6, 4))
    b[0, 0], b[1, 1], b[2, 2] = 3.0, 2.0, 1.0
    w = top_left_singular_space(b, 2)
    assert subspace_angle(w, Subspace(np.eye(6)[:, :2])) < 1e-12
    assert w.values.tolist() == pytest.approx([3.0, 2.0])


def test_zero_bipartite_is_rank_deficient():
    with pytest.raises(RankDeficientError):
        top_left_singular_space(np.zeros((5, 3)), 2)


def test_rank_one_bipartite_is_rank_deficient():
    b = np.outer(np.arange(1.0, 6.0), np.ones(4))
    with pytest.raises(RankDeficientError):
        top_left_singular_space(b, 2)


@pytest.mark.parametrize('case', range(10))
def test_spectral_norm_oracle(case):
    rng = np.random.default_rng(3000 + case)
    a = rng.standard_normal((30, 30))
    m = (a + a.T) / 2
    expected = np.abs(np.linalg.eigvalsh(m)).max()
    assert spectral_norm(m, tol=ORACLE_TOL) == pytest.approx(expected, rel=1e-8)


def test_spectral_norm_examples():
    assert spectral_norm(np.zeros((4, 4))) == 0.0
    assert spectral_norm(np.diag([-5.0, 3.0])) == pytest.approx(5.0)
    assert spectral_norm(SparseSym(sp.csr_matrix((0, 0)))) == 0.0


def test_magnitude_ordering():
    m = np.diag([-5.0, 3.0, 1.0, 0.5, 0.2, 0.1, 0.0, 0.0, 0.0, 0.0])
    w = top_eigenspace(m, 1, tol=ORACLE_TOL, which='magnitude')
    assert w.values[0] == pytest.approx(-5.0)
    assert subspace_angle(w, Subspace(np.eye(10)[:, :1])) < 1e-8

    algebraic = top_eigenspace(m, 1)
    assert algebraic.values[0] == pytest.approx(3.0)


def test_linear_operator_input(rng):
    m, top = planted_symmetric(rng, 30, 2)
    w = top_eigenspace(aslinearoperator(m), 2, tol=ORACLE_TOL)
    assert subspace_angle(w, Subspace(top)) < 1e-8


def test_convergence_error_at_cap(rng):
    m, _ = planted_symmetric(rng, 64, 1)
    with pytest.raises(ConvergenceError) as info:
        top_eigenspace(m, 1, tol=ORACLE_TOL, max_iter=1)
    assert info.value.iterations == 1
    assert info.value.residual > 0


def test_degenerate_gap_warns(caplog):
    m = np.diag(np.concatenate([[2.0, 2.0], np.linspace(1.0, 0.0, 18)]))
    with caplog.at_level(logging.WARNING):
        w = top_eigenspace(m, 1)
    assert w.values[0] == pytest.approx(2.0)
    assert any('Degenerate eigen-gap' in record.message for record in caplog.records)


def test_deterministic_start():
    m = np.diag(np.linspace(5.0, 0.0, 40))
    assert np.array_equal(top_eigenspace(m, 2).basis, top_eigenspace(m, 2).basis)


@pytest.mark.parametrize('kwargs', [{'r': 0}, {'r': 5}, {'r': 1, 'tol': 0}, {'r': 1, 'which': 'largest'}])
def test_argument_validation(kwargs):
    with pytest.raises(ValueError):
        top_eigenspace(np.eye(4), **kwargs)
