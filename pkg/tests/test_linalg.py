"""CG and eigenpair solvers against dense LAPACK and closed forms."""

import numpy as np
import pytest
import scipy.sparse as sp

from speclab.errors import IterationLimitError
from speclab.linalg import SparseSymMatrix, cg_solve, smallest_eigenpairs

from oracles import jacobi_eigenvalues


def _random_spd(n: int, seed: int) -> SparseSymMatrix:
    rng = np.random.default_rng(seed)
    m = rng.standard_normal((n, n))
    a = m @ m.T + n * np.eye(n)
    return SparseSymMatrix(sp.csr_matrix(a))


def _laplacian_1d(n: int) -> SparseSymMatrix:
    main = 2.0 * np.ones(n)
    off = -np.ones(n - 1)
    a = sp.diags([off, main, off], [-1, 0, 1], format="csr")
    return SparseSymMatrix(a)


def _laplacian_2d(m: int) -> SparseSymMatrix:
    l1 = sp.diags(
        [-np.ones(m - 1), 2.0 * np.ones(m), -np.ones(m - 1)], [-1, 0, 1]
    )
    eye = sp.identity(m)
    a = sp.kron(l1, eye) + sp.kron(eye, l1)
    return SparseSymMatrix(sp.csr_matrix(a))


def test_matrix_must_be_square():
    with pytest.raises(ValueError):
        SparseSymMatrix(sp.csr_matrix(np.ones((3, 4))))


def test_symmetry_check():
    a = np.array([[2.0, 1.0], [0.0, 2.0]])
    with pytest.raises(ValueError):
        SparseSymMatrix(sp.csr_matrix(a)).check_symmetry()
    sym = SparseSymMatrix(sp.csr_matrix(0.5 * (a + a.T)))
    assert sym.check_symmetry() == 0.0


def test_cg_matches_direct_solve():
    a = _random_spd(60, seed=7)
    rng = np.random.default_rng(11)
    b = rng.standard_normal(60)
    x, iters = cg_solve(a, b, tol=1e-12)
    ref = np.linalg.solve(a.mat.toarray(), b)
    assert iters >= 1
    assert np.linalg.norm(x - ref) <= 1e-9 * np.linalg.norm(ref)


def test_cg_zero_rhs():
    a = _laplacian_1d(10)
    x, iters = cg_solve(a, np.zeros(10))
    assert iters == 0
    assert np.all(x == 0.0)


def test_cg_iteration_budget():
    a = _laplacian_1d(400)
    b = np.ones(400)
    with pytest.raises(IterationLimitError) as exc:
        cg_solve(a, b, tol=1e-14, max_iter=3)
    assert exc.value.residual is not None
    assert exc.value.residual > 0.0


def test_cg_rejects_indefinite_operator():
    a = SparseSymMatrix(sp.csr_matrix(np.diag([1.0, -1.0])))
    with pytest.raises(IterationLimitError):
        cg_solve(a, np.array([1.0, 1.0]))


def test_eig_argument_range():
    a = _laplacian_1d(10)
    with pytest.raises(ValueError):
        smallest_eigenpairs(a, 0)
    with pytest.raises(ValueError):
        smallest_eigenpairs(a, 10)


def test_dense_path_matches_jacobi_oracle():
    # independent eigenvalue oracle: cyclic Jacobi rotations
    rng = np.random.default_rng(3)
    for trial in range(5):
        n = int(rng.integers(8, 30))
        m = rng.standard_normal((n, n))
        dense = m @ m.T + np.eye(n)
        a = SparseSymMatrix(sp.csr_matrix(dense))
        k = min(4, n - 1)
        vals, vecs = smallest_eigenpairs(a, k)
        ref = jacobi_eigenvalues(dense)
        assert np.allclose(vals, ref[:k], rtol=1e-9, atol=1e-9)
        assert np.allclose(vecs.T @ vecs, np.eye(k), atol=1e-9)


def test_sparse_path_matches_closed_form():
    n = 1500
    a = _laplacian_1d(n)
    vals, vecs = smallest_eigenpairs(a, 5, tol=1e-10)
    j = np.arange(1, 6)
    ref = 4.0 * np.sin(j * np.pi / (2.0 * (n + 1))) ** 2
    assert np.allclose(vals, ref, rtol=1e-8)
    # residuals and orthonormality
    for i in range(5):
        r = a.mat @ vecs[:, i] - vals[i] * vecs[:, i]
        assert np.linalg.norm(r) <= 1e-7
    assert np.allclose(vecs.T @ vecs, np.eye(5), atol=1e-8)


def test_sparse_path_recovers_degenerate_pairs():
    # 2D grid Laplacian on a square: modes (j, k) and (k, j) are exactly
    # degenerate; a single Krylov sequence sees one copy per eigenspace,
    # so this exercises the two-seed merge
    m = 40
    a = _laplacian_2d(m)
    vals, vecs = smallest_eigenpairs(a, 6, tol=1e-10)

    def mu(j, k):
        s = np.pi / (2.0 * (m + 1))
        return 4.0 * (np.sin(j * s) ** 2 + np.sin(k * s) ** 2)

    ref = np.sort([mu(1, 1), mu(1, 2), mu(2, 1), mu(2, 2), mu(1, 3), mu(3, 1)])
    assert np.allclose(vals, ref, rtol=1e-8)
    # the two degenerate pairs must both be present with both copies
    assert vals[1] == pytest.approx(vals[2], rel=1e-10)
    assert vals[4] == pytest.approx(vals[5], rel=1e-10)
    assert np.allclose(vecs.T @ vecs, np.eye(6), atol=1e-8)


def test_sparse_and_dense_paths_agree():
    m = 26  # n = 676, just above the dense cutoff
    a = _laplacian_2d(m)
    vals_sparse, _ = smallest_eigenpairs(a, 4, tol=1e-10)
    dense = np.linalg.eigvalsh(a.mat.toarray())
    assert np.allclose(vals_sparse, dense[:4], rtol=1e-9)
