import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cdkernel.errors import InputError, NoConvergence
from cdkernel.linalg import hermitian, hermitian_eig, jacobi_eig, qr, singular_values
from oracles import tridiagonal_charpoly_roots


def random_complex(rng, m, n):
    return rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))


def random_hermitian(rng, n):
    A = random_complex(rng, n, n)
    return A + A.conj().T


class TestQR:
    def test_identity(self):
        Q, R = qr(np.eye(3))
        np.testing.assert_allclose(Q, np.eye(3), atol=1e-15)
        np.testing.assert_allclose(R, np.eye(3), atol=1e-15)

    def test_pythagorean_column(self):
        _, R = qr([[3.0], [4.0]])
        assert R[0, 0] == pytest.approx(5.0, abs=1e-14)

    def test_random_reconstruction(self, rng):
        A = random_complex(rng, 8, 5)
        Q, R = qr(A)
        assert np.linalg.norm(A - Q @ R) <= 1e-12 * np.linalg.norm(A)
        assert np.linalg.norm(Q.conj().T @ Q - np.eye(5)) <= 1e-12 * 5
        assert np.allclose(np.tril(R, -1), 0)
        assert np.all(np.diag(R).real >= 0) and np.allclose(np.diag(R).imag, 0)

    def test_wide_matrix_rejected(self):
        with pytest.raises(InputError):
            qr(np.ones((2, 3)))


class TestHermitianEig:
    @pytest.mark.parametrize("method", ["lapack", "jacobi"])
    def test_identity(self, method):
        w, V = hermitian_eig(np.eye(4), method)
        np.testing.assert_allclose(w, 1.0)

    @pytest.mark.parametrize("method", ["lapack", "jacobi"])
    def test_diagonal_permuted(self, method):
        w, V = hermitian_eig(np.diag([3.0, -1.0]), method)
        np.testing.assert_allclose(w, [-1.0, 3.0])
        np.testing.assert_allclose(np.abs(V), [[0, 1], [1, 0]], atol=1e-15)

    def test_tridiagonal_oracle_at_k4(self):
        # characteristic polynomial roots versus the closed form
        closed = np.sort(np.cos(np.arange(1, 5) * np.pi / 5))
        np.testing.assert_allclose(tridiagonal_charpoly_roots(4), closed, atol=1e-12)

    @pytest.mark.parametrize("method", ["lapack", "jacobi"])
    @pytest.mark.parametrize("k", [2, 4, 7, 16])
    def test_tridiagonal_closed_form(self, method, k):
        T = 0.5 * (np.eye(k, k=1) + np.eye(k, k=-1))
        w, _ = hermitian_eig(T, method)
        np.testing.assert_allclose(w, np.sort(np.cos(np.arange(1, k + 1) * np.pi / (k + 1))), atol=1e-12)

    @pytest.mark.parametrize("method", ["lapack", "jacobi"])
    @pytest.mark.parametrize("n", [1, 3, 10, 24])
    def test_random_reconstruction(self, rng, method, n):
        A = random_hermitian(rng, n)
        w, V = hermitian_eig(A, method)
        assert np.all(np.diff(w) >= 0)
        resid = np.linalg.norm(A - V @ np.diag(w) @ V.conj().T)
        assert resid <= 1e-10 * n * np.linalg.norm(A)
        assert np.linalg.norm(V.conj().T @ V - np.eye(n)) <= 1e-10 * n
        assert abs(np.sum(w) - np.trace(A).real) <= 1e-10 * (1 + np.abs(w).sum())

    def test_jacobi_agrees_with_lapack(self, rng):
        A = random_hermitian(rng, 12)
        np.testing.assert_allclose(jacobi_eig(A)[0], hermitian_eig(A)[0], atol=1e-11)

    def test_jacobi_sweep_cap(self, rng):
        with pytest.raises(NoConvergence):
            jacobi_eig(random_hermitian(rng, 8), max_sweeps=1)

    def test_rejects_non_hermitian(self):
        with pytest.raises(InputError):
            hermitian_eig([[1.0, 2.0], [0.0, 1.0]])

    def test_symmetrizes_tiny_asymmetry(self):
        A = np.array([[1.0, 1e-13], [0.0, 2.0]])
        H = hermitian(A)
        assert H[0, 1] == H[1, 0]


class TestSingularValues:
    def test_zero(self):
        np.testing.assert_array_equal(singular_values(np.zeros((3, 2))), 0.0)

    def test_diagonal(self):
        np.testing.assert_allclose(singular_values(np.diag([1.0, 2.0])), [2.0, 1.0])

    def test_rank_one(self, rng):
        u = random_complex(rng, 7, 1)
        v = random_complex(rng, 5, 1)
        sv = singular_values(u @ v.conj().T)
        scale = np.linalg.norm(u) * np.linalg.norm(v)
        assert np.count_nonzero(sv > 1e-9 * scale) == 1

    def test_squares_are_gram_eigenvalues(self, rng):
        # independent route: eigenvalues of A*A
        A = random_complex(rng, 9, 6)
        sv = singular_values(A)
        ev = np.sort(jacobi_eig(A.conj().T @ A)[0])[::-1]
        np.testing.assert_allclose(sv**2, ev, rtol=1e-10)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(1, 8), st.integers(1, 8), st.integers(0, 2**32 - 1))
    def test_frobenius_identity(self, m, n, seed):
        A = random_complex(np.random.default_rng(seed), m, n)
        sv = singular_values(A)
        assert np.sum(sv**2) == pytest.approx(np.linalg.norm(A) ** 2, rel=1e-10)
        assert np.all(np.diff(sv) <= 0)
