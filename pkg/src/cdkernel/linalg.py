"""Dense complex linear algebra used by the rest of the package.

QR, the default Hermitian eigensolver and the SVD are thin wrappers over
LAPACK (through numpy) with the conventions the other modules rely on.
A cyclic Jacobi eigensolver is kept alongside as an independent route
for cross-checking.
"""

import numpy as np

from .errors import InputError, NoConvergence

__all__ = [
    "as_matrix",
    "hermitian",
    "qr",
    "hermitian_eig",
    "jacobi_eig",
    "singular_values",
]

HERMITIAN_TOL = 1e-10
JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 60


def as_matrix(A):
    """Return `A` as a 2-d complex array, rejecting empty or non-finite input."""
    A = np.array(A, dtype=complex, copy=True)
    if A.ndim == 1:
        A = A[:, None]
    if A.ndim != 2 or A.shape[0] < 1 or A.shape[1] < 1:
        raise InputError(f"expected a non-empty matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise InputError("matrix has non-finite entries")
    return A


def hermitian(A, tol=HERMITIAN_TOL):
    """Validate that `A` is Hermitian and return its symmetrized copy.

    Raises
    ------
    InputError
        If ``max |A_ij - conj(A_ji)| > tol * (1 + max |A|)``.
    """
    A = as_matrix(A)
    if A.shape[0] != A.shape[1]:
        raise InputError(f"Hermitian operator must be square, got {A.shape}")
    asym = np.max(np.abs(A - A.conj().T))
    if asym > tol * (1.0 + np.max(np.abs(A))):
        raise InputError(f"matrix is not Hermitian (asymmetry {asym:.3e})")
    return 0.5 * (A + A.conj().T)


def qr(A):
    """Thin QR factorization with a real nonnegative diagonal in R.

    Parameters
    ----------
    A : array_like, shape (m, n), m >= n

    Returns
    -------
    Q : ndarray, shape (m, n)
        Orthonormal columns.
    R : ndarray, shape (n, n)
        Upper triangular. Rank deficiency shows up as small diagonal
        entries; callers decide what counts as small.
    """
    A = as_matrix(A)
    m, n = A.shape
    if m < n:
        raise InputError(f"qr needs rows >= cols, got {A.shape}")
    Q, R = np.linalg.qr(A, mode="reduced")
    d = np.diag(R)
    phase = np.ones(n, dtype=complex)
    nz = np.abs(d) > 0
    phase[nz] = d[nz] / np.abs(d[nz])
    Q = Q * phase[None, :]
    R = phase.conj()[:, None] * R
    R[np.diag_indices(n)] = np.abs(np.diag(R))
    return Q, np.triu(R)


def hermitian_eig(A, method="lapack"):
    """Eigen-decomposition of a Hermitian matrix.

    Parameters
    ----------
    A : array_like
        Hermitian matrix (checked, then symmetrized).
    method : {"lapack", "jacobi"}

    Returns
    -------
    eigenvalues : ndarray
        Real, ascending.
    eigenvectors : ndarray
        Unitary; column ``j`` pairs with ``eigenvalues[j]``.
    """
    A = hermitian(A)
    if method == "jacobi":
        return jacobi_eig(A)
    if method != "lapack":
        raise InputError(f"unknown eigensolver {method!r}")
    try:
        w, V = np.linalg.eigh(A)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc
    return w, V


def jacobi_eig(A, tol=JACOBI_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
    """Cyclic Jacobi eigensolver for Hermitian matrices.

    Each off-diagonal pair is annihilated by a phase change followed by a
    real plane rotation. Sweeps stop once the off-diagonal Frobenius norm
    is at most ``tol * ||A||_F``.

    Raises
    ------
    NoConvergence
        If `max_sweeps` sweeps do not reach the tolerance.
    """
    A = hermitian(A)
    n = A.shape[0]
    V = np.eye(n, dtype=complex)
    scale = np.linalg.norm(A)
    if n == 1 or scale == 0.0:
        return np.real(np.diag(A)).copy(), V

    def off_norm(M):
        return np.linalg.norm(M - np.diag(np.diag(M)))

    for _ in range(max_sweeps):
        if off_norm(A) <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                mag = abs(apq)
                if mag <= 1e-300:
                    continue
                phase = apq / mag
                theta = (A[q, q].real - A[p, p].real) / (2.0 * mag)
                if theta == 0.0:
                    t = 1.0
                else:
                    t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                J = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                idx = [p, q]
                A[:, idx] = A[:, idx] @ J
                A[idx, :] = J.conj().T @ A[idx, :]
                V[:, idx] = V[:, idx] @ J
                A[p, q] = A[q, p] = 0.0
                A[p, p] = A[p, p].real
                A[q, q] = A[q, q].real
    else:
        if off_norm(A) > tol * scale:
            raise NoConvergence(f"Jacobi did not converge in {max_sweeps} sweeps")

    w = np.real(np.diag(A))
    order = np.argsort(w, kind="stable")
    return w[order], V[:, order]


def singular_values(A):
    """Singular values in descending order."""
    A = as_matrix(A)
    try:
        return np.linalg.svd(A, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc
