"""Orthonormal polynomial bases for weighted discrete L2 inner products.

The space is polynomials of degree < k with

    <p, q>_k = sum_j w_j exp(-2 k phi(z_j)) p(z_j) conj(q(z_j)).

Bases are built by Arnoldi iteration on node vectors (multiply the last
orthonormal vector by z, orthogonalize twice against all predecessors),
which never forms a Vandermonde or moment matrix. The Hessenberg
coefficients produced along the way let us evaluate the basis at
arbitrary points by replaying the recurrence.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .errors import InputError, RankDeficient
from .measure import NODE_TOL, DiscreteMeasure, MetricWeight

__all__ = [
    "OrthonormalBasis",
    "orthonormal_basis",
    "vanishing_basis",
    "evaluate",
    "gram",
    "coefficients",
]

PIVOT_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class OrthonormalBasis:
    """Orthonormal family for ``Hilb_k`` restricted to a (sub)space of polynomials.

    Attributes
    ----------
    k : int
        Degree parameter; the full space is polynomials of degree < k and
        sections are weighted by ``exp(-k * phi)``.
    measure : DiscreteMeasure
    weight : MetricWeight
    node_values : ndarray, shape (len(measure), dim)
        ``p_i(z_j) * exp(-k * phi(z_j))``.
    hessenberg : ndarray, shape (dim, dim - 1)
        Column ``i`` expresses ``z * r_i`` in terms of ``r_0 .. r_{i+1}``.
    lead : float
        The constant ``r_0``.
    vanishing : (complex, int) or None
        ``(y0, m)`` when every element is ``(z - y0)**m * r_i(z)``.
    """

    k: int
    measure: DiscreteMeasure
    weight: MetricWeight
    node_values: np.ndarray
    hessenberg: np.ndarray
    lead: float
    vanishing: Optional[Tuple[complex, int]] = None

    @property
    def dim(self):
        return self.node_values.shape[1]

    def __len__(self):
        return self.dim


def _arnoldi(z, start, n):
    N = len(z)
    Q = np.zeros((N, n), dtype=complex)
    H = np.zeros((n, max(n - 1, 0)), dtype=complex)
    norm0 = np.linalg.norm(start)
    if not norm0 > 0:
        raise RankDeficient("starting vector vanishes on the support")
    Q[:, 0] = start / norm0
    for i in range(n - 1):
        v = z * Q[:, i]
        ref = np.linalg.norm(v)
        h = np.zeros(i + 1, dtype=complex)
        for _ in range(2):
            c = Q[:, : i + 1].conj().T @ v
            v = v - Q[:, : i + 1] @ c
            h += c
        beta = np.linalg.norm(v)
        if not beta >= PIVOT_TOL * ref or beta == 0.0:
            raise RankDeficient(
                f"pivot {beta:.3e} at degree {i + 1} is below {PIVOT_TOL:g} x {ref:.3e}; "
                "the measure is too close to an algebraic set of low degree"
            )
        H[: i + 1, i] = h
        H[i + 1, i] = beta
        Q[:, i + 1] = v / beta
    return Q, H, 1.0 / norm0


def _build(mu, phi, k, n, y0, m):
    z = mu.nodes
    local = np.exp(-k * phi(z))
    factor = (z - y0) ** m if m else np.ones_like(z)
    start = np.sqrt(mu.weights) * local * factor
    Q, H, lead = _arnoldi(z, start, n)
    node_values = Q / np.sqrt(mu.weights)[:, None]
    vanishing = (complex(y0), int(m)) if m else None
    return OrthonormalBasis(k, mu, phi, node_values, H, lead, vanishing)


def orthonormal_basis(mu, phi, k):
    """Orthonormal basis ``p_0, ..., p_{k-1}`` of polynomials of degree < k.

    ``p_i`` has exact degree i and a positive leading coefficient.

    Raises
    ------
    RankDeficient
        If `mu` has fewer than k atoms or an Arnoldi pivot collapses.
    """
    if k < 1:
        raise InputError("k must be at least 1")
    if len(mu) < k:
        raise RankDeficient(f"{len(mu)} atoms cannot carry {k} independent polynomials")
    return _build(mu, phi, k, k, 0.0, 0)


def vanishing_basis(mu, phi, k, y0, m):
    """Orthonormal basis of ``{(z - y0)**m * q : deg q < k - m}``.

    These span the sections of degree < k vanishing to order m at `y0`;
    the resulting kernel is the partial kernel for a point divisor.
    """
    if not (0 <= m < k):
        raise InputError(f"vanishing order m={m} must satisfy 0 <= m < k={k}")
    off = np.count_nonzero(np.abs(mu.nodes - y0) >= NODE_TOL)
    if off < k - m:
        raise RankDeficient(f"{off} atoms off y0 cannot carry {k - m} independent sections")
    return _build(mu, phi, k, k - m, y0, m)


def _recurrence_values(basis, x):
    H = basis.hessenberg
    n = basis.dim
    R = np.zeros((len(x), n), dtype=complex)
    R[:, 0] = basis.lead
    for i in range(n - 1):
        v = x * R[:, i] - R[:, : i + 1] @ H[: i + 1, i]
        R[:, i + 1] = v / H[i + 1, i]
    return R


def evaluate(basis, points):
    """Weighted values ``p_i(x) * exp(-k * phi(x))``, shape ``(len(points), dim)``."""
    x = np.atleast_1d(np.asarray(points, dtype=complex))
    if not np.all(np.isfinite(x)):
        raise InputError("evaluation points must be finite")
    R = _recurrence_values(basis, x)
    if basis.vanishing is not None:
        y0, m = basis.vanishing
        R = R * ((x - y0) ** m)[:, None]
    return R * np.exp(-basis.k * basis.weight(x))[:, None]


def gram(basis, mu=None):
    """Weighted Gram matrix ``sum_j w_j v_ja conj(v_jb)`` of the basis against `mu`."""
    if mu is None or mu is basis.measure:
        mu, V = basis.measure, basis.node_values
    else:
        V = evaluate(basis, mu.nodes)
    return V.T @ (mu.weights[:, None] * V.conj())


def coefficients(basis):
    """Monomial coefficients of the (unweighted) basis polynomials.

    Row i holds the coefficients of ``p_i`` in increasing powers of z.
    Only meaningful for small degrees; the monomial basis is badly
    conditioned.
    """
    H = basis.hessenberg
    n = basis.dim
    m = basis.vanishing[1] if basis.vanishing else 0
    C = np.zeros((n, n), dtype=complex)
    C[0, 0] = basis.lead
    for i in range(n - 1):
        v = np.zeros(n, dtype=complex)
        v[1:] = C[i, :-1]
        v -= H[: i + 1, i] @ C[: i + 1]
        C[i + 1] = v / H[i + 1, i]
    if m:
        y0 = basis.vanishing[0]
        shift = np.polynomial.polynomial.polyfromroots([y0] * m)
        C = np.array([np.convolve(row, shift) for row in C])
    return C
