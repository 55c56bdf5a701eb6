"""Christoffel-Darboux kernels and the localization functionals built on them.

All kernel values are metric-weighted, ``B_k(x, y) exp(-k phi(x)) exp(-k phi(y))``,
so moduli are plain absolute values. Every integral against a discrete
measure is an exact finite sum over its atoms.
"""

import math
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from .basis import evaluate, orthonormal_basis, vanishing_basis
from .errors import BaseLocus, DominationViolated, InputError
from .measure import is_dominated, match_nodes, truncate

__all__ = [
    "KernelEvaluator",
    "DiagonalMeasure",
    "NevaiMeasure",
    "ForbiddenRow",
    "ForbiddenScan",
    "cd_kernel",
    "diagonal",
    "kernel_matrix",
    "berg_weights",
    "offdiag_integral",
    "offdiag_mass",
    "total_mass",
    "diag_measure",
    "lubinsky_check",
    "truncation_error",
    "vanishing_order",
    "probe_points",
    "fit_slope",
    "forbidden_scan",
    "peak_section",
    "nevai_measure",
]

BASE_LOCUS_TOL = 1e-14


class KernelEvaluator:
    """Evaluate ``B_k`` (or a partial kernel) from an orthonormal basis."""

    def __init__(self, basis):
        self.basis = basis

    @property
    def dim(self):
        return self.basis.dim

    def values(self, points, mu=None):
        """Weighted basis values at `points`; cached node values when `mu` is the basis measure."""
        if mu is not None and mu is self.basis.measure:
            return self.basis.node_values
        return evaluate(self.basis, points)

    def __call__(self, x, y):
        return cd_kernel(self, x, y)


def cd_kernel(ke, x, y):
    """``B_k(x, y) = sum_i p_i(x) conj(p_i(y))``; take ``abs`` for the pointwise norm.

    The sum is always formed in one argument order, so
    ``cd_kernel(ke, y, x)`` is exactly ``conj(cd_kernel(ke, x, y))``.
    """
    x, y = complex(x), complex(y)
    swap = (y.real, y.imag) < (x.real, x.imag)
    if swap:
        x, y = y, x
    a, b = evaluate(ke.basis, [x, y])
    value = complex(np.sum(a * b.conj()))
    return value.conjugate() if swap else value


def kernel_matrix(ke, xs, ys=None, mu=None):
    """Matrix ``[B_k(x_a, y_b)]``; pass the basis measure as `mu` to reuse node values."""
    X = ke.values(xs, mu)
    Y = X if ys is None else ke.values(ys, mu)
    return X @ Y.conj().T


def diagonal(ke, points):
    """``B_k(x, x) = sum_i |p_i(x)|^2`` at each point."""
    V = evaluate(ke.basis, points)
    return np.sum(np.abs(V) ** 2, axis=1)


def _node_values(ke, mu):
    return ke.values(mu.nodes, mu)


def berg_weights(ke, mu):
    """Pairwise masses ``w_a w_b |B_k(z_a, z_b)|^2`` (not yet divided by n_k)."""
    V = _node_values(ke, mu)
    K = V @ V.conj().T
    return np.outer(mu.weights, mu.weights) * np.abs(K) ** 2


def offdiag_integral(ke, mu, delta):
    """``sum over |z_a - z_b| >= delta`` of ``w_a w_b |B_k(z_a, z_b)|^2``."""
    if not delta > 0:
        raise InputError("delta must be positive")
    M = berg_weights(ke, mu)
    far = np.abs(mu.nodes[:, None] - mu.nodes[None, :]) >= delta
    return float(np.sum(M[far]))


def offdiag_mass(ke, mu, delta):
    """Mass the probability measure ``|B_k|^2 dmu dmu / n_k`` puts on ``|x - y| >= delta``."""
    return offdiag_integral(ke, mu, delta) / ke.dim


def total_mass(ke, mu):
    """Total mass of ``|B_k|^2 dmu dmu / n_k``; equals 1 up to rounding."""
    return float(np.sum(berg_weights(ke, mu))) / ke.dim


@dataclass(frozen=True)
class DiagonalMeasure:
    nodes: np.ndarray
    masses: np.ndarray

    def integrate(self, values):
        return float(np.sum(self.masses * np.asarray(values)))


def diag_measure(ke, mu):
    """Probability measure ``B_k(x, x) dmu(x) / n_k``."""
    V = _node_values(ke, mu)
    masses = mu.weights * np.sum(np.abs(V) ** 2, axis=1) / ke.dim
    return DiagonalMeasure(mu.nodes, masses)


def lubinsky_check(mu1, mu2, phi, k, x):
    """Both sides of the comparison between the kernels of ordered measures.

    For ``mu1 <= mu2``,

        lhs = sum_j w1_j |B_{k,1}(x, z_j) - B_{k,2}(x, z_j)|^2   (atoms of mu1)
        rhs = B_{k,1}(x, x) - B_{k,2}(x, x)

    and ``lhs <= rhs``. Both are returned; the caller judges the margin.

    Raises
    ------
    DominationViolated
        If `mu1` is not nodewise dominated by `mu2`.
    """
    if not is_dominated(mu1, mu2):
        raise DominationViolated("lubinsky_check needs mu1 <= mu2")
    b1 = orthonormal_basis(mu1, phi, k)
    b2 = orthonormal_basis(mu2, phi, k)
    vx1 = evaluate(b1, [x])[0]
    vx2 = evaluate(b2, [x])[0]
    # values of the mu2 basis on mu1's atoms, read from the cache where possible
    j = match_nodes(mu1, mu2)
    V2 = b2.node_values[j]
    row1 = b1.node_values.conj() @ vx1
    row2 = V2.conj() @ vx2
    lhs = float(np.sum(mu1.weights * np.abs(row1 - row2) ** 2))
    rhs = float(np.sum(np.abs(vx1) ** 2) - np.sum(np.abs(vx2) ** 2))
    return lhs, rhs


def truncation_error(mu, bump, phi, k):
    """Kernel change caused by truncating `mu` with `bump`.

    Returns
    -------
    kernel_l2_diff : float
        ``sum_{a,b} wi_a wi_b |B_{k,i}(a, b) - B_k(a, b)|^2`` over the
        truncated measure ``mu_i``.
    diag_gap : float
        ``sum_a wi_a (B_{k,i}(a, a) - B_k(a, a))``, which bounds the former.
    """
    mu_i = truncate(mu, bump)
    b = orthonormal_basis(mu, phi, k)
    bi = orthonormal_basis(mu_i, phi, k)
    V = b.node_values[match_nodes(mu_i, mu)]
    Vi = bi.node_values
    D = Vi @ Vi.conj().T - V @ V.conj().T
    w = mu_i.weights
    kernel_l2_diff = float(np.real(w @ (np.abs(D) ** 2) @ w))
    diag_gap = float(np.sum(w * np.real(np.diag(D))))
    return kernel_l2_diff, diag_gap


def vanishing_order(eps, k):
    """``ceil(eps * k)``, robust to products like ``0.1 * 30``."""
    return int(math.ceil(round(eps * k, 9)))


def probe_points(center, radius, count, rings=8):
    """`count` points on `rings` concentric circles of radius ``<= radius`` (center excluded)."""
    rings = max(1, min(rings, count))
    per_ring = max(1, count // rings)
    radii = radius * np.arange(1, rings + 1) / rings
    angles = 2 * np.pi * (np.arange(per_ring) + 0.5) / per_ring
    pts = center + radii[:, None] * np.exp(1j * angles)[None, :]
    return pts.reshape(-1)


def fit_slope(ks, values):
    """Least-squares slope of ``log(values)`` against ``ks``."""
    ks = np.asarray(ks, dtype=float)
    logs = np.log(np.asarray(values, dtype=float))
    return float(np.polyfit(ks, logs, 1)[0])


@dataclass(frozen=True)
class ForbiddenRow:
    k: int
    m: int
    sup_partial: float
    sup_full: float
    partial_trace: float
    slope: Optional[float]


@dataclass(frozen=True)
class ForbiddenScan:
    rows: List[ForbiddenRow]

    @property
    def slope(self):
        return self.rows[-1].slope if self.rows else None


def forbidden_scan(mu, phi, y0, eps, k_list, probe_radius, probe_count=128, rings=8):
    """Sup of the partial kernel diagonal near `y0` for each k.

    For each k the partial kernel uses sections vanishing to order
    ``m = ceil(eps * k)`` at `y0`. Its diagonal is maximized over probe
    points around `y0`; once four rows exist, the least-squares slope of
    ``log(sup)`` against k is attached to each further row.

    Raises
    ------
    InputError
        If ``ceil(eps * k) >= k`` for some k.
    """
    if not 0 < eps < 1:
        raise InputError("eps must lie in (0, 1)")
    pts = probe_points(y0, probe_radius, probe_count, rings)
    rows = []
    for k in k_list:
        m = vanishing_order(eps, k)
        if m >= k:
            raise InputError(f"ceil(eps*k) = {m} leaves no sections at k = {k}")
        vb = vanishing_basis(mu, phi, k, y0, m)
        fb = orthonormal_basis(mu, phi, k)
        sup_partial = float(np.max(diagonal(KernelEvaluator(vb), pts)))
        sup_full = float(np.max(diagonal(KernelEvaluator(fb), pts)))
        trace = float(np.sum(mu.weights * np.sum(np.abs(vb.node_values) ** 2, axis=1)))
        slope = None
        if len(rows) >= 3:
            ks = [r.k for r in rows] + [k]
            sups = [r.sup_partial for r in rows] + [sup_partial]
            slope = fit_slope(ks, sups)
        rows.append(ForbiddenRow(k, m, sup_partial, sup_full, trace, slope))
    return ForbiddenScan(rows)


def peak_section(ke, x):
    """Coefficients of the unit section maximizing ``|s(x)|`` in the orthonormal basis.

    ``c_i = conj(p_i(x)) / sqrt(B_k(x, x))``.

    Raises
    ------
    BaseLocus
        If ``B_k(x, x) <= 1e-14``.
    """
    v = evaluate(ke.basis, [x])[0]
    bxx = float(np.sum(np.abs(v) ** 2))
    if bxx <= BASE_LOCUS_TOL:
        raise BaseLocus(f"B_k(x, x) = {bxx:.3e} at x = {x}")
    return v.conj() / np.sqrt(bxx)


@dataclass(frozen=True)
class NevaiMeasure:
    anchor: complex
    nodes: np.ndarray
    masses: np.ndarray

    @property
    def mass(self):
        return float(np.sum(self.masses))

    def mass_outside(self, r):
        return float(np.sum(self.masses[np.abs(self.nodes - self.anchor) > r]))


def nevai_measure(ke, mu, x):
    """The pair ``mu_k^x = |B_k(x, .)|^2 dmu / B_k(x, x)`` and ``nu_k^x = B_k(x, x)/n_k mu_k^x``.

    Returns
    -------
    mu_k_x, nu_k_x : NevaiMeasure
    vol_nu : float
        Total mass of ``nu_k_x``.
    """
    vx = evaluate(ke.basis, [x])[0]
    bxx = float(np.sum(np.abs(vx) ** 2))
    if bxx <= BASE_LOCUS_TOL:
        raise BaseLocus(f"B_k(x, x) = {bxx:.3e} at x = {x}")
    row = _node_values(ke, mu) @ vx.conj()
    masses = mu.weights * np.abs(row) ** 2 / bxx
    mu_x = NevaiMeasure(complex(x), mu.nodes, masses)
    nu_x = NevaiMeasure(complex(x), mu.nodes, masses * bxx / ke.dim)
    return mu_x, nu_x, nu_x.mass
