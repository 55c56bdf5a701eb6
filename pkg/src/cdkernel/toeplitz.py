"""Toeplitz operators, Schatten norms, spectral measures and the commutator operator.

Matrices are expressed in an orthonormal basis of the polynomial space,
so ``T_k(f)_{ij} = <f p_j, p_i>`` and the trace of ``T_k(f)`` is the
integral of f against ``B_k(x, x) dmu(x)``.
"""

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .basis import evaluate
from .errors import DenominatorVanishes, InputError
from .linalg import hermitian, hermitian_eig, singular_values

__all__ = [
    "SymbolFunction",
    "const",
    "re_z",
    "identity_symbol",
    "rational",
    "symbol",
    "multiply",
    "conjugate",
    "toeplitz",
    "schatten",
    "algebra_defect",
    "SpectralMeasure",
    "spectral_measure",
    "SzegoIdentity",
    "szego_identity",
    "moment_gap",
    "SOperator",
    "s_operator",
]

REAL_TOL = 1e-14
RANK_RTOL = 1e-8
RANK_ATOL = 1e-12
DENOMINATOR_TOL = 1e-12


@dataclass(frozen=True)
class SymbolFunction:
    """Continuous symbol f on the plane.

    `numerator` / `denominator` are set for polynomial ratios
    ``s1 / s2`` (coefficients in increasing powers of z); the commutator
    operator uses them for its rank bound and pole check.
    """

    evaluator: Callable[[np.ndarray], np.ndarray]
    real: bool = False
    description: str = "custom"
    numerator: Optional[Sequence[complex]] = None
    denominator: Optional[Sequence[complex]] = None

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        v = np.asarray(self.evaluator(z), dtype=complex) * np.ones(z.shape)
        if self.real:
            if np.any(np.abs(v.imag) > REAL_TOL * (1.0 + np.abs(v.real))):
                raise InputError(f"symbol {self.description} flagged real has imaginary values")
            return v.real
        return v

    @property
    def degree(self):
        """``k0 = max(deg s1, deg s2)`` for rational symbols, else None."""
        if self.numerator is None:
            return None
        return max(_degree(self.numerator), _degree(self.denominator or [1.0]))


def _degree(coeffs):
    c = np.trim_zeros(np.asarray(coeffs, dtype=complex), "b")
    return max(len(c) - 1, 0)


def const(c):
    c = complex(c)
    real = c.imag == 0
    value = c.real if real else c
    return SymbolFunction(
        lambda z: np.full(np.shape(z), value), real, f"const({c!r})", [c], [1.0]
    )


def re_z():
    return SymbolFunction(lambda z: np.real(z), True, "re_z")


def identity_symbol():
    """``f(z) = z``, the ratio ``(z sigma) / sigma`` with ``k0 = 1``."""
    return SymbolFunction(lambda z: z, False, "z", [0.0, 1.0], [1.0])


def rational(numerator, denominator=(1.0,)):
    """``f = s1 / s2`` from polynomial coefficients in increasing powers."""
    num = [complex(c) for c in numerator]
    den = [complex(c) for c in denominator]
    if not np.any(np.abs(den) > 0):
        raise InputError("denominator polynomial is identically zero")
    P = np.polynomial.polynomial

    def evaluate(z):
        return P.polyval(z, num) / P.polyval(z, den)

    return SymbolFunction(evaluate, False, f"rational({num}, {den})", num, den)


def symbol(fn, real=False, description="custom"):
    """Wrap an arbitrary vectorized callable."""
    return SymbolFunction(fn, real, description)


def multiply(f, g):
    """Pointwise product ``f * g``."""
    return SymbolFunction(
        lambda z: f(z) * g(z), f.real and g.real, f"({f.description})*({g.description})"
    )


def conjugate(f):
    """Pointwise complex conjugate of f."""
    if f.real:
        return f
    return SymbolFunction(lambda z: np.conj(f(z)), False, f"conj({f.description})")


def _values(basis, mu):
    if mu is None or mu is basis.measure:
        return basis.measure, basis.node_values
    return mu, evaluate(basis, mu.nodes)


def toeplitz(basis, mu, f):
    """Matrix of ``T_k(f)``: ``T_ij = sum_a w_a f(z_a) p_j(z_a) conj(p_i(z_a))``.

    Hermitian (and stored symmetrized) when f is real.
    """
    mu, V = _values(basis, mu)
    fz = f(mu.nodes)
    T = V.conj().T @ ((mu.weights * fz)[:, None] * V)
    if f.real:
        return hermitian(T)
    return T


def schatten(A, p):
    """Normalized Schatten norm ``((1/n) sum sigma_i^p)^(1/p)``, with n the row count."""
    if not p >= 1:
        raise InputError(f"Schatten exponent must be >= 1, got {p}")
    sv = singular_values(A)
    n = np.shape(A)[0]
    if np.isinf(p):
        return float(sv[0])
    top = sv[0]
    if top == 0.0:
        return 0.0
    # scale out the largest value so sigma**p cannot overflow
    return float(top * (np.sum((sv / top) ** p) / n) ** (1.0 / p))


def algebra_defect(basis, mu, f, g, p):
    """``|| T_k(f) T_k(g) - T_k(f g) ||_p``."""
    Tf = toeplitz(basis, mu, f)
    Tg = toeplitz(basis, mu, g)
    Tfg = toeplitz(basis, mu, multiply(f, g))
    return schatten(Tf @ Tg - Tfg, p)


@dataclass(frozen=True)
class SpectralMeasure:
    """Uniform probability measure on the eigenvalues of a Hermitian operator."""

    eigenvalues: np.ndarray

    @property
    def weight(self):
        return 1.0 / len(self.eigenvalues)

    def moment(self, m):
        return float(np.mean(self.eigenvalues**m))

    def within(self, lo, hi, tol):
        return bool(np.all(self.eigenvalues >= lo - tol) and np.all(self.eigenvalues <= hi + tol))


def spectral_measure(T, method="lapack"):
    w, _ = hermitian_eig(T, method=method)
    return SpectralMeasure(w)


@dataclass(frozen=True)
class SzegoIdentity:
    trace_avg: float
    diag_integral: float
    spectral_mean: float

    @property
    def residual(self):
        vals = (self.trace_avg, self.diag_integral, self.spectral_mean)
        return max(vals) - min(vals)


def szego_identity(basis, mu, f):
    """The three equal quantities: ``Tr T_k(f) / n_k``, ``int f dmu_k^diag``, spectral mean."""
    if not f.real:
        raise InputError("szego_identity needs a real symbol")
    mu, V = _values(basis, mu)
    T = toeplitz(basis, mu, f)
    n = T.shape[0]
    trace_avg = float(np.real(np.trace(T))) / n
    diag = mu.weights * np.sum(np.abs(V) ** 2, axis=1) / n
    diag_integral = float(np.sum(diag * f(mu.nodes)))
    spectral_mean = spectral_measure(T).moment(1)
    return SzegoIdentity(trace_avg, diag_integral, spectral_mean)


def moment_gap(basis, mu, f, m):
    """``| Tr[T_k(f)^m] / n_k - int f^m dmu_k^diag |``."""
    if m < 1:
        raise InputError("moment order must be >= 1")
    if not f.real:
        raise InputError("moment_gap needs a real symbol")
    mu, V = _values(basis, mu)
    T = toeplitz(basis, mu, f)
    n = T.shape[0]
    lhs = float(np.real(np.trace(np.linalg.matrix_power(T, m)))) / n
    diag = mu.weights * np.sum(np.abs(V) ** 2, axis=1) / n
    rhs = float(np.sum(diag * f(mu.nodes) ** m))
    return abs(lhs - rhs)


@dataclass(frozen=True)
class SOperator:
    """Commutator-type operator ``S_k = (I - P) M_f P`` restricted to the section space.

    `matrix` has one row per atom (coordinates ``sqrt(w_a) S(z_a, .)``)
    and one column per basis element, so its singular values are those of
    ``S_k`` on ``L^2(mu)``.
    """

    matrix: np.ndarray
    singular_values: np.ndarray
    hs_norm_sq: float
    kernel_l2: float
    numerical_rank: int
    rank_bound: Optional[int]

    @property
    def rel_gap(self):
        return abs(self.hs_norm_sq - self.kernel_l2) / (1.0 + self.kernel_l2)


def s_operator(basis, mu, f, k0=None):
    """Assemble ``S_k(x, y) = int B(x, z) (f(x) - f(z)) B(z, y) dmu(z)`` on the atoms.

    Returns the operator, its Hilbert-Schmidt norm squared, the kernel
    form ``1/2 sum w_a w_b |B(a, b)|^2 |f(a) - f(b)|^2`` of the same
    quantity and the numerical rank, which is at most
    ``n_k - n_{k - k0} = k0`` for a ratio of polynomials of degree k0.

    Raises
    ------
    DenominatorVanishes
        If the denominator of a rational symbol is below ``1e-12`` at an atom.
    """
    mu, V = _values(basis, mu)
    z = mu.nodes
    if f.denominator is not None:
        den = np.polynomial.polynomial.polyval(z, np.asarray(f.denominator, dtype=complex))
        if np.any(np.abs(den) < DENOMINATOR_TOL):
            raise DenominatorVanishes("symbol denominator vanishes on the support")
    if k0 is None:
        k0 = f.degree
    fz = f(z).astype(complex)
    w = mu.weights
    K = V @ V.conj().T
    D = fz[:, None] - fz[None, :]
    S = np.sqrt(w)[:, None] * ((K * D) @ (w[:, None] * V))
    sv = singular_values(S)
    hs_norm_sq = float(np.sum(sv**2))
    kernel_l2 = 0.5 * float(np.real(w @ (np.abs(K) ** 2 * np.abs(D) ** 2) @ w))
    floor = max(RANK_RTOL * sv[0], RANK_ATOL * (1.0 + np.max(np.abs(fz))))
    rank = int(np.count_nonzero(sv > floor))
    bound = None if k0 is None else min(int(k0), basis.dim)
    return SOperator(S, sv, hs_norm_sq, kernel_l2, rank, bound)
