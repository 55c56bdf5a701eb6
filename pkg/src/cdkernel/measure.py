"""Finite atomic measures on the complex plane, metric weights and bumps.

A ``DiscreteMeasure`` is a quadrature model of a Borel measure: a list of
distinct complex nodes with positive masses. Sections of the k-th power
of the line bundle are weighted pointwise by ``exp(-k * phi(z))`` where
``phi`` is carried by a ``MetricWeight``.
"""

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import (
    EmptyMeasure,
    InputError,
    NonfiniteNode,
    NonpositiveWeight,
    ParseError,
)

__all__ = [
    "DiscreteMeasure",
    "MetricWeight",
    "BumpProfile",
    "make_measure",
    "gen_circle",
    "gen_interval",
    "add_atoms",
    "truncate",
    "is_dominated",
    "zero_weight",
    "gaussian_weight",
    "sampled_weight",
    "load_measure",
    "save_measure",
]

NODE_TOL = 1e-12
DROP_TOL = 1e-300
DOMINATION_TOL = 1e-14


@dataclass(frozen=True, eq=False)
class DiscreteMeasure:
    """Atomic measure ``sum_j w_j * delta(z_j)``.

    Build through :func:`make_measure` (or the generators), which enforce
    finiteness, positivity and node deduplication.
    """

    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        self.nodes.setflags(write=False)
        self.weights.setflags(write=False)

    def __len__(self):
        return len(self.nodes)

    def __eq__(self, other):
        if not isinstance(other, DiscreteMeasure):
            return NotImplemented
        return np.array_equal(self.nodes, other.nodes) and np.array_equal(
            self.weights, other.weights
        )

    __hash__ = None

    @property
    def mass(self):
        return float(np.sum(self.weights))

    def scaled(self, c):
        """Return ``c * mu`` for ``c > 0``."""
        return make_measure(self.nodes, c * self.weights)

    def moment(self, a):
        """``sum_j w_j z_j**a``."""
        return complex(np.sum(self.weights * self.nodes**a))

    def diameter(self):
        z = self.nodes
        return float(np.max(np.abs(z[:, None] - z[None, :])))


@dataclass(frozen=True)
class MetricWeight:
    """Continuous log-weight ``phi`` so that ``|sigma(z)| = exp(-phi(z))``.

    `evaluator` must accept and return numpy arrays elementwise.
    """

    evaluator: Callable[[np.ndarray], np.ndarray]
    description: str = "custom"

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return np.asarray(self.evaluator(z), dtype=float) * np.ones(z.shape)


def zero_weight():
    """The flat metric, ``phi = 0``."""
    return MetricWeight(lambda z: np.zeros(np.shape(z)), "zero")


def gaussian_weight(c):
    """``phi(z) = c * |z|**2``."""
    c = float(c)
    return MetricWeight(lambda z: c * np.abs(z) ** 2, f"gaussian({c!r})")


def sampled_weight(nodes, values):
    """Weight known only at sample points.

    Off the samples the value of the nearest sample is used, so the weight
    is exact on the nodes it came with and piecewise constant elsewhere.
    """
    nodes = np.asarray(nodes, dtype=complex).copy()
    values = np.asarray(values, dtype=float).copy()
    if nodes.shape != values.shape or nodes.size == 0:
        raise InputError("sampled weight needs matching non-empty nodes and values")

    def evaluate(z):
        z = np.asarray(z, dtype=complex)
        flat = z.reshape(-1)
        idx = np.argmin(np.abs(flat[:, None] - nodes[None, :]), axis=1)
        return values[idx].reshape(z.shape)

    return MetricWeight(evaluate, "samples")


@dataclass(frozen=True)
class BumpProfile:
    """Radial cutoff: 0 on ``|z - center| <= r_in``, 1 beyond ``r_out``, linear between."""

    center: complex
    r_in: float
    r_out: float

    def __post_init__(self):
        if not (0.0 < self.r_in < self.r_out):
            raise InputError(f"bump needs 0 < r_in < r_out, got {self.r_in}, {self.r_out}")

    def __call__(self, z):
        r = np.abs(np.asarray(z, dtype=complex) - self.center)
        return np.clip((r - self.r_in) / (self.r_out - self.r_in), 0.0, 1.0)


def _dedup(nodes, weights):
    keep_nodes = []
    keep_weights = []
    for z, w in zip(nodes, weights):
        if keep_nodes:
            d = np.abs(np.asarray(keep_nodes) - z)
            j = int(np.argmin(d))
            if d[j] < NODE_TOL:
                keep_weights[j] += w
                continue
        keep_nodes.append(z)
        keep_weights.append(w)
    return np.array(keep_nodes, dtype=complex), np.array(keep_weights, dtype=float)


def make_measure(nodes, weights):
    """Build a validated ``DiscreteMeasure``.

    Nodes closer than ``1e-12`` are merged (the first one's position is
    kept) and their weights summed.

    Raises
    ------
    EmptyMeasure, NonpositiveWeight, NonfiniteNode
    """
    nodes = np.atleast_1d(np.asarray(nodes, dtype=complex))
    weights = np.atleast_1d(np.asarray(weights, dtype=float))
    if nodes.ndim != 1 or weights.ndim != 1 or len(nodes) != len(weights):
        raise InputError(
            f"nodes and weights must be 1-d of equal length, got {nodes.shape}, {weights.shape}"
        )
    if len(nodes) == 0:
        raise EmptyMeasure("measure has no atoms")
    if not np.all(np.isfinite(nodes)):
        raise NonfiniteNode("measure node is not finite")
    if not np.all(np.isfinite(weights) & (weights > 0)):
        bad = weights[~(np.isfinite(weights) & (weights > 0))][0]
        raise NonpositiveWeight(f"weight {bad!r} is not positive")
    z, w = _dedup(nodes, weights)
    return DiscreteMeasure(z, w)


def gen_circle(m, radius=1.0):
    """Uniform probability measure on the m-th roots of unity scaled by `radius`."""
    if m < 1:
        raise InputError("gen_circle needs m >= 1")
    if radius <= 0:
        raise InputError("gen_circle needs a positive radius")
    j = np.arange(m)
    nodes = radius * np.exp(2j * np.pi * j / m)
    # exact values at the quarter points keep symmetric tests clean
    nodes = np.where(np.abs(nodes.real) < 1e-15 * radius, 1j * nodes.imag, nodes)
    nodes = np.where(np.abs(nodes.imag) < 1e-15 * radius, nodes.real + 0j, nodes)
    return make_measure(nodes, np.full(m, 1.0 / m))


def gen_interval(m, rule="chebyshev"):
    """Discrete probability measure on [-1, 1].

    ``chebyshev`` uses the Gauss-Chebyshev nodes ``cos((2j+1) pi / 2m)``
    (a discretization of ``dx / (pi sqrt(1 - x^2))``); ``uniform`` uses the
    midpoints of m equal cells.
    """
    if m < 1:
        raise InputError("gen_interval needs m >= 1")
    j = np.arange(m)
    if rule == "chebyshev":
        x = np.cos((2 * j + 1) * np.pi / (2 * m))
        x[np.abs(x) < 1e-15] = 0.0
    elif rule == "uniform":
        x = -1.0 + (2 * j + 1) / m
    else:
        raise InputError(f"unknown interval rule {rule!r}")
    return make_measure(x.astype(complex), np.full(m, 1.0 / m))


def add_atoms(base, atoms):
    """Sum of two measures; coincident nodes have their weights added."""
    return make_measure(
        np.concatenate([base.nodes, atoms.nodes]),
        np.concatenate([base.weights, atoms.weights]),
    )


def truncate(mu, bump):
    """Multiply the weights of `mu` by the bump profile.

    Atoms whose weight drops below ``1e-300`` are removed.

    Raises
    ------
    EmptyMeasure
        If the bump kills every atom.
    """
    w = mu.weights * bump(mu.nodes)
    keep = w >= DROP_TOL
    if not np.any(keep):
        raise EmptyMeasure("truncation removed every atom")
    return DiscreteMeasure(mu.nodes[keep].copy(), w[keep].copy())


def match_nodes(mu1, mu2):
    """Index into ``mu2.nodes`` for each node of `mu1`, ``-1`` where absent."""
    d = np.abs(mu1.nodes[:, None] - mu2.nodes[None, :])
    j = np.argmin(d, axis=1)
    found = d[np.arange(len(mu1)), j] < NODE_TOL
    return np.where(found, j, -1)


def is_dominated(mu1, mu2):
    """Nodewise ``mu1 <= mu2``: every atom of `mu1` is an atom of `mu2` at least as heavy."""
    j = match_nodes(mu1, mu2)
    if np.any(j < 0):
        return False
    return bool(np.all(mu2.weights[j] >= mu1.weights - DOMINATION_TOL))


def load_measure(path):
    """Read a measure file.

    The format is CSV with columns ``re,im,weight,phi``, one atom per row;
    blank lines and ``#`` comments are ignored.

    Returns
    -------
    mu : DiscreteMeasure
    phi : MetricWeight
        The ``phi`` column as a sampled weight.
    """
    nodes, weights, phis = [], [], []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = [p.strip() for p in line.split(",")]
            if len(parts) != 4:
                raise ParseError(f"expected 4 columns re,im,weight,phi, got {len(parts)}", lineno)
            try:
                re_, im_, w, phi = (float(p) for p in parts)
            except ValueError:
                raise ParseError(f"cannot parse {line!r} as numbers", lineno) from None
            if not (math.isfinite(re_) and math.isfinite(im_) and math.isfinite(phi)):
                raise ParseError("node and phi must be finite", lineno)
            if not (math.isfinite(w) and w > 0):
                raise ParseError(f"weight {w!r} is not positive", lineno)
            nodes.append(complex(re_, im_))
            weights.append(w)
            phis.append(phi)
    if not nodes:
        raise EmptyMeasure(f"{path}: no atoms")
    mu = make_measure(nodes, weights)
    return mu, sampled_weight(nodes, phis)


def save_measure(path, mu, phi=None):
    """Write `mu` (and `phi` sampled on its nodes) with 17 significant digits."""
    values = np.zeros(len(mu)) if phi is None else phi(mu.nodes)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("# re,im,weight,phi\n")
        for z, w, v in zip(mu.nodes, mu.weights, values):
            fh.write(f"{z.real:.17g},{z.imag:.17g},{w:.17g},{v:.17g}\n")
