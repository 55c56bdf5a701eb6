"""Experiment runners behind the CLI subcommands.

Each runner takes an :class:`~cdkernel.config.ExperimentConfig` and
returns a :class:`Table`; rows come out in ascending k. Randomized runs
draw from numpy's counter-based Philox generator keyed by the config
seed, so a fixed config reproduces the same table bit for bit.
"""

from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from .basis import orthonormal_basis
from .config import parse_symbol
from .errors import ConfigError
from .kernel import (
    KernelEvaluator,
    forbidden_scan,
    lubinsky_check,
    nevai_measure,
    offdiag_mass,
    total_mass,
    vanishing_order,
)
from .measure import make_measure
from .toeplitz import algebra_defect, moment_gap, s_operator, szego_identity

__all__ = [
    "Table",
    "make_rng",
    "format_value",
    "run_localization",
    "run_forbidden",
    "run_toeplitz",
    "run_lubinsky",
    "run_skop",
    "run_nevai",
    "RUNNERS",
]


@dataclass
class Table:
    columns: Sequence[str]
    rows: List[tuple]

    def column(self, name):
        i = list(self.columns).index(name)
        return [r[i] for r in self.rows]

    def to_csv(self, comment=None):
        lines = []
        if comment:
            lines.append(f"# {comment}")
        lines.append(",".join(self.columns))
        for row in self.rows:
            lines.append(",".join(format_value(v) for v in row))
        return "\n".join(lines) + "\n"


def format_value(v):
    """17 significant digits for floats, blank for missing values."""
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (complex, np.complexfloating)):
        return f"{v.real:.17g}{v.imag:+.17g}j"
    return f"{float(v):.17g}"


def make_rng(seed):
    """Philox-backed generator; the counter-based stream makes runs reproducible."""
    return np.random.Generator(np.random.Philox(int(seed)))


def run_localization(cfg):
    mu, phi = cfg.build_measure()
    rows = []
    for k in cfg.k:
        ke = KernelEvaluator(orthonormal_basis(mu, phi, k))
        trace = float(np.sum(mu.weights * np.sum(np.abs(ke.basis.node_values) ** 2, axis=1)))
        rows.append((k, offdiag_mass(ke, mu, cfg.delta), total_mass(ke, mu), abs(trace - k)))
    return Table(("k", "offdiag_mass", "total_mass", "trace_identity_residual"), rows)


def run_forbidden(cfg):
    for k in cfg.k:
        if vanishing_order(cfg.eps, k) >= k:
            raise ConfigError(f"eps = {cfg.eps} gives ceil(eps*k) >= k at k = {k}")
    mu, phi = cfg.build_measure()
    scan = forbidden_scan(
        mu, phi, cfg.y0, cfg.eps, cfg.k, cfg.probe_radius, cfg.probe_count, cfg.probe_rings
    )
    rows = [
        (r.k, r.m, r.sup_partial, r.sup_full, r.partial_trace, r.slope) for r in scan.rows
    ]
    return Table(("k", "m", "sup_partial_diag", "sup_full_diag", "partial_trace", "slope_so_far"), rows)


def run_toeplitz(cfg):
    mu, phi = cfg.build_measure()
    f = parse_symbol(cfg.f or "re_z")
    g = parse_symbol(cfg.g or cfg.f or "re_z")
    if not f.real:
        raise ConfigError("toeplitz needs a real symbol f for the trace identities")
    orders = range(2, cfg.moments + 1)
    rows = []
    for k in cfg.k:
        basis = orthonormal_basis(mu, phi, k)
        szego = szego_identity(basis, mu, f).residual
        gaps = tuple(moment_gap(basis, mu, f, m) for m in orders)
        for p in cfg.p:
            rows.append((k, p, algebra_defect(basis, mu, f, g, p), szego) + gaps)
    cols = ("k", "p", "algebra_defect", "szego_residual") + tuple(f"moment_gap_{m}" for m in orders)
    return Table(cols, rows)


def run_lubinsky(cfg):
    """Random dominated pairs ``mu1 <= mu2``; trial 0 compares a measure with itself."""
    mu, phi = cfg.build_measure()
    rng = make_rng(cfg.seed)
    n = len(mu)
    rows = []
    for trial in range(cfg.trials):
        k = int(cfg.k[rng.integers(len(cfg.k))])
        if trial == 0:
            factors = np.ones(n)
        else:
            shrink = rng.random(n) < 0.5
            factors = np.where(shrink, rng.uniform(0.05, 1.0, n), 1.0)
        j = int(rng.integers(n))
        if rng.random() < 0.5:
            x = mu.nodes[j]
        else:
            x = mu.nodes[j] + 0.1 * complex(*rng.uniform(-1.0, 1.0, 2))
        mu1 = make_measure(mu.nodes, mu.weights * factors)
        lhs, rhs = lubinsky_check(mu1, mu, phi, k, x)
        rows.append((trial, k, lhs, rhs, rhs - lhs))
    rows.sort(key=lambda r: (r[1], r[0]))
    return Table(("trial", "k", "lhs", "rhs", "margin"), rows)


def run_skop(cfg):
    mu, phi = cfg.build_measure()
    f = parse_symbol(cfg.f or "z")
    rows = []
    fitted = 0.0
    for k in cfg.k:
        basis = orthonormal_basis(mu, phi, k)
        s = s_operator(basis, mu, f, cfg.k0)
        if s.rank_bound:
            fitted = max(fitted, s.kernel_l2 / s.rank_bound)
        rows.append(
            (k, s.hs_norm_sq, s.kernel_l2, s.rel_gap, s.numerical_rank, s.rank_bound, fitted)
        )
    cols = ("k", "hs_norm_sq", "kernel_l2", "rel_gap", "numerical_rank", "rank_bound", "fitted_C")
    return Table(cols, rows)


def run_nevai(cfg):
    mu, phi = cfg.build_measure()
    rows = []
    for k in cfg.k:
        ke = KernelEvaluator(orthonormal_basis(mu, phi, k))
        vols = np.array([nevai_measure(ke, mu, z)[2] for z in mu.nodes])
        avg = float(np.sum(mu.weights * vols))
        for x in cfg.anchors:
            mu_x, _, vol = nevai_measure(ke, mu, x)
            rows.append((k, complex(x), mu_x.mass_outside(cfg.nevai_radius), vol, abs(avg - 1.0)))
    return Table(("k", "anchor", "mass_outside_r", "vol_nu", "avg_vol_identity_residual"), rows)


RUNNERS = {
    "localization": run_localization,
    "forbidden": run_forbidden,
    "toeplitz": run_toeplitz,
    "lubinsky": run_lubinsky,
    "skop": run_skop,
    "nevai": run_nevai,
}
