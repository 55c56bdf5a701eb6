"""Christoffel-Darboux kernels, localization measures and Toeplitz operators
for discrete measures on the complex plane."""

from .basis import OrthonormalBasis, evaluate, orthonormal_basis, vanishing_basis
from .errors import (
    BaseLocus,
    CDKernelError,
    ConfigError,
    DenominatorVanishes,
    DominationViolated,
    EmptyMeasure,
    InputError,
    NoConvergence,
    NonfiniteNode,
    NonpositiveWeight,
    NumericalError,
    ParseError,
    RankDeficient,
)
from .kernel import (
    KernelEvaluator,
    cd_kernel,
    diag_measure,
    diagonal,
    forbidden_scan,
    lubinsky_check,
    nevai_measure,
    offdiag_mass,
    peak_section,
    total_mass,
    truncation_error,
)
from .measure import (
    BumpProfile,
    DiscreteMeasure,
    MetricWeight,
    add_atoms,
    gaussian_weight,
    gen_circle,
    gen_interval,
    is_dominated,
    load_measure,
    make_measure,
    save_measure,
    truncate,
    zero_weight,
)
from .toeplitz import (
    SymbolFunction,
    algebra_defect,
    moment_gap,
    s_operator,
    schatten,
    spectral_measure,
    szego_identity,
    toeplitz,
)

__version__ = "0.1.0"

__all__ = [
    "OrthonormalBasis",
    "evaluate",
    "orthonormal_basis",
    "vanishing_basis",
    "BaseLocus",
    "CDKernelError",
    "ConfigError",
    "DenominatorVanishes",
    "DominationViolated",
    "EmptyMeasure",
    "InputError",
    "NoConvergence",
    "NonfiniteNode",
    "NonpositiveWeight",
    "NumericalError",
    "ParseError",
    "RankDeficient",
    "KernelEvaluator",
    "cd_kernel",
    "diag_measure",
    "diagonal",
    "forbidden_scan",
    "lubinsky_check",
    "nevai_measure",
    "offdiag_mass",
    "peak_section",
    "total_mass",
    "truncation_error",
    "BumpProfile",
    "DiscreteMeasure",
    "MetricWeight",
    "add_atoms",
    "gaussian_weight",
    "gen_circle",
    "gen_interval",
    "is_dominated",
    "load_measure",
    "make_measure",
    "save_measure",
    "truncate",
    "zero_weight",
    "SymbolFunction",
    "algebra_defect",
    "moment_gap",
    "s_operator",
    "schatten",
    "spectral_measure",
    "szego_identity",
    "toeplitz",
]
