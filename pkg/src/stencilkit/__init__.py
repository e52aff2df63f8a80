"""Exact finite-difference stencil algebra with analysis and PDE drivers."""

from .errors import *  # noqa: F401,F403
from .generators import BUILTINS, StencilSpec, builtin, laplacian, make, solve_rational
from .grid import GridSpec, SparsityReport, apply, assemble, sparsity_report, write_matrix_market
from .linalg import SolveOptions, SpectrumReport, cg_solve, periodic_spectrum, power_iteration
from .stability import StabilityReport, growth_factor_csv, max_stable_dt, symbol
from .stencil import (
    Stencil,
    add,
    compose,
    embed,
    identity,
    linear_combine,
    outer_product,
    scale,
    shift,
)
from .taylor import (
    AccuracyCheck,
    StencilReport,
    TaylorTable,
    analyze,
    expand,
    format_series,
    min_accuracy_check,
    normalize,
    report,
    retarget,
)

__version__ = "0.1.0"
