"""Experiments built on the stencil toolkit: convergence studies and PDE solvers."""

from .biharmonic import BiharmonicResult, biharmonic_solve, solve_plate
from .cahn_hilliard import (
    CahnHilliardParams,
    CahnHilliardState,
    ch_init,
    ch_temporal_convergence,
    f_chem,
    f_chem_prime,
    free_energy,
    imex_step,
)
from .convergence import ConvergenceFit, converge_1d, converge_2d, fit_loglog
