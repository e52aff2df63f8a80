"""Simply supported plate: the biharmonic equation on the unit square.

The operator is the 5-point Laplacian composed with itself and assembled on
interior unknowns with odd-reflection ghosts.  With the manufactured
solution ``sin(pi x) sin(pi y)`` the right-hand side is
``4 pi**4 sin(pi x) sin(pi y)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..generators import laplacian
from ..grid import GridSpec, assemble
from ..linalg import SolveOptions, cg_solve
from ..stencil import compose
from .convergence import ConvergenceFit, fit_loglog

__all__ = ["BiharmonicResult", "solve_plate", "biharmonic_solve"]


@dataclass(frozen=True)
class BiharmonicResult:
    grid: GridSpec
    solution: np.ndarray
    exact: np.ndarray
    residual: float

    @property
    def max_error(self) -> float:
        return float(np.max(np.abs(self.solution - self.exact)))


def exact_plate(x, y):
    return np.sin(np.pi * x) * np.sin(np.pi * y)


def forcing(x, y):
    return 4 * np.pi**4 * np.sin(np.pi * x) * np.sin(np.pi * y)


def solve_plate(n: int, rel_tol: float = 1e-10) -> BiharmonicResult:
    """Solve on ``n`` points per axis (``h = 1/(n-1)``)."""
    g = GridSpec.unit_square_simply_supported(n)
    L = laplacian(2)
    m = assemble(compose(L, L), g)
    x, y = g.coords()
    b = forcing(x, y)
    u = cg_solve(m, b, SolveOptions(rel_tol=rel_tol))
    res = float(np.linalg.norm(b - m @ u) / np.linalg.norm(b))
    return BiharmonicResult(g, u, exact_plate(x, y), res)


def biharmonic_solve(n_ladder: Sequence[int] = (9, 17, 33, 65), rel_tol: float = 1e-9) -> ConvergenceFit:
    """l-infinity error against the exact plate deflection over a grid ladder.

    ``rel_tol`` defaults above 1e-10 because at ``h = 1/64`` the rounding in
    ``m @ x`` alone (entries near ``20/h**4``) is already about 1e-10 of
    ``||b||``.
    """
    hs, errs = [], []
    for n in n_ladder:
        r = solve_plate(n, rel_tol)
        hs.append(r.grid.h)
        errs.append(r.max_error)
    return fit_loglog(hs, errs)
