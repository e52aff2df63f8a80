"""Assembling stencils into sparse operators on structured grids.

Unknowns are ordered lexicographically with x fastest.  Periodic axes wrap
indices; simply-supported axes keep interior points only and fill ghost
values by odd reflection (``f[-j] = -f[j]``), which encodes ``f = 0`` and
``f'' = 0`` on the boundary.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np
import scipy.io
import scipy.sparse as sp

from .errors import DimMismatchError, ShapeMismatchError, StencilWiderThanGridError
from .stencil import Stencil

__all__ = ["GridSpec", "assemble", "sparsity_report", "SparsityReport", "apply", "write_matrix_market"]

PERIODIC = "periodic"
SIMPLY_SUPPORTED = "simply_supported"


@dataclass(frozen=True)
class GridSpec:
    """Uniform structured grid.

    ``n`` counts grid points per axis.  On a periodic axis they sit at
    ``origin + i*h`` for ``i < n``; on a simply-supported axis points ``0`` and
    ``n-1`` are the boundary and only ``n-2`` interior points are unknowns.
    """

    n: tuple[int, ...]
    h: float
    bc: tuple[str, ...] = None
    origin: tuple[float, ...] = None

    def __post_init__(self):
        n = (self.n,) if isinstance(self.n, int) else tuple(int(v) for v in self.n)
        object.__setattr__(self, "n", n)
        d = len(n)
        bc = self.bc
        if bc is None:
            bc = (PERIODIC,) * d
        elif isinstance(bc, str):
            bc = (bc,) * d
        bc = tuple(bc)
        origin = self.origin
        if origin is None:
            origin = (0.0,) * d
        elif isinstance(origin, (int, float)):
            origin = (float(origin),) * d
        object.__setattr__(self, "bc", bc)
        object.__setattr__(self, "origin", tuple(float(o) for o in origin))
        if len(bc) != d or len(self.origin) != d:
            raise DimMismatchError("n, bc and origin need one entry per axis")
        if any(v < 3 for v in n):
            raise ValueError("need at least 3 points per axis")
        if self.h <= 0:
            raise ValueError("spacing h must be positive")
        for b in bc:
            if b not in (PERIODIC, SIMPLY_SUPPORTED):
                raise ValueError(f"unknown boundary kind {b!r}")

    @classmethod
    def periodic(cls, n, h, dim=None, origin=0.0):
        if isinstance(n, int):
            n = (n,) * (dim or 1)
        return cls(tuple(n), h, PERIODIC, origin)

    @classmethod
    def unit_square_simply_supported(cls, n: int, dim: int = 2):
        """``n`` points per axis on ``[0, 1]**dim`` including both boundaries."""
        return cls((n,) * dim, 1.0 / (n - 1), SIMPLY_SUPPORTED, 0.0)

    @property
    def dim(self) -> int:
        return len(self.n)

    @property
    def shape(self) -> tuple[int, ...]:
        """Unknowns per axis, x first."""
        return tuple(v if b == PERIODIC else v - 2 for v, b in zip(self.n, self.bc))

    @property
    def size(self) -> int:
        return int(np.prod(self.shape))

    def axis_coords(self, axis: int) -> np.ndarray:
        n, b, o = self.n[axis], self.bc[axis], self.origin[axis]
        idx = np.arange(n) if b == PERIODIC else np.arange(1, n - 1)
        return o + idx * self.h

    def coords(self) -> list[np.ndarray]:
        """Flattened coordinate arrays of the unknowns, one per axis."""
        axes = [self.axis_coords(a) for a in range(self.dim)]
        # x fastest: reverse for meshgrid(ij) then flatten in C order
        mesh = np.meshgrid(*axes[::-1], indexing="ij")
        return [m.ravel() for m in mesh[::-1]]

    def to_field(self, vec) -> np.ndarray:
        """Reshape a flat vector to an array indexed ``[..., y, x]``."""
        return np.asarray(vec).reshape(self.shape[::-1])


def _axis_map(idx, off, n, bc):
    """Target unknown index and sign along one axis; -1 marks a dropped entry."""
    if bc == PERIODIC:
        return (idx + off) % n, np.ones_like(idx)
    j = idx + 1 + off  # grid index, boundary at 0 and n-1
    sign = np.ones_like(j)
    low = j < 0
    j = np.where(low, -j, j)
    sign = np.where(low, -sign, sign)
    high = j > n - 1
    j = np.where(high, 2 * (n - 1) - j, j)
    sign = np.where(high, -sign, sign)
    on_boundary = (j == 0) | (j == n - 1)
    return np.where(on_boundary, -1, j - 1), np.where(on_boundary, 0, sign)


def assemble(s: Stencil, g: GridSpec) -> sp.csr_matrix:
    """Sparse matrix applying ``s`` (weights times ``h**h_power``) on ``g``."""
    if s.dim != g.dim:
        raise DimMismatchError(f"{s.dim}-d stencil on a {g.dim}-d grid")
    for axis in range(g.dim):
        lo, hi = s.support(axis)
        n, bc = g.n[axis], g.bc[axis]
        if bc == PERIODIC and hi - lo >= n:
            raise StencilWiderThanGridError(f"support [{lo}, {hi}] wraps onto itself with n={n}")
        if bc == SIMPLY_SUPPORTED and max(-lo, hi) > n - 2:
            raise StencilWiderThanGridError(f"support [{lo}, {hi}] too wide for n={n}")
    shape = g.shape
    N = g.size
    grids = np.meshgrid(*[np.arange(m) for m in shape[::-1]], indexing="ij")
    idx = [a.ravel() for a in grids[::-1]]  # idx[0] is x
    strides = np.cumprod((1,) + shape[:-1])
    hs = g.h ** s.h_power
    rows, cols, vals = [], [], []
    row = np.arange(N)
    for off, w in s.entries.items():
        col = np.zeros(N, dtype=np.int64)
        sign = np.ones(N)
        keep = np.ones(N, dtype=bool)
        for axis in range(g.dim):
            j, sg = _axis_map(idx[axis], off[axis], g.n[axis], g.bc[axis])
            keep &= j >= 0
            col += np.where(j >= 0, j, 0) * strides[axis]
            sign *= sg
        rows.append(row[keep])
        cols.append(col[keep])
        vals.append(float(w) * hs * sign[keep])
    m = sp.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(N, N)
    ).tocsr()
    m.sum_duplicates()
    m.eliminate_zeros()
    m.sort_indices()
    return m


class SparsityReport(NamedTuple):
    nnz: int
    percentage: Fraction

    def __str__(self):
        return f"nnz={self.nnz} ({float(self.percentage):g}%)"


def sparsity_report(m) -> SparsityReport:
    """Nonzero count and exact fill percentage ``100 * nnz / (rows * cols)``."""
    rows, cols = m.shape
    return SparsityReport(int(m.nnz), Fraction(100 * int(m.nnz), rows * cols))


def apply(m, x) -> np.ndarray:
    x = np.asarray(x)
    if x.shape[0] != m.shape[1]:
        raise ShapeMismatchError(f"matrix has {m.shape[1]} columns, vector has {x.shape[0]} rows")
    return m @ x


def write_matrix_market(path, m, comment: str = ""):
    scipy.io.mmwrite(str(path), m, comment=comment)
