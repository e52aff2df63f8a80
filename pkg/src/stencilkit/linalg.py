"""Small sparse linear-algebra layer: CG, power iteration, periodic spectra."""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import NoConvergenceError, NonPeriodicError, ShapeMismatchError
from .grid import PERIODIC, GridSpec
from .stencil import Stencil

__all__ = [
    "SolveOptions",
    "cg_solve",
    "power_iteration",
    "SpectrumReport",
    "periodic_spectrum",
    "write_spectrum_csv",
]


@dataclass(frozen=True)
class SolveOptions:
    """CG controls.

    ``constant_nullspace`` removes the mean from ``b`` and from the answer,
    for singular periodic operators whose kernel is the constants.
    """

    rel_tol: float = 1e-10
    max_iter: int | None = None
    constant_nullspace: bool = False

    def __post_init__(self):
        if self.rel_tol <= 0:
            raise ValueError("rel_tol must be positive")


def cg_solve(m, b, opts: SolveOptions | None = None, x0=None) -> np.ndarray:
    """Solve ``m x = b`` for symmetric positive (semi-)definite ``m``.

    The returned ``x`` always satisfies ``||b - m x|| <= rel_tol * ||b||``
    for the true residual: when the recursive residual meets the target the
    true one is recomputed and, if it falls short, iteration restarts from
    it.

    Raises
    ------
    NoConvergenceError
        With the iteration count and the final relative residual.
    """
    opts = opts or SolveOptions()
    b = np.asarray(b, dtype=float)
    if m.shape[0] != m.shape[1] or m.shape[0] != b.shape[0]:
        raise ShapeMismatchError(f"matrix {m.shape} with rhs of length {b.shape[0]}")
    if opts.constant_nullspace:
        b = b - b.mean()
    bnorm = np.linalg.norm(b)
    if bnorm == 0:
        return np.zeros_like(b)
    target = opts.rel_tol * bnorm
    max_iter = opts.max_iter or 10 * b.shape[0]

    x = np.zeros_like(b) if x0 is None else np.array(x0, dtype=float)
    r = b - m @ x
    if opts.constant_nullspace:
        r -= r.mean()
    p = r.copy()
    rs = float(r @ r)
    for k in range(max_iter + 1):
        if np.sqrt(rs) <= target:
            r = b - m @ x
            if opts.constant_nullspace:
                r -= r.mean()
            rs = float(r @ r)
            if np.sqrt(rs) <= target:
                if opts.constant_nullspace:
                    x -= x.mean()
                return x
            p = r.copy()
        if k == max_iter:
            break
        q = m @ p
        pq = float(p @ q)
        if pq <= 0:
            break
        alpha = rs / pq
        x += alpha * p
        r -= alpha * q
        rs_new = float(r @ r)
        p *= rs_new / rs
        p += r
        rs = rs_new
    res = np.linalg.norm(b - m @ x) / bnorm
    raise NoConvergenceError(
        f"CG stopped after {k} iterations with relative residual {res:.3e}",
        iterations=k,
        residual=res,
    )


def power_iteration(m, tol: float = 1e-8, max_iter: int = 200_000, seed: int = 0) -> float:
    """Spectral radius of a symmetric matrix by power iteration.

    Starts from a seeded random vector and stops once the eigen-residual
    ``||m v - lambda v||`` drops below ``tol * |lambda|``, with ``lambda`` the
    Rayleigh quotient.
    """
    n = m.shape[0]
    if m.shape[1] != n:
        raise ShapeMismatchError("power iteration needs a square matrix")
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(n)
    v /= np.linalg.norm(v)
    lam = 0.0
    for k in range(1, max_iter + 1):
        w = m @ v
        lam = float(v @ w)
        r = np.linalg.norm(w - lam * v)
        wn = np.linalg.norm(w)
        if wn == 0:
            return 0.0
        if r <= tol * abs(lam):
            return abs(lam)
        v = w / wn
    raise NoConvergenceError(
        f"power iteration did not converge in {max_iter} steps", iterations=max_iter, residual=r
    )


@dataclass(frozen=True)
class SpectrumReport:
    eigenvalues: np.ndarray
    spectral_radius: float
    condition_estimate: float

    @classmethod
    def from_eigenvalues(cls, lam, zero_tol: float = 1e-12):
        lam = np.asarray(lam)
        mag = np.abs(lam)
        rho = float(mag.max())
        nz = mag[mag > zero_tol * max(rho, 1.0)]
        cond = rho / float(nz.min()) if nz.size else np.inf
        return cls(lam, rho, cond)

    def shifted(self, dt: float) -> "SpectrumReport":
        """Spectrum of the time-stepping matrix ``I + dt * M``."""
        return SpectrumReport.from_eigenvalues(1.0 + dt * self.eigenvalues)


def periodic_spectrum(s: Stencil, g: GridSpec) -> SpectrumReport:
    """Exact eigenvalues of ``assemble(s, g)`` on a fully periodic grid.

    The Fourier mode with angles ``theta_a = 2*pi*k_a/n_a`` is an eigenvector
    with eigenvalue ``h**h_power * sum_j w_j exp(i theta . u_j)``.
    """
    if any(b != PERIODIC for b in g.bc):
        raise NonPeriodicError("analytic spectrum needs every axis periodic")
    if s.dim != g.dim:
        raise ShapeMismatchError(f"{s.dim}-d stencil on a {g.dim}-d grid")
    thetas = [2 * np.pi * np.arange(n) / n for n in g.n]
    lam = np.zeros(tuple(g.n[::-1]), dtype=complex)
    for off, w in s.entries.items():
        phase = np.zeros_like(lam)
        for axis, th in enumerate(thetas):
            shape = [1] * g.dim
            shape[g.dim - 1 - axis] = -1
            phase = phase + (off[axis] * th).reshape(shape)
        lam += float(w) * np.exp(1j * phase)
    lam *= g.h ** s.h_power
    lam = lam.ravel()
    if np.max(np.abs(lam.imag)) <= 1e-12 * max(1.0, np.max(np.abs(lam))):
        lam = lam.real
    return SpectrumReport.from_eigenvalues(lam)


def write_spectrum_csv(path, report: SpectrumReport):
    lam = np.asarray(report.eigenvalues, dtype=complex)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["re", "im"])
        for z in lam:
            w.writerow([repr(float(z.real)), repr(float(z.imag))])
