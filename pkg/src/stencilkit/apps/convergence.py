"""Grid-refinement studies of composed derivative stencils."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from ..generators import make
from ..stencil import Stencil, compose, outer_product

__all__ = [
    "ConvergenceFit",
    "fit_loglog",
    "apply_at_point",
    "converge_1d",
    "converge_2d",
    "third_derivative_stencil",
    "mixed_43_stencil",
]


@dataclass(frozen=True)
class ConvergenceFit:
    """Least-squares line ``log err = slope * log h + log C``.

    ``residual`` is the RMS misfit of the line in log space.
    """

    slope: float
    coefficient: float
    samples: tuple[tuple[float, float], ...]
    residual: float

    def write_csv(self, path, header=("h", "error")):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            for h, e in self.samples:
                w.writerow([repr(h), repr(e)])

    def summary(self) -> str:
        return f"slope={self.slope:.4f} C={self.coefficient:.6g} residual={self.residual:.2e}"


def fit_loglog(hs: Sequence[float], errors: Sequence[float]) -> ConvergenceFit:
    hs = np.asarray(hs, dtype=float)
    errors = np.abs(np.asarray(errors, dtype=float))
    if hs.size < 3:
        raise ValueError("a convergence fit needs at least 3 samples")
    x, y = np.log(hs), np.log(errors)
    slope, intercept = np.polyfit(x, y, 1)
    resid = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    return ConvergenceFit(float(slope), float(np.exp(intercept)), tuple(zip(hs.tolist(), errors.tolist())), resid)


def apply_at_point(s: Stencil, f: Callable, x0, h: float) -> float:
    """Evaluate ``sum w_j f(x0 + h u_j) * h**h_power`` in floating point."""
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    offs = np.array(list(s.entries.keys()), dtype=float)
    w = np.array([float(v) for v in s.entries.values()])
    pts = x0[None, :] + h * offs
    vals = f(*pts.T)
    # sum small terms first: weights of both signs cancel heavily
    terms = w * vals
    return float(np.sum(terms[np.argsort(np.abs(terms))])) * h ** s.h_power


def third_derivative_stencil() -> Stencil:
    """Second-order f''' from the centered first and second derivatives."""
    return compose(make(p=1, q=2), make(p=2, q=2))


def mixed_43_stencil() -> Stencil:
    """Fourth-order f^(4,3) as the outer product of two composed stencils."""
    d1, d2 = make(p=1, q=4), make(p=2, q=4)
    return outer_product(compose(d2, d2), compose(d1, d2))


def converge_1d(hs: Sequence[float] | None = None) -> ConvergenceFit:
    """Error of the composed f''' of ``sin x cos x`` at ``x = pi``.

    The leading error is ``h**2 * f^(5)(pi) / 4 = 4 h**2``.
    """
    if hs is None:
        hs = 2.0 ** -np.arange(2, 9)
    s = third_derivative_stencil()
    f = lambda x: np.sin(x) * np.cos(x)
    exact = -4.0 * np.cos(2 * np.pi)
    errs = [apply_at_point(s, f, np.pi, h) - exact for h in hs]
    return fit_loglog(hs, errs)


def converge_2d(hs: Sequence[float] | None = None) -> ConvergenceFit:
    """Error of the composed f^(4,3) of ``sin x cos y + cos x sin y``.

    Evaluated at ``(2*pi, pi/3)``; the expected error constant is 1/30.
    The default ladder stays where round-off (which grows like ``h**-7``)
    is well below the truncation error.
    """
    if hs is None:
        hs = np.array([0.3, 0.25, 0.2, 0.15, 0.125, 0.1])
    s = mixed_43_stencil()
    f = lambda x, y: np.sin(x) * np.cos(y) + np.cos(x) * np.sin(y)
    x0 = (2 * np.pi, np.pi / 3)
    exact = np.sin(x0[0]) * np.sin(x0[1]) - np.cos(x0[0]) * np.cos(x0[1])
    errs = [apply_at_point(s, f, x0, h) - exact for h in hs]
    return fit_loglog(hs, errs)
