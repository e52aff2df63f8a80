"""Von Neumann analysis of forward-Euler schemes ``df/dt = sign * L f``.

With ``f_j = xi**n exp(i j theta)`` the growth factor is
``xi = 1 + (dt / h**m) * sign * sigma(theta)``, where ``sigma`` is the
dimensionless symbol of the stencil and ``m = -h_power``.  Stability needs
``-2 <= dt/h**m * sign * sigma <= 0`` for every theta, which gives
``dt <= alpha * h**m`` with ``alpha = 2 / |min sign*sigma|``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import DimMismatchError, NotDissipativeError, UnstableForAllDtError
from .stencil import Stencil

__all__ = ["StabilityReport", "symbol", "max_stable_dt", "growth_factor_csv"]

N_SAMPLES = 8192
THETA_TOL = 1e-12


def _arrays(s: Stencil):
    if s.dim != 1:
        raise DimMismatchError(f"von Neumann analysis is 1D only, got dim={s.dim}")
    offs = np.array([k[0] for k in s.entries], dtype=float)
    w = np.array([float(v) for v in s.entries.values()])
    return offs, w


def symbol(s: Stencil, theta):
    """Dimensionless Fourier symbol ``sum_j w_j exp(i theta u_j)``.

    ``theta`` may be a scalar or an array of ``k*h`` values.
    """
    offs, w = _arrays(s)
    theta = np.asarray(theta, dtype=float)
    val = np.exp(1j * np.multiply.outer(theta, offs)) @ w
    return complex(val) if val.ndim == 0 else val


@dataclass(frozen=True)
class StabilityReport:
    """Time-step limit ``dt <= alpha * h**m`` for one stencil and sign."""

    m: int
    alpha: float
    symbol_min: float
    support: tuple[int, int]
    argmin_kh: float
    alpha_exact: Fraction | None = None

    def to_dict(self):
        d = {
            "m": self.m,
            "alpha": self.alpha,
            "symbol_min": self.symbol_min,
            "support": list(self.support),
            "argmin_kh": self.argmin_kh,
        }
        if self.alpha_exact is not None:
            d["alpha_exact"] = str(self.alpha_exact)
        return d


def _real_symbol(s, sign):
    offs, w = _arrays(s)

    def f(theta):
        return sign * float(np.cos(theta * offs) @ w)

    return f


def max_stable_dt(s: Stencil, sign: int = 1, candidates=(), rel_tol: float = 1e-9) -> StabilityReport:
    """Largest stable forward-Euler step for ``df/dt = sign * L f``.

    The minimum of ``sign * sigma`` is bracketed on a dense grid over
    ``[0, 2*pi)`` and polished with a bounded Brent search.  If one of
    ``candidates`` (exact rationals) matches the numeric ``alpha`` to
    ``rel_tol`` it is returned as ``alpha_exact``.

    Raises
    ------
    NotDissipativeError
        The symbol has an imaginary part (the stencil is not symmetric).
    UnstableForAllDtError
        ``sign * sigma`` is positive somewhere, so modes grow for every dt.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    theta = np.linspace(0.0, 2 * np.pi, N_SAMPLES, endpoint=False)
    sig = symbol(s, theta)
    scale = max(1.0, float(np.max(np.abs(sig))))
    if np.max(np.abs(sig.imag)) > 1e-12 * scale:
        raise NotDissipativeError("symbol is complex; the stencil is not symmetric")
    vals = sign * sig.real
    if np.max(vals) > 1e-12 * scale:
        raise UnstableForAllDtError(
            f"sign*symbol reaches {np.max(vals):.3g} > 0; unstable for every dt"
        )
    f = _real_symbol(s, sign)
    i = int(np.argmin(vals))
    step = theta[1] - theta[0]
    res = minimize_scalar(
        f, bounds=(theta[i] - step, theta[i] + step), method="bounded",
        options={"xatol": THETA_TOL},
    )
    t_min, v_min = (res.x, res.fun) if res.fun <= vals[i] else (theta[i], vals[i])
    if v_min >= 0:
        raise UnstableForAllDtError("symbol vanishes identically")
    alpha = 2.0 / abs(v_min)
    exact = None
    for c in candidates:
        c = Fraction(c)
        if abs(float(c) - alpha) <= rel_tol * alpha:
            exact = c
            break
    support = s.support(0)
    return StabilityReport(-s.h_power, alpha, float(v_min), support, float(t_min % (2 * np.pi)), exact)


def growth_factor_csv(s: Stencil, sign: int, dt_over_hm: float, n: int = 513) -> str:
    """CSV of ``theta, |xi|`` over ``[0, 2*pi]`` for plotting."""
    theta = np.linspace(0.0, 2 * np.pi, n)
    xi = 1.0 + dt_over_hm * sign * symbol(s, theta)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["theta", "abs_xi"])
    for t, x in zip(theta, np.abs(xi)):
        w.writerow([repr(float(t)), repr(float(x))])
    return buf.getvalue()
