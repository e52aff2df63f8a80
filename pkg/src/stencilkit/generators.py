"""Standard 1D stencils from exact moment conditions.

A stencil on offsets ``u_0..u_{n-1}`` approximating the p-th derivative
solves the square system ``sum_i a_i u_i**k / k! = delta_{k,p}`` for
``k = 0..n-1``.  The system is solved over the rationals, so weights such
as ``-8/12`` come out exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .errors import SingularSystemError, UnsupportedAccuracyError
from .stencil import Stencil, add, compose, embed

__all__ = ["StencilSpec", "make", "solve_rational", "laplacian", "builtin", "BUILTINS"]

STYLES = ("centered", "forward", "backward")


def solve_rational(A, b):
    """Solve ``A x = b`` exactly by Gauss-Jordan elimination over Fractions."""
    n = len(A)
    M = [[Fraction(v) for v in row] + [Fraction(rhs)] for row, rhs in zip(A, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            raise SingularSystemError(f"no pivot in column {col}")
        M[col], M[piv] = M[piv], M[col]
        p = M[col][col]
        M[col] = [v / p for v in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [row[n] for row in M]


@dataclass(frozen=True)
class StencilSpec:
    derivative: int
    accuracy: int
    style: str = "centered"

    def __post_init__(self):
        if self.derivative < 1:
            raise ValueError("derivative order must be >= 1")
        if self.accuracy < 1:
            raise UnsupportedAccuracyError("accuracy must be >= 1")
        if self.style not in STYLES:
            raise ValueError(f"style must be one of {STYLES}")

    def offsets(self) -> list[int]:
        p, q = self.derivative, self.accuracy
        if self.style == "centered":
            # symmetric windows gain one order by parity, so round q up to even
            q_even = q + (q % 2)
            m = (p + q_even - 1) // 2
            return list(range(-m, m + 1))
        n = p + q
        if self.style == "forward":
            return list(range(n))
        return list(range(-(n - 1), 1))


def make(spec: StencilSpec | None = None, *, p=None, q=None, style="centered") -> Stencil:
    """Finite-difference stencil for ``spec`` (or ``p``, ``q``, ``style``).

    >>> make(p=2, q=2)
    Stencil({(-1,): 1, (0,): -2, (1,): 1}, h_power=-2)
    """
    if spec is None:
        spec = StencilSpec(p, q, style)
    offs = spec.offsets()
    n = len(offs)
    A = [[Fraction(u**k, factorial(k)) for u in offs] for k in range(n)]
    b = [int(k == spec.derivative) for k in range(n)]
    weights = solve_rational(A, b)
    return Stencil(dict(zip(offs, weights)), h_power=-spec.derivative)


def laplacian(d: int, accuracy: int = 2) -> Stencil:
    """Sum of centered second derivatives along each of ``d`` axes."""
    if d < 1:
        raise ValueError("dimension must be >= 1")
    if accuracy < 2 or accuracy % 2:
        raise UnsupportedAccuracyError(f"centered Laplacian needs even accuracy, got {accuracy}")
    d2 = make(p=2, q=accuracy)
    out = embed(d2, 0, d)
    for axis in range(1, d):
        out = add(out, embed(d2, axis, d))
    return out


def _dx():
    return make(p=1, q=2)


def _dxx():
    return make(p=2, q=2)


# Named 1D operators used in the stability study and on the command line.
BUILTINS = {
    "dx": _dx,
    "dxx": _dxx,
    "dxxxx": lambda: make(p=4, q=2),
    "dx-dx": lambda: compose(_dx(), _dx()),
    "dx-dxx": lambda: compose(_dx(), _dxx()),
    "dxx-dxx": lambda: compose(_dxx(), _dxx()),
    "dx-dx-dxx": lambda: compose(_dx(), compose(_dx(), _dxx())),
    "laplacian-2d": lambda: laplacian(2),
    "bilaplacian-2d": lambda: compose(laplacian(2), laplacian(2)),
    "laplacian-3d": lambda: laplacian(3),
    "bilaplacian-3d": lambda: compose(laplacian(3), laplacian(3)),
}


def builtin(name: str) -> Stencil:
    try:
        return BUILTINS[name]()
    except KeyError:
        raise KeyError(f"unknown builtin {name!r}; choose from {sorted(BUILTINS)}") from None
