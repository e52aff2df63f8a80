"""Truncated Taylor tables of stencils and order-of-accuracy analysis.

Expanding a stencil about its target point gives

    sum_alpha  t_alpha * h**alpha * f^(alpha + beta)(x0)

with ``t_alpha = sum_i a_i u_i**alpha / alpha!``.  A raw expansion has
``beta = 0`` and keeps the stencil's h power aside in ``h_offset``.
Normalizing moves the lowest nonzero term into ``beta`` (dividing by
``h**p`` shifts the coefficients ``p`` slots to the left) so that a valid
derivative stencil reads ``{1, 0, ..., 0, t_q, ...}``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial
from types import MappingProxyType
from typing import Mapping

from .errors import (
    AccuracyExceedsTruncationError,
    CompositionAccuracyError,
    DimMismatchError,
    MixedLeadingOrderError,
    NotNormalizedError,
    TruncationTooSmallError,
)
from .stencil import Stencil, compose

__all__ = [
    "TaylorTable",
    "StencilReport",
    "AccuracyCheck",
    "multi_indices",
    "expand",
    "normalize",
    "report",
    "analyze",
    "retarget",
    "min_accuracy_check",
    "format_series",
]

MAX_TRUNCATION = 32

MultiIndex = tuple  # tuple[int, ...]


@lru_cache(maxsize=None)
def multi_indices(dim: int, order: int) -> tuple[MultiIndex, ...]:
    """All multi-indices of length ``dim`` with ``|alpha| == order``.

    Ordered lexicographically from the largest first component, so in 2D
    order 2 yields ``(2, 0), (1, 1), (0, 2)``.
    """
    if dim == 1:
        return ((order,),)
    out = []
    for first in range(order, -1, -1):
        for rest in multi_indices(dim - 1, order - first):
            out.append((first,) + rest)
    return tuple(out)


def _sort_key(alpha):
    return (sum(alpha), tuple(-a for a in alpha))


@dataclass(frozen=True)
class TaylorTable:
    """Coefficients ``t_alpha`` of a truncated multi-dimensional series.

    ``coeffs`` stores nonzero entries only; every key satisfies
    ``|alpha| < trunc``.  The series represents
    ``h**h_offset * sum t_alpha h**|alpha| f^(alpha+beta)``.
    """

    dim: int
    beta: MultiIndex
    trunc: int
    coeffs: Mapping[MultiIndex, Fraction]
    h_offset: int = 0

    def __post_init__(self):
        clean = {tuple(k): Fraction(v) for k, v in self.coeffs.items() if v != 0}
        for k in clean:
            if len(k) != self.dim:
                raise DimMismatchError(f"multi-index {k} in a {self.dim}-d table")
            if sum(k) >= self.trunc or min(k) < 0:
                raise ValueError(f"multi-index {k} outside truncation {self.trunc}")
        if len(self.beta) != self.dim or min(self.beta) < 0:
            raise ValueError(f"bad beta {self.beta}")
        ordered = dict(sorted(clean.items(), key=lambda kv: _sort_key(kv[0])))
        object.__setattr__(self, "beta", tuple(self.beta))
        object.__setattr__(self, "coeffs", MappingProxyType(ordered))

    def __getitem__(self, alpha) -> Fraction:
        if isinstance(alpha, int):
            alpha = (alpha,)
        return self.coeffs.get(tuple(alpha), Fraction(0))

    def __eq__(self, other):
        if not isinstance(other, TaylorTable):
            return NotImplemented
        return (
            self.dim == other.dim
            and self.beta == other.beta
            and self.trunc == other.trunc
            and self.h_offset == other.h_offset
            and dict(self.coeffs) == dict(other.coeffs)
        )

    def __hash__(self):
        return hash((self.dim, self.beta, self.trunc, self.h_offset, tuple(self.coeffs.items())))

    def _combine(self, other, sign):
        if (self.dim, self.beta, self.h_offset) != (other.dim, other.beta, other.h_offset):
            raise ValueError("tables describe different series")
        trunc = min(self.trunc, other.trunc)
        out = {}
        for src, s in ((self, 1), (other, sign)):
            for k, v in src.coeffs.items():
                if sum(k) < trunc:
                    out[k] = out.get(k, Fraction(0)) + s * v
        return TaylorTable(self.dim, self.beta, trunc, out, self.h_offset)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __mul__(self, c):
        c = Fraction(c)
        return TaylorTable(
            self.dim, self.beta, self.trunc, {k: c * v for k, v in self.coeffs.items()}, self.h_offset
        )

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> tuple[MultiIndex, Fraction]:
        """The unique nonzero entry of smallest total order."""
        if not self.coeffs:
            raise TruncationTooSmallError("table has no nonzero coefficient")
        low = min(sum(k) for k in self.coeffs)
        cands = [k for k in self.coeffs if sum(k) == low]
        if len(cands) > 1:
            raise MixedLeadingOrderError(
                f"several derivatives share the lowest order {low}: {cands}"
            )
        return cands[0], self.coeffs[cands[0]]

    def to_json(self, **kwargs) -> str:
        coeffs = [
            {"alpha": list(k), "num": v.numerator, "den": v.denominator}
            for k, v in self.coeffs.items()
        ]
        return json.dumps(
            {
                "dim": self.dim,
                "beta": list(self.beta),
                "trunc": self.trunc,
                "h_offset": self.h_offset,
                "coeffs": coeffs,
            },
            **kwargs,
        )

    @classmethod
    def from_json(cls, text):
        d = json.loads(text) if isinstance(text, (str, bytes)) else text
        coeffs = {tuple(c["alpha"]): Fraction(c["num"], c["den"]) for c in d["coeffs"]}
        return cls(d["dim"], tuple(d["beta"]), d["trunc"], coeffs, d.get("h_offset", 0))

    def __str__(self):
        return format_series(self)


@dataclass(frozen=True)
class StencilReport:
    """What a stencil approximates and how well.

    ``leading_errors`` pairs the absolute derivative multi-index of each
    leading error term with its coefficient, e.g. ``((4,), 1/3)`` for the
    wide second-derivative stencil.
    """

    derivative: MultiIndex
    accuracy: int
    leading_errors: tuple[tuple[MultiIndex, Fraction], ...]
    table: TaylorTable = field(repr=False, compare=False, default=None)

    @property
    def leading_coefficient(self) -> Fraction:
        """Single leading error coefficient; only defined when there is one."""
        if len(self.leading_errors) != 1:
            raise ValueError("several leading error terms; use leading_errors")
        return self.leading_errors[0][1]


def _power(u: int, a: int) -> int:
    # python's 0 ** 0 == 1, matching the convention of the expansion
    return u**a


def expand(s: Stencil, K: int) -> TaylorTable:
    """Raw Taylor table of ``s`` keeping all ``|alpha| < K``."""
    if K < 1:
        raise ValueError("truncation K must be >= 1")
    coeffs = {}
    for order in range(K):
        for alpha in multi_indices(s.dim, order):
            denom = 1
            for a in alpha:
                denom *= factorial(a)
            total = Fraction(0)
            for u, w in s.entries.items():
                mono = 1
                for uk, ak in zip(u, alpha):
                    mono *= _power(uk, ak)
                if mono:
                    total += w * mono
            if total:
                coeffs[alpha] = total / denom
    if not coeffs:
        raise TruncationTooSmallError(f"all coefficients with |alpha| < {K} vanish")
    return TaylorTable(s.dim, (0,) * s.dim, K, coeffs, s.h_power)


def normalize(t: TaylorTable) -> TaylorTable:
    """Shift the lowest nonzero term into ``beta``.

    Coefficients are not rescaled, so a table whose leading coefficient is
    not one stays visibly invalid.
    """
    alpha0, _ = t.leading()
    if not any(alpha0):
        return t
    shifted = {}
    for k, v in t.coeffs.items():
        rel = tuple(a - b for a, b in zip(k, alpha0))
        if min(rel) < 0:
            raise MixedLeadingOrderError(
                f"term {k} lies below the leading derivative {alpha0} along some axis"
            )
        shifted[rel] = v
    beta = tuple(a + b for a, b in zip(t.beta, alpha0))
    order = sum(alpha0)
    return TaylorTable(t.dim, beta, t.trunc - order, shifted, t.h_offset + order)


def report(t: TaylorTable) -> StencilReport:
    """Derivative order, accuracy and leading error of a table.

    Raises
    ------
    NotNormalizedError
        If the leading coefficient is not one or the h power does not
        cancel the derivative order.
    AccuracyExceedsTruncationError
        If no error term is visible below the truncation.
    """
    n = normalize(t)
    _, lead = n.leading()
    if lead != 1 or n.h_offset != 0:
        raise NotNormalizedError(
            f"leading coefficient {lead} with residual h power {n.h_offset}; "
            "the stencil does not approximate a derivative"
        )
    errs = [k for k in n.coeffs if sum(k) > 0]
    if not errs:
        raise AccuracyExceedsTruncationError(
            f"no error term below truncation {n.trunc}; raise K"
        )
    q = min(sum(k) for k in errs)
    leading = tuple(
        (tuple(a + b for a, b in zip(k, n.beta)), n.coeffs[k])
        for k in multi_indices(n.dim, q)
        if k in n.coeffs
    )
    return StencilReport(n.beta, q, leading, n)


def analyze(s: Stencil, K: int | None = None) -> StencilReport:
    """Report on a stencil, doubling the truncation until an error term shows.

    Starts from ``K`` (default ``|h_power| + 8``) and stops at
    ``MAX_TRUNCATION``.
    """
    K = K or (abs(s.h_power) + 8)
    while True:
        try:
            return report(expand(s, K))
        except (AccuracyExceedsTruncationError, TruncationTooSmallError):
            if K >= MAX_TRUNCATION:
                raise
            K = min(2 * K, MAX_TRUNCATION)


def retarget(t: TaylorTable, shift) -> TaylorTable:
    """Re-expand a series computed about ``x0 + h*shift`` about ``x0``.

    Each derivative is replaced by its own Taylor series, which adds a
    correction whose first nonzero term is one order higher than the
    first term of ``t``.
    """
    if isinstance(shift, int):
        shift = (shift,)
    shift = tuple(shift)
    if len(shift) != t.dim:
        raise DimMismatchError(f"shift of length {len(shift)} on a {t.dim}-d table")
    out = dict(t.coeffs)
    for k, v in t.coeffs.items():
        for order in range(1, t.trunc - sum(k)):
            for delta in multi_indices(t.dim, order):
                mono = Fraction(1)
                for sk, dk in zip(shift, delta):
                    mono *= Fraction(_power(sk, dk), factorial(dk))
                if mono:
                    key = tuple(a + b for a, b in zip(k, delta))
                    out[key] = out.get(key, Fraction(0)) + v * mono
    return TaylorTable(t.dim, t.beta, t.trunc, out, t.h_offset)


@dataclass(frozen=True)
class AccuracyCheck:
    q_a: int
    q_b: int
    q_c: int
    predicted: tuple[tuple[MultiIndex, Fraction], ...]
    actual: tuple[tuple[MultiIndex, Fraction], ...]


def _errors_at(rep: StencilReport, order: int) -> dict:
    n = rep.table
    return {k: v for k, v in n.coeffs.items() if sum(k) == order}


def min_accuracy_check(a: Stencil, b: Stencil, K: int | None = None) -> AccuracyCheck:
    """Compare the accuracy of ``compose(a, b)`` with its parts.

    The predicted leading error is the sum of the parts' leading errors at
    order ``min(q_a, q_b)``.  When that prediction is nonzero the composed
    stencil must have exactly that accuracy and that leading error; when it
    cancels, the composed accuracy must be strictly higher.

    Raises
    ------
    CompositionAccuracyError
        If either statement is violated.
    """
    ra, rb = analyze(a, K), analyze(b, K)
    c = compose(a, b)
    qmin = min(ra.accuracy, rb.accuracy)
    need = sum(ra.derivative) + sum(rb.derivative) + qmin + 1
    rc = analyze(c, max(K or 0, need, abs(c.h_power) + 8))

    pred = {}
    for rep in (ra, rb):
        for k, v in _errors_at(rep, qmin).items():
            pred[k] = pred.get(k, Fraction(0)) + v
    pred = {k: v for k, v in pred.items() if v}
    actual = _errors_at(rc, qmin)
    beta_c = rc.derivative

    def absolute(d):
        return tuple(
            (tuple(x + y for x, y in zip(k, beta_c)), v)
            for k, v in sorted(d.items(), key=lambda kv: _sort_key(kv[0]))
        )

    if actual != pred:
        raise CompositionAccuracyError(
            f"composed error at order {qmin} is {actual}, predicted {pred}"
        )
    if pred and rc.accuracy != qmin:
        raise CompositionAccuracyError(f"accuracy {rc.accuracy} != min({ra.accuracy}, {rb.accuracy})")
    if not pred and rc.accuracy <= qmin:
        raise CompositionAccuracyError("cancelled leading error but accuracy did not improve")
    return AccuracyCheck(ra.accuracy, rb.accuracy, rc.accuracy, absolute(pred), rc.leading_errors)


def format_series(t: TaylorTable, n_terms: int | None = None) -> str:
    """Render a table in ``({1, 0, 1/12, ...}, beta=2)`` notation.

    1D tables list consecutive slots; ``n_terms`` limits how many.  Higher
    dimensional tables list their nonzero entries.
    """
    if t.dim == 1:
        n = t.trunc if n_terms is None else min(n_terms, t.trunc)
        body = ", ".join(str(t[(i,)]) for i in range(n))
        beta = str(t.beta[0])
    else:
        items = list(t.coeffs.items())
        if n_terms is not None:
            items = items[:n_terms]
        body = ", ".join(f"{k}: {v}" for k, v in items)
        beta = str(t.beta)
    return f"({{{body}, ...}}, beta={beta})"
