"""Exact finite-difference stencils and their algebra.

A :class:`Stencil` maps integer lattice offsets to rational weights.  The
grid spacing never enters the weights; it is carried symbolically as the
exponent ``h_power`` so that the true weight of an entry is
``coefficient * h**h_power``.

Composition adds offsets and multiplies weights::

    >>> d1 = Stencil({1: Fraction(1, 2), -1: Fraction(-1, 2)}, h_power=-1)
    >>> compose(d1, d1)
    Stencil({(-2,): 1/4, (0,): -1/2, (2,): 1/4}, h_power=-2)
"""

from __future__ import annotations

import json
from collections.abc import Iterable, Mapping
from fractions import Fraction
from itertools import product
from numbers import Rational
from types import MappingProxyType

from .errors import (
    DimMismatchError,
    EmptyStencilError,
    PowerMismatchError,
    ZeroScaleError,
)

__all__ = [
    "Stencil",
    "identity",
    "scale",
    "add",
    "shift",
    "compose",
    "outer_product",
    "embed",
    "linear_combine",
    "to_json",
    "from_json",
]


def _as_offset(key) -> tuple[int, ...]:
    if isinstance(key, int):
        return (key,)
    return tuple(int(k) for k in key)


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (Rational, str)):
        return Fraction(value)
    if isinstance(value, float):
        # exact binary value; callers wanting 1/3 should pass a Fraction
        return Fraction(value)
    raise TypeError(f"cannot use {type(value).__name__} as a stencil weight")


class Stencil:
    """Immutable offset -> rational weight map with a symbolic power of h.

    Parameters
    ----------
    entries : mapping
        Offsets (ints for 1D, tuples otherwise) to weights.  Anything
        :class:`fractions.Fraction` accepts is allowed.  Zero weights are
        dropped; a stencil with no remaining entries is an error.
    h_power : int
        Exponent of the grid spacing multiplying every weight.
    """

    __slots__ = ("_entries", "_dim", "_h_power", "_hash")

    def __init__(self, entries: Mapping, h_power: int = 0):
        merged: dict[tuple[int, ...], Fraction] = {}
        for key, value in entries.items():
            off = _as_offset(key)
            merged[off] = merged.get(off, Fraction(0)) + _as_fraction(value)
        merged = {k: v for k, v in merged.items() if v != 0}
        if not merged:
            raise EmptyStencilError("stencil has no nonzero entries")
        dims = {len(k) for k in merged}
        if len(dims) != 1 or 0 in dims:
            raise DimMismatchError(f"offsets have inconsistent lengths {sorted(dims)}")
        self._dim = dims.pop()
        self._h_power = int(h_power)
        self._entries = MappingProxyType(dict(sorted(merged.items())))
        self._hash = None

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def h_power(self) -> int:
        return self._h_power

    @property
    def entries(self) -> Mapping[tuple[int, ...], Fraction]:
        """Read-only view, sorted lexicographically by offset."""
        return self._entries

    def __len__(self):
        return len(self._entries)

    def __iter__(self):
        return iter(self._entries.items())

    def __getitem__(self, offset) -> Fraction:
        return self._entries.get(_as_offset(offset), Fraction(0))

    def support(self, axis: int = 0) -> tuple[int, int]:
        """Smallest and largest offset along ``axis``."""
        vals = [k[axis] for k in self._entries]
        return min(vals), max(vals)

    def weight_sum(self) -> Fraction:
        return sum(self._entries.values(), Fraction(0))

    def __eq__(self, other):
        if not isinstance(other, Stencil):
            return NotImplemented
        return (
            self._dim == other._dim
            and self._h_power == other._h_power
            and dict(self._entries) == dict(other._entries)
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._dim, self._h_power, tuple(self._entries.items())))
        return self._hash

    def __repr__(self):
        body = ", ".join(f"{k}: {v}" for k, v in self._entries.items())
        return f"Stencil({{{body}}}, h_power={self._h_power})"

    # arithmetic sugar
    def __add__(self, other):
        if not isinstance(other, Stencil):
            return NotImplemented
        return add(self, other)

    def __sub__(self, other):
        if not isinstance(other, Stencil):
            return NotImplemented
        return add(self, scale(other, -1))

    def __neg__(self):
        return scale(self, -1)

    def __mul__(self, c):
        if isinstance(c, Stencil):
            return NotImplemented
        return scale(self, c)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if not isinstance(other, Stencil):
            return NotImplemented
        return compose(self, other)


def identity(dim: int = 1) -> Stencil:
    """The stencil that samples the target point itself."""
    return Stencil({(0,) * dim: 1}, h_power=0)


def _check_dim(a: Stencil, b: Stencil):
    if a.dim != b.dim:
        raise DimMismatchError(f"stencil dimensions differ: {a.dim} vs {b.dim}")


def scale(s: Stencil, c) -> Stencil:
    c = _as_fraction(c)
    if c == 0:
        raise ZeroScaleError("scaling by zero leaves an empty stencil")
    return Stencil({k: v * c for k, v in s.entries.items()}, s.h_power)


def add(a: Stencil, b: Stencil) -> Stencil:
    _check_dim(a, b)
    if a.h_power != b.h_power:
        raise PowerMismatchError(f"h powers differ: {a.h_power} vs {b.h_power}")
    out = dict(a.entries)
    for k, v in b.entries.items():
        out[k] = out.get(k, Fraction(0)) + v
    return Stencil(out, a.h_power)


def linear_combine(weights: Iterable, stencils: Iterable[Stencil]) -> Stencil:
    """Sum of ``w_i * s_i``; all stencils must share dim and h_power."""
    weights = list(weights)
    stencils = list(stencils)
    if len(weights) != len(stencils) or not stencils:
        raise ValueError("need one weight per stencil")
    first = stencils[0]
    out: dict[tuple[int, ...], Fraction] = {}
    for w, s in zip(weights, stencils):
        _check_dim(first, s)
        if s.h_power != first.h_power:
            raise PowerMismatchError(f"h powers differ: {first.h_power} vs {s.h_power}")
        w = _as_fraction(w)
        for k, v in s.entries.items():
            out[k] = out.get(k, Fraction(0)) + w * v
    return Stencil(out, first.h_power)


def shift(s: Stencil, o) -> Stencil:
    o = _as_offset(o)
    if len(o) != s.dim:
        raise DimMismatchError(f"shift of length {len(o)} on a {s.dim}-d stencil")
    return Stencil(
        {tuple(a + b for a, b in zip(k, o)): v for k, v in s.entries.items()},
        s.h_power,
    )


def compose(inner: Stencil, outer: Stencil) -> Stencil:
    """Apply ``outer`` to the output of ``inner``.

    The result holds ``sum a_i b_j`` at offset ``u_i + v_j`` and its
    h power is the sum of both.  The operation is commutative and
    associative.
    """
    _check_dim(inner, outer)
    out: dict[tuple[int, ...], Fraction] = {}
    for (u, a), (v, b) in product(inner.entries.items(), outer.entries.items()):
        key = tuple(x + y for x, y in zip(u, v))
        out[key] = out.get(key, Fraction(0)) + a * b
    return Stencil(out, inner.h_power + outer.h_power)


def outer_product(sx: Stencil, sy: Stencil) -> Stencil:
    """Tensor product of stencils acting on disjoint axes.

    Offsets are concatenated, so ``outer_product`` of two 1D stencils acts on
    ``(x, y)`` with ``sx`` along x.
    """
    out = {
        u + v: a * b
        for (u, a), (v, b) in product(sx.entries.items(), sy.entries.items())
    }
    return Stencil(out, sx.h_power + sy.h_power)


def embed(s: Stencil, axis: int, dim: int) -> Stencil:
    """Place a 1D stencil along ``axis`` of a ``dim``-dimensional lattice."""
    if s.dim != 1:
        raise DimMismatchError("only 1D stencils can be embedded")
    if not 0 <= axis < dim:
        raise ValueError(f"axis {axis} outside 0..{dim - 1}")
    out = {}
    for (u,), a in s.entries.items():
        off = [0] * dim
        off[axis] = u
        out[tuple(off)] = a
    return Stencil(out, s.h_power)


def to_json(s: Stencil, **kwargs) -> str:
    entries = [
        {"offset": list(k), "num": v.numerator, "den": v.denominator}
        for k, v in s.entries.items()
    ]
    return json.dumps({"dim": s.dim, "h_power": s.h_power, "entries": entries}, **kwargs)


def from_json(text) -> Stencil:
    """Inverse of :func:`to_json`; accepts a JSON string or parsed dict."""
    data = json.loads(text) if isinstance(text, (str, bytes)) else text
    entries = {
        tuple(e["offset"]): Fraction(e["num"], e.get("den", 1)) for e in data["entries"]
    }
    s = Stencil(entries, data.get("h_power", 0))
    if "dim" in data and s.dim != data["dim"]:
        raise DimMismatchError(f"declared dim {data['dim']} but offsets have {s.dim}")
    return s
