from fractions import Fraction as F
from math import factorial

import pytest

from stencilkit.errors import (
    AccuracyExceedsTruncationError,
    MixedLeadingOrderError,
    NotNormalizedError,
    TruncationTooSmallError,
)
from stencilkit.generators import make
from stencilkit.stencil import Stencil, compose, linear_combine, outer_product, shift
from stencilkit.taylor import (
    TaylorTable,
    analyze,
    expand,
    format_series,
    multi_indices,
    normalize,
    report,
    retarget,
)


def series(t, n):
    return [t[(i,)] for i in range(n)]


def test_multi_indices_counts():
    # number of multi-indices of total order k in d dims is C(k+d-1, d-1)
    assert len(multi_indices(2, 3)) == 4
    assert len(multi_indices(3, 2)) == 6
    assert multi_indices(1, 4) == ((4,),)


def test_expand_single_point_is_exponential_series():
    t = expand(Stencil({1: 1}), 6)
    assert series(t, 6) == [F(1, factorial(k)) for k in range(6)]
    assert t.h_offset == 0


def test_expand_keeps_h_power_as_offset():
    t = expand(make(p=2, q=2), 6)
    assert t.h_offset == -2
    assert series(t, 6) == [0, 0, 1, 0, F(1, 12), 0]


def test_normalize_shifts_without_dividing():
    t = normalize(expand(Stencil({1: 3, 0: -3}, -1), 5))
    assert t.beta == (1,)
    assert t.h_offset == 0
    assert t[(0,)] == 3


def test_report_rejects_non_unit_leading():
    with pytest.raises(NotNormalizedError):
        report(expand(Stencil({1: 3, 0: -3}, -1), 5))


def test_report_rejects_wrong_h_power():
    with pytest.raises(NotNormalizedError):
        report(expand(Stencil({1: 1, 0: -1}, -2), 5))


def test_truncation_too_small():
    with pytest.raises(TruncationTooSmallError):
        expand(make(p=2, q=2), 2)


def test_accuracy_beyond_truncation():
    with pytest.raises(AccuracyExceedsTruncationError):
        report(expand(make(p=2, q=2), 4))


def test_analyze_grows_truncation():
    rep = analyze(make(p=2, q=8), K=3)
    assert rep.accuracy == 8


def test_centered_second_derivative_report():
    rep = analyze(make(p=2, q=2))
    assert rep.derivative == (2,)
    assert rep.accuracy == 2
    assert rep.leading_errors == (((4,), F(1, 12)),)
    assert rep.leading_coefficient == F(1, 12)


def test_format_series():
    rep = analyze(make(p=2, q=2))
    assert format_series(rep.table, 3) == "({1, 0, 1/12, ...}, beta=2)"


def test_mixed_leading_order():
    s = Stencil({(1, 0): 1, (0, 1): 1, (0, 0): -2}, -1)
    with pytest.raises(MixedLeadingOrderError):
        analyze(s)


def test_normalize_rejects_terms_below_leading_axis():
    t = TaylorTable(2, (0, 0), 4, {(1, 0): 1, (0, 2): 1})
    with pytest.raises(MixedLeadingOrderError):
        normalize(t)


def test_2d_leading_errors_for_mixed_derivative():
    d1, d2 = make(p=1, q=4), make(p=2, q=4)
    s = outer_product(compose(d2, d2), compose(d1, d2))
    rep = analyze(s)
    assert rep.derivative == (4, 3)
    assert rep.accuracy == 4
    assert dict(rep.leading_errors) == {(8, 3): F(-1, 45), (4, 7): F(-2, 45)}


def test_retarget_centered_second_derivative():
    t = analyze(make(p=2, q=2)).table
    r = retarget(t, 1)
    assert series(r, 4) == [1, 1, F(7, 12), F(1, 4)]
    # retargeting by zero is the identity
    assert retarget(t, 0) == t


def test_table_arithmetic():
    t = analyze(make(p=2, q=2)).table
    assert (t + t) == 2 * t
    assert (t - t).is_zero()


def test_table_json_round_trip():
    t = analyze(compose(make(p=1, q=2), make(p=2, q=2))).table
    assert TaylorTable.from_json(t.to_json()) == t


def test_mixing_inner_stencils_breaks_composition():
    # outer centered f' whose inner stencil is centered at +1 but one-sided at -1
    d1 = make(p=1, q=2)
    one_sided = Stencil({1: F(-1, 2), 0: 2, -1: F(-3, 2)}, -1)
    parts = [shift(d1, 1), shift(one_sided, -1)]
    mixed = Stencil(linear_combine([F(1, 2), F(-1, 2)], parts).entries, -2)
    t = normalize(expand(mixed, 8))
    assert t.beta == (2,)
    assert series(t, 3) == [F(3, 2), F(-1, 2), F(5, 8)]
    with pytest.raises(NotNormalizedError):
        analyze(mixed)
