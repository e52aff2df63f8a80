from fractions import Fraction as F

import pytest

from stencilkit.errors import SingularSystemError, UnsupportedAccuracyError
from stencilkit.generators import BUILTINS, StencilSpec, builtin, laplacian, make, solve_rational
from stencilkit.stencil import Stencil
from stencilkit.taylor import analyze


def test_solve_rational_exact():
    x = solve_rational([[2, 1], [1, 3]], [1, 2])
    assert x == [F(1, 5), F(3, 5)]


def test_solve_rational_singular():
    with pytest.raises(SingularSystemError):
        solve_rational([[1, 2], [2, 4]], [1, 1])


def test_centered_first_derivative():
    assert make(p=1, q=2) == Stencil({-1: F(-1, 2), 1: F(1, 2)}, -1)


def test_fourth_order_first_derivative():
    s = make(p=1, q=4)
    assert s == Stencil({-2: F(1, 12), -1: F(-2, 3), 1: F(2, 3), 2: F(-1, 12)}, -1)


def test_forward_second_derivative():
    assert make(p=2, q=1, style="forward") == Stencil({0: 1, 1: -2, 2: 1}, -2)


def test_backward_mirrors_forward_for_odd_p():
    fwd = make(p=1, q=2, style="forward")
    bwd = make(p=1, q=2, style="backward")
    assert {(-k[0],): -v for k, v in fwd.entries.items()} == dict(bwd.entries)


def test_odd_centered_accuracy_rounds_up():
    assert make(p=2, q=1) == make(p=2, q=2)


@pytest.mark.parametrize("p", [1, 2, 3, 4])
@pytest.mark.parametrize("q", [1, 2, 3, 4])
@pytest.mark.parametrize("style", ["centered", "forward", "backward"])
def test_generated_stencils_meet_their_spec(p, q, style):
    rep = analyze(make(p=p, q=q, style=style))
    assert rep.derivative == (p,)
    assert rep.accuracy >= q


def test_spec_validation():
    with pytest.raises(ValueError):
        StencilSpec(0, 2)
    with pytest.raises(UnsupportedAccuracyError):
        StencilSpec(1, 0)
    with pytest.raises(ValueError):
        StencilSpec(1, 2, "sideways")


def test_laplacian_2d_five_point():
    s = laplacian(2)
    assert s == Stencil({(0, 0): -4, (1, 0): 1, (-1, 0): 1, (0, 1): 1, (0, -1): 1}, -2)


def test_laplacian_odd_accuracy_rejected():
    with pytest.raises(UnsupportedAccuracyError):
        laplacian(2, accuracy=3)


def test_bilaplacian_13_point():
    s = builtin("bilaplacian-2d")
    assert len(s) == 13
    assert s[(0, 0)] == 20
    assert s[(1, 0)] == -8
    assert s[(1, 1)] == 2
    assert s[(2, 0)] == 1


def test_all_builtins_construct():
    for name in BUILTINS:
        assert builtin(name).h_power < 0


def test_unknown_builtin():
    with pytest.raises(KeyError):
        builtin("dy")
