import json

import numpy as np
import pytest

from stencilkit.apps import cahn_hilliard as ch
from stencilkit.apps.biharmonic import exact_plate, forcing, solve_plate
from stencilkit.apps.convergence import (
    apply_at_point,
    converge_1d,
    fit_loglog,
    mixed_43_stencil,
    third_derivative_stencil,
)
from stencilkit.errors import NonPeriodicError
from stencilkit.grid import GridSpec

# grid-sum free energy of the benchmark initial condition on 200x200, h=1
GOLDEN_F0_200 = 319.0938158353575


# convergence --------------------------------------------------------------


def test_fit_recovers_power_law():
    hs = np.array([0.1, 0.05, 0.025, 0.0125])
    fit = fit_loglog(hs, 3.0 * hs**2)
    assert fit.slope == pytest.approx(2.0, abs=1e-12)
    assert fit.coefficient == pytest.approx(3.0, rel=1e-12)
    assert fit.residual < 1e-12


def test_fit_needs_three_samples():
    with pytest.raises(ValueError):
        fit_loglog([0.1, 0.05], [1, 2])


def test_third_derivative_error_sign_matches_leading_term():
    # leading term h^2 f^(5)(pi) / 4 = 4 h^2 > 0
    s = third_derivative_stencil()
    f = lambda x: np.sin(x) * np.cos(x)
    for h in (0.2, 0.1, 0.05):
        err = apply_at_point(s, f, np.pi, h) - (-4.0)
        assert err > 0
        assert err == pytest.approx(4 * h**2, rel=0.05)


def test_mixed_stencil_exact_on_polynomial():
    # a fourth-order f^(4,3) stencil is exact on x^4 y^3 (d = 4! 3! = 144)
    s = mixed_43_stencil()
    val = apply_at_point(s, lambda x, y: x**4 * y**3, (0.3, -0.2), 0.5)
    assert val == pytest.approx(144.0, rel=1e-9)


def test_converge_1d_writes_csv(tmp_path):
    fit = converge_1d(2.0 ** -np.arange(2, 6))
    fit.write_csv(tmp_path / "c.csv")
    lines = (tmp_path / "c.csv").read_text().splitlines()
    assert lines[0] == "h,error"
    assert len(lines) == 5


# biharmonic ---------------------------------------------------------------


def test_exact_plate_centre():
    assert exact_plate(0.5, 0.5) == pytest.approx(1.0)
    assert forcing(0.5, 0.5) == pytest.approx(4 * np.pi**4)


def test_plate_solution_residual_and_error():
    r = solve_plate(17)
    assert r.residual <= 1e-10
    assert r.max_error < 0.01
    assert r.grid.size == 15 * 15


# Cahn-Hilliard ------------------------------------------------------------


def test_double_well_values():
    assert ch.f_chem(0.3) == pytest.approx(0.0)
    assert ch.f_chem(0.7) == pytest.approx(0.0)
    assert ch.f_chem(0.5) == pytest.approx(0.008)
    assert ch.f_chem_prime(0.5) == pytest.approx(0.0)


def test_f_chem_prime_is_derivative():
    c = np.linspace(0, 1, 11)
    d = 1e-6
    num = (ch.f_chem(c + d) - ch.f_chem(c - d)) / (2 * d)
    assert np.allclose(ch.f_chem_prime(c), num, atol=1e-8)


def test_params_validation():
    with pytest.raises(ValueError):
        ch.CahnHilliardParams(kappa=0)
    with pytest.raises(ValueError):
        ch.CahnHilliardParams(c_alpha=0.8)


def test_init_mean_200():
    s = ch.ch_init(GridSpec.periodic(200, 1.0, 2))
    assert abs(s.c.mean() - 0.5) <= 0.005


def test_init_3d_origin():
    s = ch.ch_init(GridSpec.periodic(4, 1.0, 3))
    assert s.c[0] == pytest.approx(0.53)


def test_init_zero_eps_constant():
    p = ch.CahnHilliardParams(eps_ic=0.0)
    s = ch.ch_init(GridSpec.periodic(10, 1.0, 2), p)
    assert np.all(s.c == 0.5)


def test_state_needs_periodic_grid():
    g = GridSpec.unit_square_simply_supported(5)
    with pytest.raises(NonPeriodicError):
        ch.CahnHilliardState(g, np.zeros(g.size))


def test_free_energy_constant_field():
    g = GridSpec.periodic(12, 0.5, 2)
    s = ch.CahnHilliardState(g, np.full(g.size, 0.42))
    assert ch.free_energy(s) == pytest.approx(0.25 * g.size * ch.f_chem(0.42), rel=1e-12)


def test_free_energy_fourier_mode():
    n, L, a = 64, 16.0, 0.05
    g = GridSpec.periodic(n, L / n, 2)
    x, _ = g.coords()
    k = 2 * np.pi / L
    s = ch.CahnHilliardState(g, 0.5 + a * np.sin(k * x))
    bulk = g.h**2 * np.sum(ch.f_chem(s.c))
    grad = ch.free_energy(s) - bulk
    # centered difference sees the symbol sin(kh)/h instead of k
    discrete = 0.5 * 2.0 * a**2 * (np.sin(k * g.h) / g.h) ** 2 * L**2 / 2
    continuous = 0.5 * 2.0 * a**2 * k**2 * L**2 / 2
    assert grad == pytest.approx(discrete, rel=1e-12)
    assert grad == pytest.approx(continuous, rel=0.01)


def test_free_energy_golden_initial_condition():
    s = ch.ch_init(GridSpec.periodic(200, 1.0, 2))
    assert s.energy_history[0][1] == pytest.approx(GOLDEN_F0_200, rel=1e-12)


def test_constant_field_is_fixed_point():
    g = GridSpec.periodic(16, 1.0, 2)
    s = ch.CahnHilliardState(g, np.full(g.size, 0.45))
    for order in (1, 2):
        out = ch.run(s, 0.1, 0.3, order)
        assert np.allclose(out.c, 0.45, atol=1e-12)


@pytest.mark.parametrize("order", [1, 2])
def test_step_conserves_mass(order):
    s = ch.ch_init(GridSpec.periodic(32, 1.0, 2))
    m0 = s.mass()
    for _ in range(5):
        s = ch.imex_step(s, 0.1, order)
        assert abs(s.mass() - m0) <= 1e-10 * m0
    assert s.t == pytest.approx(0.5)
    assert len(s.energy_history) == 6


def test_order_two_bootstraps_then_uses_history():
    s = ch.ch_init(GridSpec.periodic(16, 1.0, 2))
    one = ch.imex_step(s, 0.1, 2)
    assert one.c_prev is s.c
    # the first order-2 step coincides with an order-1 step
    assert np.array_equal(one.c, ch.imex_step(s, 0.1, 1).c)
    two = ch.imex_step(one, 0.1, 2)
    assert not np.array_equal(two.c, ch.imex_step(one, 0.1, 1).c)


def test_step_argument_checks():
    s = ch.ch_init(GridSpec.periodic(8, 1.0, 2))
    with pytest.raises(ValueError):
        ch.imex_step(s, 0.1, 3)
    with pytest.raises(ValueError):
        ch.imex_step(s, -0.1, 1)


def test_3d_step_runs():
    s = ch.ch_init(GridSpec.periodic(8, 1.0, 3))
    out = ch.run(s, 0.25, 1.0)
    assert abs(out.mass() - s.mass()) <= 1e-10 * s.mass()


def test_temporal_self_comparison_is_zero():
    g = GridSpec.periodic(16, 1.0, 2)
    s = ch.ch_init(g)
    a = ch.run(s, 0.05, 0.5, 2).c
    b = ch.run(s, 0.05, 0.5, 2).c
    assert np.max(np.abs(a - b)) == 0


def test_writers(tmp_path):
    s = ch.run(ch.ch_init(GridSpec.periodic(5, 1.0, 2)), 0.1, 0.2)
    ch.write_energy_csv(tmp_path / "e.csv", s)
    ch.write_field_csv(tmp_path / "f.csv", s)
    ch.write_field_binary(tmp_path / "f.bin", s)
    assert (tmp_path / "e.csv").read_text().splitlines()[0] == "t,F"
    rows = (tmp_path / "f.csv").read_text().splitlines()
    assert rows[0] == "x,y,c" and len(rows) == 26
    header = json.loads((tmp_path / "f.bin.json").read_text())
    data = np.fromfile(tmp_path / "f.bin", dtype=header["dtype"]).reshape(header["shape"])
    assert np.array_equal(data.ravel(), s.c)
