import math

import numpy as np
import pytest
from mpmath import mp

from selfsim.errors import ArityError, BoundaryError, DomainError, NonFiniteError, StepFloorError
from selfsim.numerics.fit import log_log_fit
from selfsim.numerics.integrate import rk4_adaptive_step, rk4_step, trapezoid, trapezoid_quadrature
from selfsim.numerics.precision import extended_precision
from selfsim.numerics.stencils import central_diff_jet2, first_derivative, fourth_difference, ko_dissipation, second_derivative
from selfsim.schema.grid import Grid1D


def growth(t, y):
    return y


def test_rk4_single_step_accuracy():
    y = rk4_step(np.array([1.0]), growth, 0.0, 0.1)
    with extended_precision(30):
        exact = float(mp.exp(mp.mpf("0.1")))
    assert abs(y[0] - exact) <= 1e-7, f"RK4 step error too large: {abs(y[0] - exact)}"


def test_rk4_order_convergence():
    def run(n):
        y, t, dt = np.array([1.0]), 0.0, 1.0 / n
        for _ in range(n):
            y, t = rk4_step(y, growth, t, dt), t + dt
        return abs(y[0] - math.e)

    coarse, fine = run(10), run(20)
    ratio = coarse / fine
    assert 14 <= ratio <= 18, f"expected an error ratio near 16, got {ratio}"


def test_rk4_rejects_non_finite_stage():
    def blows_up(t, y):
        return np.array([np.inf])

    with pytest.raises(NonFiniteError):
        rk4_step(np.array([1.0]), blows_up, 0.0, 0.1)


def test_rk4_rejects_non_positive_step():
    with pytest.raises(ValueError):
        rk4_step(np.array([1.0]), growth, 0.0, 0.0)


def test_adaptive_step_meets_tolerance():
    y, t, used, _ = rk4_adaptive_step(np.array([1.0]), growth, 0.0, 0.5, 1e-10, 1e-12)
    assert used <= 0.5
    assert abs(y[0] - math.exp(t)) <= 1e-8


def test_adaptive_step_floor():
    def stiff(t, y):
        return 1e12 * y

    with pytest.raises(StepFloorError):
        rk4_adaptive_step(np.array([1.0]), stiff, 0.0, 1e-3, 1e-14, 1e-9)


def test_trapezoid_exact_for_linear():
    grid = Grid1D(lo=0.0, hi=2.0, n=10)
    assert trapezoid_quadrature(3 * grid.nodes() + 1, grid) == pytest.approx(8.0, abs=1e-12)
    assert trapezoid([1.0], 0.1) == 0.0


def test_trapezoid_weighted():
    grid = Grid1D(lo=0.0, hi=1.0, n=1000)
    value = trapezoid_quadrature(np.ones(grid.n_nodes), grid, weight=lambda x: x)
    assert value == pytest.approx(0.5, abs=1e-12)


def test_trapezoid_rejects_nan():
    with pytest.raises(NonFiniteError):
        trapezoid([0.0, float("nan"), 1.0], 0.5)


def test_log_log_fit_exact_power_law():
    a = np.array([1.0, 2.0, 4.0, 8.0])
    fit = log_log_fit(a, 0.4 * a ** 1.0)
    assert fit.slope == pytest.approx(1.0, abs=1e-12)
    assert math.exp(fit.intercept) == pytest.approx(0.4, abs=1e-12)
    assert fit.r_squared == pytest.approx(1.0)


def test_log_log_fit_errors():
    with pytest.raises(ArityError):
        log_log_fit([1.0], [1.0])
    with pytest.raises(DomainError):
        log_log_fit([1.0, -2.0], [1.0, 2.0])
    with pytest.raises(DomainError):
        log_log_fit([2.0, 2.0], [1.0, 3.0])


def test_jet_from_samples_of_quadratic():
    grid = Grid1D(lo=0.0, hi=1.0, n=20)
    dt = 0.05
    t = np.arange(7) * dt
    x = grid.nodes()
    values = t[:, None] ** 2 + 3 * t[:, None] * x[None, :] + x[None, :] ** 2
    jet = central_diff_jet2(values, grid, 10, level=3, dt=dt)
    t0, x0 = t[3], x[10]
    assert jet.first("t") == pytest.approx(2 * t0 + 3 * x0, abs=1e-10)
    assert jet.first("x") == pytest.approx(3 * t0 + 2 * x0, abs=1e-10)
    assert jet.second("t", "t") == pytest.approx(2.0, abs=1e-8)
    assert jet.second("t", "x") == pytest.approx(3.0, abs=1e-8)
    assert jet.second("x", "x") == pytest.approx(2.0, abs=1e-8)


def test_jet_on_boundary_needs_one_sided():
    grid = Grid1D(lo=0.0, hi=1.0, n=10)
    values = grid.nodes() ** 2
    with pytest.raises(BoundaryError):
        central_diff_jet2(values, grid, 0)
    jet = central_diff_jet2(values, grid, 0, one_sided=True)
    assert jet.first("x") == pytest.approx(0.0, abs=1e-12)
    assert jet.second("x", "x") == pytest.approx(2.0, abs=1e-9)


def test_axis_parity_stencils():
    h = 0.1
    r = np.arange(10) * h
    even = np.cos(r)
    odd = np.sin(r)
    assert first_derivative(even, h, left_parity=1)[0] == 0.0
    assert first_derivative(odd, h, left_parity=-1)[0] == pytest.approx(1.0, abs=2e-3)
    assert second_derivative(even, h, left_parity=1)[0] == pytest.approx(-1.0, abs=2e-3)


def test_fourth_difference_annihilates_cubics():
    x = np.linspace(-1, 1, 21)
    assert np.max(np.abs(fourth_difference(x ** 3 - x))) <= 1e-12
    assert np.all(ko_dissipation(x, 0.1, 0.0) == 0)
