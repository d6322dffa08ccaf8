import math

import numpy as np
import pytest

from selfsim.closedform.families import ClosedFormSolution, Family, evaluate_jet
from selfsim.conserved.momentum import momentum_scale
from selfsim.errors import ArityError, DomainError, NonFiniteError, StepFloorError
from selfsim.evolution.blowup import fit_blowup_rate
from selfsim.evolution.initial import closed_form_for, pulse_state, sphere_bump_state, state_from_closed_form, state_from_run_config, zero_state
from selfsim.evolution.solver import EvolutionTermination, axis_value, diagnose_exact_background, evolve, step
from selfsim.evolution.state import compatibility_defect
from selfsim.evolution.system import characteristic_speeds, field_rates, rhs
from selfsim.schema.config import EvolutionConfig, RunConfig
from selfsim.schema.grid import Grid1D
from selfsim.schema.report import EquationId

LOG_K = 0.2


def born_infeld_log_run(n, t_end, dissipation=0.0):
    sol = ClosedFormSolution(family=Family.BORN_INFELD_LOG, k=LOG_K)
    grid = Grid1D(lo=-0.5, hi=0.5, n=n)
    config = EvolutionConfig(
        equation=EquationId.BORN_INFELD,
        t_end=t_end,
        T_blowup_hint=1.0,
        dissipation_coeff=dissipation,
        excision_rho=0.5,
        edge_solution=sol,
    )
    return sol, evolve(state_from_closed_form(sol, grid), config)


def sup_error(sol, state):
    x, u = state.nodes(), state.u[state.active]
    return max(abs(ui - evaluate_jet(sol, (state.t, float(xi))).value) for xi, ui in zip(x, u))


def test_born_infeld_log_converges_at_second_order():
    errors = []
    for n in (200, 400, 800):
        sol, result = born_infeld_log_run(n, 0.8)
        assert result.termination == EvolutionTermination.REACHED_END
        assert result.final.t == pytest.approx(0.8)
        errors.append(sup_error(sol, result.final))
    assert errors[1] <= 5e-4, f"errors {errors}"
    for coarse, fine in zip(errors, errors[1:]):
        order = math.log2(coarse / fine)
        assert 1.7 <= order <= 2.3, f"observed order {order} from errors {errors}"


def test_extrapolated_edges_stay_in_the_domain_of_dependence():
    sol = ClosedFormSolution(family=Family.BORN_INFELD_LOG, k=LOG_K)
    grid = Grid1D(lo=-0.5, hi=0.5, n=200)
    config = EvolutionConfig(equation=EquationId.BORN_INFELD, t_end=0.3, T_blowup_hint=1.0, excision_rho=0.5)
    result = evolve(state_from_closed_form(sol, grid), config)
    assert result.termination == EvolutionTermination.REACHED_END
    widths = result.series("x_right") - result.series("x_left")
    assert np.all(np.diff(widths) <= 1e-12)
    assert widths[-1] < 1.0 - 0.5 * 0.3
    assert sup_error(sol, result.final) <= 1e-2


def test_edge_data_past_its_domain_ends_the_run():
    sol = ClosedFormSolution(family=Family.CONSTANT_PROFILE, T=0.3, k=0.2)
    config = EvolutionConfig(equation=EquationId.RADIAL_MEMBRANE, t_end=0.5, edge_solution=sol)
    result = evolve(state_from_closed_form(sol, Grid1D(lo=0.0, hi=0.5, n=50)), config)
    assert result.termination == EvolutionTermination.DOMAIN_EXHAUSTED
    assert 0 < result.final.t < 0.3
    assert result.final.right == 50


def test_edge_data_must_match_the_equation():
    with pytest.raises(ValueError):
        EvolutionConfig(equation=EquationId.RADIAL_MEMBRANE, t_end=0.1, edge_solution=ClosedFormSolution(family=Family.BORN_INFELD_LOG))


def test_born_infeld_log_blowup_rate():
    _, result = born_infeld_log_run(800, 0.95)
    assert result.termination == EvolutionTermination.REACHED_END
    fit = fit_blowup_rate(result.series("t"), result.series("q_at_origin"), 1.0, (0.5, 0.95))
    assert fit.fitted_exponent == pytest.approx(1.0, abs=0.05)
    assert fit.fitted_amplitude == pytest.approx(2 * LOG_K, abs=0.02)


def test_excision_stays_inside_cone():
    _, result = born_infeld_log_run(200, 0.8)
    for row in result.diagnostics:
        reach = 0.5 * (1.0 - row.t)
        assert row.x_right <= reach + 1e-12 and row.x_left >= -reach - 1e-12


def test_gradient_stays_compatible_with_u():
    _, result = born_infeld_log_run(200, 0.5)
    assert compatibility_defect(result.final) <= 0.02


def test_corrected_momentum_is_conserved():
    grid = Grid1D(lo=-2.0, hi=2.0, n=800)
    initial = pulse_state(EquationId.BORN_INFELD, grid, 0.1, 0.2)
    config = EvolutionConfig(equation=EquationId.BORN_INFELD, t_end=0.3, dissipation_coeff=0.0)
    result = evolve(initial, config)
    momentum = result.series("momentum_integral")
    drift = float(np.max(np.abs(momentum - momentum[0])))
    assert drift <= 1e-4 * momentum_scale(initial), f"momentum drift {drift}"


def test_zero_membrane_stays_zero():
    grid = Grid1D(lo=0.0, hi=1.0, n=64)
    config = EvolutionConfig(equation=EquationId.RADIAL_MEMBRANE, t_end=0.2)
    result = evolve(zero_state(EquationId.RADIAL_MEMBRANE, grid), config)
    final = result.final
    assert final.left == 0
    assert np.max(np.abs(final.u)) == 0.0
    assert axis_value(final) == 0.0


def test_constant_profile_moves_rigidly():
    sol = ClosedFormSolution(family=Family.CONSTANT_PROFILE, k=0.3)
    grid = Grid1D(lo=0.0, hi=0.5, n=50)
    config = EvolutionConfig(equation=EquationId.RADIAL_MEMBRANE, t_end=0.2)
    result = evolve(state_from_closed_form(sol, grid), config)
    expected = 0.3 * (1.0 - result.final.t)
    assert np.max(np.abs(result.final.u[result.final.active] - expected)) <= 1e-12


def test_sphere_background_is_diagnosed_not_evolved():
    sol = ClosedFormSolution(family=Family.MEMBRANE_SPHERE_PLUS)
    grid = Grid1D(lo=0.0, hi=1.5, n=30)
    report = diagnose_exact_background(sol, grid, 0.0)
    assert report.n_points == 20
    assert report.max_abs <= 1e-9
    state = state_from_closed_form(sol, Grid1D(lo=0.0, hi=0.9, n=30))
    assert state.min_discriminant == pytest.approx(0.0, abs=1e-12)


def test_sphere_bump_is_timelike_and_evolves():
    state = sphere_bump_state(Grid1D(lo=0.0, hi=0.5, n=40), 1.0, 0.05, 0.1)
    assert np.all(state.discriminant() > 0)
    assert state.q[0] == 0.0
    result = evolve(state, EvolutionConfig(equation=EquationId.RADIAL_MEMBRANE, t_end=0.05))
    assert result.n_steps > 0
    assert len(result.diagnostics) > 1
    assert result.final.t > 0


def test_sphere_characteristics_follow_the_similarity_lines():
    t = 0.2
    sol = ClosedFormSolution(family=Family.MEMBRANE_SPHERE_PLUS)
    grid = Grid1D(lo=0.0, hi=0.6, n=30)
    state = state_from_closed_form(sol, grid, t0=t)
    lam_minus, lam_plus = characteristic_speeds(state.p, state.q)
    expected = -grid.nodes() / (1.0 - t)
    assert np.max(np.abs(lam_minus - expected)) <= 1e-6
    assert np.max(np.abs(lam_plus - expected)) <= 1e-6


def test_membrane_rates_match_the_sphere():
    sol = ClosedFormSolution(family=Family.MEMBRANE_SPHERE_PLUS)
    errors = []
    for n in (100, 200):
        grid = Grid1D(lo=0.0, hi=0.5, n=n)
        state = state_from_closed_form(sol, grid)
        _, p_dot, q_dot = rhs(EquationId.RADIAL_MEMBRANE, state)
        jets = [evaluate_jet(sol, (0.0, float(r))) for r in grid.nodes()]
        u_tt = np.array([float(j.aa) for j in jets])
        u_tr = np.array([float(j.ab) for j in jets])
        assert p_dot[0] == 0.0
        errors.append(max(np.max(np.abs(p_dot[1:-1] - u_tt[1:-1])), np.max(np.abs(q_dot[1:-1] - u_tr[1:-1]))))
    assert errors[1] <= 1e-3
    assert errors[0] / errors[1] >= 3, f"errors {errors}"


def test_membrane_axis_gradient_stays_zero():
    grid = Grid1D(lo=0.0, hi=1.0, n=100)
    config = EvolutionConfig(equation=EquationId.RADIAL_MEMBRANE, t_end=0.3, dissipation_coeff=0.0)
    result = evolve(pulse_state(EquationId.RADIAL_MEMBRANE, grid, 0.2, 0.2), config)
    assert result.termination == EvolutionTermination.REACHED_END
    assert result.final.left == 0
    assert result.final.q[0] == 0.0
    assert np.max(np.abs(result.final.u)) > 0


def test_even_pulse_stays_even():
    grid = Grid1D(lo=-1.0, hi=1.0, n=400)
    result = evolve(pulse_state(EquationId.BORN_INFELD, grid, 0.1, 0.2), EvolutionConfig(equation=EquationId.BORN_INFELD, t_end=0.3))
    final = result.final
    core = np.abs(grid.nodes()) <= 0.5
    assert np.max(np.abs(final.u - final.u[::-1])[core]) <= 1e-10
    assert np.max(np.abs(final.p - final.p[::-1])[core]) <= 1e-10
    assert np.max(np.abs(final.q + final.q[::-1])[core]) <= 1e-10


def test_characteristic_speeds_bounded():
    p = np.array([0.0, 0.5, -0.3, 0.9])
    q = np.array([0.0, 2.0, 1.0, 0.1])
    lam_minus, lam_plus = characteristic_speeds(p, q)
    assert np.all(lam_minus <= lam_plus)
    assert np.all(np.abs(lam_minus) <= 1) and np.all(np.abs(lam_plus) <= 1)
    assert lam_minus[0] == -1.0 and lam_plus[0] == 1.0
    # -pq / (1 + q^2) shifts the pair off the light cone
    assert lam_minus[2] == pytest.approx((0.3 - np.sqrt(1.91)) / 2)
    assert lam_plus[1] == pytest.approx((-1.0 + np.sqrt(4.75)) / 5)


def test_field_rates_report_non_finite():
    r = np.linspace(0.1, 1.0, 10)
    p = np.zeros(10)
    q = np.zeros(10)
    q[4] = np.nan
    with pytest.raises(NonFiniteError):
        field_rates(EquationId.BORN_INFELD, r, np.zeros(10), p, q, 0.1)


def test_step_floor():
    grid = Grid1D(lo=-1.0, hi=1.0, n=20)
    config = EvolutionConfig(equation=EquationId.BORN_INFELD, t_end=1.0)
    with pytest.raises(StepFloorError):
        step(zero_state(EquationId.BORN_INFELD, grid), config, dt=1e-15)


def test_equation_mismatch_is_rejected():
    grid = Grid1D(lo=0.0, hi=1.0, n=20)
    with pytest.raises(ValueError):
        evolve(zero_state(EquationId.RADIAL_MEMBRANE, grid), EvolutionConfig(equation=EquationId.BORN_INFELD, t_end=0.1))


def test_run_config_families():
    cfg = RunConfig(equation="membrane", family="constant", c=0.2, n=40, hi=0.5)
    assert cfg.lo == 0.0
    state = state_from_run_config(cfg)
    assert state.u[0] == pytest.approx(0.2)
    assert closed_form_for(cfg).family == Family.CONSTANT_PROFILE
    assert closed_form_for(RunConfig(equation="born-infeld", family="pulse")) is None
    membrane_pulse = state_from_run_config(RunConfig(equation="membrane", family="pulse", n=40))
    assert membrane_pulse.p[0] == pytest.approx(0.1)
    assert RunConfig(equation="born-infeld", family="log").edge_data == "exact"
    with pytest.raises(ValueError):
        RunConfig(equation="born-infeld", family="sphere-plus")


def test_blowup_fit_on_exact_series():
    t = np.linspace(0.0, 0.9, 50)
    fit = fit_blowup_rate(t, 2 * LOG_K / (1 - t), 1.0, (0.5, 0.9))
    assert fit.fitted_exponent == pytest.approx(1.0, abs=1e-10)
    assert fit.fitted_amplitude == pytest.approx(0.4, abs=1e-10)
    with pytest.raises(ArityError):
        fit_blowup_rate(t, 1 / (1 - t), 1.0, (0.95, 0.99))
    with pytest.raises(DomainError):
        fit_blowup_rate(t, 1 / (1.5 - t), 0.8, (0.5, 0.9))
