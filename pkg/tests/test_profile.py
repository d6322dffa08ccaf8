import math

import pytest

from selfsim.errors import DegeneracyError, DegenerateStartError
from selfsim.profile.ode import branch_jet, first_order_branch_residual, profile_residual, profile_residual_grouped, verify_branch
from selfsim.profile.shoot import integrate_profile, profile_second_derivative, shoot_profile
from selfsim.schema.profile import ProfileSolveResult, ProfileState, Termination
from selfsim.schema.report import EquationId


def test_both_branches_solve_the_profile_equation():
    for sign in (1, -1):
        report = verify_branch(sign, 200, (0.01, 0.99))
        assert report.equation == EquationId.MEMBRANE_PROFILE
        assert report.max_abs <= 1e-9, f"branch {sign}: {report.max_abs}"


def test_branch_sits_on_degenerate_set():
    phi, dphi, _ = branch_jet(1, 0.6)
    state = ProfileState(rho=0.6, phi=phi, dphi=dphi)
    assert abs(state.degeneracy_gap) <= 1e-15
    assert abs(first_order_branch_residual(0.6, phi, dphi)) <= 1e-12
    with pytest.raises(ValueError):
        branch_jet(2, 0.5)


def test_residual_forms_agree():
    state = ProfileState(rho=0.3, phi=0.2, dphi=-0.4)
    assert profile_residual(state, 1.7) == pytest.approx(profile_residual_grouped(state, 1.7), abs=1e-15)


def test_second_derivative_solves_residual():
    rho, phi, dphi = 0.4, 0.3, 0.2
    d2phi = profile_second_derivative(rho, phi, dphi)
    assert abs(profile_residual(ProfileState(rho=rho, phi=phi, dphi=dphi), d2phi)) <= 1e-14
    with pytest.raises(DegeneracyError):
        profile_second_derivative(0.8, 0.6, 0.1)


def test_profile_integration_fourth_order():
    start = ProfileState(rho=0.2, phi=0.3, dphi=0.1)

    def endpoint(d_rho):
        return integrate_profile(start, 0.6, d_rho).samples[-1].phi

    reference = endpoint(0.0025)
    coarse, fine = abs(endpoint(0.02) - reference), abs(endpoint(0.01) - reference)
    order = math.log2(coarse / fine)
    assert order >= 3.5, f"observed order {order}"


def test_adaptive_integration_agrees_with_fixed():
    start = ProfileState(rho=0.2, phi=0.3, dphi=0.1)
    fixed = integrate_profile(start, 0.6, 0.001).samples[-1]
    adaptive = integrate_profile(start, 0.6, 0.01, tolerance=1e-12)
    assert adaptive.termination == Termination.REACHED_END
    assert adaptive.samples[-1].rho == pytest.approx(0.6)
    assert adaptive.samples[-1].phi == pytest.approx(fixed.phi, abs=1e-9)


def test_regular_start_stays_constant_until_degeneracy():
    # phi' = 0 makes phi'' = 0, so the shot follows phi = a into 1 - rho^2 - a^2 = 0
    a = 0.6
    result = shoot_profile(a, 0.95, 1e-3)
    assert result.termination == Termination.DEGENERACY_HIT
    assert result.degeneracy_location == pytest.approx(math.sqrt(1 - a * a), abs=2e-3)
    assert all(s.phi == pytest.approx(a) for s in result.samples)


def test_shot_reaches_the_end_inside_the_regular_region():
    result = shoot_profile(0.3, 0.9, 1e-3)
    assert result.termination == Termination.REACHED_END
    assert result.samples[-1].rho == pytest.approx(0.9)
    assert len(result.columns()["degeneracy_gap"]) == len(result.samples)


def test_degenerate_starts_are_rejected():
    for a in (1.0, -1.0, 1.5):
        with pytest.raises(DegenerateStartError):
            shoot_profile(a, 0.5, 1e-3)
    with pytest.raises(ValueError):
        shoot_profile(0.5, 1.0, 1e-3)


def test_solve_result_requires_increasing_rho():
    samples = [ProfileState(rho=0.2, phi=0.0, dphi=0.0), ProfileState(rho=0.1, phi=0.0, dphi=0.0)]
    with pytest.raises(ValueError):
        ProfileSolveResult(samples=samples, termination=Termination.REACHED_END)
