import numpy as np
import pytest

from selfsim.errors import SingularPointError
from selfsim.profile.ode import branch_jet
from selfsim.stability.linearized import (
    branch_profile,
    bump,
    derived_linearized_coefficients,
    directional_linearization_check,
    linearized_coefficients,
    zero_profile,
)
from selfsim.stability.modes import annihilating_integers, classify, mode_growth_probe, solve_mode_quadratic

RHOS = list(np.linspace(0.1, 0.9, 41))


def test_mode_roots_and_classification():
    report = solve_mode_quadratic()
    assert sorted(report.roots) == [-4.0, 1.0]
    assert dict(zip(report.roots, report.classification)) == {1.0: "unstable", -4.0: "stable"}
    assert not report.match_verdict
    assert report.qualitative_match


def test_only_the_roots_annihilate():
    assert annihilating_integers(-10, 10) == [-4, 1]
    assert mode_growth_probe(1.0, [0.0, 1.0, 2.0]).max_residual == 0.0
    assert mode_growth_probe(-4.0, [0.0, 1.0]).max_residual == 0.0
    assert mode_growth_probe(4.0, [0.0]).max_residual == pytest.approx(24.0)


def test_claimed_roots_classify_the_same_way():
    assert classify(4.0) == "unstable"
    assert classify(-1.0) == "stable"
    assert classify(0.0) == "unstable"


def test_quadratic_without_rational_roots():
    with pytest.raises(ValueError):
        solve_mode_quadratic((1, 0, 1))


def test_linearization_about_zero_profile():
    check = directional_linearization_check(zero_profile, bump(), 1e-6, RHOS)
    assert check.max_mismatch <= 1e-6, f"mismatch {check.max_mismatch} at rho {check.worst_rho}"


def test_linearization_about_branch_for_steady_directions():
    check = directional_linearization_check(branch_profile(1), bump(), 1e-6, RHOS, nu=0.0)
    assert check.max_mismatch <= 1e-5


def test_printed_tau_coefficient_fails_for_growing_directions():
    printed = directional_linearization_check(branch_profile(1), bump(), 1e-6, RHOS, nu=0.5)
    derived = directional_linearization_check(branch_profile(1), bump(), 1e-6, RHOS, nu=0.5, coefficients=derived_linearized_coefficients)
    assert printed.max_mismatch > 1e-3
    assert derived.max_mismatch <= 1e-5


def test_branch_operator_reduces_to_mode_equation():
    for rho in (0.2, 0.5, 0.8):
        c = derived_linearized_coefficients(*branch_jet(1, rho), rho)
        w = 1 - rho * rho
        assert c.v_tau_tau == pytest.approx(1 / w)
        assert c.v_tau == pytest.approx(3 / w)
        assert c.v == pytest.approx(-4 / w)
        for name in ("v_tau_rho", "v_rho_rho", "v_rho"):
            assert abs(getattr(c, name)) <= 1e-12, f"{name} = {getattr(c, name)} at rho {rho}"


def test_coefficients_are_singular_on_axis():
    with pytest.raises(SingularPointError):
        linearized_coefficients(0.5, 0.0, 0.0, 0.0)


def test_eps_range():
    with pytest.raises(ValueError):
        directional_linearization_check(zero_profile, bump(), 1e-2, RHOS)
