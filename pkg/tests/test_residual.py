import numpy as np
import pytest

from selfsim.closedform.families import ClosedFormSolution, Family, evaluate_jet
from selfsim.errors import BoundaryError, DegeneracyError, RegularityError, SingularPointError
from selfsim.residual.divergence import discrete_divergence_residual
from selfsim.residual.operators import (
    divergence_form_residual,
    membrane_residual,
    membrane_residual_grouped,
    residual_at_axis,
    spacelike_residual,
)
from selfsim.residual.sweep import aggregate, sample_points, sweep_residual
from selfsim.schema.config import DomainSampler
from selfsim.schema.grid import Grid1D
from selfsim.schema.jet import Jet2
from selfsim.schema.report import EquationId
from selfsim.settings import settings


def test_born_infeld_sweep_vanishes():
    sampler = DomainSampler(kind="lightcone", n_a=6, n_b=6)
    for k in (0.2, 1.0, -3.0):
        sol = ClosedFormSolution(family=Family.BORN_INFELD_LOG, k=k)
        report = sweep_residual(EquationId.BORN_INFELD, sol, sampler)
        assert report.n_points == 36
        assert report.max_abs <= settings.SOLUTION_TOLERANCE, f"k={k}: max residual {report.max_abs}"


def test_born_infeld_sweep_in_double_precision():
    sol = ClosedFormSolution(family=Family.BORN_INFELD_LOG, k=0.2)
    sampler = DomainSampler(kind="lightcone", n_a=10, n_b=10, margin=0.05)
    report = sweep_residual(EquationId.BORN_INFELD, sol, sampler, extended=False)
    assert report.max_abs <= 1e-6


def test_sphere_sweeps_include_the_axis():
    sampler = DomainSampler(kind="backward_cone", n_a=5, n_b=5, rho_max=0.9)
    sol = ClosedFormSolution(family=Family.MEMBRANE_SPHERE_MINUS)
    points = sample_points(sol, sampler)
    assert any(r == 0 for _, r in points)
    for eq in (EquationId.RADIAL_MEMBRANE, EquationId.EIKONAL):
        report = sweep_residual(eq, sol, sampler)
        assert report.max_abs <= settings.SOLUTION_TOLERANCE, f"{eq.value}: {report.max_abs}"


def test_constant_profile_solves_membrane():
    sampler = DomainSampler(kind="backward_cone", n_a=5, n_b=5)
    sol = ClosedFormSolution(family=Family.CONSTANT_PROFILE, k=0.3)
    assert sweep_residual(EquationId.RADIAL_MEMBRANE, sol, sampler).max_abs <= 1e-12


def test_claimed_spacelike_log_is_not_a_solution():
    sol = ClosedFormSolution(family=Family.SPACELIKE_LOG_CLAIMED)
    residual = spacelike_residual(evaluate_jet(sol, (0.0, 0.5)))
    assert residual == pytest.approx(1 / np.sqrt(5), abs=1e-7)

    corrected = ClosedFormSolution(family=Family.SPACELIKE_ARCTAN_CORRECTED)
    sampler = DomainSampler(kind="rectangle", n_a=5, n_b=5, box=(0.0, 0.5, 0.0, 0.5))
    assert sweep_residual(EquationId.SPACELIKE_ZMC, corrected, sampler).max_abs <= settings.SOLUTION_TOLERANCE


def test_grouped_membrane_form_agrees():
    jet = Jet2.of_two(("t", "r"), 0.1, 0.3, -0.2, 0.7, 0.4, -1.1)
    assert membrane_residual(jet, 0.6) == pytest.approx(membrane_residual_grouped(jet, 0.6), abs=1e-14)
    with pytest.raises(SingularPointError):
        membrane_residual(jet, 0)


def test_axis_residual_needs_even_field():
    with pytest.raises(RegularityError):
        residual_at_axis(Jet2.of_two(("t", "r"), 0.0, 0.0, 0.5, 0.0, 0.0, 1.0))
    sphere = evaluate_jet(ClosedFormSolution(family=Family.MEMBRANE_SPHERE_PLUS), (0.5, 0.0))
    assert abs(residual_at_axis(sphere)) <= 1e-12


def test_divergence_form_matches_scaled_residual():
    sol = ClosedFormSolution(family=Family.BORN_INFELD_LOG, k=0.3)
    jet = evaluate_jet(sol, (0.4, 0.1))
    assert abs(divergence_form_residual(jet)) <= 1e-12
    with pytest.raises(DegeneracyError):
        divergence_form_residual(Jet2.of_two(("t", "x"), 0.0, 2.0, 0.0, 0.0, 0.0, 0.0))


def test_discrete_divergence_converges():
    sol = ClosedFormSolution(family=Family.BORN_INFELD_LOG, k=0.2)

    def residual(n):
        grid = Grid1D(lo=-0.2, hi=0.2, n=n)
        dt = grid.spacing
        times = 0.3 + dt * np.arange(-3, 4)
        values = np.array([[float(evaluate_jet(sol, (t, float(x))).value) for x in grid.nodes()] for t in times])
        # off the axis, where oddness in x makes the residual vanish identically
        return abs(discrete_divergence_residual(values, grid, dt, n // 2 + n // 8, 3))

    coarse, fine = residual(16), residual(32)
    assert fine <= coarse / 3, f"discrete residual did not converge: {coarse} -> {fine}"


def test_discrete_divergence_needs_two_neighbours():
    grid = Grid1D(lo=0.0, hi=1.0, n=10)
    with pytest.raises(BoundaryError):
        discrete_divergence_residual(np.zeros((5, 11)), grid, 0.1, 1, 2)


def test_aggregate():
    report = aggregate(EquationId.BORN_INFELD, [(0.0, 0.0), (0.1, 0.2)], [1e-3, -2e-3], keep_points=True)
    assert report.max_abs == pytest.approx(2e-3)
    assert report.worst_point == (0.1, 0.2)
    assert report.rms <= report.max_abs
    assert len(report.per_point) == 2
    with pytest.raises(ValueError):
        aggregate(EquationId.BORN_INFELD, [], [])


def test_random_sampler_is_seeded():
    sol = ClosedFormSolution(family=Family.BORN_INFELD_LOG)
    sampler = DomainSampler(kind="lightcone", n_a=4, n_b=4, random=True, seed=3)
    assert sample_points(sol, sampler) == sample_points(sol, sampler)
