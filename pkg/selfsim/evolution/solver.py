import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import List, NamedTuple, Optional

import numpy as np
from tqdm import tqdm

from selfsim.closedform.families import ClosedFormSolution, evaluate_jet
from selfsim.conserved.momentum import corrected_momentum, edge_flux, slice_momentum
from selfsim.errors import DegeneracyError, DomainError, NonFiniteError, StepFloorError
from selfsim.evolution.state import EvolutionState
from selfsim.evolution.system import characteristic_speeds, field_rates
from selfsim.numerics.integrate import rk4_step
from selfsim.residual.sweep import sweep_points
from selfsim.schema.config import EvolutionConfig
from selfsim.schema.grid import Grid1D
from selfsim.schema.report import EquationId, ResidualReport
from selfsim.settings import settings

logger = logging.getLogger(__name__)


class EvolutionTermination(str, Enum):
    REACHED_END = "ReachedEnd"
    MAX_GRADIENT = "MaxGradient"
    DEGENERACY_STOP = "DegeneracyStop"
    STEP_FLOOR = "StepFloor"
    DOMAIN_EXHAUSTED = "DomainExhausted"
    NON_FINITE = "NonFinite"


class Diagnostics(NamedTuple):
    t: float
    sup_q: float
    q_at_origin: float # u_rr at the axis for the membrane
    min_discriminant: float
    momentum_integral: float
    x_left: float
    x_right: float


class Snapshot(NamedTuple):
    t: float
    x: np.ndarray
    u: np.ndarray
    p: np.ndarray
    q: np.ndarray


@dataclass
class EvolutionResult:
    final: EvolutionState
    termination: EvolutionTermination
    diagnostics: List[Diagnostics] = field(default_factory=list)
    snapshots: List[Snapshot] = field(default_factory=list)
    n_steps: int = 0

    def series(self, name: str) -> np.ndarray:
        return np.array([getattr(row, name) for row in self.diagnostics])


def stable_dt(state: EvolutionState, config: EvolutionConfig) -> float:
    sl = state.active
    lam_minus, lam_plus = characteristic_speeds(state.p[sl], state.q[sl])
    speed = float(max(np.max(np.abs(lam_minus)), np.max(np.abs(lam_plus))))
    return config.cfl_safety * state.grid.spacing / max(speed, 1e-300)


def axis_value(state: EvolutionState) -> float:
    """q at x = 0 for Born-Infeld, u_rr at r = 0 for the membrane; nan once excised."""
    h = state.grid.spacing
    if state.is_membrane:
        if state.left != 0:
            return float("nan")
        return float(2 * (state.u[1] - state.u[0]) / (h * h))
    i = state.grid.nearest_index(0.0)
    if abs(state.grid.node(i)) > 1e-9 * h or not state.left <= i <= state.right:
        return float("nan")
    return float(state.q[i])


def diagnostics(state: EvolutionState) -> Diagnostics:
    sl = state.active
    min_disc = state.min_discriminant
    try:
        momentum = corrected_momentum(state)
    except DegeneracyError:
        momentum = float("nan")
    return Diagnostics(
        t=state.t,
        sup_q=float(np.max(np.abs(state.q[sl]))),
        q_at_origin=axis_value(state),
        min_discriminant=min_disc,
        momentum_integral=momentum,
        x_left=state.x_left,
        x_right=state.x_right,
    )


def _excise(state: EvolutionState, config: EvolutionConfig, dt: float) -> EvolutionState:
    x_left, x_right = state.x_left, state.x_right
    if config.edge_solution is None:
        # Without imported edge data an open edge retreats at the speed of the
        # characteristic entering through it, keeping the window inside the
        # domain of dependence of the initial slice
        sl = state.active
        lam_minus, lam_plus = characteristic_speeds(state.p[sl], state.q[sl])
        x_right -= max(0.0, -float(lam_minus[-1])) * dt
        if not state.is_membrane:
            x_left += max(0.0, float(lam_plus[0])) * dt
    if config.excision_rho is not None:
        reach = config.excision_rho * (config.T_blowup_hint - state.t)
        x_right = min(x_right, reach)
        if not state.is_membrane:
            x_left = max(x_left, -reach)

    old_left, old_right = state.left, state.right
    moved = replace(state, x_left=x_left, x_right=x_right)
    if moved.n_active < 1:
        return moved
    try:
        excised = state.excised_momentum + slice_momentum(state, old_left, moved.left) + slice_momentum(state, moved.right, old_right)
    except DegeneracyError:
        excised = float("nan")
    return replace(moved, excised_momentum=excised)


def _edge_rates(sol: ClosedFormSolution, t: float, x: float):
    try:
        jet = evaluate_jet(sol, (t, x))
    except DomainError as e:
        raise DomainError(f"edge x = {x} at t = {t:.6f} has left the domain of {sol.family.value}: {e}")
    return float(jet.a), float(jet.aa), float(jet.ab)


def step(state: EvolutionState, config: EvolutionConfig, dt: Optional[float] = None) -> EvolutionState:
    """One RK4 step of the active window followed by cone excision.

    Open edges take one-sided stencils, or the exact rates of
    config.edge_solution when one is given.
    """
    dt = stable_dt(state, config) if dt is None else dt
    if dt < config.dt_floor:
        raise StepFloorError(f"time step {dt:.3e} is below the floor {config.dt_floor:.1e}")
    sl = state.active
    r = state.grid.nodes()[sl]
    n = state.n_active
    h = state.grid.spacing
    on_axis = state.is_membrane and state.left == 0

    def derivative(t, y):
        rates = field_rates(config.equation, r, y[:n], y[n:2 * n], y[2 * n:], h, dissipation=config.dissipation_coeff, on_axis=on_axis, t=t)
        if config.edge_solution is not None:
            edges = [n - 1] if on_axis else [0, n - 1]
            for i in edges:
                rates[0][i], rates[1][i], rates[2][i] = _edge_rates(config.edge_solution, t, float(r[i]))
        return np.concatenate(rates)

    y0 = np.concatenate([state.u[sl], state.p[sl], state.q[sl]])
    y1 = rk4_step(y0, derivative, state.t, dt)

    u, p, q = state.u.copy(), state.p.copy(), state.q.copy()
    u[sl], p[sl], q[sl] = y1[:n], y1[n:2 * n], y1[2 * n:]
    advanced = state.with_fields(state.t + dt, u, p, q)

    flux = state.boundary_flux
    if state.min_discriminant > 0 and advanced.min_discriminant > 0:
        flux += 0.5 * dt * (edge_flux(state) + edge_flux(advanced))
    advanced = replace(advanced, boundary_flux=flux)
    return _excise(advanced, config, dt)


def evolve(initial: EvolutionState, config: EvolutionConfig) -> EvolutionResult:
    if initial.equation != config.equation:
        raise ValueError(f"state is for {initial.equation.value} but the run is configured for {config.equation.value}")
    result = EvolutionResult(final=initial, termination=EvolutionTermination.REACHED_END)
    state = initial
    warned = False

    def record(s: EvolutionState):
        result.diagnostics.append(diagnostics(s))
        if config.snapshot_every and result.n_steps % config.snapshot_every == 0:
            sl = s.active
            result.snapshots.append(Snapshot(s.t, s.nodes(), s.u[sl].copy(), s.p[sl].copy(), s.q[sl].copy()))

    record(state)
    progress = tqdm(total=config.t_end, desc=f"evolve {config.equation.value}", disable=not config.show_progress)
    termination = EvolutionTermination.REACHED_END
    while state.t < config.t_end - 1e-14:
        if state.n_active < settings.MIN_ACTIVE_NODES:
            termination = EvolutionTermination.DOMAIN_EXHAUSTED
            break
        min_disc = state.min_discriminant
        if not min_disc > config.min_discriminant_floor:
            termination = EvolutionTermination.DEGENERACY_STOP
            break
        if not warned and min_disc < 10 * config.min_discriminant_floor:
            logger.warning(f"discriminant {min_disc:.3e} is approaching the floor at t = {state.t:.6f}")
            warned = True
        dt = stable_dt(state, config)
        if dt < config.dt_floor:
            termination = EvolutionTermination.STEP_FLOOR
            break
        dt = min(dt, config.t_end - state.t)
        try:
            state = step(state, config, dt=dt)
        except NonFiniteError as e:
            logger.warning(f"evolution stopped: {e}")
            termination = EvolutionTermination.NON_FINITE
            break
        except DomainError as e:
            logger.warning(f"evolution stopped: {e}")
            termination = EvolutionTermination.DOMAIN_EXHAUSTED
            break
        result.n_steps += 1
        progress.update(dt)
        if state.n_active >= 1:
            record(state)
            if float(np.max(np.abs(state.q[state.active]))) > config.max_gradient:
                termination = EvolutionTermination.MAX_GRADIENT
                break
    progress.close()

    result.final = state
    result.termination = termination
    logger.info(f"{config.equation.value} evolution ended at t = {state.t:.6f} after {result.n_steps} steps: {termination.value}")
    return result


def diagnose_exact_background(sol: ClosedFormSolution, grid: Grid1D, t: float, extended: Optional[bool] = None) -> ResidualReport:
    """Residual of a closed-form membrane solution on the grid nodes at time t.

    Used in place of time-stepping for backgrounds that are lightlike.
    Nodes outside the open cone are skipped.
    """
    if sol.equation != EquationId.RADIAL_MEMBRANE:
        raise ValueError(f"exact-background diagnostics are for membrane families, got {sol.family.value}")
    reach = sol.T - t - settings.EPS_BOUNDARY
    points = [(t, float(r)) for r in grid.nodes() if abs(r) < reach]
    if not points:
        raise ValueError(f"no grid node lies inside the cone at t = {t}")
    return sweep_points(EquationId.RADIAL_MEMBRANE, sol, points, extended=extended)
