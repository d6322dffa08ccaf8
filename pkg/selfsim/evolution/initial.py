import numpy as np

from selfsim.closedform.families import ClosedFormSolution, Family, evaluate_jet
from selfsim.errors import DomainError
from selfsim.evolution.state import EvolutionState
from selfsim.schema.config import RunConfig
from selfsim.schema.grid import Grid1D
from selfsim.schema.report import EquationId


def _membrane_grid(equation, grid):
    if equation == EquationId.RADIAL_MEMBRANE and grid.lo != 0.0:
        raise ValueError(f"membrane grids start on the axis, got lo={grid.lo}")


def state_from_closed_form(sol: ClosedFormSolution, grid: Grid1D, t0: float = 0.0) -> EvolutionState:
    """Samples u, u_t and the spatial derivative of a closed form at t0."""
    if sol.equation not in (EquationId.BORN_INFELD, EquationId.RADIAL_MEMBRANE):
        raise ValueError(f"{sol.family.value} is not a time-dependent family")
    _membrane_grid(sol.equation, grid)
    u, p, q = (np.empty(grid.n_nodes) for _ in range(3))
    for i, x in enumerate(grid.nodes()):
        try:
            jet = evaluate_jet(sol, (t0, float(x)))
        except DomainError as e:
            raise DomainError(f"grid node {x} at t = {t0} is outside the domain of {sol.family.value}: {e}")
        u[i], p[i], q[i] = jet.value, jet.a, jet.b
    return EvolutionState(equation=sol.equation, grid=grid, t=t0, u=u, p=p, q=q)


def zero_state(equation: EquationId, grid: Grid1D, t0: float = 0.0) -> EvolutionState:
    _membrane_grid(equation, grid)
    zeros = np.zeros(grid.n_nodes)
    return EvolutionState(equation=equation, grid=grid, t=t0, u=zeros.copy(), p=zeros.copy(), q=zeros.copy())


def pulse_state(equation: EquationId, grid: Grid1D, amplitude: float, width: float, t0: float = 0.0, center: float = 0.0) -> EvolutionState:
    # u = 0 with a Gaussian velocity
    if equation == EquationId.RADIAL_MEMBRANE and center != 0.0:
        raise ValueError(f"membrane pulses sit on the axis, got center={center}")
    _membrane_grid(equation, grid)
    x = grid.nodes()
    zeros = np.zeros(grid.n_nodes)
    return EvolutionState(equation=equation, grid=grid, t=t0, u=zeros.copy(), p=amplitude * np.exp(-((x - center) / width) ** 2), q=zeros.copy())


def sphere_bump_state(grid: Grid1D, T: float, amplitude: float, width: float, sign: int = 1, t0: float = 0.0) -> EvolutionState:
    """Sphere background plus amplitude * exp(-(r / width)^2) in u and amplitude in u_t.

    The sphere itself is lightlike everywhere; the extra velocity makes the
    perturbed slice timelike (1 - p^2 + q^2 > 0 for small positive amplitude).
    """
    sol = ClosedFormSolution(family=Family.MEMBRANE_SPHERE_MINUS if sign < 0 else Family.MEMBRANE_SPHERE_PLUS, T=T)
    base = state_from_closed_form(sol, grid, t0)
    r = grid.nodes()
    g = np.exp(-(r / width) ** 2)
    eps = sign * amplitude
    return EvolutionState(
        equation=EquationId.RADIAL_MEMBRANE,
        grid=grid,
        t=t0,
        u=base.u + eps * g,
        p=base.p + eps,
        q=base.q - eps * 2 * r / (width * width) * g,
    )


def state_from_run_config(cfg: RunConfig) -> EvolutionState:
    grid = Grid1D(lo=cfg.lo, hi=cfg.hi, n=cfg.n)
    equation = cfg.equation_id
    if cfg.family == "log":
        return state_from_closed_form(ClosedFormSolution(family=Family.BORN_INFELD_LOG, T=cfg.T, k=cfg.k), grid)
    if cfg.family == "zero":
        return zero_state(equation, grid)
    if cfg.family == "pulse":
        return pulse_state(equation, grid, cfg.amplitude, cfg.width)
    if cfg.family == "constant":
        return state_from_closed_form(ClosedFormSolution(family=Family.CONSTANT_PROFILE, T=cfg.T, k=cfg.c), grid)
    if cfg.family == "sphere-plus":
        return state_from_closed_form(ClosedFormSolution(family=Family.MEMBRANE_SPHERE_PLUS, T=cfg.T), grid)
    if cfg.family == "sphere-minus":
        return state_from_closed_form(ClosedFormSolution(family=Family.MEMBRANE_SPHERE_MINUS, T=cfg.T), grid)
    if cfg.family == "sphere-bump":
        return sphere_bump_state(grid, cfg.T, cfg.amplitude, cfg.width)
    raise ValueError(f"Unknown initial data family {cfg.family}")


def closed_form_for(cfg: RunConfig):
    """The exact solution a run starts from, or None for generic data."""
    families = {
        "log": (Family.BORN_INFELD_LOG, cfg.k),
        "constant": (Family.CONSTANT_PROFILE, cfg.c),
        "sphere-plus": (Family.MEMBRANE_SPHERE_PLUS, 1.0),
        "sphere-minus": (Family.MEMBRANE_SPHERE_MINUS, 1.0),
    }
    if cfg.family not in families:
        return None
    family, k = families[cfg.family]
    return ClosedFormSolution(family=family, T=cfg.T, k=k)
