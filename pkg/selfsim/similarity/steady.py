import logging
import math
from enum import Enum
from typing import NamedTuple, Tuple

import numpy as np

from selfsim.errors import DomainError, SingularPointError
from selfsim.numerics.integrate import rk4_step
from selfsim.settings import settings

logger = logging.getLogger(__name__)


class SteadyOdeId(str, Enum):
    BORN_INFELD_STEADY = "BornInfeldSteady" # (rho^2 - 1) v'' + 2 rho v' = 0
    SPACELIKE_STEADY = "SpacelikeSteady" # (rho^2 + 1) v'' + 2 rho v' = 0
    MEMBRANE_STEADY_RESIDUAL = "MembraneSteadyResidual"


class SteadyPair(NamedTuple):
    claimed: float
    corrected: float


class SteadySolution(NamedTuple):
    ode: SteadyOdeId
    rho: np.ndarray
    v: np.ndarray
    dv: np.ndarray


def steady_ode_closed_form(ode: SteadyOdeId, k: float, rho: float):
    """Closed-form steady profiles.

    SpacelikeSteady returns a (claimed, corrected) pair: k asinh(rho), which
    does not solve the ODE, and k atan(rho), which does.
    """
    if ode == SteadyOdeId.BORN_INFELD_STEADY:
        if abs(rho) >= 1:
            raise DomainError(f"the Born-Infeld steady profile needs |rho| < 1, got {rho}")
        return k * math.log((1 + rho) / (1 - rho))
    if ode == SteadyOdeId.SPACELIKE_STEADY:
        return SteadyPair(claimed=k * math.asinh(rho), corrected=k * math.atan(rho))
    raise ValueError(f"No closed form for {ode.value}; the membrane branches come from the profile module")


def steady_ode_residual(ode: SteadyOdeId, v, dv, d2v, rho):
    if ode == SteadyOdeId.BORN_INFELD_STEADY:
        return (rho * rho - 1) * d2v + 2 * rho * dv
    if ode == SteadyOdeId.SPACELIKE_STEADY:
        return (rho * rho + 1) * d2v + 2 * rho * dv
    if ode == SteadyOdeId.MEMBRANE_STEADY_RESIDUAL:
        if rho == 0:
            raise SingularPointError("the steady membrane similarity residual has 1/rho terms")
        return (
            -(1 - rho * rho) * d2v
            - dv / rho
            - 2 * v * dv * dv
            + d2v * v * v
            + dv * v * v / rho
            + (rho * rho - 1) * dv ** 3 / rho
        )
    raise ValueError(f"Unknown steady ODE {ode}")


def _second_derivative(ode, rho, dv):
    if ode == SteadyOdeId.BORN_INFELD_STEADY:
        return 2 * rho * dv / (1 - rho * rho)
    return -2 * rho * dv / (1 + rho * rho)


def steady_ode_integrate(ode: SteadyOdeId, initial: Tuple[float, float], rho_range: Tuple[float, float], d_rho: float) -> SteadySolution:
    """Fixed-step RK4 for the linear steady ODEs.

    The step is shrunk slightly so the grid lands on rho_range[1].
    """
    if ode == SteadyOdeId.MEMBRANE_STEADY_RESIDUAL:
        raise ValueError("the membrane steady equation is nonlinear; use the profile shooter")
    rho0, rho1 = rho_range
    if not rho1 > rho0 or not d_rho > 0:
        raise ValueError(f"need rho0 < rho1 and d_rho > 0, got {rho_range}, {d_rho}")
    if ode == SteadyOdeId.BORN_INFELD_STEADY:
        margin = 1 - max(abs(rho0), abs(rho1))
        if margin < 10 * d_rho - settings.EPS_BOUNDARY:
            raise DomainError(f"range {rho_range} comes within {margin:.3e} of |rho| = 1; need at least {10 * d_rho:.3e}")

    n_steps = max(1, math.ceil((rho1 - rho0) / d_rho - 1e-9))
    h = (rho1 - rho0) / n_steps
    rho = rho0 + h * np.arange(n_steps + 1)
    states = np.empty((n_steps + 1, 2))
    states[0] = initial

    def derivative(r, y):
        return np.array([y[1], _second_derivative(ode, r, y[1])])

    for i in range(n_steps):
        states[i + 1] = rk4_step(states[i], derivative, rho[i], h)
    logger.debug(f"{ode.value}: {n_steps} RK4 steps of {h:.3e} over {rho_range}")
    return SteadySolution(ode=ode, rho=rho, v=states[:, 0], dv=states[:, 1])


def steady_table(solution: SteadySolution, k: float):
    """Rows (rho, v_numeric, v_closed_claimed, v_closed_corrected) for CSV export."""
    rows = []
    for rho, v in zip(solution.rho, solution.v):
        closed = steady_ode_closed_form(solution.ode, k, float(rho))
        if isinstance(closed, SteadyPair):
            rows.append((float(rho), float(v), closed.claimed, closed.corrected))
        else:
            rows.append((float(rho), float(v), closed, closed))
    return rows
