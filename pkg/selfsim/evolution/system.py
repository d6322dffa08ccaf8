from typing import Tuple

import numpy as np

from selfsim.errors import NonFiniteError
from selfsim.numerics.stencils import first_derivative, ko_dissipation
from selfsim.schema.report import EquationId

# Axis reflections for the membrane: u and p even in r, q odd
EVEN, ODD = 1, -1


def field_rates(equation: EquationId, r: np.ndarray, u: np.ndarray, p: np.ndarray, q: np.ndarray, h: float, dissipation: float = 0.0, on_axis: bool = False, t: float = 0.0):
    """Method-of-lines rates (u_dot, p_dot, q_dot) on one contiguous window.

    on_axis marks a membrane window whose first node is r = 0; the other ends
    use one-sided stencils.
    """
    even = EVEN if on_axis else None
    odd = ODD if on_axis else None
    Dp = first_derivative(p, h, left_parity=even)
    Dq = first_derivative(q, h, left_parity=odd)

    numerator = (1 - p * p) * Dq + 2 * p * q * Dp
    if equation == EquationId.RADIAL_MEMBRANE:
        curvature = np.empty_like(q)
        start = 0
        if on_axis:
            # q / r -> D_r q at the axis
            curvature[0] = Dq[0]
            start = 1
        curvature[start:] = q[start:] / r[start:]
        numerator = numerator + curvature * (1 - p * p + q * q)
    elif equation != EquationId.BORN_INFELD:
        raise ValueError(f"Cannot time-evolve {equation}")

    p_dot = numerator / (1 + q * q)
    q_dot = Dp
    if dissipation > 0:
        p_dot = p_dot + ko_dissipation(p, h, dissipation, left_parity=even)
        q_dot = q_dot + ko_dissipation(q, h, dissipation, left_parity=odd)

    for name, rate in (("p", p_dot), ("q", q_dot)):
        if not np.all(np.isfinite(rate)):
            bad = int(np.argmin(np.isfinite(rate)))
            raise NonFiniteError(f"non-finite {name} rate at x = {r[bad]}, t = {t}", location=(t, float(r[bad])))
    return p.copy(), p_dot, q_dot


def rhs(equation: EquationId, state, dissipation: float = 0.0):
    """Rates of (u, p, q) over the active window of an EvolutionState."""
    sl = state.active
    return field_rates(
        equation,
        state.grid.nodes()[sl],
        state.u[sl],
        state.p[sl],
        state.q[sl],
        state.grid.spacing,
        dissipation=dissipation,
        on_axis=state.is_membrane and state.left == 0,
        t=state.t,
    )


def characteristic_speeds(p, q) -> Tuple[np.ndarray, np.ndarray]:
    """Physical characteristic velocities dx/dt = (-pq -+ sqrt(1 - p^2 + q^2)) / (1 + q^2).

    These are minus the roots (pq -+ sqrt(D)) / (1 + q^2) of the principal
    symbol in the (p, q) system. Both lie in [-1, 1] while the discriminant is
    non-negative, and they coincide on lightlike data.
    """
    root = np.sqrt(np.maximum(1 - p * p + q * q, 0.0))
    w = 1 + q * q
    return (-p * q - root) / w, (-p * q + root) / w
