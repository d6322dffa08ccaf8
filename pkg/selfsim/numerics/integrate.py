from typing import Callable, Optional

import numpy as np

from selfsim.errors import NonFiniteError, StepFloorError
from selfsim.schema.grid import Grid1D


def _finite_or_raise(k, t, y):
    if not np.all(np.isfinite(y)):
        raise NonFiniteError(f"non-finite derivative at RK4 stage {k}, t={t}", location=("stage", k, t))
    return y


def rk4_step(state, derivative: Callable, t: float, dt: float):
    if dt <= 0:
        raise ValueError(f"RK4 step needs dt > 0, got {dt}")
    y = np.asarray(state, dtype=float)
    k1 = _finite_or_raise(1, t, np.asarray(derivative(t, y), dtype=float))
    k2 = _finite_or_raise(2, t + dt / 2, np.asarray(derivative(t + dt / 2, y + dt / 2 * k1), dtype=float))
    k3 = _finite_or_raise(3, t + dt / 2, np.asarray(derivative(t + dt / 2, y + dt / 2 * k2), dtype=float))
    k4 = _finite_or_raise(4, t + dt, np.asarray(derivative(t + dt, y + dt * k3), dtype=float))
    return y + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def rk4_adaptive_step(state, derivative: Callable, t: float, dt: float, atol: float, dt_min: float):
    """Step-halving RK4: compares one step of dt against two of dt/2.

    Returns (new_state, new_t, dt_used, dt_next). Raises StepFloorError once dt
    would drop below dt_min.
    """
    while True:
        if dt < dt_min:
            raise StepFloorError(f"adaptive step fell below {dt_min} at t={t}")
        full = rk4_step(state, derivative, t, dt)
        half = rk4_step(state, derivative, t, dt / 2)
        half = rk4_step(half, derivative, t + dt / 2, dt / 2)
        err = float(np.max(np.abs(full - half)))
        if err <= atol:
            # grow only when comfortably inside tolerance
            dt_next = 2 * dt if err < atol / 32 else dt
            return half, t + dt, dt, dt_next
        dt = dt / 2


def trapezoid(values, h: float) -> float:
    values = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(values)):
        raise NonFiniteError("non-finite samples in quadrature")
    if values.shape[0] < 2:
        return 0.0
    return float(h * (values.sum() - 0.5 * (values[0] + values[-1])))


def trapezoid_quadrature(samples, grid: Grid1D, weight: Optional[Callable] = None) -> float:
    samples = np.asarray(samples, dtype=float)
    if samples.shape[0] != grid.n_nodes:
        raise ValueError(f"Expected {grid.n_nodes} samples, got {samples.shape[0]}")
    if weight is not None:
        samples = samples * np.asarray(weight(grid.nodes()), dtype=float)
    return trapezoid(samples, grid.spacing)
