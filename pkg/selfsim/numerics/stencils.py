from typing import Optional, Tuple

import numpy as np

from selfsim.errors import BoundaryError, NonFiniteError
from selfsim.schema.grid import Grid1D
from selfsim.schema.jet import Jet2

# (offsets, weights) with weights in units of 1/h and 1/h^2
FIRST_CENTRAL = ((-1, 1), (-0.5, 0.5))
FIRST_FORWARD = ((0, 1, 2), (-1.5, 2.0, -0.5))
FIRST_BACKWARD = ((0, -1, -2), (1.5, -2.0, 0.5))
SECOND_CENTRAL = ((-1, 0, 1), (1.0, -2.0, 1.0))
SECOND_FORWARD = ((0, 1, 2, 3), (2.0, -5.0, 4.0, -1.0))
SECOND_BACKWARD = ((0, -1, -2, -3), (2.0, -5.0, 4.0, -1.0))


def _stencils(idx: int, size: int, one_sided: bool, axis_name: str):
    if 1 <= idx <= size - 2:
        return FIRST_CENTRAL, SECOND_CENTRAL
    if not one_sided:
        raise BoundaryError(f"{axis_name} index {idx} is on the boundary of 0..{size - 1}; central stencils need a neighbour on each side")
    if size < 4:
        raise BoundaryError(f"one-sided stencils need 4 {axis_name} samples, got {size}")
    if idx == 0:
        return FIRST_FORWARD, SECOND_FORWARD
    if idx == size - 1:
        return FIRST_BACKWARD, SECOND_BACKWARD
    raise BoundaryError(f"{axis_name} index {idx} outside 0..{size - 1}")


def _apply(values: np.ndarray, stencil, scale: float, base: Tuple[int, ...], axis: int):
    offsets, weights = stencil
    total = 0.0
    for off, w in zip(offsets, weights):
        idx = list(base)
        idx[axis] += off
        total += w * values[tuple(idx)]
    return total / scale


def _check_finite(values: np.ndarray, location):
    if not np.all(np.isfinite(values)):
        raise NonFiniteError(f"non-finite samples near {location}", location=location)


def central_diff_jet2(values, grid: Grid1D, i: int, level: Optional[int] = None, dt: Optional[float] = None, one_sided: bool = False) -> Jet2:
    """Second-order finite-difference 2-jet of a sampled field.

    A 1D array is a field of x alone. A 2D array is indexed [time level, node]
    with time step dt and gives a (t, x) jet including the mixed partial.
    """
    values = np.asarray(values, dtype=float)
    h = grid.spacing

    if values.ndim == 1:
        if values.shape[0] != grid.n_nodes:
            raise ValueError(f"Expected {grid.n_nodes} samples, got {values.shape[0]}")
        first, second = _stencils(i, grid.n_nodes, one_sided, "node")
        _check_finite(values[max(i - 3, 0):i + 4], (i,))
        return Jet2.of_one(
            "x",
            values[i],
            _apply(values, first, h, (i,), 0),
            _apply(values, second, h * h, (i,), 0),
        )

    if values.ndim != 2:
        raise ValueError(f"Unsupported field shape {values.shape}")
    if level is None or dt is None:
        raise ValueError("Two-variable jets need a time level and dt")
    if values.shape[1] != grid.n_nodes:
        raise ValueError(f"Expected {grid.n_nodes} nodes per level, got {values.shape[1]}")

    first_t, second_t = _stencils(level, values.shape[0], one_sided, "level")
    first_x, second_x = _stencils(i, grid.n_nodes, one_sided, "node")
    _check_finite(values[max(level - 3, 0):level + 4, max(i - 3, 0):i + 4], (level, i))

    base = (level, i)
    u_t = _apply(values, first_t, dt, base, 0)
    u_x = _apply(values, first_x, h, base, 1)
    u_tt = _apply(values, second_t, dt * dt, base, 0)
    u_xx = _apply(values, second_x, h * h, base, 1)

    u_tx = 0.0
    for off_t, w_t in zip(*first_t):
        for off_x, w_x in zip(*first_x):
            u_tx += w_t * w_x * values[level + off_t, i + off_x]
    u_tx /= dt * h

    return Jet2.of_two(("t", "x"), values[level, i], u_t, u_x, u_tt, u_tx, u_xx)


def first_derivative(f: np.ndarray, h: float, left_parity: Optional[int] = None) -> np.ndarray:
    # Central in the interior, one-sided second order at the ends unless the
    # left end is an axis with a reflected ghost node
    d = np.empty_like(f)
    d[1:-1] = (f[2:] - f[:-2]) / (2 * h)
    if left_parity is None:
        d[0] = (-3 * f[0] + 4 * f[1] - f[2]) / (2 * h)
    else:
        d[0] = (f[1] - left_parity * f[1]) / (2 * h)
    d[-1] = (3 * f[-1] - 4 * f[-2] + f[-3]) / (2 * h)
    return d


def second_derivative(f: np.ndarray, h: float, left_parity: Optional[int] = None) -> np.ndarray:
    d = np.empty_like(f)
    d[1:-1] = (f[2:] - 2 * f[1:-1] + f[:-2]) / (h * h)
    if left_parity is None:
        d[0] = (2 * f[0] - 5 * f[1] + 4 * f[2] - f[3]) / (h * h)
    else:
        d[0] = (left_parity * f[1] - 2 * f[0] + f[1]) / (h * h)
    d[-1] = (2 * f[-1] - 5 * f[-2] + 4 * f[-3] - f[-4]) / (h * h)
    return d


def fourth_difference(f: np.ndarray, left_parity: Optional[int] = None) -> np.ndarray:
    # Zero on the last two nodes of each open end
    pad = 0
    if left_parity is not None:
        f = np.concatenate([left_parity * f[2:0:-1], f])
        pad = 2
    d = np.zeros_like(f)
    d[2:-2] = f[4:] - 4 * f[3:-1] + 6 * f[2:-2] - 4 * f[1:-3] + f[:-4]
    return d[pad:]


def ko_dissipation(f: np.ndarray, h: float, sigma: float, left_parity: Optional[int] = None) -> np.ndarray:
    if sigma == 0:
        return np.zeros_like(f)
    return -(sigma / (16 * h)) * fourth_difference(f, left_parity)
