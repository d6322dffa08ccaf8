import numpy as np

from selfsim.errors import DegeneracyError
from selfsim.numerics.integrate import trapezoid


def _weights(state, lo: int, hi: int):
    if state.is_membrane:
        return state.grid.nodes()[lo:hi + 1]
    return np.ones(hi - lo + 1)


def momentum_density(p, q) -> np.ndarray:
    D = 1 - p * p + q * q
    if np.any(D <= 0):
        raise DegeneracyError(f"momentum density needs 1 - p^2 + q^2 > 0, min is {float(np.min(D)):.3e}")
    return p / np.sqrt(D)


def momentum_flux(p, q) -> np.ndarray:
    return q / np.sqrt(1 - p * p + q * q)


def slice_momentum(state, lo: int, hi: int) -> float:
    # trapezoid over nodes lo..hi, r-weighted for the membrane
    if hi <= lo:
        return 0.0
    density = momentum_density(state.p[lo:hi + 1], state.q[lo:hi + 1])
    return trapezoid(density * _weights(state, lo, hi), state.grid.spacing)


def momentum_integral(state) -> float:
    """Integral of p / sqrt(1 - p^2 + q^2) over the active window."""
    return slice_momentum(state, state.left, state.right)


def edge_flux(state) -> float:
    """F(x_right) - F(x_left) with F = q / sqrt(D), r-weighted for the membrane."""
    i, j = state.left, state.right
    flux = momentum_flux(state.p[[i, j]], state.q[[i, j]]) * _weights(state, i, j)[[0, -1]]
    return float(flux[1] - flux[0])


def corrected_momentum(state) -> float:
    """Active momentum minus the boundary flux plus everything cut away by excision.

    Constant along an exact evolution.
    """
    return momentum_integral(state) - state.boundary_flux + state.excised_momentum


def momentum_scale(state) -> float:
    sl = state.active
    density = momentum_density(state.p[sl], state.q[sl])
    return trapezoid(np.abs(density) * _weights(state, state.left, state.right), state.grid.spacing)
