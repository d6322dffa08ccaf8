import numpy as np

from selfsim.errors import BoundaryError, DegeneracyError
from selfsim.schema.grid import Grid1D
from selfsim.settings import settings


def _fluxes(values, level, i, dt, h, eps_deg):
    p = (values[level + 1, i] - values[level - 1, i]) / (2 * dt)
    q = (values[level, i + 1] - values[level, i - 1]) / (2 * h)
    D = 1 - p * p + q * q
    if not D > eps_deg:
        raise DegeneracyError(f"discriminant {D:.3e} at level {level}, node {i} is not above {eps_deg:.1e}")
    root = np.sqrt(D)
    return p / root, q / root


def discrete_divergence_residual(values, grid: Grid1D, dt: float, i: int, level: int, eps_deg=None) -> float:
    """Divergence-form residual of a sampled (t, x) field.

    Fluxes u_t / sqrt(D) and u_x / sqrt(D) are formed with central differences
    at the four neighbours and differenced again, so the stencil reaches two
    levels and two nodes out.
    """
    eps_deg = settings.EPS_DEGENERACY if eps_deg is None else eps_deg
    values = np.asarray(values, dtype=float)
    n_levels, n_nodes = values.shape
    if not (2 <= level <= n_levels - 3 and 2 <= i <= n_nodes - 3):
        raise BoundaryError(f"divergence stencil at level {level}, node {i} needs two samples on each side")
    h = grid.spacing

    flux_t_plus, _ = _fluxes(values, level + 1, i, dt, h, eps_deg)
    flux_t_minus, _ = _fluxes(values, level - 1, i, dt, h, eps_deg)
    _, flux_x_plus = _fluxes(values, level, i + 1, dt, h, eps_deg)
    _, flux_x_minus = _fluxes(values, level, i - 1, dt, h, eps_deg)
    return float((flux_t_plus - flux_t_minus) / (2 * dt) - (flux_x_plus - flux_x_minus) / (2 * h))
