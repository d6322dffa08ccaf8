from typing import Optional

import numpy as np

from selfsim.numerics.integrate import trapezoid_quadrature
from selfsim.schema.grid import Grid1D
from selfsim.schema.report import EnergyReport

WEIGHT_KINDS = ("x-weight", "r-weight", "unweighted")


def weight_function(weight_kind: str):
    if weight_kind in ("x-weight", "r-weight"):
        return lambda x: x
    if weight_kind == "unweighted":
        return None
    raise ValueError(f"Unknown weight kind {weight_kind}, expected one of {WEIGHT_KINDS}")


def quadratic_energy(u_t, u_x, grid: Grid1D, weight_kind: str = "x-weight") -> float:
    u_t, u_x = np.asarray(u_t, dtype=float), np.asarray(u_x, dtype=float)
    density = 0.5 * u_t * u_t + 0.5 * u_x * u_x
    return trapezoid_quadrature(density, grid, weight_function(weight_kind))


def geometric_action(u_t, u_x, grid: Grid1D, weight_kind: str = "x-weight") -> Optional[float]:
    """Integral of sqrt(1 - u_t^2 + u_x^2); None once the discriminant goes negative."""
    u_t, u_x = np.asarray(u_t, dtype=float), np.asarray(u_x, dtype=float)
    D = 1 - u_t * u_t + u_x * u_x
    if np.any(D < 0):
        return None
    return trapezoid_quadrature(np.sqrt(D), grid, weight_function(weight_kind))


def energy_report(u_t, u_x, grid: Grid1D, weight_kind: str = "x-weight") -> EnergyReport:
    return EnergyReport(
        quadratic_part=quadratic_energy(u_t, u_x, grid, weight_kind),
        geometric_action_density_integral=geometric_action(u_t, u_x, grid, weight_kind),
        weight_kind=weight_kind,
    )
