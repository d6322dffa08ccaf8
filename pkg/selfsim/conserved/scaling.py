import logging
from typing import Callable, Sequence, Tuple

import numpy as np

from selfsim.conserved.energy import quadratic_energy
from selfsim.errors import ArityError
from selfsim.numerics.fit import log_log_fit
from selfsim.schema.grid import Grid1D
from selfsim.schema.jet import Jet2
from selfsim.schema.report import ScalingMeasurement

logger = logging.getLogger(__name__)

CLAIMED_EXPONENT = 1.0

# (t, x array) -> (u_t, u_x)
TestField = Callable[[float, np.ndarray], Tuple[np.ndarray, np.ndarray]]


def sine_decay(t: float, x: np.ndarray):
    """u = sin(x) e^-t."""
    e = np.exp(-t)
    return -np.sin(x) * e, np.cos(x) * e


def gaussian_wave(t: float, x: np.ndarray):
    """u = exp(-(x - t)^2)."""
    g = np.exp(-(x - t) ** 2)
    return 2 * (x - t) * g, -2 * (x - t) * g


def rescale_jet(jet: Jet2, lam: float) -> Jet2:
    """Jet of u_lambda(t, x) = u(lambda t, lambda x) / lambda, given the jet of u at (lambda t, lambda x)."""
    return Jet2(jet.variables, jet.value / lam, jet.d1, tuple(lam * d for d in jet.d2))


def rescaled_energy(field: TestField, lam: float, base: Grid1D, weight_kind: str, t: float = 0.0) -> float:
    """Energy of u_lambda at time t / lambda on the preimage of the base interval.

    u_lambda(t / lambda, x) = u(t, lambda x) / lambda, so the rescaled field
    is sampled on the slice of u at t for every lambda.
    """
    grid = base.rescaled(1 / lam)
    u_t, u_x = field(t, lam * grid.nodes())
    return quadratic_energy(u_t, u_x, grid, weight_kind)


def measure_scaling_exponent(
    field: TestField,
    lambda_values: Sequence[float],
    weight_kind: str = "x-weight",
    base: Grid1D = Grid1D(lo=0.0, hi=1.0, n=400),
    t: float = 0.0,
) -> ScalingMeasurement:
    """Slope of log E(u_lambda) against log lambda."""
    lambda_values = [float(lam) for lam in lambda_values]
    if len(set(lambda_values)) < 3:
        raise ArityError(f"need at least 3 distinct scaling factors, got {lambda_values}")
    energies = [rescaled_energy(field, lam, base, weight_kind, t) for lam in lambda_values]
    fit = log_log_fit(lambda_values, energies)
    logger.debug(f"{weight_kind} scaling exponent {fit.slope:.6f} (r^2 = {fit.r_squared:.6f})")
    return ScalingMeasurement(
        lambda_values=lambda_values,
        measured_exponent=fit.slope,
        fit=fit,
        claimed_exponent=CLAIMED_EXPONENT,
        weight_kind=weight_kind,
        energies=energies,
    )
