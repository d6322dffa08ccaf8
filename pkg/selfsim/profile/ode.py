import math
from typing import Tuple

import numpy as np

from selfsim.residual.sweep import aggregate
from selfsim.schema.profile import ProfileState
from selfsim.schema.report import EquationId, ResidualReport


def profile_residual(state: ProfileState, d2phi: float) -> float:
    rho, phi, dphi = state.rho, state.phi, state.dphi
    return (
        rho * (1 - rho * rho) * d2phi
        + dphi
        - dphi * phi * phi
        + 2 * rho * phi * dphi * dphi
        - rho * d2phi * phi * phi
        + (1 - rho * rho) * dphi ** 3
    )


def profile_residual_grouped(state: ProfileState, d2phi: float) -> float:
    rho, phi, dphi = state.rho, state.phi, state.dphi
    return (
        rho * (1 - rho * rho - phi * phi) * d2phi
        + dphi
        - dphi * phi * phi
        + 2 * rho * phi * dphi * dphi
        + (1 - rho * rho) * dphi ** 3
    )


def first_order_branch_residual(rho: float, phi: float, dphi: float) -> float:
    # what survives of the profile equation once the d2phi coefficient vanishes
    return dphi - dphi * phi * phi + 2 * rho * phi * dphi * dphi + (1 - rho * rho) * dphi ** 3


def branch_jet(sign: int, rho: float) -> Tuple[float, float, float]:
    """(phi, phi', phi'') of the branch phi = sign * sqrt(1 - rho^2)."""
    if sign not in (1, -1):
        raise ValueError(f"branch sign must be +1 or -1, got {sign}")
    if not 0 <= rho < 1:
        raise ValueError(f"the branch is smooth for 0 <= rho < 1, got {rho}")
    w = 1 - rho * rho
    root = math.sqrt(w)
    return sign * root, -sign * rho / root, -sign / (w * root)


def verify_branch(sign: int, n_samples: int, rho_range: Tuple[float, float]) -> ResidualReport:
    """Residuals of both profile forms along phi = sign * sqrt(1 - rho^2).

    Each sample contributes the larger of the second-order and the
    first-order residual.
    """
    lo, hi = rho_range
    if not 0 < lo < hi < 1:
        raise ValueError(f"branch range must lie inside (0, 1), got {rho_range}")
    points, residuals = [], []
    for rho in np.linspace(lo, hi, n_samples):
        rho = float(rho)
        phi, dphi, d2phi = branch_jet(sign, rho)
        state = ProfileState(rho=rho, phi=phi, dphi=dphi)
        second = profile_residual(state, d2phi)
        first = first_order_branch_residual(rho, phi, dphi)
        points.append((rho, phi))
        residuals.append(second if abs(second) >= abs(first) else first)
    return aggregate(EquationId.MEMBRANE_PROFILE, points, residuals)
