import logging
from typing import Optional

import numpy as np

from selfsim.errors import DegeneracyError, DegenerateStartError, NonFiniteError, StepFloorError
from selfsim.numerics.integrate import rk4_adaptive_step, rk4_step
from selfsim.schema.profile import ProfileSolveResult, ProfileState, Termination
from selfsim.settings import settings

logger = logging.getLogger(__name__)


def profile_second_derivative(rho, phi, dphi, eps_deg=None):
    """phi'' from the regrouped profile equation."""
    eps_deg = settings.PROFILE_DEGENERACY if eps_deg is None else eps_deg
    gap = 1 - rho * rho - phi * phi
    if gap <= eps_deg:
        raise DegeneracyError(f"1 - rho^2 - phi^2 = {gap:.3e} at rho = {rho}")
    numerator = dphi * (1 - phi * phi) + 2 * rho * phi * dphi * dphi + (1 - rho * rho) * dphi ** 3
    return -numerator / (rho * gap)


def integrate_profile(start: ProfileState, rho_max: float, d_rho: float, tolerance: Optional[float] = None) -> ProfileSolveResult:
    """Integrates the profile ODE from start to rho_max.

    Fixed RK4 steps of d_rho, or step-halving RK4 when a tolerance is given.
    The last step is shortened to land on rho_max.
    """
    if not d_rho > 0:
        raise ValueError(f"d_rho must be positive, got {d_rho}")
    if not start.rho > 0:
        raise ValueError("the profile equation is singular at rho = 0; start off the axis")

    def derivative(rho, y):
        return np.array([y[1], profile_second_derivative(rho, y[0], y[1])])

    samples = [start]
    y = np.array([start.phi, start.dphi])
    rho, dt = start.rho, d_rho
    termination, location = Termination.REACHED_END, None
    try:
        while rho < rho_max - 1e-14:
            step = min(dt, rho_max - rho)
            if tolerance is None:
                y, rho = rk4_step(y, derivative, rho, step), rho + step
            else:
                y, rho, _, dt = rk4_adaptive_step(y, derivative, rho, step, tolerance, settings.PROFILE_STEP_FLOOR)
            state = ProfileState(rho=min(rho, 1.0), phi=float(y[0]), dphi=float(y[1]))
            if state.degeneracy_gap <= settings.PROFILE_DEGENERACY:
                termination, location = Termination.DEGENERACY_HIT, state.rho
                break
            samples.append(state)
    except DegeneracyError as e:
        termination, location = Termination.DEGENERACY_HIT, min(rho + dt, rho_max)
        logger.debug(f"degeneracy inside an RK4 stage: {e}")
    except NonFiniteError as e:
        termination = Termination.NON_FINITE
        logger.warning(f"profile integration stopped: {e}")
    except StepFloorError as e:
        termination = Termination.STEP_FLOOR
        logger.warning(f"profile integration stopped: {e}")
    except ValueError as e:
        # ProfileState rejects non-finite values
        termination = Termination.NON_FINITE
        logger.warning(f"profile integration stopped: {e}")

    if termination == Termination.DEGENERACY_HIT:
        logger.info(f"profile reached the degenerate set near rho = {location:.6f}")
    return ProfileSolveResult(samples=samples, termination=termination, degeneracy_location=location)


def shoot_profile(a: float, rho_max: float, d_rho: float, tolerance: Optional[float] = None) -> ProfileSolveResult:
    """Regular profile with phi(0) = a and phi'(0) = 0.

    Every Taylor correction at the axis vanishes for |a| < 1, so the start
    sits PROFILE_START_STEPS steps out with the axis data unchanged.
    """
    eps = settings.PROFILE_DEGENERACY
    if abs(1 - a * a) <= eps or abs(a) > 1:
        raise DegenerateStartError(f"phi(0) = {a} starts on or beyond the degenerate set; use verify_branch for the branch profiles")
    if not rho_max <= 1 - eps:
        raise ValueError(f"rho_max must not exceed 1 - {eps}, got {rho_max}")
    if not d_rho > 0:
        raise ValueError(f"d_rho must be positive, got {d_rho}")
    rho_start = settings.PROFILE_START_STEPS * d_rho
    if rho_start >= rho_max:
        raise ValueError(f"rho_max {rho_max} lies inside the start offset {rho_start}")
    return integrate_profile(ProfileState(rho=rho_start, phi=a, dphi=0.0), rho_max, d_rho, tolerance=tolerance)
