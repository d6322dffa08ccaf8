import logging
import math
from typing import Callable, NamedTuple, Optional, Sequence, Tuple

from selfsim.errors import SingularPointError
from selfsim.profile.ode import branch_jet
from selfsim.schema.jet import Jet2
from selfsim.schema.report import LinearizedCoefficients
from selfsim.similarity.transform import SIMILARITY_VARIABLES
from selfsim.similarity.transformed import membrane_similarity_residual

logger = logging.getLogger(__name__)

# rho -> (value, first derivative, second derivative)
RadialJet = Callable[[float], Tuple[float, float, float]]


def linearized_coefficients(phi: float, dphi: float, d2phi: float, rho: float) -> LinearizedCoefficients:
    """Printed linear coefficients of the perturbation equation about a steady profile."""
    if rho == 0:
        raise SingularPointError("the linearized coefficients have 1/rho terms")
    return LinearizedCoefficients(
        rho=rho,
        v_tau_tau=1 + dphi * dphi,
        v_tau=-(1 - dphi * dphi + 2 * d2phi * phi + (2 / rho) * dphi),
        v_tau_rho=2 * (phi * dphi + rho),
        v_rho_rho=-(1 - rho * rho - phi * phi),
        v_rho=-(1 / rho) * (1 + 4 * rho * dphi * phi - 3 * (rho * rho - 1) * dphi * dphi - phi * phi),
        v=(1 / rho) * (-2 * rho * dphi * dphi + 2 * rho * d2phi * phi + 2 * dphi * phi),
    )


def derived_linearized_coefficients(phi: float, dphi: float, d2phi: float, rho: float) -> LinearizedCoefficients:
    """Coefficients obtained by differentiating the membrane similarity equation.

    Differs from linearized_coefficients only in v_tau, whose last term here
    is (2 / rho) phi phi'.
    """
    printed = linearized_coefficients(phi, dphi, d2phi, rho)
    return printed.model_copy(update={"v_tau": -(1 - dphi * dphi + 2 * d2phi * phi + (2 / rho) * phi * dphi)})


def apply_coefficients(c: LinearizedCoefficients, w: Jet2) -> float:
    return c.v_tau_tau * w.aa + c.v_tau * w.a + c.v_tau_rho * w.ab + c.v_rho_rho * w.bb + c.v_rho * w.b + c.v * w.value


def profile_jet(profile: RadialJet, rho: float) -> Jet2:
    phi, dphi, d2phi = profile(rho)
    return Jet2.of_two(SIMILARITY_VARIABLES, phi, 0.0, dphi, 0.0, 0.0, d2phi)


def mode_jet(direction: RadialJet, rho: float, nu: float = 0.0, tau: float = 0.0) -> Jet2:
    """Jet of e^(nu tau) g(rho)."""
    g, dg, d2g = direction(rho)
    e = math.exp(nu * tau)
    return Jet2.of_two(SIMILARITY_VARIABLES, e * g, nu * e * g, e * dg, nu * nu * e * g, nu * e * dg, e * d2g)


def _combine(base: Jet2, w: Jet2, eps: float) -> Jet2:
    return Jet2(base.variables, base.value + eps * w.value, tuple(b + eps * d for b, d in zip(base.d1, w.d1)), tuple(b + eps * d for b, d in zip(base.d2, w.d2)))


class LinearizationCheck(NamedTuple):
    max_mismatch: float
    worst_rho: Optional[float]
    nu: float
    mismatches: Tuple[float, ...]


def directional_linearization_check(
    profile: RadialJet,
    direction: RadialJet,
    eps: float,
    rhos: Sequence[float],
    nu: float = 0.0,
    tau: float = 0.0,
    coefficients: Callable = linearized_coefficients,
) -> LinearizationCheck:
    """Compares a linear operator against the centred difference of the nonlinear one.

    The mismatch at each rho is |L w - (N(phi + eps w) - N(phi - eps w)) / (2 eps)|
    relative to the larger side. Points where both sides are below 1e-14 count
    as exact.
    """
    if not 1e-8 <= eps <= 1e-4:
        raise ValueError(f"eps must lie in [1e-8, 1e-4], got {eps}")
    mismatches = []
    for rho in rhos:
        phi, dphi, d2phi = profile(rho)
        base = profile_jet(profile, rho)
        w = mode_jet(direction, rho, nu=nu, tau=tau)
        linear = apply_coefficients(coefficients(phi, dphi, d2phi, rho), w)
        point = (tau, rho)
        central = (membrane_similarity_residual(_combine(base, w, eps), point) - membrane_similarity_residual(_combine(base, w, -eps), point)) / (2 * eps)
        scale = max(abs(linear), abs(central))
        mismatches.append(0.0 if scale < 1e-14 else abs(linear - central) / scale)
    if not mismatches:
        return LinearizationCheck(0.0, None, nu, ())
    worst = max(range(len(mismatches)), key=lambda i: mismatches[i])
    logger.debug(f"linearization check nu={nu}: max mismatch {mismatches[worst]:.3e} at rho={rhos[worst]}")
    return LinearizationCheck(mismatches[worst], float(rhos[worst]), nu, tuple(mismatches))


def zero_profile(rho: float):
    return 0.0, 0.0, 0.0


def branch_profile(sign: int = 1) -> RadialJet:
    return lambda rho: branch_jet(sign, rho)


def bump(center: float = 0.5, width: float = 0.15) -> RadialJet:
    """Gaussian exp(-((rho - center) / width)^2) with its derivatives."""
    def g(rho):
        s = (rho - center) / width
        value = math.exp(-s * s)
        return value, -2 * s / width * value, (4 * s * s - 2) / (width * width) * value
    return g
