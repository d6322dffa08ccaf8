from enum import Enum
from typing import Tuple

from pydantic import BaseModel, ConfigDict, model_validator

from selfsim.closedform.domains import DomainKind, LightconeDomain
from selfsim.errors import DomainError
from selfsim.numerics.precision import backend
from selfsim.schema.jet import Jet2
from selfsim.schema.report import EquationId
from selfsim.settings import settings


class Family(str, Enum):
    BORN_INFELD_LOG = "BornInfeldLog"
    MEMBRANE_SPHERE_PLUS = "MembraneSpherePlus"
    MEMBRANE_SPHERE_MINUS = "MembraneSphereMinus"
    SPACELIKE_LOG_CLAIMED = "SpacelikeLogClaimed"
    SPACELIKE_ARCTAN_CORRECTED = "SpacelikeArctanCorrected"
    CONSTANT_PROFILE = "ConstantProfile"


MEMBRANE_FAMILIES = (Family.MEMBRANE_SPHERE_PLUS, Family.MEMBRANE_SPHERE_MINUS, Family.CONSTANT_PROFILE)
SPACELIKE_FAMILIES = (Family.SPACELIKE_LOG_CLAIMED, Family.SPACELIKE_ARCTAN_CORRECTED)
NONZERO_K_FAMILIES = (Family.BORN_INFELD_LOG,) + SPACELIKE_FAMILIES


class ClosedFormSolution(BaseModel):
    model_config = ConfigDict(frozen=True)

    family: Family
    T: float = 1.0
    k: float = 1.0 # the constant c for ConstantProfile

    @model_validator(mode='after')
    def check_parameters(self):
        if not self.T > 0:
            raise ValueError(f'T must be positive, got {self.T}')
        if self.family in NONZERO_K_FAMILIES and self.k == 0:
            raise ValueError(f'k must be non-zero for {self.family.value}')
        return self

    @property
    def variables(self) -> Tuple[str, str]:
        if self.family == Family.BORN_INFELD_LOG:
            return ("t", "x")
        if self.family in MEMBRANE_FAMILIES:
            return ("t", "r")
        return ("x", "y")

    @property
    def equation(self) -> EquationId:
        if self.family == Family.BORN_INFELD_LOG:
            return EquationId.BORN_INFELD
        if self.family in MEMBRANE_FAMILIES:
            return EquationId.RADIAL_MEMBRANE
        return EquationId.SPACELIKE_ZMC

    @property
    def domain(self) -> LightconeDomain:
        if self.family == Family.BORN_INFELD_LOG:
            return LightconeDomain(kind=DomainKind.INTERIOR_LIGHTCONE, T=self.T)
        if self.family in MEMBRANE_FAMILIES:
            return LightconeDomain(kind=DomainKind.BACKWARD_LIGHTCONE, T=self.T)
        return LightconeDomain(kind=DomainKind.HALF_PLANE, T=self.T)

    @property
    def is_sphere(self):
        return self.family in (Family.MEMBRANE_SPHERE_PLUS, Family.MEMBRANE_SPHERE_MINUS)

    @property
    def sign(self):
        return -1 if self.family == Family.MEMBRANE_SPHERE_MINUS else 1


def _require(gap, inequality, point):
    if not gap > settings.EPS_BOUNDARY:
        raise DomainError(f"point {point} violates {inequality} (margin {float(gap):.3e}, need > {settings.EPS_BOUNDARY:.1e})")


def _born_infeld_log(sol, a_, x, lib):
    a = lib.num(sol.T) - a_
    _require(a, "t < T", (a_, x))
    _require(a - abs(x), "|x| < T - t", (a_, x))
    k = lib.num(sol.k)
    P, M = a + x, a - x
    alpha, beta = 1 / P, 1 / M
    return Jet2.of_two(
        ("t", "x"),
        k * lib.log(P / M),
        k * (beta - alpha),
        k * (alpha + beta),
        k * (beta * beta - alpha * alpha),
        k * (alpha * alpha + beta * beta),
        k * (beta * beta - alpha * alpha),
    )


def _membrane_sphere(sol, t, r, lib):
    a = lib.num(sol.T) - t
    _require(a, "t < T", (t, r))
    _require(a - abs(r), "|r| < T - t", (t, r))
    s = sol.sign
    W = a * a - r * r
    S = lib.sqrt(W)
    S3 = S * W
    return Jet2.of_two(
        ("t", "r"),
        s * S,
        -s * a / S,
        -s * r / S,
        -s * r * r / S3,
        -s * a * r / S3,
        -s * a * a / S3,
    )


def _constant_profile(sol, t, r, lib):
    a = lib.num(sol.T) - t
    _require(a, "t < T", (t, r))
    c = lib.num(sol.k)
    zero = lib.num(0)
    return Jet2.of_two(("t", "r"), c * a, -c, zero, zero, zero, zero)


def _spacelike(sol, x, y, lib):
    b = lib.num(sol.T) - x
    _require(b, "x < T", (x, y))
    k = lib.num(sol.k)
    rho = y / b
    w = 1 + rho * rho
    if sol.family == Family.SPACELIKE_LOG_CLAIMED:
        # ln|rho + sqrt(1 + rho^2)| is asinh(rho) for every real rho
        f = lib.asinh(rho)
        f1 = 1 / lib.sqrt(w)
        f2 = -rho / (w * lib.sqrt(w))
    else:
        f = lib.atan(rho)
        f1 = 1 / w
        f2 = -2 * rho / (w * w)
    b2 = b * b
    return Jet2.of_two(
        ("x", "y"),
        k * f,
        k * f1 * rho / b,
        k * f1 / b,
        k * (f2 * rho * rho + 2 * f1 * rho) / b2,
        k * (f2 * rho + f1) / b2,
        k * f2 / b2,
    )


def evaluate_jet(sol: ClosedFormSolution, point, extended: bool = False) -> Jet2:
    """Exact value and first/second partials of a closed-form family.

    Points are (t, x), (t, r) or (x, y) according to sol.variables. With
    extended=True the entries are mpmath numbers at the working precision of
    the caller's mpmath context.
    """
    lib = backend(extended)
    a, b = lib.num(point[0]), lib.num(point[1])
    if sol.family == Family.BORN_INFELD_LOG:
        return _born_infeld_log(sol, a, b, lib)
    if sol.is_sphere:
        return _membrane_sphere(sol, a, b, lib)
    if sol.family == Family.CONSTANT_PROFILE:
        return _constant_profile(sol, a, b, lib)
    if sol.family in SPACELIKE_FAMILIES:
        return _spacelike(sol, a, b, lib)
    raise ValueError(f"Unknown family {sol.family}")
