from enum import Enum
from typing import List, Optional, Tuple

from pydantic import BaseModel, field_validator, model_validator


class EquationId(str, Enum):
    BORN_INFELD = "born_infeld"
    RADIAL_MEMBRANE = "radial_membrane"
    SPACELIKE_ZMC = "spacelike_zmc"
    DIVERGENCE_FORM = "divergence_form"
    EIKONAL = "eikonal"
    MEMBRANE_PROFILE = "membrane_profile"


class FitResult(BaseModel):
    slope: float
    intercept: float
    r_squared: float
    n_points: int

    @field_validator('r_squared')
    @classmethod
    def check_unit_interval(cls, v: float) -> float:
        if not 0.0 <= v <= 1.0:
            raise ValueError(f'r_squared must lie in [0, 1], got {v}')
        return v

    @field_validator('n_points')
    @classmethod
    def check_two_points(cls, v: int) -> int:
        if v < 2:
            raise ValueError(f'a fit needs at least 2 points, got {v}')
        return v


class ResidualReport(BaseModel):
    equation: EquationId
    n_points: int
    max_abs: float
    rms: float
    worst_point: Tuple[float, float]
    per_point: Optional[List[Tuple[Tuple[float, float], float]]] = None

    @model_validator(mode='after')
    def check_rms_bounded(self):
        if self.max_abs < 0 or self.rms < 0:
            raise ValueError('residual magnitudes must be non-negative')
        # rms is a mean of squares bounded by the max, up to summation roundoff
        if self.rms > self.max_abs * (1 + 1e-12) + 1e-300:
            raise ValueError(f'rms {self.rms} exceeds max_abs {self.max_abs}')
        return self

    def to_json_dict(self):
        return {
            "equation": self.equation.value,
            "n_points": self.n_points,
            "max_abs": self.max_abs,
            "rms": self.rms,
            "worst_point": list(self.worst_point),
        }


class BlowupFit(BaseModel):
    fitted_exponent: float
    fitted_amplitude: float
    fit: FitResult
    window: Tuple[float, float]

    @field_validator('window')
    @classmethod
    def check_window(cls, v):
        if v[0] > v[1]:
            raise ValueError(f'window must be ordered, got {v}')
        return v


class EnergyReport(BaseModel):
    quadratic_part: float
    geometric_action_density_integral: Optional[float] = None # None when the discriminant goes negative
    weight_kind: str

    @field_validator('quadratic_part')
    @classmethod
    def check_nonnegative(cls, v: float) -> float:
        if v < 0:
            raise ValueError(f'quadratic energy must be non-negative, got {v}')
        return v


class ScalingMeasurement(BaseModel):
    lambda_values: List[float]
    measured_exponent: float
    fit: FitResult
    claimed_exponent: float = 1.0
    weight_kind: str
    energies: List[float]

    @field_validator('lambda_values')
    @classmethod
    def check_distinct(cls, v: List[float]) -> List[float]:
        if len(set(v)) < 3:
            raise ValueError(f'need at least 3 distinct scaling factors, got {v}')
        if any(lam <= 0 for lam in v):
            raise ValueError(f'scaling factors must be positive, got {v}')
        return v


class LinearizedCoefficients(BaseModel):
    rho: float
    v_tau_tau: float
    v_tau_rho: float
    v_rho_rho: float
    v_tau: float
    v_rho: float
    v: float


class ModeReport(BaseModel):
    quadratic_coeffs: Tuple[int, int, int] = (1, 3, -4)
    roots: Tuple[float, float]
    classification: Tuple[str, str]
    claimed_roots: Tuple[float, float] = (4.0, -1.0)
    match_verdict: bool
    qualitative_match: bool

    @model_validator(mode='after')
    def check_roots(self):
        a, b, c = self.quadratic_coeffs
        for root in self.roots:
            if abs(a * root * root + b * root + c) > 1e-12:
                raise ValueError(f'{root} is not a root of {a}v^2 + {b}v + {c}')
        for label in self.classification:
            if label not in ("stable", "unstable"):
                raise ValueError(f'Unknown mode classification {label}')
        return self
