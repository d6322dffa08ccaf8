from enum import Enum
from typing import List, Optional

import math
from pydantic import BaseModel, field_validator, model_validator


class Termination(str, Enum):
    REACHED_END = "ReachedEnd"
    DEGENERACY_HIT = "DegeneracyHit"
    NON_FINITE = "NonFinite"
    STEP_FLOOR = "StepFloor"


class ProfileState(BaseModel):
    rho: float
    phi: float
    dphi: float

    @model_validator(mode='after')
    def check_state(self):
        if not all(math.isfinite(v) for v in (self.rho, self.phi, self.dphi)):
            raise ValueError(f'profile state must be finite, got {self}')
        if not 0.0 <= self.rho <= 1.0:
            raise ValueError(f'rho must lie in [0, 1], got {self.rho}')
        return self

    @property
    def degeneracy_gap(self):
        return 1.0 - self.rho ** 2 - self.phi ** 2


class ProfileSolveResult(BaseModel):
    samples: List[ProfileState]
    termination: Termination
    degeneracy_location: Optional[float] = None

    @field_validator('samples')
    @classmethod
    def check_ordered(cls, v: List[ProfileState]) -> List[ProfileState]:
        for prev, cur in zip(v, v[1:]):
            if not cur.rho > prev.rho:
                raise ValueError(f'samples must be strictly increasing in rho, got {prev.rho} then {cur.rho}')
        return v

    def columns(self):
        return {
            "rho": [s.rho for s in self.samples],
            "phi": [s.phi for s in self.samples],
            "dphi": [s.dphi for s in self.samples],
            "degeneracy_gap": [s.degeneracy_gap for s in self.samples],
        }
