from enum import Enum
from typing import Tuple

from pydantic import BaseModel, ConfigDict, field_validator


class DomainKind(str, Enum):
    INTERIOR_LIGHTCONE = "interior_lightcone" # |x| < T - t, 0 <= t < T
    BACKWARD_LIGHTCONE = "backward_lightcone" # 0 <= r <= T - t, 0 < t < T
    HALF_PLANE = "half_plane" # x < T


class LightconeDomain(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: DomainKind
    T: float

    @field_validator('T')
    @classmethod
    def check_positive(cls, v: float) -> float:
        if v <= 0:
            raise ValueError(f'T must be positive, got {v}')
        return v


def domain_contains(domain: LightconeDomain, point: Tuple[float, float]) -> bool:
    a, b = point
    T = domain.T
    if domain.kind == DomainKind.INTERIOR_LIGHTCONE:
        return 0 <= a < T and abs(b) < T - a
    if domain.kind == DomainKind.BACKWARD_LIGHTCONE:
        return 0 < a < T and 0 <= b <= T - a
    if domain.kind == DomainKind.HALF_PLANE:
        return a < T
    raise ValueError(f"Unknown domain kind {domain.kind}")
