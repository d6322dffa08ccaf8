import math
from enum import Enum
from typing import Tuple

from pydantic import BaseModel, ConfigDict, field_validator

from selfsim.errors import DomainError


class Orientation(str, Enum):
    TIME_BASED = "TimeBased" # tau = -log(T - t), rho = x / (T - t)
    SPACE_BASED = "SpaceBased" # tau = -log(T - x), rho = y / (T - x)


class Scaling(str, Enum):
    NONE = "none" # v = u
    LINEAR = "linear" # v = e^tau u, i.e. u = (T - t) phi


class SimilarityMap(BaseModel):
    model_config = ConfigDict(frozen=True)

    T: float = 1.0
    orientation: Orientation = Orientation.TIME_BASED

    @field_validator('T')
    @classmethod
    def check_T(cls, v: float) -> float:
        if not v > 0:
            raise ValueError(f'T must be positive, got {v}')
        return v

    @property
    def physical_variables(self) -> Tuple[str, str]:
        return ("t", "x") if self.orientation == Orientation.TIME_BASED else ("x", "y")

    def distance(self, a):
        """T - t (or T - x), which is e^(-tau)."""
        s = self.T - a
        if not s > 0:
            axis = "t" if self.orientation == Orientation.TIME_BASED else "x"
            raise DomainError(f"similarity map needs {axis} < T = {self.T}, got {axis} = {float(a)}")
        return s


def to_similarity(sim_map: SimilarityMap, point) -> Tuple[float, float]:
    a, b = point
    s = sim_map.distance(a)
    return -math.log(s), b / s


def from_similarity(sim_map: SimilarityMap, sim_point) -> Tuple[float, float]:
    tau, rho = sim_point
    s = math.exp(-tau)
    return sim_map.T - s, rho * s
