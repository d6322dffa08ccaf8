import numpy as np
from pydantic import BaseModel, ConfigDict, computed_field, field_validator, model_validator


class Grid1D(BaseModel):
    model_config = ConfigDict(frozen=True)

    lo: float
    hi: float
    n: int

    @field_validator('n')
    @classmethod
    def check_cell_count(cls, v: int) -> int:
        if v < 8:
            raise ValueError(f'grid needs at least 8 cells, got {v}')
        return v

    @model_validator(mode='after')
    def check_ordered(self):
        if not self.lo < self.hi:
            raise ValueError(f'grid endpoints must satisfy lo < hi, got lo={self.lo} hi={self.hi}')
        return self

    @computed_field
    @property
    def spacing(self) -> float:
        return (self.hi - self.lo) / self.n

    @property
    def n_nodes(self):
        return self.n + 1

    def node(self, i: int) -> float:
        return self.lo + i * self.spacing

    def nodes(self) -> np.ndarray:
        return self.lo + np.arange(self.n + 1) * self.spacing

    def nearest_index(self, x: float) -> int:
        i = int(round((x - self.lo) / self.spacing))
        return min(max(i, 0), self.n)

    def rescaled(self, factor: float) -> "Grid1D":
        return Grid1D(lo=self.lo * factor, hi=self.hi * factor, n=self.n)
