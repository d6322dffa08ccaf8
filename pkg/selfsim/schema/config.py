from typing import Literal, Optional, Tuple

from pydantic import BaseModel, Field, field_validator, model_validator

from selfsim.closedform.families import ClosedFormSolution
from selfsim.schema.report import EquationId
from selfsim.settings import settings

FAMILIES_BY_EQUATION = {
    "born-infeld": ("log", "zero", "pulse"),
    "membrane": ("sphere-plus", "sphere-minus", "constant", "zero", "sphere-bump", "pulse"),
}


class DomainSampler(BaseModel):
    kind: Literal["lightcone", "backward_cone", "rectangle"]
    n_a: int = 100 # samples along the first variable (t, or x for spacelike)
    n_b: int = 100
    margin: float = 0.02
    rho_max: float = 0.95 # backward_cone only
    box: Optional[Tuple[float, float, float, float]] = None # rectangle only: a_lo, a_hi, b_lo, b_hi
    random: bool = False # seeded uniform draws instead of a tensor grid
    seed: int = 0

    @field_validator('n_a', 'n_b')
    @classmethod
    def check_count(cls, v: int) -> int:
        if v < 2:
            raise ValueError(f'sampler needs at least 2 samples per axis, got {v}')
        return v

    @field_validator('margin')
    @classmethod
    def check_margin(cls, v: float) -> float:
        if v < 0:
            raise ValueError(f'margin must be non-negative, got {v}')
        return v

    @model_validator(mode='after')
    def check_kind(self):
        if self.kind == "rectangle":
            if self.box is None:
                raise ValueError('rectangle sampler needs a box')
            a_lo, a_hi, b_lo, b_hi = self.box
            if not (a_lo < a_hi and b_lo < b_hi):
                raise ValueError(f'box must be ordered, got {self.box}')
        if self.kind == "backward_cone" and not 0.0 < self.rho_max < 1.0:
            raise ValueError(f'rho_max must lie in (0, 1), got {self.rho_max}')
        return self

    @property
    def n_points(self):
        return self.n_a * self.n_b


class EvolutionConfig(BaseModel):
    equation: EquationId
    t_end: float
    T_blowup_hint: Optional[float] = None
    cfl_safety: float = settings.DEFAULT_CFL
    dissipation_coeff: float = settings.DEFAULT_DISSIPATION
    max_gradient: float = 1e6
    min_discriminant_floor: float = settings.MIN_DISCRIMINANT_FLOOR
    dt_floor: float = settings.DT_FLOOR
    excision_rho: Optional[float] = None # cap the excised edges at this similarity coordinate
    snapshot_every: int = 0 # steps between field snapshots, 0 disables
    show_progress: bool = False
    edge_solution: Optional[ClosedFormSolution] = None # exact edge rates in place of one-sided stencils

    @field_validator('equation')
    @classmethod
    def check_evolvable(cls, v: EquationId) -> EquationId:
        if v not in (EquationId.BORN_INFELD, EquationId.RADIAL_MEMBRANE):
            raise ValueError(f'Cannot time-evolve {v.value}')
        return v

    @field_validator('cfl_safety')
    @classmethod
    def check_cfl(cls, v: float) -> float:
        if not 0.0 < v <= 1.0:
            raise ValueError(f'cfl_safety must lie in (0, 1], got {v}')
        return v

    @field_validator('dissipation_coeff')
    @classmethod
    def check_dissipation(cls, v: float) -> float:
        if v < 0:
            raise ValueError(f'dissipation must be non-negative, got {v}')
        return v

    @model_validator(mode='after')
    def check_excision(self):
        if self.excision_rho is not None:
            if not 0.0 < self.excision_rho < 1.0:
                raise ValueError(f'excision_rho must lie in (0, 1), got {self.excision_rho}')
            if self.T_blowup_hint is None:
                raise ValueError('excision_rho needs T_blowup_hint')
        if self.edge_solution is not None and self.edge_solution.equation != self.equation:
            raise ValueError(f'edge data from {self.edge_solution.family.value} does not fit {self.equation.value}')
        return self


class RunConfig(BaseModel):
    equation: Literal["born-infeld", "membrane"]
    family: str
    k: float = 0.2
    T: float = 1.0
    c: float = 0.3
    amplitude: float = 0.1
    width: float = 0.1
    lo: Optional[float] = None # -0.75 for Born-Infeld, the axis for the membrane
    hi: float = 0.75
    n: int = 400
    t_end: float = 0.8
    cfl_safety: float = settings.DEFAULT_CFL
    dissipation: float = settings.DEFAULT_DISSIPATION
    max_gradient: float = 1e6
    min_discriminant_floor: float = settings.MIN_DISCRIMINANT_FLOOR
    dt_floor: float = settings.DT_FLOOR
    excision_rho: Optional[float] = None
    snapshot_every: int = Field(default=0, ge=0)
    edge_data: Literal["exact", "extrapolate"] = "exact" # closed-form families only
    fit_lo: Optional[float] = None
    fit_hi: Optional[float] = None
    output_dir: Optional[str] = None

    @field_validator('T')
    @classmethod
    def check_positive_T(cls, v: float) -> float:
        if v <= 0:
            raise ValueError(f'T must be positive, got {v}')
        return v

    @field_validator('n')
    @classmethod
    def check_cells(cls, v: int) -> int:
        if v < 8:
            raise ValueError(f'n must be at least 8, got {v}')
        return v

    @model_validator(mode='after')
    def check_pairing(self):
        families = FAMILIES_BY_EQUATION[self.equation]
        if self.family not in families:
            raise ValueError(f'family {self.family} does not pair with {self.equation}, expected one of {families}')
        if self.lo is None:
            self.lo = 0.0 if self.equation == "membrane" else -0.75
        if not self.lo < self.hi:
            raise ValueError(f'grid bounds must satisfy lo < hi, got {self.lo}, {self.hi}')
        if self.equation == "membrane" and self.lo != 0.0:
            raise ValueError(f'membrane grids start on the axis, got lo={self.lo}')
        if self.t_end <= 0:
            raise ValueError(f't_end must be positive, got {self.t_end}')
        if (self.fit_lo is None) != (self.fit_hi is None):
            raise ValueError('fit_lo and fit_hi must be given together')
        return self

    @property
    def equation_id(self) -> EquationId:
        return EquationId.BORN_INFELD if self.equation == "born-infeld" else EquationId.RADIAL_MEMBRANE

    def evolution_config(self, show_progress=False, edge_solution: Optional[ClosedFormSolution] = None) -> EvolutionConfig:
        return EvolutionConfig(
            equation=self.equation_id,
            t_end=self.t_end,
            T_blowup_hint=self.T,
            cfl_safety=self.cfl_safety,
            dissipation_coeff=self.dissipation,
            max_gradient=self.max_gradient,
            min_discriminant_floor=self.min_discriminant_floor,
            dt_floor=self.dt_floor,
            excision_rho=self.excision_rho,
            snapshot_every=self.snapshot_every,
            show_progress=show_progress,
            edge_solution=edge_solution,
        )
