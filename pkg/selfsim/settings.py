from typing import Literal

from dotenv import find_dotenv
from pydantic import computed_field
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    # General
    OUTPUT_DIR: str = "results" # Default folder for CSV/JSON outputs, relative to the working directory
    DEBUG: bool = False

    # Closed forms and residuals
    EPS_BOUNDARY: float = 1e-8 # Minimum distance from a lightcone boundary for jet evaluation
    EPS_DEGENERACY: float = 1e-10 # Divergence-form residuals refuse discriminants at or below this
    EXTENDED_PRECISION: bool = True # Sweeps evaluate jets and residuals with mpmath
    EXTENDED_DPS: int = 40 # Decimal digits for the mpmath path
    SOLUTION_TOLERANCE: float = 1e-9 # max_abs bound for a verified solution
    EIKONAL_TOLERANCE: float = 1e-12
    NON_SOLUTION_FLOOR: float = 0.1 # max_abs a known non-solution must exceed

    # Profile ODE
    PROFILE_DEGENERACY: float = 1e-8 # Stop shooting when 1 - rho^2 - phi^2 drops to this
    PROFILE_STEP_FLOOR: float = 1e-12
    PROFILE_START_STEPS: int = 10 # Series start sits this many steps off the axis

    # Evolution
    DEFAULT_CFL: float = 0.5
    DEFAULT_DISSIPATION: float = 0.01 # Kreiss-Oliger coefficient, 0 for convergence studies
    MIN_DISCRIMINANT_FLOOR: float = 1e-6
    DT_FLOOR: float = 1e-12
    MIN_ACTIVE_NODES: int = 5 # Stop once cone excision leaves fewer nodes than this

    # Audit
    AUDIT_SEED: int = 0
    AUDIT_SAMPLES: int = 100 # Per-axis samples of the audit residual sweeps
    LINEARIZATION_FLAG: float = 1e-3 # Mismatch above which the linearized equation is flagged

    @computed_field
    @property
    def SWEEP_PRECISION(self) -> Literal["extended", "double"]:
        return "extended" if self.EXTENDED_PRECISION else "double"

    class Config:
        env_file = find_dotenv("local.env")
        extra = "ignore"


settings = Settings()
