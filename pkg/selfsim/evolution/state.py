import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from selfsim.errors import NonFiniteError
from selfsim.numerics.stencils import first_derivative
from selfsim.schema.grid import Grid1D
from selfsim.schema.report import EquationId


@dataclass(frozen=True)
class EvolutionState:
    """Fields u, p = u_t and q = u_x (or u_r) on a fixed grid.

    Only nodes inside [x_left, x_right] are evolved; the rest are excised and
    keep their last values. excised_momentum and boundary_flux carry the
    bookkeeping that makes the corrected momentum constant.
    """
    equation: EquationId
    grid: Grid1D
    t: float
    u: np.ndarray
    p: np.ndarray
    q: np.ndarray
    x_left: Optional[float] = None
    x_right: Optional[float] = None
    excised_momentum: float = 0.0
    boundary_flux: float = 0.0 # time integral of F(x_right) - F(x_left)

    def __post_init__(self):
        n = self.grid.n_nodes
        for name in ("u", "p", "q"):
            values = getattr(self, name)
            if values.shape != (n,):
                raise ValueError(f"{name} must have {n} entries, got shape {values.shape}")
            if not np.all(np.isfinite(values)):
                bad = int(np.argmin(np.isfinite(values)))
                raise NonFiniteError(f"{name} is non-finite at x = {self.grid.node(bad)}", location=(self.t, self.grid.node(bad)))
        if self.x_left is None:
            object.__setattr__(self, "x_left", self.grid.lo)
        if self.x_right is None:
            object.__setattr__(self, "x_right", self.grid.hi)

    @property
    def is_membrane(self) -> bool:
        return self.equation == EquationId.RADIAL_MEMBRANE

    @property
    def left(self) -> int:
        return max(0, math.ceil((self.x_left - self.grid.lo) / self.grid.spacing - 1e-9))

    @property
    def right(self) -> int:
        return min(self.grid.n, math.floor((self.x_right - self.grid.lo) / self.grid.spacing + 1e-9))

    @property
    def active(self) -> slice:
        return slice(self.left, self.right + 1)

    @property
    def n_active(self) -> int:
        return max(0, self.right - self.left + 1)

    def nodes(self) -> np.ndarray:
        return self.grid.nodes()[self.active]

    def discriminant(self) -> np.ndarray:
        p, q = self.p[self.active], self.q[self.active]
        return 1 - p * p + q * q

    @property
    def min_discriminant(self) -> float:
        return float(np.min(self.discriminant()))

    def with_fields(self, t, u, p, q) -> "EvolutionState":
        return replace(self, t=t, u=u, p=p, q=q)


def compatibility_defect(state: EvolutionState) -> float:
    """max |q - D_x u| over the active window."""
    sl = state.active
    parity = 1 if state.is_membrane and state.left == 0 else None
    du = first_derivative(state.u[sl], state.grid.spacing, left_parity=parity)
    return float(np.max(np.abs(state.q[sl] - du)))
