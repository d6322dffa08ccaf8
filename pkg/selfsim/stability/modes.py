import math
from fractions import Fraction
from typing import NamedTuple, Sequence, Tuple

import numpy as np

from selfsim.schema.report import ModeReport

MODE_QUADRATIC = (1, 3, -4) # nu^2 + 3 nu - 4
CLAIMED_ROOTS = (4.0, -1.0)


def classify(nu) -> str:
    # Re nu = 0 counts as unstable
    return "stable" if complex(nu).real < 0 else "unstable"


def _exact_roots(a: int, b: int, c: int) -> Tuple[Fraction, Fraction]:
    disc = b * b - 4 * a * c
    root = math.isqrt(disc) if disc >= 0 else -1
    if root * root != disc:
        raise ValueError(f"{a}v^2 + {b}v + {c} has no rational roots")
    return Fraction(-b + root, 2 * a), Fraction(-b - root, 2 * a)


def solve_mode_quadratic(coeffs: Tuple[int, int, int] = MODE_QUADRATIC) -> ModeReport:
    roots = _exact_roots(*coeffs)
    labels = tuple(classify(float(r)) for r in roots)
    claimed_labels = sorted(classify(r) for r in CLAIMED_ROOTS)
    return ModeReport(
        quadratic_coeffs=coeffs,
        roots=tuple(float(r) for r in roots),
        classification=labels,
        claimed_roots=CLAIMED_ROOTS,
        match_verdict=sorted(float(r) for r in roots) == sorted(CLAIMED_ROOTS),
        qualitative_match=sorted(labels) == claimed_labels,
    )


class ModeProbe(NamedTuple):
    nu: float
    tau: np.ndarray
    values: np.ndarray
    residuals: np.ndarray

    @property
    def max_residual(self) -> float:
        return float(np.max(np.abs(self.residuals)))


def mode_growth_probe(nu: float, taus: Sequence[float], amplitude: float = 1.0, coeffs: Tuple[int, int, int] = MODE_QUADRATIC) -> ModeProbe:
    """Samples v = amplitude e^(nu tau) and the residual of v'' + 3 v' - 4 v."""
    a, b, c = coeffs
    tau = np.asarray(taus, dtype=float)
    values = amplitude * np.exp(nu * tau)
    residuals = (a * nu * nu + b * nu + c) * values
    return ModeProbe(nu=nu, tau=tau, values=values, residuals=residuals)


def annihilating_integers(lo: int = -10, hi: int = 10, coeffs: Tuple[int, int, int] = MODE_QUADRATIC):
    a, b, c = coeffs
    return [nu for nu in range(lo, hi + 1) if a * nu * nu + b * nu + c == 0]
