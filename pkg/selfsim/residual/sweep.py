import logging
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np
from tqdm import tqdm

from selfsim.closedform.families import ClosedFormSolution, evaluate_jet
from selfsim.numerics.precision import extended_precision
from selfsim.residual.operators import residual_at, residual_at_axis
from selfsim.schema.config import DomainSampler
from selfsim.schema.report import EquationId, ResidualReport
from selfsim.settings import settings

logger = logging.getLogger(__name__)


def _axis_values(lo, hi, n, rng):
    if rng is None:
        return np.linspace(lo, hi, n)
    return np.sort(rng.uniform(lo, hi, n))


def sample_points(sol: ClosedFormSolution, sampler: DomainSampler) -> List[Tuple[float, float]]:
    T, m = sol.T, sampler.margin
    rng = np.random.default_rng(sampler.seed) if sampler.random else None
    points = []

    if sampler.kind == "lightcone":
        for t in _axis_values(0.0, T - 2 * m, sampler.n_a, rng):
            half = T - t - m
            points.extend((float(t), float(x)) for x in _axis_values(-half, half, sampler.n_b, rng))
    elif sampler.kind == "backward_cone":
        for t in _axis_values(m, T - m, sampler.n_a, rng):
            # r = 0 stays exactly on the axis so the limit formula applies
            points.extend((float(t), float(rho * (T - t))) for rho in _axis_values(0.0, sampler.rho_max, sampler.n_b, rng))
    elif sampler.kind == "rectangle":
        a_lo, a_hi, b_lo, b_hi = sampler.box
        for a in _axis_values(a_lo, a_hi, sampler.n_a, rng):
            points.extend((float(a), float(b)) for b in _axis_values(b_lo, b_hi, sampler.n_b, rng))
    else:
        raise ValueError(f"Unknown sampler kind {sampler.kind}")
    return points


def point_residual(eq: EquationId, sol: ClosedFormSolution, point, extended: bool = False):
    jet = evaluate_jet(sol, point, extended=extended)
    if eq == EquationId.RADIAL_MEMBRANE and point[1] == 0:
        return residual_at_axis(jet)
    return residual_at(eq, jet, point)


def aggregate(eq: EquationId, points: Sequence, residuals: Sequence[float], keep_points: bool = False) -> ResidualReport:
    if len(points) == 0:
        raise ValueError("Cannot aggregate an empty residual sweep")
    mags = np.abs(np.asarray(residuals, dtype=float))
    worst = int(np.argmax(mags))
    max_abs = float(mags[worst])
    rms = float(math.sqrt(np.mean(mags ** 2)))
    return ResidualReport(
        equation=eq,
        n_points=len(points),
        max_abs=max_abs,
        rms=min(rms, max_abs),
        worst_point=tuple(points[worst]),
        per_point=[(tuple(p), float(r)) for p, r in zip(points, residuals)] if keep_points else None,
    )


def sweep_points(eq: EquationId, sol: ClosedFormSolution, points: Sequence, extended: Optional[bool] = None, keep_points: bool = False, progress: bool = False) -> ResidualReport:
    extended = settings.EXTENDED_PRECISION if extended is None else extended
    residuals = []
    iterator = tqdm(points, desc=f"{sol.family.value} / {eq.value}", disable=not progress)
    if extended:
        with extended_precision():
            for point in iterator:
                residuals.append(float(point_residual(eq, sol, point, extended=True)))
    else:
        for point in iterator:
            residuals.append(float(point_residual(eq, sol, point)))
    report = aggregate(eq, points, residuals, keep_points=keep_points)
    logger.debug(f"{sol.family.value} {eq.value}: max_abs={report.max_abs:.3e} over {report.n_points} points")
    return report


def sweep_residual(eq: EquationId, sol: ClosedFormSolution, sampler: DomainSampler, extended: Optional[bool] = None, keep_points: bool = False, progress: bool = False) -> ResidualReport:
    return sweep_points(eq, sol, sample_points(sol, sampler), extended=extended, keep_points=keep_points, progress=progress)
