import numpy as np

from selfsim.errors import ArityError, DomainError
from selfsim.schema.report import FitResult


def log_log_fit(abscissae, ordinates) -> FitResult:
    a = np.asarray(abscissae, dtype=float)
    b = np.asarray(ordinates, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"Mismatched fit inputs {a.shape} and {b.shape}")
    if a.size < 2:
        raise ArityError(f"log-log fit needs at least 2 points, got {a.size}")
    if np.any(a <= 0) or np.any(b <= 0):
        raise DomainError("log-log fit needs strictly positive abscissae and ordinates")

    la, lb = np.log(a), np.log(b)
    if np.all(la == la[0]):
        raise DomainError("log-log fit needs at least two distinct abscissae")
    slope, intercept = (float(c) for c in np.polyfit(la, lb, 1))
    lb_mean = lb.mean()

    ss_res = float(np.sum((lb - (intercept + slope * la)) ** 2))
    ss_tot = float(np.sum((lb - lb_mean) ** 2))
    r_squared = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    r_squared = min(max(r_squared, 0.0), 1.0)

    return FitResult(slope=slope, intercept=intercept, r_squared=r_squared, n_points=int(a.size))
