import numpy as np

from selfsim.errors import ArityError, DomainError
from selfsim.numerics.fit import log_log_fit
from selfsim.schema.report import BlowupFit


def fit_blowup_rate(times, values, T: float, window) -> BlowupFit:
    """Fits |g(t)| = A (T - t)^(-gamma) over the window.

    The slope of log|g| against log(1 / (T - t)) is gamma; A = exp(intercept).
    """
    lo, hi = window
    if lo > hi:
        raise ValueError(f"window must be ordered, got {window}")
    times = np.asarray(times, dtype=float)
    values = np.abs(np.asarray(values, dtype=float))
    mask = (times >= lo) & (times <= hi) & np.isfinite(values)
    if not np.any(mask):
        raise ArityError(f"no samples fall inside the window {window}")
    t, g = times[mask], values[mask]
    if np.any(t >= T):
        raise DomainError(f"blow-up fit needs every t < T = {T}, got max t = {float(t.max())}")
    if np.any(g <= 0):
        raise DomainError(f"blow-up fit needs |g| > 0 in the window, got min {float(g.min())}")
    fit = log_log_fit(1 / (T - t), g)
    return BlowupFit(fitted_exponent=fit.slope, fitted_amplitude=float(np.exp(fit.intercept)), fit=fit, window=(lo, hi))
