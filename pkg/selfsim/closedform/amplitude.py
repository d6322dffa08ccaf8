import math

from selfsim.closedform.families import ClosedFormSolution, Family, MEMBRANE_FAMILIES, SPACELIKE_FAMILIES, evaluate_jet
from selfsim.errors import DomainError


def derivative_blowup_amplitude(sol: ClosedFormSolution, t: float) -> float:
    """Axis derivative that blows up at T.

    Born-Infeld: u_x(t, 0). Membrane spheres: u_rr(t, 0). Spacelike families:
    u_y(x, 0) with t playing the role of x.
    """
    if t >= sol.T:
        raise DomainError(f"amplitude needs t < T, got t={t}, T={sol.T}")
    if sol.family == Family.BORN_INFELD_LOG:
        if t < 0:
            raise DomainError(f"amplitude needs t >= 0, got {t}")
        return float(evaluate_jet(sol, (t, 0.0)).first("x"))
    if sol.is_sphere:
        if t < 0:
            raise DomainError(f"amplitude needs t >= 0, got {t}")
        return float(evaluate_jet(sol, (t, 0.0)).second("r", "r"))
    if sol.family in SPACELIKE_FAMILIES:
        return float(evaluate_jet(sol, (t, 0.0)).first("y"))
    raise ValueError(f"No blow-up amplitude for {sol.family.value}")


def collapse_time(sol: ClosedFormSolution, r0: float) -> float:
    # The sphere of radius T - t reaches radius r0 at T - r0
    if not sol.is_sphere:
        raise ValueError(f"Collapse time is defined for the sphere families, got {sol.family.value}")
    if not 0 < r0 < sol.T:
        raise DomainError(f"collapse radius needs 0 < r0 < T, got r0={r0}, T={sol.T}")
    return sol.T - r0


def closure_value(sol: ClosedFormSolution, point) -> float:
    """Value on the closed domain, boundary included where the formula extends."""
    a, b = float(point[0]), float(point[1])
    if sol.family in MEMBRANE_FAMILIES:
        s = sol.T - a
        if s < 0:
            raise DomainError(f"point {point} violates t <= T")
        if sol.family == Family.CONSTANT_PROFILE:
            return sol.k * s
        w = s * s - b * b
        slack = 1e-14 * max(s * s, 1.0)
        if w < -slack:
            raise DomainError(f"point {point} violates |r| <= T - t")
        # roundoff in T - t must not lift the cone boundary off zero
        return sol.sign * math.sqrt(w) if w > slack else 0.0
    return float(evaluate_jet(sol, point).value)


def self_similarity_defect(sol: ClosedFormSolution, lam: float, point) -> float:
    # Dilation about the blow-up point (T, 0); spheres and constants carry one power of length
    if lam <= 0:
        raise ValueError(f"dilation factor must be positive, got {lam}")
    a, b = float(point[0]), float(point[1])
    degree = 1 if sol.family in MEMBRANE_FAMILIES else 0
    dilated = (sol.T + lam * (a - sol.T), lam * b)
    u = evaluate_jet(sol, (a, b)).value
    u_dilated = evaluate_jet(sol, dilated).value
    return abs(u_dilated / lam ** degree - u)
