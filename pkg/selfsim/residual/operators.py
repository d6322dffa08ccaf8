from selfsim.errors import DegeneracyError, RegularityError, SingularPointError
from selfsim.schema.jet import Jet2
from selfsim.schema.report import EquationId
from selfsim.settings import settings


def born_infeld_residual(jet: Jet2):
    p, q = jet.a, jet.b
    return jet.aa * (1 + q * q) - jet.bb * (1 - p * p) - 2 * p * q * jet.ab


def membrane_residual(jet: Jet2, r):
    if r == 0:
        raise SingularPointError("the radial membrane residual has 1/r terms; use residual_at_axis at r = 0")
    u_t, u_r = jet.a, jet.b
    u_tt, u_tr, u_rr = jet.aa, jet.ab, jet.bb
    return (
        u_tt
        - u_rr
        - u_r / r
        + u_tt * u_r * u_r
        + u_rr * u_t * u_t
        - 2 * u_t * u_r * u_tr
        + u_r * u_t * u_t / r
        - u_r * u_r * u_r / r
    )


def membrane_residual_grouped(jet: Jet2, r):
    # u_tt(1 + u_r^2) - u_rr(1 - u_t^2) - 2 u_t u_r u_tr - (u_r / r)(1 - u_t^2 + u_r^2)
    if r == 0:
        raise SingularPointError("the grouped membrane residual has a 1/r term")
    p, q = jet.a, jet.b
    return jet.aa * (1 + q * q) - jet.bb * (1 - p * p) - 2 * p * q * jet.ab - (q / r) * (1 - p * p + q * q)


def spacelike_residual(jet: Jet2):
    u_x, u_y = jet.a, jet.b
    return jet.aa * (1 - u_y * u_y) + jet.bb * (1 - u_x * u_x) + 2 * u_x * u_y * jet.ab


def eikonal_residual(jet: Jet2):
    return 1 - jet.a * jet.a + jet.b * jet.b


def discriminant(jet: Jet2):
    return 1 - jet.a * jet.a + jet.b * jet.b


def divergence_form_residual(jet: Jet2, point=None, eps_deg=None):
    """Divergence-form residual d_t(u_t / sqrt(D)) - d_x(u_x / sqrt(D)), D = 1 - u_t^2 + u_x^2.

    Closed-form jets expand the flux derivatives by the chain rule, which gives
    the Born-Infeld residual divided by D^(3/2).
    """
    eps_deg = settings.EPS_DEGENERACY if eps_deg is None else eps_deg
    D = discriminant(jet)
    if not D > eps_deg:
        raise DegeneracyError(f"discriminant 1 - u_t^2 + u_x^2 = {float(D):.3e} at {point} is not above {eps_deg:.1e}")
    return born_infeld_residual(jet) / (D * D ** 0.5)


def residual_at(eq: EquationId, jet: Jet2, point):
    if eq == EquationId.BORN_INFELD:
        return born_infeld_residual(jet)
    if eq == EquationId.RADIAL_MEMBRANE:
        return membrane_residual(jet, point[1])
    if eq == EquationId.SPACELIKE_ZMC:
        return spacelike_residual(jet)
    if eq == EquationId.EIKONAL:
        return eikonal_residual(jet)
    if eq == EquationId.DIVERGENCE_FORM:
        return divergence_form_residual(jet, point)
    raise ValueError(f"Unknown equation {eq}")


def residual_at_axis(jet: Jet2):
    """Radial membrane residual at r = 0 for fields even in r.

    u_r / r and u_r u_t^2 / r tend to u_rr and u_rr u_t^2, and u_r^3 / r to 0.
    """
    u_t, u_r = jet.a, jet.b
    u_tt, u_rr = jet.aa, jet.bb
    if abs(u_r) > 1e-12 * max(1.0, abs(float(u_rr))):
        raise RegularityError(f"u_r = {float(u_r):.3e} at the axis; the field is not even in r")
    return u_tt - 2 * u_rr * (1 - u_t * u_t)
