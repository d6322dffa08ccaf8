import math
from enum import Enum

from mpmath import mp

from selfsim.errors import SingularPointError
from selfsim.residual.operators import born_infeld_residual, membrane_residual, spacelike_residual
from selfsim.schema.jet import Jet2
from selfsim.similarity.coords import Orientation, Scaling, SimilarityMap
from selfsim.similarity.transform import physical_field_jet


class TransformedEq(str, Enum):
    BORN_INFELD_SIMILARITY = "born_infeld_similarity" # v = u, time-based
    MEMBRANE_SIMILARITY = "membrane_similarity" # v = e^tau u, time-based
    SPACELIKE_SIMILARITY = "spacelike_similarity" # v = u, space-based


def _exp(x):
    return mp.exp(x) if isinstance(x, mp.mpf) else math.exp(x)


def _quasilinear_block(jet: Jet2, rho):
    v_tau, v_rho = jet.a, jet.b
    v_tt, v_tr, v_rr = jet.aa, jet.ab, jet.bb
    w = v_tau + rho * v_rho
    return (
        v_rho * v_rho * (v_tt + v_tau + 2 * rho * v_rho + 2 * rho * v_tr + rho * rho * v_rr)
        + w * w * v_rr
        - 2 * v_rho * w * (v_rho + rho * v_rr + v_tr)
    )


def born_infeld_similarity_residual(jet: Jet2, sim_point):
    tau, rho = sim_point
    v_tau, v_rho = jet.a, jet.b
    linear = jet.aa - (1 - rho * rho) * jet.bb + v_tau + 2 * rho * v_rho + 2 * rho * jet.ab
    return linear + _exp(2 * tau) * _quasilinear_block(jet, rho)


def spacelike_similarity_residual(jet: Jet2, sim_point):
    tau, rho = sim_point
    v_tau, v_rho = jet.a, jet.b
    linear = jet.aa + (1 + rho * rho) * jet.bb + v_tau + 2 * rho * v_rho + 2 * rho * jet.ab
    return linear - _exp(2 * tau) * _quasilinear_block(jet, rho)


def membrane_similarity_residual(jet: Jet2, sim_point):
    """Membrane equation for v = e^tau u, term by term.

    Its tau-independent part is -(1/rho) times the profile residual.
    """
    _, rho = sim_point
    if rho == 0:
        raise SingularPointError("the membrane similarity residual has 1/rho terms")
    v = jet.value
    v_tau, v_rho = jet.a, jet.b
    v_tt, v_tr, v_rr = jet.aa, jet.ab, jet.bb
    w = v_tau - v
    return (
        v_tt
        - v_tau
        - (1 - rho * rho) * v_rr
        - v_rho / rho
        + 2 * rho * v_tr
        + v_rho * v_rho * (v_tt + v_tau - 2 * v)
        + v_rr * w * w
        - 2 * v_rho * v_tr * w
        + v_rho * w * w / rho
        + (rho * rho - 1) * v_rho ** 3 / rho
    )


def transformed_equation_residual(eq: TransformedEq, jet: Jet2, sim_point):
    if eq == TransformedEq.BORN_INFELD_SIMILARITY:
        return born_infeld_similarity_residual(jet, sim_point)
    if eq == TransformedEq.MEMBRANE_SIMILARITY:
        return membrane_similarity_residual(jet, sim_point)
    if eq == TransformedEq.SPACELIKE_SIMILARITY:
        return spacelike_similarity_residual(jet, sim_point)
    raise ValueError(f"Unknown transformed equation {eq}")


def natural_map(eq: TransformedEq, T: float = 1.0):
    orientation = Orientation.SPACE_BASED if eq == TransformedEq.SPACELIKE_SIMILARITY else Orientation.TIME_BASED
    scaling = Scaling.LINEAR if eq == TransformedEq.MEMBRANE_SIMILARITY else Scaling.NONE
    return SimilarityMap(T=T, orientation=orientation), scaling


def pulled_back_residual(eq: TransformedEq, sim_map: SimilarityMap, jet: Jet2, sim_point, scaling: Scaling):
    """Physical residual of the pulled-back field, rescaled to the similarity frame.

    Born-Infeld and spacelike residuals carry e^(2 tau) from two derivatives;
    with v = e^tau u the membrane residual carries e^tau. Agrees with
    transformed_equation_residual when the printed equation is the exact
    transform.
    """
    tau, rho = sim_point
    physical = physical_field_jet(sim_map, jet, sim_point, scaling)
    if eq == TransformedEq.BORN_INFELD_SIMILARITY:
        return _exp(-2 * tau) * born_infeld_residual(physical)
    if eq == TransformedEq.SPACELIKE_SIMILARITY:
        return _exp(-2 * tau) * spacelike_residual(physical)
    if eq == TransformedEq.MEMBRANE_SIMILARITY:
        if rho == 0:
            raise SingularPointError("the pulled-back membrane residual has a 1/r term")
        r = rho * _exp(-tau)
        factor = _exp(-tau) if scaling == Scaling.LINEAR else _exp(-2 * tau)
        return factor * membrane_residual(physical, r)
    raise ValueError(f"Unknown transformed equation {eq}")
