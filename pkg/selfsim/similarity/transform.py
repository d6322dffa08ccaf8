import math

from mpmath import mp

from selfsim.schema.jet import Jet2
from selfsim.similarity.coords import Scaling, SimilarityMap

SIMILARITY_VARIABLES = ("tau", "rho")


def _exp(x):
    return mp.exp(x) if isinstance(x, mp.mpf) else math.exp(x)


def transform_field_jet(sim_map: SimilarityMap, jet: Jet2, point, scaling: Scaling) -> Jet2:
    """Similarity-frame jet of a physical jet at point.

    Unscaled, v(tau, rho) = u(T - e^-tau, rho e^-tau). Linear scaling multiplies
    by e^tau on top. The scaling is never inferred.
    """
    if not isinstance(scaling, Scaling):
        raise ValueError(f"Unknown scaling {scaling}")
    s = sim_map.distance(point[0])
    rho = point[1] / s
    u_a, u_b = jet.a, jet.b
    u_aa, u_ab, u_bb = jet.aa, jet.ab, jet.bb

    v_rho = s * u_b
    v_rr = s * s * u_bb
    v_tau = s * u_a - rho * v_rho
    v_tr = s * s * u_ab - v_rho - rho * v_rr
    v_tt = s * s * u_aa - v_tau - 2 * rho * v_rho - 2 * rho * v_tr - rho * rho * v_rr
    v = jet.value

    if scaling == Scaling.LINEAR:
        return Jet2.of_two(
            SIMILARITY_VARIABLES,
            v / s,
            (v + v_tau) / s,
            v_rho / s,
            (v + 2 * v_tau + v_tt) / s,
            (v_rho + v_tr) / s,
            v_rr / s,
        )
    return Jet2.of_two(SIMILARITY_VARIABLES, v, v_tau, v_rho, v_tt, v_tr, v_rr)


def physical_field_jet(sim_map: SimilarityMap, sim_jet: Jet2, sim_point, scaling: Scaling, variables=None) -> Jet2:
    """Inverse of transform_field_jet; sim_point is (tau, rho)."""
    if not isinstance(scaling, Scaling):
        raise ValueError(f"Unknown scaling {scaling}")
    variables = variables or sim_map.physical_variables
    tau, rho = sim_point
    s = _exp(-tau)
    e = 1 / s

    v = sim_jet.value
    v_tau, v_rho = sim_jet.a, sim_jet.b
    v_tt, v_tr, v_rr = sim_jet.aa, sim_jet.ab, sim_jet.bb
    if scaling == Scaling.LINEAR:
        v, v_tau, v_rho, v_tt, v_tr, v_rr = (
            s * v,
            s * (v_tau - v),
            s * v_rho,
            s * (v_tt - 2 * v_tau + v),
            s * (v_tr - v_rho),
            s * v_rr,
        )

    return Jet2.of_two(
        variables,
        v,
        e * (v_tau + rho * v_rho),
        e * v_rho,
        e * e * (v_tt + v_tau + 2 * rho * v_rho + 2 * rho * v_tr + rho * rho * v_rr),
        e * e * (v_tr + v_rho + rho * v_rr),
        e * e * v_rr,
    )

