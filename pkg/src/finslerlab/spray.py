"""Geodesic spray data P, Q, the nonlinear connection, and the
metrizability residuals.

P and Q are built as jet-valued expressions out of the phi jet, so their
partials come from the same truncated-Taylor engine rather than from a
separate symbolic differentiation of the closed formulas.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .expr import Node
from .geometry import EvalPoint, GeometryError, phi_scalars
from .jet import Jet, eval_jet


@dataclass(frozen=True)
class SprayPack:
    P: float
    P_r: float
    P_s: float
    P_ss: float
    P_rs: float
    Q: float
    Q_r: float
    Q_s: float
    Q_ss: float
    Q_rs: float
    G: np.ndarray  # spray coefficients G^h, shape (n,)
    N: np.ndarray  # connection coefficients G^i_j, shape (n, n), i row


@dataclass(frozen=True)
class MetrizabilityResiduals:
    C1: float
    C2: float


def pq_jets(jet: Jet, r: float, s: float) -> tuple[Jet, Jet]:
    """Jets of P and Q at (r, s) from the phi jet.

    Q = (1/2r) (-phi_r + s phi_rs + r phi_ss) / (phi - s phi_s + (r^2-s^2) phi_ss)
    P = -(Q/phi) (s phi + (r^2-s^2) phi_s) + (1/2 r phi)(s phi_r + r phi_s)

    The results are exact through total degree 2, which covers every
    P/Q partial the curvature formulas consume.
    """
    phi = jet
    phi_r = jet.d_r()
    phi_s = jet.d_s()
    phi_ss = phi_s.d_s()
    phi_rs = phi_r.d_s()
    rj = Jet.variable_r(r)
    sj = Jet.variable_s(s)
    w = rj * rj - sj * sj
    denom = phi - sj * phi_s + w * phi_ss
    if abs(denom.value) < 1e-12 * max(1.0, phi.value**2):
        raise GeometryError(
            "degenerate denominator phi - s phi_s + (r^2 - s^2) phi_ss ~ 0 "
            "(TYPE_B degeneracy suspected)"
        )
    q = (-phi_r + sj * phi_rs + rj * phi_ss) / (2.0 * rj * denom)
    p = -(q / phi) * (sj * phi + w * phi_s) + (sj * phi_r + rj * phi_s) / (2.0 * rj * phi)
    return p, q


def pq_from_phi(jet: Jet, p: EvalPoint) -> SprayPack:
    """Spray data of the metric F = u phi at the point p."""
    ps = phi_scalars(jet)
    if ps.phi <= 0:
        raise GeometryError(f"phi = {ps.phi} is not positive at (r, s) = ({p.r}, {p.s})")
    pj, qj = pq_jets(jet, p.r, p.s)
    return spray_pack_from_jets(pj, qj, p)


def spray_pack_from_jets(pj: Jet, qj: Jet, p: EvalPoint) -> SprayPack:
    """Assemble G^h and G^i_j from P/Q jets at p.

    G^h  = u P y^h + u^2 Q x^h
    G^i_j = u P d^i_j + P_s x_j y^i + (1/u)(P - s P_s) y_j y^i
            + u Q_s x^i x_j + (2Q - s Q_s) x^i y_j
    """
    P, P_s = pj.partial(0, 0), pj.partial(0, 1)
    Q, Q_s = qj.partial(0, 0), qj.partial(0, 1)
    u, s = p.u, p.s
    x, y = p.x, p.y
    G = u * P * y + u * u * Q * x
    N = (
        u * P * np.eye(p.n)
        + P_s * np.outer(y, x)
        + ((P - s * P_s) / u) * np.outer(y, y)
        + u * Q_s * np.outer(x, x)
        + (2 * Q - s * Q_s) * np.outer(x, y)
    )
    return SprayPack(
        P=P,
        P_r=pj.partial(1, 0),
        P_s=P_s,
        P_ss=pj.partial(0, 2),
        P_rs=pj.partial(1, 1),
        Q=Q,
        Q_r=qj.partial(1, 0),
        Q_s=Q_s,
        Q_ss=qj.partial(0, 2),
        Q_rs=qj.partial(1, 1),
        G=G,
        N=N,
    )


def horizontal_residual(jet: Jet, sp: SprayPack, p: EvalPoint) -> np.ndarray:
    """The n residuals dF/dx^j - G^i_j dF/dy^i (the d_h F = 0 test).

    dF/dx^j = u (phi_r x_j / r + phi_s y_j / u)
    dF/dy^i = (phi/u) y_i + phi_s (x_i - (s/u) y_i)
    """
    ps = phi_scalars(jet)
    u, r, s = p.u, p.r, p.s
    dF_dx = u * (ps.phi_r * p.x / r + ps.phi_s * p.y / u)
    n_lo = p.x - (s / u) * p.y
    dF_dy = (ps.phi / u) * p.y + ps.phi_s * n_lo
    return dF_dx - dF_dy @ sp.N


def metrizability_from_spray(jet: Jet, sp: SprayPack, p: EvalPoint) -> MetrizabilityResiduals:
    """C1/C2 evaluated from an already-computed spray pack (self-check)."""
    ps = phi_scalars(jet)
    r, s = p.r, p.s
    w = r * r - s * s
    two_q = 2 * sp.Q - s * sp.Q_s
    c1 = (1 + s * sp.P - w * two_q) * ps.phi_s + (s * sp.P_s - 2 * sp.P - s * two_q) * ps.phi
    c2 = ps.phi_r / r - (sp.P + sp.Q_s * w) * ps.phi_s - (sp.P_s + s * sp.Q_s) * ps.phi
    return MetrizabilityResiduals(C1=c1, C2=c2)


def metrizability_residuals(
    jet: Jet, p_expr: Node, q_expr: Node, p: EvalPoint
) -> MetrizabilityResiduals:
    """C1/C2 residuals of a candidate spray (P, Q) against phi.

    C1 = (1 + sP - (r^2-s^2)(2Q - s Q_s)) phi_s
         + (s P_s - 2P - s(2Q - s Q_s)) phi
    C2 = phi_r / r - (P + Q_s (r^2-s^2)) phi_s - (P_s + s Q_s) phi
    """
    ps = phi_scalars(jet)
    r, s = p.r, p.s
    w = r * r - s * s
    pj = eval_jet(p_expr, r, s)
    qj = eval_jet(q_expr, r, s)
    P, P_s = pj.partial(0, 0), pj.partial(0, 1)
    Q, Q_s = qj.partial(0, 0), qj.partial(0, 1)
    two_q = 2 * Q - s * Q_s
    c1 = (1 + s * P - w * two_q) * ps.phi_s + (s * P_s - 2 * P - s * two_q) * ps.phi
    c2 = ps.phi_r / r - (P + Q_s * w) * ps.phi_s - (P_s + s * Q_s) * ps.phi
    return MetrizabilityResiduals(C1=c1, C2=c2)
