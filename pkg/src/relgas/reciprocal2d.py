"""Closed-form reciprocal maps for the two-dimensional steady system.

The 4-parameter class acts on states and, through a 2x2 frame map, on the
coordinate differentials (dx, dy).  The frame op optionally applies the
x* -> a1 x*, y* -> a1 y* rescaling (division of the differential relations
by a1), under which the parameter specialisation reproduces the
one-parameter frame I + eps * [[p+Sv^2, -Suv], [-Suv, p+Su^2]].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import FrameMap2D, GasState2D, ModelConstants, derived_2d
from .errors import DegenerateJacobian, NegativeRadicand, SingularDenominator, ZeroA1
from .reciprocal1d import ReciprocalParams


@dataclass(frozen=True)
class Delta2D:
    """The radicand Delta = 1 - a1^2 q^2 / (c^2 (p+a2)^2); positive when valid."""

    delta: float


def delta_4param_2d(state: GasState2D, params: ReciprocalParams,
                    constants: ModelConstants) -> Delta2D:
    """Radicand of the 2D density map; with the one-parameter specialisation
    it reduces to 1 - q^2 / (c^2 (eps p + 1)^2)."""
    c = constants.c
    q_sq = state.u * state.u + state.v * state.v
    b2 = state.p + params.a2
    if b2 == 0.0:
        raise SingularDenominator("p + a2 = 0")
    return Delta2D(delta=1.0 - params.a1 * params.a1 * q_sq / (c * c * b2 * b2))


def transform_state_4param_2d(state: GasState2D, params: ReciprocalParams,
                              constants: ModelConstants) -> GasState2D:
    """4-parameter reciprocal image of a 2D state; output validated by caller."""
    der = derived_2d(state, constants)
    c, p = constants.c, state.p
    q_sq, s = der.q_sq, der.s
    b2 = p + params.a2
    if b2 == 0.0:
        raise SingularDenominator("p + a2 = 0")
    d2 = p + s * q_sq + params.a2
    if d2 == 0.0:
        raise SingularDenominator("p + S q^2 + a2 = 0")
    de = b2 * (c * c - q_sq) + (state.e + p) * q_sq
    if de == 0.0:
        raise SingularDenominator("(p+a2)(c^2-q^2) + (e+p) q^2 = 0")
    delta = delta_4param_2d(state, params, constants).delta
    if delta <= 0.0:
        raise NegativeRadicand("Delta = %r <= 0" % (delta,))
    shift = params.a1 * params.a1 * params.a3 / b2
    return GasState2D(
        rho=params.a3 * state.rho * c * der.gamma * math.sqrt(delta) * b2 / d2,
        u=-params.a1 * state.u / b2,
        v=-params.a1 * state.v / b2,
        p=params.a4 - shift,
        e=params.a3 * c * c * b2 * (state.e + p) * delta / de - params.a4 + shift,
    )


def transform_frame_4param_2d(state: GasState2D, params: ReciprocalParams,
                              constants: ModelConstants,
                              scaled: bool = False) -> FrameMap2D:
    """Frame map of the 4-parameter differential relations.

    Unscaled rows: dx* = -(p+Sv^2+a2) dx + Suv dy,
                   dy* =  Suv dx - (p+Su^2+a2) dy.
    With scaled=True both rows are divided by a1.
    Raises DegenerateJacobian when the determinant vanishes.
    """
    der = derived_2d(state, constants)
    p, s = state.p, der.s
    suv = s * state.u * state.v
    m = FrameMap2D(
        xx=-(p + s * state.v * state.v + params.a2), xy=suv,
        yx=suv, yy=-(p + s * state.u * state.u + params.a2),
    )
    if scaled:
        if params.a1 == 0.0:
            raise ZeroA1("scaled frame divides by a1")
        m = FrameMap2D(m.xx / params.a1, m.xy / params.a1,
                       m.yx / params.a1, m.yy / params.a1)
    if m.det == 0.0:
        raise DegenerateJacobian("frame determinant is zero")
    return m


def transform_state_1param_2d(state: GasState2D, eps: float,
                              constants: ModelConstants) -> GasState2D:
    """One-parameter reciprocal image of a 2D state; eps = 0 is exact identity."""
    if eps == 0.0:
        return state
    der = derived_2d(state, constants)
    c, p = constants.c, state.p
    q_sq, s = der.q_sq, der.s
    d1 = eps * p + 1.0
    if d1 <= 0.0:
        raise SingularDenominator("eps*p + 1 = %r <= 0" % (d1,))
    d2 = eps * (p + s * q_sq) + 1.0
    if d2 <= 0.0:
        raise SingularDenominator("eps*(p + S q^2) + 1 = %r <= 0" % (d2,))
    delta = 1.0 - q_sq / (c * c * d1 * d1)
    if delta <= 0.0:
        raise NegativeRadicand("Delta = %r <= 0" % (delta,))
    de = d1 * (c * c - q_sq) + eps * (state.e + p) * q_sq
    return GasState2D(
        rho=state.rho * c * der.gamma * math.sqrt(delta) * d1 / d2,
        u=state.u / d1,
        v=state.v / d1,
        p=p / d1,
        e=c * c * d1 * (state.e + p) * delta / de - p / d1,
    )


def transform_frame_1param_2d(state: GasState2D, eps: float,
                              constants: ModelConstants) -> FrameMap2D:
    """Frame map I + eps * [[p+Sv^2, -Suv], [-Suv, p+Su^2]].

    Row one reads dx* = eps((p+Sv^2) dx - Suv dy) + dx, row two
    dy* = eps(-Suv dx + (p+Su^2) dy) + dy.
    """
    if eps == 0.0:
        return FrameMap2D.identity()
    der = derived_2d(state, constants)
    p, s = state.p, der.s
    suv = s * state.u * state.v
    return FrameMap2D(
        xx=1.0 + eps * (p + s * state.v * state.v), xy=-eps * suv,
        yx=-eps * suv, yy=1.0 + eps * (p + s * state.u * state.u),
    )


@dataclass(frozen=True)
class JacobianReport:
    det: float
    ok: bool


def jacobian_condition_2d(frame: FrameMap2D) -> JacobianReport:
    """Determinant of a frame map and whether 0 < |det| < infinity holds."""
    det = frame.det
    ok = 0.0 < abs(det) < math.inf
    return JacobianReport(det=det, ok=ok)
