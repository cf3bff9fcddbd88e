"""Closed-form reciprocal transformation maps for the 1+1-dimensional system.

The 4-parameter class acts on states and on (dt, dx) covectors; the
one-parameter subclass is its specialisation a1 = -1/eps, a2 = a4 = 1/eps,
a3 = 1 and forms a one-parameter group in eps.

Domain policy: denominators of the one-parameter maps are required strictly
positive (eps*p + 1 > 0 and eps*(p + S v^2) + 1 > 0), which keeps orbits on
the connected group component through the identity; values outside raise
rather than returning branch-crossed results.  eps = 0 is accepted by the
one-parameter maps (exact identity) even though the parameter specialisation
itself is singular there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import Covector1D, GasState1D, ModelConstants, derived_1d
from .errors import NegativeRadicand, SingularDenominator, ZeroA1, ZeroEpsilon


@dataclass(frozen=True)
class ReciprocalParams:
    """Transformation parameters (a1, a2, a3, a4); a1 and a3 nonzero."""

    a1: float
    a2: float
    a3: float
    a4: float


def params_from_epsilon(eps: float) -> ReciprocalParams:
    """Specialise the 4-parameter family to the one-parameter subgroup.

    Raises ZeroEpsilon at eps = 0 (the group identity is handled by the
    one-parameter maps directly, not by this singular specialisation).
    """
    if eps == 0.0:
        raise ZeroEpsilon("parameter specialisation is singular at eps = 0")
    return ReciprocalParams(a1=-1.0 / eps, a2=1.0 / eps, a3=1.0, a4=1.0 / eps)


def transform_state_4param(state: GasState1D, params: ReciprocalParams,
                           constants: ModelConstants) -> GasState1D:
    """4-parameter reciprocal image of a state.

    The density and energy use the factored radical (p+a2)*sqrt(Delta) with
    Delta = 1 - a1^2 v^2 / (c^2 (p+a2)^2), algebraically identical to the
    unfactored square root whenever p + a2 > 0 and the unique extension
    consistent with the two-dimensional family otherwise.

    The output need not be physical; callers validate.
    """
    der = derived_1d(state, constants)
    c, v, p = constants.c, state.v, state.p
    s = der.s
    b2 = p + params.a2
    if b2 == 0.0:
        raise SingularDenominator("p + a2 = 0")
    d2 = p + s * v * v + params.a2
    if d2 == 0.0:
        raise SingularDenominator("p + S v^2 + a2 = 0")
    delta = 1.0 - params.a1 * params.a1 * v * v / (c * c * b2 * b2)
    if delta <= 0.0:
        raise NegativeRadicand("Delta = %r <= 0" % (delta,))
    root = math.sqrt(delta)
    lorentz = math.sqrt(1.0 - v * v / (c * c))
    shift = params.a1 * params.a1 * params.a3 / b2
    return GasState1D(
        rho=params.a3 * state.rho * b2 * root / (lorentz * d2),
        v=-params.a1 * v / b2,
        p=params.a4 - shift,
        e=params.a3 * s * c * c * b2 * delta / d2 - params.a4 + shift,
    )


def transform_form_4param(state: GasState1D, params: ReciprocalParams,
                          constants: ModelConstants,
                          form: Covector1D) -> Covector1D:
    """Image of a (dt, dx) covector: a1 dt* = S v dx - (p + S v^2 + a2) dt."""
    if params.a1 == 0.0:
        raise ZeroA1("form relation divides by a1")
    der = derived_1d(state, constants)
    sv = der.s * state.v
    dt = (sv * form.dx - (state.p + sv * state.v + params.a2) * form.dt) / params.a1
    return Covector1D(dt=dt, dx=form.dx)


def transform_state_1param(state: GasState1D, eps: float,
                           constants: ModelConstants) -> GasState1D:
    """One-parameter reciprocal image of a state; eps = 0 is the exact identity.

    The energy uses e* = S (c^2 (eps p+1)^2 - v^2) / ((eps p+1)(eps(p+Sv^2)+1))
    - p/(eps p+1), the form obtained by substituting the parameter
    specialisation into the 4-parameter map (it restricts correctly from the
    two-dimensional family and reduces to e at eps = 0).
    """
    if eps == 0.0:
        return state
    der = derived_1d(state, constants)
    c, v, p = constants.c, state.v, state.p
    s = der.s
    d1 = eps * p + 1.0
    if d1 <= 0.0:
        raise SingularDenominator("eps*p + 1 = %r <= 0" % (d1,))
    d2 = eps * (p + s * v * v) + 1.0
    if d2 <= 0.0:
        raise SingularDenominator("eps*(p + S v^2) + 1 = %r <= 0" % (d2,))
    rad = d1 * d1 - v * v / (c * c)
    if rad <= 0.0:
        raise NegativeRadicand("(eps*p+1)^2 - v^2/c^2 = %r <= 0" % (rad,))
    lorentz = math.sqrt(1.0 - v * v / (c * c))
    return GasState1D(
        rho=state.rho * math.sqrt(rad) / (d2 * lorentz),
        v=v / d1,
        p=p / d1,
        e=s * (c * c * d1 * d1 - v * v) / (d1 * d2) - p / d1,
    )


def transform_form_1param(state: GasState1D, eps: float,
                          constants: ModelConstants,
                          form: Covector1D) -> Covector1D:
    """dt* = -eps (S v dx - (p + S v^2) dt) + dt; dx* = dx."""
    if eps == 0.0:
        return form
    der = derived_1d(state, constants)
    sv = der.s * state.v
    dt = -eps * (sv * form.dx - (state.p + sv * state.v) * form.dt) + form.dt
    return Covector1D(dt=dt, dx=form.dx)
