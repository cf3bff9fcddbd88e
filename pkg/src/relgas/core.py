"""States, model constants, derived quantities and physical-validity checks.

Everything is nondimensional; the light speed c is a runtime constant carried
by ModelConstants (default 1.0) and never hard-coded, so limit scans in c are
plain parameter sweeps.  Values are frozen dataclasses: all operations here
are pure functions and freely shareable across threads.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Union

from .errors import SuperluminalState


@dataclass(frozen=True)
class ModelConstants:
    """Model-wide constants.  c: light speed, positive."""

    c: float = 1.0

    def __post_init__(self):
        if not self.c > 0:
            raise ValueError("light speed must be positive, got %r" % (self.c,))


@dataclass(frozen=True)
class GasState1D:
    """1+1-dimensional state: rest density, velocity, pressure, energy density."""

    rho: float
    v: float
    p: float
    e: float


@dataclass(frozen=True)
class GasState2D:
    """Two-dimensional steady state: rest density, x/y velocity, pressure, energy."""

    rho: float
    u: float
    v: float
    p: float
    e: float


@dataclass(frozen=True)
class Covector1D:
    """Components of a differential form a*dt + b*dx attached to a 1D state."""

    dt: float
    dx: float


@dataclass(frozen=True)
class FrameMap2D:
    """2x2 linear map sending (dx, dy) to (dx*, dy*), stored row-major."""

    xx: float
    xy: float
    yx: float
    yy: float

    @classmethod
    def identity(cls) -> "FrameMap2D":
        return cls(1.0, 0.0, 0.0, 1.0)

    @property
    def det(self) -> float:
        return self.xx * self.yy - self.xy * self.yx

    def apply(self, dx: float, dy: float) -> tuple:
        return (self.xx * dx + self.xy * dy, self.yx * dx + self.yy * dy)

    def compose(self, other: "FrameMap2D") -> "FrameMap2D":
        """Matrix product self @ other (apply other first, then self)."""
        return FrameMap2D(
            self.xx * other.xx + self.xy * other.yx,
            self.xx * other.xy + self.xy * other.yy,
            self.yx * other.xx + self.yy * other.yx,
            self.yx * other.xy + self.yy * other.yy,
        )


@dataclass(frozen=True)
class Derived1D:
    """gamma_sq = 1/(c^2 - v^2); s = (e + p) * gamma_sq."""

    gamma_sq: float
    s: float


@dataclass(frozen=True)
class Derived2D:
    """q_sq = u^2 + v^2; gamma = 1/sqrt(c^2 - q^2); r = rho*gamma; s = (e+p)/(c^2-q^2)."""

    q_sq: float
    gamma: float
    r: float
    s: float


def derived_1d(state: GasState1D, constants: ModelConstants) -> Derived1D:
    """Derived quantities of a 1D state.

    Raises SuperluminalState when |v| >= c.
    """
    c = constants.c
    if abs(state.v) >= c:
        raise SuperluminalState("|v| = %r >= c = %r" % (abs(state.v), c))
    gamma_sq = 1.0 / (c * c - state.v * state.v)
    return Derived1D(gamma_sq=gamma_sq, s=(state.e + state.p) * gamma_sq)


def derived_2d(state: GasState2D, constants: ModelConstants) -> Derived2D:
    """Derived quantities of a 2D state.

    Raises SuperluminalState when q >= c.
    """
    c = constants.c
    q_sq = state.u * state.u + state.v * state.v
    if q_sq >= c * c:
        raise SuperluminalState("q^2 = %r >= c^2 = %r" % (q_sq, c * c))
    gamma = 1.0 / math.sqrt(c * c - q_sq)
    return Derived2D(q_sq=q_sq, gamma=gamma, r=state.rho * gamma,
                     s=(state.e + state.p) / (c * c - q_sq))


@dataclass(frozen=True)
class Violation:
    field: str
    value: float
    constraint: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple

    @property
    def ok(self) -> bool:
        return not self.violations


AnyState = Union[GasState1D, GasState2D]


def validate_state(state: AnyState, constants: ModelConstants) -> ValidationReport:
    """List every violated invariant (positivity, subluminal speed).

    Report-returning on purpose: intentionally unphysical intermediate values
    (e.g. during limit scans) stay representable.
    """
    c = constants.c
    out = []
    if not state.rho > 0:
        out.append(Violation("rho", state.rho, "rho > 0"))
    if not state.p > 0:
        out.append(Violation("p", state.p, "p > 0"))
    if not state.e > 0:
        out.append(Violation("e", state.e, "e > 0"))
    if not state.e + state.p > 0:
        out.append(Violation("e+p", state.e + state.p, "e + p > 0"))
    if isinstance(state, GasState1D):
        if not abs(state.v) < c:
            out.append(Violation("v", state.v, "|v| < c"))
    else:
        q_sq = state.u * state.u + state.v * state.v
        if not q_sq < c * c:
            out.append(Violation("q", math.sqrt(q_sq), "q < c"))
    return ValidationReport(tuple(out))


# --- serialization -----------------------------------------------------------
#
# Flat JSON schema shared with the CLI and fixture files:
#   1D: {"rho":..., "v":..., "p":..., "e":..., "c":...}
#   2D: {"rho":..., "u":..., "v":..., "p":..., "e":..., "c":...}
# Doubles are written with 17 significant digits so serialization round-trips
# are exact.

def format_float(x: float) -> str:
    return "%.17g" % float(x)


def state_to_dict(state: AnyState, constants: ModelConstants) -> dict:
    if isinstance(state, GasState1D):
        d = {"rho": state.rho, "v": state.v, "p": state.p, "e": state.e}
    else:
        d = {"rho": state.rho, "u": state.u, "v": state.v, "p": state.p,
             "e": state.e}
    d["c"] = constants.c
    return d


def state_from_dict(d: dict) -> tuple:
    """Parse a flat state record; returns (state, constants).

    The record is 2D when a "u" key is present, else 1D.
    """
    c = float(d.get("c", 1.0))
    if "u" in d:
        state = GasState2D(rho=float(d["rho"]), u=float(d["u"]), v=float(d["v"]),
                           p=float(d["p"]), e=float(d["e"]))
    else:
        state = GasState1D(rho=float(d["rho"]), v=float(d["v"]),
                           p=float(d["p"]), e=float(d["e"]))
    return state, ModelConstants(c=c)


def state_to_json(state: AnyState, constants: ModelConstants) -> str:
    d = state_to_dict(state, constants)
    items = ", ".join('"%s": %s' % (k, format_float(v)) for k, v in d.items())
    return "{" + items + "}"


def state_from_json(text: str) -> tuple:
    return state_from_dict(json.loads(text))
