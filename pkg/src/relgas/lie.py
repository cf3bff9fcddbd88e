"""Lie-group machinery: generators, parameter flows, invariants, limit scans.

The one-parameter reciprocal maps are the flows of an explicit vector field
in the extended state space (state plus coordinate differentials).  This
module provides that generator, numerical integration of its Cauchy problem
(fixed-step classical RK4 as the deterministic reference and an embedded
Fehlberg 4(5) pair for tolerance-driven runs), the invariants annihilated by
the generator, finite-difference annihilation checks, and the c -> infinity
convergence scan.

The integrated dt-rate is d(dt*)/deps = (p* + S* v*^2) dt* - S* v* dx*, the
sign consistent with the eps-derivative of the closed-form covector map (the
opposite ordering fails to reproduce it).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence, Union

from .core import (Covector1D, FrameMap2D, GasState1D, GasState2D,
                   ModelConstants, derived_1d, derived_2d)
from .errors import (OrbitLeftDomain, SingularDenominator, SuperluminalState,
                     ToleranceNotMet)
from .reciprocal1d import transform_state_1param
from .reciprocal2d import transform_state_1param_2d


@dataclass(frozen=True)
class ExtendedState1D:
    state: GasState1D
    form: Covector1D


@dataclass(frozen=True)
class ExtendedState2D:
    state: GasState2D
    frame: FrameMap2D


@dataclass(frozen=True)
class Tangent1D:
    """Rates of the extended 1D state with respect to the group parameter."""

    d_rho: float
    d_v: float
    d_p: float
    d_e: float
    d_dt: float
    d_dx: float = 0.0  # dx* = dx always


@dataclass(frozen=True)
class Tangent2D:
    """Rates of the extended 2D state; the frame rate is a 2x2 matrix."""

    d_rho: float
    d_u: float
    d_v: float
    d_p: float
    d_e: float
    d_frame: FrameMap2D


def generator_1d(ext: ExtendedState1D, constants: ModelConstants) -> Tangent1D:
    """Infinitesimal generator of the one-parameter class on (rho,v,p,e,dt,dx)."""
    st = ext.state
    der = derived_1d(st, constants)
    c, v, p, e = constants.c, st.v, st.p, st.e
    g2 = der.gamma_sq
    d_dt = ((c * c * p + e * v * v) * ext.form.dt
            - v * (e + p) * ext.form.dx) * g2
    return Tangent1D(
        d_rho=-st.rho * v * v * e * g2,
        d_v=-p * v,
        d_p=-p * p,
        d_e=(c * c * p * p - e * e * v * v) * g2,
        d_dt=d_dt,
    )


def generator_2d(ext: ExtendedState2D, constants: ModelConstants) -> Tangent2D:
    """Infinitesimal generator of the 2D one-parameter class.

    The frame rate applies the coefficient matrix
        [[(c^2-u^2)p + e v^2, -uv(e+p)], [-uv(e+p), (c^2-v^2)p + e u^2]] / (c^2-q^2)
    to the current frame rows.
    """
    st = ext.state
    der = derived_2d(st, constants)
    c, u, v, p, e = constants.c, st.u, st.v, st.p, st.e
    g2 = 1.0 / (c * c - der.q_sq)
    axx = ((c * c - u * u) * p + e * v * v) * g2
    ayy = ((c * c - v * v) * p + e * u * u) * g2
    axy = -u * v * (e + p) * g2
    rate = FrameMap2D(axx, axy, axy, ayy)
    return Tangent2D(
        d_rho=-st.rho * e * der.q_sq * g2,
        d_u=-p * u,
        d_v=-p * v,
        d_p=-p * p,
        d_e=(c * c * p * p - e * e * der.q_sq) * g2,
        d_frame=rate.compose(ext.frame),
    )


@dataclass(frozen=True)
class FlowSettings:
    """Integration settings: fixed-step classical RK4 or adaptive Fehlberg 4(5)."""

    method: str = "rk4"          # "rk4" | "adaptive"
    step_count: int = 256        # rk4
    tolerance: float = 1e-10     # adaptive, per-step relative
    max_steps: int = 100000      # adaptive

    def __post_init__(self):
        if self.method not in ("rk4", "adaptive"):
            raise ValueError("unknown flow method %r" % (self.method,))
        if self.step_count < 1:
            raise ValueError("step_count must be >= 1")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")


@dataclass(frozen=True)
class FlowResult:
    """Endpoint of a parameter flow plus its integration error estimate."""

    endpoint: Union[ExtendedState1D, ExtendedState2D]
    error_estimate: float
    steps: int


def _rhs_1d(y: list, constants: ModelConstants) -> list:
    ext = ExtendedState1D(GasState1D(y[0], y[1], y[2], y[3]),
                          Covector1D(y[4], y[5]))
    t = generator_1d(ext, constants)
    return [t.d_rho, t.d_v, t.d_p, t.d_e, t.d_dt, t.d_dx]


def _rhs_2d(y: list, constants: ModelConstants) -> list:
    ext = ExtendedState2D(GasState2D(y[0], y[1], y[2], y[3], y[4]),
                          FrameMap2D(y[5], y[6], y[7], y[8]))
    t = generator_2d(ext, constants)
    return [t.d_rho, t.d_u, t.d_v, t.d_p, t.d_e,
            t.d_frame.xx, t.d_frame.xy, t.d_frame.yx, t.d_frame.yy]


# Fehlberg 4(5) tableau.
_FB_A = (
    (),
    (1 / 4,),
    (3 / 32, 9 / 32),
    (1932 / 2197, -7200 / 2197, 7296 / 2197),
    (439 / 216, -8, 3680 / 513, -845 / 4104),
    (-8 / 27, 2, -3544 / 2565, 1859 / 4104, -11 / 40),
)
_FB_B5 = (16 / 135, 0, 6656 / 12825, 28561 / 56430, -9 / 50, 2 / 55)
_FB_B4 = (25 / 216, 0, 1408 / 2565, 2197 / 4104, -1 / 5, 0)


def _rk4_integrate(rhs: Callable, y: list, eps: float, steps: int,
                   constants: ModelConstants) -> list:
    h = eps / steps
    for k in range(steps):
        try:
            k1 = rhs(y, constants)
            k2 = rhs([a + 0.5 * h * b for a, b in zip(y, k1)], constants)
            k3 = rhs([a + 0.5 * h * b for a, b in zip(y, k2)], constants)
            k4 = rhs([a + h * b for a, b in zip(y, k3)], constants)
        except (SuperluminalState, SingularDenominator) as exc:
            raise OrbitLeftDomain(
                "orbit left the valid region near eps = %r: %s" % (k * h, exc),
                last_valid_eps=k * h) from exc
        y = [a + (h / 6.0) * (b1 + 2 * b2 + 2 * b3 + b4)
             for a, b1, b2, b3, b4 in zip(y, k1, k2, k3, k4)]
        if not all(math.isfinite(a) for a in y):
            raise OrbitLeftDomain("orbit diverged near eps = %r" % ((k + 1) * h,),
                                  last_valid_eps=k * h)
    return y


def _rk4_with_estimate(rhs, y0, eps, steps, constants):
    y = _rk4_integrate(rhs, list(y0), eps, steps, constants)
    # Richardson estimate against a half-step-count run (RK4 is order 4).
    coarse = _rk4_integrate(rhs, list(y0), eps, max(1, steps // 2), constants)
    err = max(abs(a - b) for a, b in zip(y, coarse)) / 15.0
    return y, err, steps


def _rkf45_integrate(rhs, y0, eps, tol, max_steps, constants):
    y = list(y0)
    s = 0.0                       # integrated parameter in [0, |eps|]
    sign = 1.0 if eps >= 0 else -1.0
    span = abs(eps)
    h = span / 16.0 or span
    err_total = 0.0
    steps = 0
    h_min = span * 1e-14
    while s < span:
        h = min(h, span - s)
        try:
            ks = []
            for row in _FB_A:
                yk = [a + sign * h * sum(c * k[i] for c, k in zip(row, ks))
                      for i, a in enumerate(y)]
                ks.append(rhs(yk, constants))
        except (SuperluminalState, SingularDenominator) as exc:
            raise OrbitLeftDomain(
                "orbit left the valid region near eps = %r: %s" % (sign * s, exc),
                last_valid_eps=sign * s) from exc
        y5 = [a + sign * h * sum(b * k[i] for b, k in zip(_FB_B5, ks))
              for i, a in enumerate(y)]
        y4 = [a + sign * h * sum(b * k[i] for b, k in zip(_FB_B4, ks))
              for i, a in enumerate(y)]
        scale = max(1.0, max(abs(a) for a in y))
        err = max(abs(a - b) for a, b in zip(y5, y4)) / scale
        if err <= tol or h <= h_min:
            if err > tol:
                raise ToleranceNotMet(
                    "step error %r exceeds tolerance %r at minimum step" % (err, tol))
            s += h
            y = y5
            err_total += err * scale
            steps += 1
            if steps > max_steps:
                raise ToleranceNotMet("step budget exhausted (%d)" % max_steps)
        factor = 0.9 * (tol / err) ** 0.2 if err > 0 else 4.0
        h *= min(4.0, max(0.1, factor))
    return y, err_total, steps


def _flow(rhs, y0, eps, settings, constants, rebuild):
    if eps == 0.0:
        return FlowResult(endpoint=rebuild(list(y0)), error_estimate=0.0, steps=0)
    if settings.method == "rk4":
        y, err, steps = _rk4_with_estimate(rhs, y0, eps, settings.step_count,
                                           constants)
    else:
        y, err, steps = _rkf45_integrate(rhs, y0, eps, settings.tolerance,
                                         settings.max_steps, constants)
    return FlowResult(endpoint=rebuild(y), error_estimate=err, steps=steps)


def flow_1d(ext: ExtendedState1D, eps: float, settings: FlowSettings,
            constants: ModelConstants) -> FlowResult:
    """Integrate the extended 1D state along the generator from 0 to eps."""
    y0 = [ext.state.rho, ext.state.v, ext.state.p, ext.state.e,
          ext.form.dt, ext.form.dx]

    def rebuild(y):
        return ExtendedState1D(GasState1D(y[0], y[1], y[2], y[3]),
                               Covector1D(y[4], y[5]))

    return _flow(_rhs_1d, y0, eps, settings, constants, rebuild)


def flow_2d(ext: ExtendedState2D, eps: float, settings: FlowSettings,
            constants: ModelConstants) -> FlowResult:
    """Integrate the extended 2D state along the generator from 0 to eps."""
    f = ext.frame
    y0 = [ext.state.rho, ext.state.u, ext.state.v, ext.state.p, ext.state.e,
          f.xx, f.xy, f.yx, f.yy]

    def rebuild(y):
        return ExtendedState2D(GasState2D(y[0], y[1], y[2], y[3], y[4]),
                               FrameMap2D(y[5], y[6], y[7], y[8]))

    return _flow(_rhs_2d, y0, eps, settings, constants, rebuild)


# --- invariants ---------------------------------------------------------------


@dataclass(frozen=True)
class Invariants1D:
    j1: float
    j2: float
    j3: float


@dataclass(frozen=True)
class Invariants2D:
    """2D invariants; j4 uses the sqrt(c^2 - q^2) denominator that the
    generator annihilates, j4_printed keeps the plain (c^2 - q^2) variant
    as a documented negative control."""

    j1: float
    j2: float
    j3: float
    j4: float
    j4_printed: float


def invariants_1d(ext: ExtendedState1D, constants: ModelConstants) -> Invariants1D:
    st = ext.state
    c, v, p, e = constants.c, st.v, st.p, st.e
    if c * p + v * e == 0.0:
        raise SingularDenominator("c p + v e = 0")
    if v == c:
        raise SingularDenominator("v = c")
    j1 = (c * p - v * e) * (c - v) / ((c * p + v * e) * (c + v))
    j2 = st.rho * p / (c * p + e * v) * math.sqrt((c - v) / (c + v))
    d3 = p * (c - v) * (p * c * c + e * v * v)
    if d3 == 0.0:
        raise SingularDenominator("J3 denominator p (c-v) (p c^2 + e v^2) = 0")
    j3 = (v * (c * p + e * v)
          * ((c * c * p + e * v * v) * ext.form.dt - v * (e + p) * ext.form.dx)
          / d3)
    return Invariants1D(j1=j1, j2=j2, j3=j3)


def invariants_2d(ext: ExtendedState2D, constants: ModelConstants) -> Invariants2D:
    st = ext.state
    c, p, e = constants.c, st.p, st.e
    if p == 0.0:
        raise SingularDenominator("p = 0")
    q = math.hypot(st.u, st.v)
    if q >= c:
        raise SuperluminalState("q = %r >= c" % (q,))
    if c * p + e * q == 0.0:
        raise SingularDenominator("c p + e q = 0")
    j3 = (c * p - e * q) * (c - q) / ((c * p + e * q) * (c + q))
    num = st.rho * (j3 * (c + q) + c - q)
    return Invariants2D(
        j1=st.u / p,
        j2=st.v / p,
        j3=j3,
        j4=num / math.sqrt(c * c - q * q),
        j4_printed=num / (c * c - q * q),
    )


_INVARIANT_NAMES_1D = ("J1", "J2", "J3")
_INVARIANT_NAMES_2D = ("J1", "J2", "J3", "J4", "J4_printed")


def _displace_1d(ext: ExtendedState1D, t: Tangent1D, h: float) -> ExtendedState1D:
    return ExtendedState1D(
        GasState1D(ext.state.rho + h * t.d_rho, ext.state.v + h * t.d_v,
                   ext.state.p + h * t.d_p, ext.state.e + h * t.d_e),
        Covector1D(ext.form.dt + h * t.d_dt, ext.form.dx + h * t.d_dx),
    )


def _displace_2d(ext: ExtendedState2D, t: Tangent2D, h: float) -> ExtendedState2D:
    df = t.d_frame
    return ExtendedState2D(
        GasState2D(ext.state.rho + h * t.d_rho, ext.state.u + h * t.d_u,
                   ext.state.v + h * t.d_v, ext.state.p + h * t.d_p,
                   ext.state.e + h * t.d_e),
        FrameMap2D(ext.frame.xx + h * df.xx, ext.frame.xy + h * df.xy,
                   ext.frame.yx + h * df.yx, ext.frame.yy + h * df.yy),
    )


def check_annihilation(which: str, ext, h: float,
                       constants: ModelConstants) -> float:
    """Central-difference directional derivative of an invariant along the
    generator, (J(ext + h X) - J(ext - h X)) / (2 h); near zero certifies
    X J = 0.

    A Richardson-extrapolated value (from steps h and h/2) replaces the plain
    quotient when the residual is within 10x of the finite-difference noise
    floor, so genuine invariants are not reported at the noise level of h.
    """
    if isinstance(ext, ExtendedState1D):
        names, gen, disp = _INVARIANT_NAMES_1D, generator_1d, _displace_1d
        evaluate = lambda e: getattr(invariants_1d(e, constants), which.lower())
    else:
        names, gen, disp = _INVARIANT_NAMES_2D, generator_2d, _displace_2d
        evaluate = lambda e: getattr(invariants_2d(e, constants), which.lower())
    if which not in names:
        raise ValueError("unknown invariant %r (expected one of %s)" % (which, names))
    tangent = gen(ext, constants)

    def central(step):
        return (evaluate(disp(ext, tangent, step))
                - evaluate(disp(ext, tangent, -step))) / (2.0 * step)

    res = central(h)
    floor = abs(evaluate(ext)) * 2.2e-16 / h
    if abs(res) <= 10.0 * max(floor, 1e-300):
        res = (4.0 * central(h / 2.0) - res) / 3.0
    return res


# --- c -> infinity scan --------------------------------------------------------


@dataclass(frozen=True)
class LimitScanReport:
    """Successive transform differences over an ascending list of light speeds.

    For each state component the scan stores the transformed values, the
    absolute successive differences, and the difference ratios with the
    (c_{k+1}/c_k)^2-law expectations; a component with all differences below
    the noise floor is skipped.  certified is True when every tracked ratio
    lies within the stated relative band of its expectation.
    """

    c_values: tuple
    components: tuple
    values: dict
    diffs: dict
    ratios: dict
    expected_ratios: tuple
    band: float
    certified: bool
    skipped: tuple


def limit_scan_c(state, eps: float, c_values: Sequence[float],
                 band: float = 0.2, noise_floor: float = 1e-13) -> LimitScanReport:
    """Evaluate the one-parameter map at each c and report c^-2 convergence.

    Raises SuperluminalState when the state is invalid at the smallest c.
    """
    cs = tuple(float(c) for c in c_values)
    if list(cs) != sorted(cs):
        raise ValueError("c values must be ascending")
    one_dim = isinstance(state, GasState1D)
    speed = abs(state.v) if one_dim else math.hypot(state.u, state.v)
    for c in cs:
        if speed >= c:
            raise SuperluminalState("speed %r >= c = %r in scan list" % (speed, c))

    components = ("rho", "v", "p", "e") if one_dim else ("rho", "u", "v", "p", "e")
    values = {k: [] for k in components}
    for c in cs:
        mapped = (transform_state_1param(state, eps, ModelConstants(c)) if one_dim
                  else transform_state_1param_2d(state, eps, ModelConstants(c)))
        for k in components:
            values[k].append(getattr(mapped, k))

    expected = tuple((cs[k + 1] / cs[k]) ** 2
                     * (1.0 - (cs[k] / cs[k + 1]) ** 2)
                     / (1.0 - (cs[k + 1] / cs[k + 2]) ** 2)
                     for k in range(len(cs) - 2))
    diffs, ratios, skipped = {}, {}, []
    certified = True
    for k in components:
        d = [abs(values[k][i + 1] - values[k][i]) for i in range(len(cs) - 1)]
        diffs[k] = d
        scale = max(1.0, max(abs(x) for x in values[k]))
        if all(x <= noise_floor * scale for x in d):
            skipped.append(k)
            ratios[k] = []
            continue
        r = [d[i] / d[i + 1] if d[i + 1] > 0 else math.inf
             for i in range(len(d) - 1)]
        ratios[k] = r
        for got, want in zip(r, expected):
            if not (want * (1.0 - band) <= got <= want * (1.0 + band)):
                certified = False
    return LimitScanReport(
        c_values=cs, components=components, values={k: tuple(v) for k, v in values.items()},
        diffs={k: tuple(v) for k, v in diffs.items()},
        ratios={k: tuple(v) for k, v in ratios.items()},
        expected_ratios=expected, band=band, certified=certified,
        skipped=tuple(skipped),
    )
