"""High-precision golden fixture generation.

Evaluates the closed-form maps, generators and invariants with 30
significant digits (mpmath), rounds to IEEE-754 doubles, and writes the
fixture schema (version "1") consumed by the primary toolkit's
`fixtures check` command.  Provenance of every case is "symbolic".
"""

from __future__ import annotations

import json

from mpmath import mp, mpf, sqrt

RTOL = 1e-12
ATOL = 1e-15


def _f(x) -> float:
    return float(x)


def _state_record(state: dict) -> dict:
    return {k: float(v) for k, v in state.items()}


def _mp_state(state: dict) -> dict:
    return {k: mpf(repr(float(v))) for k, v in state.items()}


def _case(operation, inp, expected):
    return {"operation": operation, "input": inp, "expected": expected,
            "rtol": RTOL, "atol": ATOL, "provenance": "symbolic"}


def _map_1d(st, eps):
    c, rho, v, p, e = st["c"], st["rho"], st["v"], st["p"], st["e"]
    s = (e + p) / (c * c - v * v)
    d1 = eps * p + 1
    d2 = eps * (p + s * v * v) + 1
    rho_s = rho * sqrt(d1 * d1 - v * v / (c * c)) / (d2 * sqrt(1 - v * v / (c * c)))
    e_s = s * (c * c * d1 * d1 - v * v) / (d1 * d2) - p / d1
    return {"rho": _f(rho_s), "v": _f(v / d1), "p": _f(p / d1), "e": _f(e_s)}


def _form_1d(st, eps, dt, dx):
    c, v, p, e = st["c"], st["v"], st["p"], st["e"]
    s = (e + p) / (c * c - v * v)
    return {"dt": _f(-eps * (s * v * dx - (p + s * v * v) * dt) + dt),
            "dx": _f(dx)}


def _map_2d(st, eps):
    c, rho, u, v, p, e = (st["c"], st["rho"], st["u"], st["v"], st["p"],
                          st["e"])
    q2 = u * u + v * v
    s = (e + p) / (c * c - q2)
    d1 = eps * p + 1
    d2 = eps * (p + s * q2) + 1
    delta = 1 - q2 / (c * c * d1 * d1)
    rho_s = rho * c / sqrt(c * c - q2) * sqrt(delta) * d1 / d2
    e_s = (c * c * d1 * (e + p) * delta
           / (d1 * (c * c - q2) + eps * (e + p) * q2) - p / d1)
    return {"rho": _f(rho_s), "u": _f(u / d1), "v": _f(v / d1),
            "p": _f(p / d1), "e": _f(e_s)}


def _frame_2d(st, eps):
    c, u, v, p, e = st["c"], st["u"], st["v"], st["p"], st["e"]
    q2 = u * u + v * v
    s = (e + p) / (c * c - q2)
    xx = 1 + eps * (p + s * v * v)
    yy = 1 + eps * (p + s * u * u)
    xy = -eps * s * u * v
    return {"m": [[_f(xx), _f(xy)], [_f(xy), _f(yy)]],
            "det": _f(xx * yy - xy * xy)}


def _generator_1d(st, dt, dx):
    c, rho, v, p, e = st["c"], st["rho"], st["v"], st["p"], st["e"]
    g2 = 1 / (c * c - v * v)
    return {
        "d_rho": _f(-rho * v * v * e * g2),
        "d_v": _f(-p * v),
        "d_p": _f(-p * p),
        "d_e": _f((c * c * p * p - e * e * v * v) * g2),
        "d_dt": _f(((c * c * p + e * v * v) * dt - v * (e + p) * dx) * g2),
        "d_dx": 0.0,
    }


def _generator_2d(st):
    c, rho, u, v, p, e = (st["c"], st["rho"], st["u"], st["v"], st["p"],
                          st["e"])
    q2 = u * u + v * v
    g2 = 1 / (c * c - q2)
    axx = ((c * c - u * u) * p + e * v * v) * g2
    ayy = ((c * c - v * v) * p + e * u * u) * g2
    axy = -u * v * (e + p) * g2
    return {
        "d_rho": _f(-rho * e * q2 * g2),
        "d_u": _f(-p * u),
        "d_v": _f(-p * v),
        "d_p": _f(-p * p),
        "d_e": _f((c * c * p * p - e * e * q2) * g2),
        "d_frame": [[_f(axx), _f(axy)], [_f(axy), _f(ayy)]],
    }


def _invariants_1d(st, dt, dx):
    c, rho, v, p, e = st["c"], st["rho"], st["v"], st["p"], st["e"]
    j1 = (c * p - v * e) * (c - v) / ((c * p + v * e) * (c + v))
    j2 = rho * p / (c * p + e * v) * sqrt((c - v) / (c + v))
    j3 = (v * (c * p + e * v) * ((c * c * p + e * v * v) * dt
                                 - v * (e + p) * dx)
          / (p * (c - v) * (p * c * c + e * v * v)))
    return {"j1": _f(j1), "j2": _f(j2), "j3": _f(j3)}


def _invariants_2d(st):
    c, rho, u, v, p, e = (st["c"], st["rho"], st["u"], st["v"], st["p"],
                          st["e"])
    q = sqrt(u * u + v * v)
    j3 = (c * p - e * q) * (c - q) / ((c * p + e * q) * (c + q))
    num = rho * (j3 * (c + q) + c - q)
    return {"j1": _f(u / p), "j2": _f(v / p), "j3": _f(j3),
            "j4": _f(num / sqrt(c * c - q * q)),
            "j4_printed": _f(num / (c * c - q * q))}


def emit_fixtures(states: list, epsilons: list) -> dict:
    """Fixture document for a list of flat state records and group parameters.

    1D records carry keys rho, v, p, e, c; 2D records add u.  Every closed
    form, the generators and the invariants are evaluated per state; the
    eps-dependent maps once per (state, eps) pair.
    """
    with mp.workdps(30):
        cases = []
        for raw in states:
            record = _state_record(raw)
            st = _mp_state(raw)
            two_d = "u" in record
            if two_d:
                cases.append(_case("generator_2d", {"state": record},
                                   _generator_2d(st)))
                cases.append(_case("invariants_2d", {"state": record},
                                   _invariants_2d(st)))
            else:
                form = {"dt": 1.0, "dx": 0.0}
                cases.append(_case("generator_1d",
                                   {"state": record, "form": form},
                                   _generator_1d(st, mpf(1), mpf(0))))
                cases.append(_case("invariants_1d",
                                   {"state": record, "form": form},
                                   _invariants_1d(st, mpf(1), mpf(0))))
            for eps_raw in epsilons:
                eps = mpf(repr(float(eps_raw)))
                inp = {"state": record, "eps": float(eps_raw)}
                if two_d:
                    cases.append(_case("transform_state_1param_2d", inp,
                                       _map_2d(st, eps)))
                    cases.append(_case("transform_frame_1param_2d", inp,
                                       _frame_2d(st, eps)))
                else:
                    cases.append(_case("transform_state_1param", inp,
                                       _map_1d(st, eps)))
                    cases.append(_case(
                        "transform_form_1param",
                        dict(inp, form={"dt": 1.0, "dx": 0.0}),
                        _form_1d(st, eps, mpf(1), mpf(0))))
    return {"schema": "1", "cases": cases}


def write_fixtures(path: str, states: list, epsilons: list) -> dict:
    doc = emit_fixtures(states, epsilons)
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")
    return doc
