"""Golden fixture schema (version "1") and its replay runner.

A fixture file is a JSON object {"schema": "1", "cases": [...]} where each
case carries an operation name, an input record, an expected output record,
absolute/relative tolerances and a provenance tag (paper / trivial / derived
/ symbolic).  The runner re-executes each case against the registered
operations and compares every numeric leaf within atol + rtol * |expected|.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from . import lie, reciprocal1d, reciprocal2d
from .core import (Covector1D, FrameMap2D, derived_1d, derived_2d,
                   state_from_dict)

SCHEMA_VERSION = "1"
PROVENANCE_TAGS = ("paper", "trivial", "derived", "symbolic")


def _state(record):
    return state_from_dict(record["state"])


def _params(record):
    d = record["params"]
    return reciprocal1d.ReciprocalParams(float(d["a1"]), float(d["a2"]),
                                         float(d["a3"]), float(d["a4"]))


def _form(record):
    d = record.get("form", {"dt": 1.0, "dx": 0.0})
    return Covector1D(float(d["dt"]), float(d["dx"]))


def _frame(record):
    m = record.get("m")
    if m is None:
        return FrameMap2D.identity()
    return FrameMap2D(float(m[0][0]), float(m[0][1]),
                      float(m[1][0]), float(m[1][1]))


def _frame_out(frame):
    return {"m": [[frame.xx, frame.xy], [frame.yx, frame.yy]],
            "det": frame.det}


def _run_derived_1d(rec):
    st, cn = _state(rec)
    d = derived_1d(st, cn)
    return {"gamma_sq": d.gamma_sq, "s": d.s}


def _run_derived_2d(rec):
    st, cn = _state(rec)
    d = derived_2d(st, cn)
    return {"q_sq": d.q_sq, "gamma": d.gamma, "r": d.r, "s": d.s}


def _run_params_from_epsilon(rec):
    p = reciprocal1d.params_from_epsilon(float(rec["eps"]))
    return {"a1": p.a1, "a2": p.a2, "a3": p.a3, "a4": p.a4}


def _run_state_1p(rec):
    st, cn = _state(rec)
    out = reciprocal1d.transform_state_1param(st, float(rec["eps"]), cn)
    return {"rho": out.rho, "v": out.v, "p": out.p, "e": out.e}


def _run_form_1p(rec):
    st, cn = _state(rec)
    out = reciprocal1d.transform_form_1param(st, float(rec["eps"]), cn, _form(rec))
    return {"dt": out.dt, "dx": out.dx}


def _run_state_4p(rec):
    st, cn = _state(rec)
    out = reciprocal1d.transform_state_4param(st, _params(rec), cn)
    return {"rho": out.rho, "v": out.v, "p": out.p, "e": out.e}


def _run_form_4p(rec):
    st, cn = _state(rec)
    out = reciprocal1d.transform_form_4param(st, _params(rec), cn, _form(rec))
    return {"dt": out.dt, "dx": out.dx}


def _run_state_1p_2d(rec):
    st, cn = _state(rec)
    out = reciprocal2d.transform_state_1param_2d(st, float(rec["eps"]), cn)
    return {"rho": out.rho, "u": out.u, "v": out.v, "p": out.p, "e": out.e}


def _run_frame_1p_2d(rec):
    st, cn = _state(rec)
    return _frame_out(reciprocal2d.transform_frame_1param_2d(
        st, float(rec["eps"]), cn))


def _run_state_4p_2d(rec):
    st, cn = _state(rec)
    out = reciprocal2d.transform_state_4param_2d(st, _params(rec), cn)
    return {"rho": out.rho, "u": out.u, "v": out.v, "p": out.p, "e": out.e}


def _run_frame_4p_2d(rec):
    st, cn = _state(rec)
    return _frame_out(reciprocal2d.transform_frame_4param_2d(
        st, _params(rec), cn, scaled=bool(rec.get("scaled", False))))


def _run_jacobian(rec):
    rep = reciprocal2d.jacobian_condition_2d(_frame(rec))
    return {"det": rep.det, "ok": rep.ok}


def _run_generator_1d(rec):
    st, cn = _state(rec)
    t = lie.generator_1d(lie.ExtendedState1D(st, _form(rec)), cn)
    return {"d_rho": t.d_rho, "d_v": t.d_v, "d_p": t.d_p, "d_e": t.d_e,
            "d_dt": t.d_dt, "d_dx": t.d_dx}


def _run_generator_2d(rec):
    st, cn = _state(rec)
    t = lie.generator_2d(lie.ExtendedState2D(st, _frame(rec)), cn)
    return {"d_rho": t.d_rho, "d_u": t.d_u, "d_v": t.d_v, "d_p": t.d_p,
            "d_e": t.d_e,
            "d_frame": [[t.d_frame.xx, t.d_frame.xy],
                        [t.d_frame.yx, t.d_frame.yy]]}


def _run_invariants_1d(rec):
    st, cn = _state(rec)
    inv = lie.invariants_1d(lie.ExtendedState1D(st, _form(rec)), cn)
    return {"j1": inv.j1, "j2": inv.j2, "j3": inv.j3}


def _run_invariants_2d(rec):
    st, cn = _state(rec)
    inv = lie.invariants_2d(lie.ExtendedState2D(st, _frame(rec)), cn)
    return {"j1": inv.j1, "j2": inv.j2, "j3": inv.j3, "j4": inv.j4,
            "j4_printed": inv.j4_printed}


OPERATIONS = {
    "derived_1d": _run_derived_1d,
    "derived_2d": _run_derived_2d,
    "params_from_epsilon": _run_params_from_epsilon,
    "transform_state_1param": _run_state_1p,
    "transform_form_1param": _run_form_1p,
    "transform_state_4param": _run_state_4p,
    "transform_form_4param": _run_form_4p,
    "transform_state_1param_2d": _run_state_1p_2d,
    "transform_frame_1param_2d": _run_frame_1p_2d,
    "transform_state_4param_2d": _run_state_4p_2d,
    "transform_frame_4param_2d": _run_frame_4p_2d,
    "jacobian_condition_2d": _run_jacobian,
    "generator_1d": _run_generator_1d,
    "generator_2d": _run_generator_2d,
    "invariants_1d": _run_invariants_1d,
    "invariants_2d": _run_invariants_2d,
}


def dumps17(obj, indent: int = 0) -> str:
    """Deterministic JSON with floats at 17 significant digits, fixed order."""
    pad = " " * indent
    if isinstance(obj, dict):
        items = ",\n".join('%s  "%s": %s' % (pad, k, dumps17(v, indent + 2))
                           for k, v in obj.items())
        return "{\n%s\n%s}" % (items, pad)
    if isinstance(obj, (list, tuple)):
        items = ", ".join(dumps17(v, indent) for v in obj)
        return "[%s]" % items
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, float):
        return "%.17g" % obj
    if isinstance(obj, int):
        return str(obj)
    if obj is None:
        return "null"
    return json.dumps(obj)


@dataclass(frozen=True)
class Mismatch:
    case_index: int
    operation: str
    path: str
    expected: float
    got: float
    tolerance: float


@dataclass(frozen=True)
class FixtureOutcome:
    n_cases: int
    mismatches: tuple

    @property
    def ok(self) -> bool:
        return not self.mismatches


def _compare(expected, got, rtol, atol, path, out, idx, op):
    if isinstance(expected, dict):
        for k, v in expected.items():
            if k not in got:
                out.append(Mismatch(idx, op, path + "/" + k, float("nan"),
                                    float("nan"), 0.0))
                continue
            _compare(v, got[k], rtol, atol, path + "/" + k, out, idx, op)
    elif isinstance(expected, (list, tuple)):
        for i, v in enumerate(expected):
            _compare(v, got[i], rtol, atol, "%s[%d]" % (path, i), out, idx, op)
    elif isinstance(expected, bool):
        if bool(got) is not expected:
            out.append(Mismatch(idx, op, path, float(expected), float(got), 0.0))
    else:
        exp = float(expected)
        val = float(got)
        tol = atol + rtol * abs(exp)
        if not abs(val - exp) <= tol:
            out.append(Mismatch(idx, op, path, exp, val, tol))


def validate_fixture(doc: dict):
    """Schema checks; raises ValueError on malformed fixture files."""
    if doc.get("schema") != SCHEMA_VERSION:
        raise ValueError("unsupported fixture schema %r" % (doc.get("schema"),))
    for i, case in enumerate(doc.get("cases", [])):
        op = case.get("operation")
        if op not in OPERATIONS:
            raise ValueError("case %d names unknown operation %r" % (i, op))
        for key in ("input", "expected"):
            if key not in case:
                raise ValueError("case %d lacks %r" % (i, key))
        if not (float(case.get("rtol", 0)) > 0 or float(case.get("atol", 0)) > 0):
            raise ValueError("case %d needs a positive tolerance" % i)
        tag = case.get("provenance")
        if tag is not None and tag not in PROVENANCE_TAGS:
            raise ValueError("case %d has unknown provenance %r" % (i, tag))


def run_fixture_file(path: str) -> FixtureOutcome:
    with open(path) as fh:
        doc = json.load(fh)
    validate_fixture(doc)
    mismatches = []
    cases = doc.get("cases", [])
    for i, case in enumerate(cases):
        got = OPERATIONS[case["operation"]](case["input"])
        _compare(case["expected"], got, float(case.get("rtol", 0.0)),
                 float(case.get("atol", 0.0)), "", mismatches, i,
                 case["operation"])
    return FixtureOutcome(n_cases=len(cases), mismatches=tuple(mismatches))
