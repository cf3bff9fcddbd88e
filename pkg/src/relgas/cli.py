"""Command line front end.

Every operation of the toolkit is reachable through a subcommand; results are
printed as the fixture schema (version "1") on standard output so any run can
be frozen directly into a golden file.  Numeric output uses 17 significant
digits and a fixed field order, making identical invocations byte-identical.

Exit codes: 0 success, 1 numerical-domain error, 2 usage error,
3 fixture mismatch.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import fields, fixtures, lie, reciprocal1d, reciprocal2d
from .core import (Covector1D, FrameMap2D, GasState1D, GasState2D,
                   ModelConstants, state_from_dict, state_to_dict)
from .errors import DomainError


class UsageError(Exception):
    pass


def _parse_state(text: str, dim: int):
    if text.startswith("@"):
        with open(text[1:]) as fh:
            text = fh.read()
    try:
        record = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError("malformed state JSON: %s" % exc) from exc
    try:
        state, constants = state_from_dict(record)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError("bad state record: %s" % exc) from exc
    if dim == 1 and not isinstance(state, GasState1D):
        raise UsageError("expected a 1D state (rho, v, p, e)")
    if dim == 2 and not isinstance(state, GasState2D):
        raise UsageError("expected a 2D state (rho, u, v, p, e)")
    return state, constants


def _parse_floats(text: str, n: int, what: str):
    parts = text.split(",")
    if len(parts) != n:
        raise UsageError("%s needs %d comma-separated values" % (what, n))
    try:
        return [float(p) for p in parts]
    except ValueError as exc:
        raise UsageError("%s: %s" % (what, exc)) from exc


def _parse_profile(text: str) -> fields.Profile:
    """kind:mean[,amplitude[,wavenumber[,phase]]] e.g. sine:0.5,0.05,1"""
    if ":" not in text:
        raise UsageError("profile must look like kind:mean,amplitude,...")
    kind, _, rest = text.partition(":")
    vals = [float(p) for p in rest.split(",") if p]
    pad = vals + [0.0, 0.0, 1.0, 0.0][len(vals):]
    return fields.Profile(kind=kind, mean=pad[0], amplitude=pad[1],
                          wavenumber=pad[2], phase=pad[3])


def _emit(cases, fmt: str):
    doc = {"schema": fixtures.SCHEMA_VERSION, "cases": cases}
    if fmt == "json":
        print(fixtures.dumps17(doc))
        return
    for case in cases:
        print("operation: %s" % case["operation"])
        for section in ("input", "output"):
            for line in _flatten(case[section], section):
                print("  " + line)


def _flatten(obj, prefix):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _flatten(v, "%s.%s" % (prefix, k))
    elif isinstance(obj, (list, tuple)):
        for i, v in enumerate(obj):
            yield from _flatten(v, "%s[%d]" % (prefix, i))
    elif isinstance(obj, bool):
        yield "%s = %s" % (prefix, obj)
    elif isinstance(obj, float):
        yield "%s = %.17g" % (prefix, obj)
    else:
        yield "%s = %s" % (prefix, obj)


def _case(operation, inp, out):
    return {"operation": operation, "input": inp, "output": out}


# --- subcommand handlers -----------------------------------------------------


def _cmd_transform1d(args):
    state, constants = _parse_state(args.state, dim=1)
    cases = []
    if args.four_param:
        a = _parse_floats(args.four_param, 4, "--four-param")
        params = reciprocal1d.ReciprocalParams(*a)
        out = reciprocal1d.transform_state_4param(state, params, constants)
        inp = {"state": state_to_dict(state, constants),
               "params": {"a1": a[0], "a2": a[1], "a3": a[2], "a4": a[3]}}
        cases.append(_case("transform_state_4param", inp,
                           {"rho": out.rho, "v": out.v, "p": out.p, "e": out.e}))
        if args.form:
            dt, dx = _parse_floats(args.form, 2, "--form")
            fo = reciprocal1d.transform_form_4param(state, params, constants,
                                                    Covector1D(dt, dx))
            cases.append(_case("transform_form_4param",
                               dict(inp, form={"dt": dt, "dx": dx}),
                               {"dt": fo.dt, "dx": fo.dx}))
    else:
        out = reciprocal1d.transform_state_1param(state, args.eps, constants)
        inp = {"state": state_to_dict(state, constants), "eps": args.eps}
        cases.append(_case("transform_state_1param", inp,
                           {"rho": out.rho, "v": out.v, "p": out.p, "e": out.e}))
        if args.form:
            dt, dx = _parse_floats(args.form, 2, "--form")
            fo = reciprocal1d.transform_form_1param(state, args.eps, constants,
                                                    Covector1D(dt, dx))
            cases.append(_case("transform_form_1param",
                               dict(inp, form={"dt": dt, "dx": dx}),
                               {"dt": fo.dt, "dx": fo.dx}))
    _emit(cases, args.format)
    return 0


def _cmd_transform2d(args):
    state, constants = _parse_state(args.state, dim=2)
    cases = []
    if args.four_param:
        a = _parse_floats(args.four_param, 4, "--four-param")
        params = reciprocal1d.ReciprocalParams(*a)
        out = reciprocal2d.transform_state_4param_2d(state, params, constants)
        inp = {"state": state_to_dict(state, constants),
               "params": {"a1": a[0], "a2": a[1], "a3": a[2], "a4": a[3]},
               "scaled": bool(args.scaled)}
        cases.append(_case("transform_state_4param_2d", inp,
                           {"rho": out.rho, "u": out.u, "v": out.v,
                            "p": out.p, "e": out.e}))
        if args.frame:
            fr = reciprocal2d.transform_frame_4param_2d(state, params, constants,
                                                        scaled=args.scaled)
            cases.append(_case("transform_frame_4param_2d", inp,
                               {"m": [[fr.xx, fr.xy], [fr.yx, fr.yy]],
                                "det": fr.det}))
    else:
        out = reciprocal2d.transform_state_1param_2d(state, args.eps, constants)
        inp = {"state": state_to_dict(state, constants), "eps": args.eps}
        cases.append(_case("transform_state_1param_2d", inp,
                           {"rho": out.rho, "u": out.u, "v": out.v,
                            "p": out.p, "e": out.e}))
        if args.frame:
            fr = reciprocal2d.transform_frame_1param_2d(state, args.eps, constants)
            cases.append(_case("transform_frame_1param_2d", inp,
                               {"m": [[fr.xx, fr.xy], [fr.yx, fr.yy]],
                                "det": fr.det}))
    _emit(cases, args.format)
    return 0


def _cmd_flow(args):
    settings = lie.FlowSettings(
        method="adaptive" if args.adaptive else "rk4",
        step_count=args.steps, tolerance=args.tol)
    if args.dim == 1:
        state, constants = _parse_state(args.state, dim=1)
        dt, dx = _parse_floats(args.form, 2, "--form")
        ext = lie.ExtendedState1D(state, Covector1D(dt, dx))
        res = lie.flow_1d(ext, args.eps, settings, constants)
        end = res.endpoint
        out = {"rho": end.state.rho, "v": end.state.v, "p": end.state.p,
               "e": end.state.e, "dt": end.form.dt, "dx": end.form.dx,
               "error_estimate": res.error_estimate, "steps": res.steps}
        inp = {"state": state_to_dict(state, constants), "eps": args.eps,
               "form": {"dt": dt, "dx": dx}, "method": settings.method}
        _emit([_case("flow_1d", inp, out)], args.format)
    else:
        state, constants = _parse_state(args.state, dim=2)
        ext = lie.ExtendedState2D(state, FrameMap2D.identity())
        res = lie.flow_2d(ext, args.eps, settings, constants)
        end = res.endpoint
        fr = end.frame
        out = {"rho": end.state.rho, "u": end.state.u, "v": end.state.v,
               "p": end.state.p, "e": end.state.e,
               "m": [[fr.xx, fr.xy], [fr.yx, fr.yy]],
               "error_estimate": res.error_estimate, "steps": res.steps}
        inp = {"state": state_to_dict(state, constants), "eps": args.eps,
               "method": settings.method}
        _emit([_case("flow_2d", inp, out)], args.format)
    return 0


def _cmd_invariants(args):
    cases = []
    if args.dim == 1:
        state, constants = _parse_state(args.state, dim=1)
        dt, dx = _parse_floats(args.form, 2, "--form")
        ext = lie.ExtendedState1D(state, Covector1D(dt, dx))
        inv = lie.invariants_1d(ext, constants)
        inp = {"state": state_to_dict(state, constants),
               "form": {"dt": dt, "dx": dx}}
        cases.append(_case("invariants_1d", inp,
                           {"j1": inv.j1, "j2": inv.j2, "j3": inv.j3}))
        names = ("J1", "J2", "J3")
    else:
        state, constants = _parse_state(args.state, dim=2)
        ext = lie.ExtendedState2D(state, FrameMap2D.identity())
        inv = lie.invariants_2d(ext, constants)
        inp = {"state": state_to_dict(state, constants)}
        cases.append(_case("invariants_2d", inp,
                           {"j1": inv.j1, "j2": inv.j2, "j3": inv.j3,
                            "j4": inv.j4, "j4_printed": inv.j4_printed}))
        names = ("J1", "J2", "J3", "J4", "J4_printed")
    if args.check_annihilation:
        residuals = {name.lower(): lie.check_annihilation(name, ext,
                                                          args.fd_step, constants)
                     for name in names}
        cases.append(_case("check_annihilation",
                           dict(inp, fd_step=args.fd_step), residuals))
    _emit(cases, args.format)
    return 0


def _cmd_limit_scan(args):
    state, constants = _parse_state(args.state, dim=None)
    cs = [float(v) for v in args.c_values.split(",") if v]
    if len(cs) < 1:
        raise UsageError("--c-values needs at least one value")
    report = lie.limit_scan_c(state, args.eps, cs, band=args.band)
    out = {
        "c_values": list(report.c_values),
        "components": list(report.components),
        "diffs": {k: list(v) for k, v in report.diffs.items()},
        "ratios": {k: list(v) for k, v in report.ratios.items()},
        "expected_ratios": list(report.expected_ratios),
        "skipped": list(report.skipped),
        "certified": report.certified,
    }
    inp = {"state": state_to_dict(state, constants), "eps": args.eps,
           "band": args.band}
    _emit([_case("limit_scan_c", inp, out)], args.format)
    return 0


def _spec_1d(args, nx=None, nt=None):
    return fields.ManufactureSpec1D(
        velocity=_parse_profile(args.velocity),
        pressure=_parse_profile(args.pressure),
        mass_flux=args.mass_flux, momentum_flux=args.momentum_flux,
        wave_speed=args.wave_speed, nx=nx or args.nx, nt=nt or args.nt)


def _spec_2d(args, nx=None, ny=None):
    return fields.ManufactureSpec2D(
        velocity=_parse_profile(args.velocity),
        enthalpy_flux=args.enthalpy_flux, normal_flux=args.normal_flux,
        mass_flux=args.mass_flux, nx=nx or args.nx, ny=ny or args.ny)


def _cmd_manufacture(args):
    constants = ModelConstants(c=args.c)
    if args.dim == 1:
        grid = fields.manufacture_steady_1d(_spec_1d(args), constants)
    else:
        grid = fields.manufacture_aligned_2d(_spec_2d(args), constants)
    fields.save_grid(grid, args.out)
    out = {"path": args.out, "nx": grid.nx,
           "nt" if args.dim == 1 else "ny": grid.nt if args.dim == 1 else grid.ny}
    _emit([_case("manufacture", {"dim": args.dim, "c": args.c}, out)], args.format)
    return 0


def _report_dict(report):
    return {"l2": list(report.l2), "max": list(report.max),
            "spacing": list(report.spacing)}


def _cmd_verify_field(args):
    constants = ModelConstants(c=args.c)
    grid = fields.load_grid(args.grid)
    if isinstance(grid, fields.FieldGrid1D):
        res = fields.transform_field_1d(grid, args.eps, constants,
                                        closedness_tol=args.closedness_tol)
        coords = {"loop_defect": res.coordinates.loop_defect,
                  "path_difference": res.coordinates.path_difference}
        op = "transform_field_1d"
    else:
        res = fields.transform_field_2d(grid, args.eps, constants,
                                        closedness_tol=args.closedness_tol)
        coords = {"loop_defect_x": res.coordinates.loop_defect_x,
                  "loop_defect_y": res.coordinates.loop_defect_y,
                  "path_difference_x": res.coordinates.path_difference_x,
                  "path_difference_y": res.coordinates.path_difference_y}
        op = "transform_field_2d"
    if args.out:
        fields.save_grid(res.grid, args.out)
    out = {"starred_residuals": _report_dict(res.report), "coordinates": coords}
    inp = {"grid": args.grid, "eps": args.eps, "c": args.c}
    _emit([_case(op, inp, out)], args.format)
    return 0


def _cmd_convergence(args):
    constants = ModelConstants(c=args.c)
    resolutions = [int(v) for v in args.resolutions.split(",") if v]
    if args.dim == 1:
        producer = lambda n: fields.manufacture_steady_1d(
            _spec_1d(args, nx=n, nt=n), constants)
    else:
        producer = lambda n: fields.manufacture_aligned_2d(
            _spec_2d(args, nx=n, ny=n), constants)
    rep = fields.convergence_study(producer, resolutions, args.eps, constants)
    out = {"resolutions": list(rep.resolutions),
           "spacings": list(rep.spacings),
           "l2": [list(row) for row in rep.l2],
           "orders": [o if o is not None else "n/a" for o in rep.orders]}
    _emit([_case("convergence_study", {"dim": args.dim, "eps": args.eps}, out)],
          args.format)
    return 0


def _cmd_fixtures(args):
    if args.action != "check":
        raise UsageError("unknown fixtures action %r" % (args.action,))
    try:
        outcome = fixtures.run_fixture_file(args.path)
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        raise UsageError("cannot run fixture file: %s" % exc) from exc
    out = {"cases": outcome.n_cases,
           "mismatches": [
               {"case": m.case_index, "operation": m.operation, "path": m.path,
                "expected": m.expected, "got": m.got, "tolerance": m.tolerance}
               for m in outcome.mismatches],
           "ok": outcome.ok}
    _emit([_case("fixtures_check", {"path": args.path}, out)], args.format)
    return 0 if outcome.ok else 3


# --- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="relgas",
        description="Reciprocal transformations of relativistic gasdynamics: "
                    "closed-form maps, Lie-group flows, invariants, and "
                    "field-level verification.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_format(p):
        p.add_argument("--format", choices=("json", "table"), default="json")

    p = sub.add_parser("transform1d", help="1D state/covector maps")
    p.add_argument("--eps", type=float, default=0.0)
    p.add_argument("--state", required=True)
    p.add_argument("--form", help="dt,dx covector components")
    p.add_argument("--four-param", help="a1,a2,a3,a4 (overrides --eps)")
    add_format(p)
    p.set_defaults(handler=_cmd_transform1d)

    p = sub.add_parser("transform2d", help="2D state/frame maps")
    p.add_argument("--eps", type=float, default=0.0)
    p.add_argument("--state", required=True)
    p.add_argument("--frame", action="store_true", help="include the frame map")
    p.add_argument("--four-param", help="a1,a2,a3,a4 (overrides --eps)")
    p.add_argument("--scaled", action="store_true",
                   help="apply the 1/a1 scaling to 4-parameter frames")
    add_format(p)
    p.set_defaults(handler=_cmd_transform2d)

    p = sub.add_parser("flow", help="integrate the generator flow")
    p.add_argument("--dim", type=int, choices=(1, 2), required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--state", required=True)
    p.add_argument("--form", default="1,0")
    p.add_argument("--steps", type=int, default=256)
    p.add_argument("--adaptive", action="store_true")
    p.add_argument("--tol", type=float, default=1e-10)
    add_format(p)
    p.set_defaults(handler=_cmd_flow)

    p = sub.add_parser("invariants", help="evaluate invariants")
    p.add_argument("--dim", type=int, choices=(1, 2), required=True)
    p.add_argument("--state", required=True)
    p.add_argument("--form", default="1,0")
    p.add_argument("--check-annihilation", action="store_true")
    p.add_argument("--fd-step", type=float, default=1e-5)
    add_format(p)
    p.set_defaults(handler=_cmd_invariants)

    p = sub.add_parser("limit-scan", help="c -> infinity convergence scan")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--state", required=True)
    p.add_argument("--c-values", required=True)
    p.add_argument("--band", type=float, default=0.2)
    add_format(p)
    p.set_defaults(handler=_cmd_limit_scan)

    def add_manufacture_flags(p, with_out):
        p.add_argument("--dim", type=int, choices=(1, 2), required=True)
        p.add_argument("--c", type=float, default=1.0)
        p.add_argument("--velocity", default="sine:0.5,0.05,1")
        p.add_argument("--pressure", default="constant:1")
        p.add_argument("--mass-flux", type=float, default=1.0)
        p.add_argument("--momentum-flux", type=float, default=7.0 / 3.0)
        p.add_argument("--wave-speed", type=float, default=0.0)
        p.add_argument("--enthalpy-flux", type=float, default=2.0)
        p.add_argument("--normal-flux", type=float, default=2.5)
        p.add_argument("--nx", type=int, default=64)
        p.add_argument("--nt", type=int, default=64)
        p.add_argument("--ny", type=int, default=64)
        if with_out:
            p.add_argument("--out", required=True)

    p = sub.add_parser("manufacture", help="write an exact solution grid")
    add_manufacture_flags(p, with_out=True)
    add_format(p)
    p.set_defaults(handler=_cmd_manufacture)

    p = sub.add_parser("verify-field", help="transform a grid and report "
                                            "starred residuals")
    p.add_argument("--grid", required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--closedness-tol", type=float, default=1e-4)
    p.add_argument("--out", help="write the starred grid CSV here")
    add_format(p)
    p.set_defaults(handler=_cmd_verify_field)

    p = sub.add_parser("convergence", help="transform a manufactured family "
                                           "and fit residual orders")
    add_manufacture_flags(p, with_out=False)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--resolutions", default="128,256,512")
    add_format(p)
    p.set_defaults(handler=_cmd_convergence)

    p = sub.add_parser("fixtures", help="golden fixture operations")
    p.add_argument("action", choices=("check",))
    p.add_argument("path")
    add_format(p)
    p.set_defaults(handler=_cmd_fixtures)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except UsageError as exc:
        print("usage error: %s" % exc, file=sys.stderr)
        return 2
    except DomainError as exc:
        print("domain error: %s" % exc, file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        # bad paths, malformed grids, invalid option combinations
        print("usage error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
