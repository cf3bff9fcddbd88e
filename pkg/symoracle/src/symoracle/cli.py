"""Standalone command line: run the symbolic verification suite or emit
golden fixtures to a target path."""

from __future__ import annotations

import argparse
import json
import sys

from .emit import write_fixtures
from .identities import (annihilation_reports, derive_generators,
                         verify_invariance_1d, verify_invariance_2d)

DEFAULT_STATES = [
    {"rho": 1.0, "v": 0.5, "p": 1.0, "e": 3.0, "c": 1.0},
    {"rho": 1.0, "u": 0.3, "v": 0.4, "p": 1.0, "e": 3.0, "c": 1.0},
    {"rho": 1.5, "v": -0.35, "p": 0.8, "e": 2.2, "c": 1.0},
    {"rho": 0.7, "u": -0.2, "v": 0.1, "p": 1.2, "e": 1.8, "c": 2.0},
]
DEFAULT_EPSILONS = [0.05, 0.1, -0.05]


def _print_report(report):
    print("[%s] %s" % (report.status.upper(), report.claim))
    if report.residual is not None:
        print("    residual: %s" % report.residual)
    if report.residual_sample is not None:
        print("    sample value: %.6g" % report.residual_sample)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="symoracle",
        description="Symbolic verification of the reciprocal-invariance "
                    "claims; golden fixture generator.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run all symbolic identity checks")
    p.add_argument("--expect-misprints", action="store_true",
                   help="also run the misprinted variants (slower)")

    p = sub.add_parser("emit", help="write golden fixtures")
    p.add_argument("path")
    p.add_argument("--states", help="JSON list of flat state records")
    p.add_argument("--epsilons", default=",".join(str(e) for e in
                                                  DEFAULT_EPSILONS))

    args = parser.parse_args(argv)
    if args.command == "verify":
        reports = [verify_invariance_1d(), verify_invariance_2d()]
        gen_report, _ = derive_generators()
        reports.append(gen_report)
        reports.extend(annihilation_reports())
        if args.expect_misprints:
            reports.append(verify_invariance_1d("printed"))
            reports.append(verify_invariance_2d("eq12"))
        failures = 0
        for report in reports:
            _print_report(report)
            expected_nonzero = ("printed" in report.claim
                                or "eq12" in report.claim
                                or "J4_printed" in report.claim)
            if report.ok == expected_nonzero:
                failures += 1
        return 1 if failures else 0

    states = (json.loads(args.states) if args.states else DEFAULT_STATES)
    epsilons = [float(tok) for tok in args.epsilons.split(",") if tok]
    doc = write_fixtures(args.path, states, epsilons)
    print("wrote %d cases to %s" % (len(doc["cases"]), args.path))
    return 0


if __name__ == "__main__":
    sys.exit(main())
