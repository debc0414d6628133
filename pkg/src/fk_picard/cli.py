"""Command-line surface: deterministic, machine-readable reports.

Every run is summarized as a Report whose canonical JSON body is a pure
function of the RunConfig (sorted keys, no timestamps; wall-clock
metadata rides in a sidecar that is excluded from the canonical body).

Exit codes: 0 all assertions passed, 1 assertion failure, 2 bad input,
3 budget exhausted. FK_PICARD_THREADS caps the census worker count.
"""

from __future__ import annotations

import argparse
import csv
import datetime
import json
import os
import random
import sys
from dataclasses import dataclass, field as dc_field
from typing import Any, Dict, List, Optional, Sequence

from . import __version__
from .curves import (CurveModel, FactoredCubic, Legendre, QuarticGenus1,
                     ShortW, scalar_mul)
from .errors import BudgetExceededError, InputError
from .field import Field, FieldElement, is_prime
from .families import (FAMILY_B_DEFAULT_PRIMES, TraceReport,
                       family_b_admissible, family_b_check,
                       family_c_admissible, family_c_check, primes_in)
from .kani import (FKData, classify_fk, make_fk_data, neg_phi,
                   random_anti_isometry_matrix, sigma_census, sl2_order,
                   square_degree_witnesses)
from .ledger import RankLedger, ih11_dim, is_extremal, is_picard_maximal, mw_rank
from .pairing import weil_pairing
from . import oracles

EXIT_OK = 0
EXIT_ASSERTION = 1
EXIT_BAD_INPUT = 2
EXIT_BUDGET = 3

COMMANDS = ("pairing-check", "fk-classify", "sigma-census", "square-degrees",
            "family-b", "family-c", "ledger")


def worker_count() -> int:
    raw = os.environ.get("FK_PICARD_THREADS", "1")
    try:
        value = int(raw)
    except ValueError:
        raise InputError(f"FK_PICARD_THREADS must be a positive integer, got {raw!r}")
    if value < 1:
        raise InputError(f"FK_PICARD_THREADS must be positive, got {value}")
    return value


def encode_field_element(e: FieldElement) -> Dict[str, Any]:
    return {"modulus": e.field.p,
            "ext_modulus": list(e.field.ext_modulus),
            "coeffs": list(e.coeffs)}


def parse_curve_spec(spec: str, field: Field) -> CurveModel:
    """legendre:L | shortw:A,B | cubic:c,e1,e2,e3 | quartic:a4,a3,a2,a1,a0"""
    try:
        kind, _, payload = spec.partition(":")
        args = [field.element(int(v)) for v in payload.split(",")] if payload else []
        if kind == "legendre" and len(args) == 1:
            return Legendre(args[0])
        if kind == "shortw" and len(args) == 2:
            return ShortW(*args)
        if kind == "cubic" and len(args) == 4:
            return FactoredCubic(*args)
        if kind == "quartic" and len(args) == 5:
            return QuarticGenus1(*args)
    except ValueError as exc:
        raise InputError(f"bad curve spec {spec!r}: {exc}")
    raise InputError(f"bad curve spec {spec!r}")


@dataclass
class Report:
    command: str
    config: Dict[str, Any]
    items: List[Dict[str, Any]] = dc_field(default_factory=list)
    errors: List[Dict[str, Any]] = dc_field(default_factory=list)

    def summary(self) -> Dict[str, Any]:
        passed = sum(1 for item in self.items if item.get("pass", True))
        failed = sum(1 for item in self.items if not item.get("pass", True))
        return {"items": len(self.items), "passed": passed, "failed": failed,
                "errors": len(self.errors)}

    def body(self) -> Dict[str, Any]:
        return {"command": self.command, "config": self.config,
                "version": __version__, "items": self.items,
                "summary": self.summary(), "errors": self.errors}

    def canonical_json(self) -> str:
        return json.dumps(self.body(), sort_keys=True, separators=(",", ":"))

    def exit_code(self) -> int:
        if any(e.get("kind") == "budget" for e in self.errors):
            return EXIT_BUDGET
        if self.summary()["failed"] > 0 or self.errors:
            return EXIT_ASSERTION
        return EXIT_OK


def _write_outputs(report: Report, json_path: Optional[str],
                   csv_path: Optional[str], fmt: str) -> None:
    if json_path:
        payload = {"report": report.body(),
                   "sidecar": {"generated_at":
                               datetime.datetime.now(datetime.timezone.utc).isoformat()}}
        with open(json_path, "w") as fh:
            json.dump(payload, fh, sort_keys=True, indent=2)
            fh.write("\n")
    if csv_path:
        if report.command not in ("family-b", "family-c"):
            raise InputError("CSV export is only defined for family trace data")
        with open(csv_path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["p", "t", "family", "count_main", "count_q1",
                             "count_q2", "trace_q1", "trace_q2", "checks_passed"])
            for item in report.items:
                writer.writerow([item["p"], item["t"], item["family"],
                                 item["count_main"], item["count_q1"],
                                 item["count_q2"], item["trace_q1"],
                                 item["trace_q2"], item["pass"]])
    if fmt == "text":
        summary = report.summary()
        print(f"{report.command}: {summary['passed']}/{summary['items']} passed, "
              f"{summary['errors']} errors")
        for item in report.items:
            if not item.get("pass", True):
                print(f"  FAIL {json.dumps(item, sort_keys=True)}")
    else:
        print(report.canonical_json())


# ------------------------------------------------------------------
# Command handlers
# ------------------------------------------------------------------

def _cmd_square_degrees(args) -> Report:
    config = {"n_max": args.n_max}
    report = Report("square-degrees", config)
    for n in range(2, args.n_max + 1):
        witnesses = square_degree_witnesses(n)
        item: Dict[str, Any] = {"n": n, "witnesses": [list(w) for w in witnesses]}
        if is_prime(n) and n % 4 == 3:
            item["pass"] = witnesses == []
        report.items.append(item)
    return report


def _cmd_sigma_census(args) -> Report:
    field = Field.prime(args.prime)
    curve = parse_curve_spec(args.curve, field)
    config = {"n": args.n, "prime": args.prime, "curve": args.curve}
    report = Report("sigma-census", config)
    result = sigma_census(curve, args.n, workers=worker_count())
    for verdict in result.verdicts:
        item = {"sigma": [list(r) for r in verdict.sigma.matrix],
                "phi": [list(r) for r in verdict.phi_matrix]}
        if verdict.error is not None:
            item["error"] = verdict.error
            report.errors.append({"kind": "budget", "detail": verdict.error})
        else:
            item["verdict"] = verdict.classification.verdict
            if verdict.classification.is_reducible:
                item["witness_k"] = verdict.classification.k
                item["witness_degree"] = verdict.classification.degree
            if verdict.classification.twist_only:
                item["twist_only"] = [list(x) for x
                                      in verdict.classification.twist_only]
        report.items.append(item)
    report.config["counts"] = {"irreducible": result.irreducible_count,
                               "reducible": result.reducible_count,
                               "errors": result.error_count}
    return report


def _cmd_fk_classify(args) -> Report:
    field = Field.prime(args.prime)
    config = {"n": args.n, "prime": args.prime, "curve": args.curve,
              "curve2": args.curve2 or args.curve, "seed": args.seed,
              "random": args.random}
    report = Report("fk-classify", config)
    curve = parse_curve_spec(args.curve, field)
    curve2 = parse_curve_spec(args.curve2, field) if args.curve2 else curve

    def classify_item(data: FKData) -> Dict[str, Any]:
        cls = classify_fk(data)
        neg = classify_fk(FKData(data.E, data.E_prime, data.n, neg_phi(data.phi)))
        item = {"matrix": [list(r) for r in data.phi.matrix],
                "verdict": cls.verdict,
                "neg_phi_verdict": neg.verdict,
                "pass": cls.verdict == neg.verdict,
                "twist_only": [list(x) for x in cls.twist_only]}
        if cls.is_reducible:
            item["witness_k"] = cls.k
            item["witness_degree"] = cls.degree
            item["codomain_j"] = encode_field_element(cls.codomain_j)
        return item

    if args.random:
        rng = random.Random(args.seed)
        for _ in range(args.random):
            matrix = random_anti_isometry_matrix(rng, args.n)
            data = make_fk_data(curve, curve2, args.n, matrix)
            report.items.append(classify_item(data))
    else:
        entries = [int(v) for v in args.phi.split(",")]
        if len(entries) != 4:
            raise InputError("--phi expects four comma-separated entries")
        matrix = ((entries[0], entries[1]), (entries[2], entries[3]))
        data = make_fk_data(curve, curve2, args.n, matrix)
        report.items.append(classify_item(data))
    return report


def _cmd_pairing_check(args) -> Report:
    from .pairing import make_torsion_basis
    field = Field.prime(args.prime)
    curve = parse_curve_spec(args.curve, field)
    config = {"n": args.n, "prime": args.prime, "curve": args.curve}
    report = Report("pairing-check", config)
    basis = make_torsion_basis(curve, args.n)
    E, n = basis.curve, basis.n
    zeta = basis.zeta
    # exhaustive bilinearity table e([a]P + [b]Q, Q) etc.
    from .curves import _add
    table_ok = True
    for a in range(n):
        for b in range(n):
            R = _add(scalar_mul(a, basis.P, E), scalar_mul(b, basis.Q, E), E)
            if weil_pairing(E, n, R, basis.Q) != zeta ** a:
                table_ok = False
            if weil_pairing(E, n, basis.P, R) != zeta ** b:
                table_ok = False
    report.items.append({"check": "bilinearity_table", "pass": table_ok})
    report.items.append({"check": "alternating",
                         "pass": weil_pairing(E, n, basis.P, basis.P) == E.field.one})
    e_pq = weil_pairing(E, n, basis.P, basis.Q)
    e_qp = weil_pairing(E, n, basis.Q, basis.P)
    report.items.append({"check": "skew_symmetry",
                         "pass": (e_pq * e_qp) == E.field.one})
    primitive = all((zeta ** m) != E.field.one for m in range(1, n)) and (zeta ** n) == E.field.one
    report.items.append({"check": "nondegenerate_primitive_zeta", "pass": primitive})
    count = sum(1 for a in range(n) for b in range(n) for c in range(n)
                for d in range(n) if (a * d - b * c) % n == (n - 1) % n)
    report.items.append({"check": "anti_isometry_count",
                         "count": count, "expected": sl2_order(n),
                         "pass": count == sl2_order(n)})
    report.config["zeta"] = encode_field_element(zeta)
    report.config["torsion_field_degree"] = E.field.k
    return report


def _trace_report_item(rep: TraceReport) -> Dict[str, Any]:
    return {"p": rep.p, "t": rep.t, "family": rep.family,
            "count_main": rep.count_main, "count_q1": rep.count_q1,
            "count_q2": rep.count_q2, "trace_q1": rep.trace_q1,
            "trace_q2": rep.trace_q2,
            "checks": {name: ok for name, ok in rep.checks},
            "observed": {name: val for name, val in rep.observed},
            "pass": rep.checks_passed}


def _parse_primes(args, default: Sequence[int]) -> List[int]:
    if args.primes:
        primes = [int(v) for v in args.primes.split(",")]
        for p in primes:
            if not is_prime(p) or p < 5:
                raise InputError(f"{p} is not an admissible prime")
        return primes
    if getattr(args, "prime_max", None):
        return primes_in(5, args.prime_max)
    return list(default)


def _cmd_family_b(args) -> Report:
    primes = _parse_primes(args, FAMILY_B_DEFAULT_PRIMES)
    t_values = [int(v) for v in args.t_list.split(",")] if args.t_list else None
    config = {"primes": primes, "t_list": t_values}
    report = Report("family-b", config)
    for p in sorted(primes):
        field = Field.prime(p)
        for tv in (t_values if t_values is not None else range(p)):
            t = field.element(tv)
            if not family_b_admissible(t):
                if t_values is not None:
                    report.errors.append(
                        {"kind": "input", "detail": f"t={tv} singular mod {p}"})
                continue
            report.items.append(_trace_report_item(family_b_check(t)))
    return report


def _cmd_family_c(args) -> Report:
    primes = _parse_primes(args, primes_in(5, 200))
    t_values = [int(v) for v in args.t_list.split(",")] if args.t_list else None
    config = {"primes": primes, "t_list": t_values}
    report = Report("family-c", config)
    for p in sorted(primes):
        field = Field.prime(p)
        for tv in (t_values if t_values is not None else range(p)):
            t = field.element(tv)
            if not family_c_admissible(t):
                if t_values is not None:
                    report.errors.append(
                        {"kind": "input", "detail": f"t={tv} degenerate mod {p}"})
                continue
            report.items.append(_trace_report_item(family_c_check(t)))
    return report


def _cmd_ledger(args) -> Report:
    fibers = tuple(int(v) for v in args.fibers.split(",")) if args.fibers else ()
    config = {"h11": args.h11, "rho": args.rho, "fibers": list(fibers),
              "fixed_part": args.fixed_part}
    report = Report("ledger", config)
    ledger = RankLedger(args.h11, args.rho, fibers, args.fixed_part)
    item: Dict[str, Any] = {
        "extremal": is_extremal(ledger),
        "picard_maximal": is_picard_maximal(ledger),
        "ih11_dim": ih11_dim(ledger),
    }
    item["mw_rank"] = mw_rank(ledger)
    report.items.append(item)
    return report


HANDLERS = {
    "square-degrees": _cmd_square_degrees,
    "sigma-census": _cmd_sigma_census,
    "fk-classify": _cmd_fk_classify,
    "pairing-check": _cmd_pairing_check,
    "family-b": _cmd_family_b,
    "family-c": _cmd_family_c,
    "ledger": _cmd_ledger,
}


def build_parser() -> argparse.ArgumentParser:
    output = argparse.ArgumentParser(add_help=False)
    output.add_argument("--json", dest="json_path", help="write full report JSON")
    output.add_argument("--csv", dest="csv_path",
                        help="write family trace data as CSV")
    output.add_argument("--format", choices=("json", "text"), default="json")

    parser = argparse.ArgumentParser(
        prog="fk-picard",
        parents=[output],
        description="Exact finite-field verification of torsion anti-isometry "
                    "classification and split-Jacobian curve families")
    parser.add_argument("--verify-oracles", action="store_true",
                        help="rerun every derived example against its "
                             "brute-force oracle and report")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("square-degrees", parents=[output])
    p.add_argument("--n-max", type=int, default=100)

    p = sub.add_parser("sigma-census", parents=[output])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--curve", required=True)

    p = sub.add_parser("fk-classify", parents=[output])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--curve", required=True)
    p.add_argument("--curve2")
    p.add_argument("--phi", help="four entries a,b,c,d of the matrix mod n")
    p.add_argument("--random", type=int, default=0,
                   help="classify this many random anti-isometries instead")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("pairing-check", parents=[output])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--curve", required=True)

    for name in ("family-b", "family-c"):
        p = sub.add_parser(name, parents=[output])
        p.add_argument("--primes", help="comma-separated primes")
        p.add_argument("--prime-max", type=int)
        p.add_argument("--t-list", help="comma-separated t values")

    p = sub.add_parser("ledger", parents=[output])
    p.add_argument("--h11", type=int, required=True)
    p.add_argument("--rho", type=int, required=True)
    p.add_argument("--fibers", help="comma-separated fiber component counts")
    p.add_argument("--fixed-part", action="store_true")

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_BAD_INPUT if exc.code else EXIT_OK
    try:
        if args.verify_oracles:
            report = oracles.run_oracle_battery()
        else:
            if not args.command:
                parser.print_usage()
                return EXIT_BAD_INPUT
            if args.command == "fk-classify" and not args.random and not args.phi:
                raise InputError("fk-classify needs --phi or --random")
            report = HANDLERS[args.command](args)
        _write_outputs(report, args.json_path, args.csv_path, args.format)
        return report.exit_code()
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
