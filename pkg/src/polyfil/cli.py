"""Command-line interface.

Commands: gauss, theta, sums, rho, rotation, verify, simulate.  Output is
JSON on stdout (CSV available for verify), carrying a reproducibility
manifest; bulk field data from simulate goes to CSV sidecar files whose
manifest lives in the accompanying summary JSON.

Exit codes: 0 all checks passed, 1 verification failure, 2 usage error,
3 numerical abort (blow-up).
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import random
import sys
from datetime import datetime, timezone
from math import comb, gcd

from . import __version__
from .errors import BlowUp, NotCoprime, PolyfilError
from .gauss import (
    GaussSumValue,
    VANISHING_RELATIVE_TOL,
    max_phase_defect,
    gauss_sum,
    quadratic_phase,
    theta_sequence,
)
from .rotor import (
    axis_angle_of,
    certify_rotation_angle,
    inter_side_angle,
    rotation_product,
    trace_identity_eval,
)
from .sums import DEFAULT_TERM_BUDGET, sum_report, verify_sum_identities
from .vfe import (
    SimulationConfig,
    analyze_polygon,
    evolve,
    initial_tangent,
    reconstruct_curve,
    rms_distance,
    vertical_drift_rate,
)

# Pinned verification tolerances (also recorded in every manifest).
TOL_SUMS_PER_TERM = 1e-8
TOL_VANISHING = VANISHING_RELATIVE_TOL
TOL_PHASE_MODEL = 1e-8
TOL_ROTATION_ANGLE = 1e-9
MIN_FALSIFICATION_MARGIN = 1e-4
TOL_TRACE_IDENTITY = 1e-10
DEFAULT_SIMULATE_TOL = 0.10

_LEMMA3_SEED = 24601

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_USAGE = 2
EXIT_BLOWUP = 3


def _timestamp() -> str:
    return datetime.now(timezone.utc).isoformat()


def _manifest(command: str, parameters: dict, tolerances: dict) -> dict:
    return {
        "command": command,
        "parameters": parameters,
        "tool_version": __version__,
        "timestamp": _timestamp(),
        "tolerances": tolerances,
    }


def _emit(payload: dict, stream=None) -> None:
    json.dump(payload, stream or sys.stdout, indent=2)
    print(file=stream or sys.stdout)


def _usage_error(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return EXIT_USAGE


def _complex_json(z: complex) -> dict:
    return {"re": z.real, "im": z.imag}


def _entry_json(n: int, entry: GaussSumValue) -> dict:
    return {
        "n": n,
        "re": entry.value.real,
        "im": entry.value.imag,
        "modulus": entry.modulus,
        "arg": entry.argument,
        "vanishing": entry.vanishing,
    }


def _coprime_pairs(q_max: int):
    for q in range(1, q_max + 1):
        for p in range(1, q + 1):
            if gcd(p, q) == 1:
                yield p, q


# ---------------------------------------------------------------- commands


def _emit_theta_table(command: str, p: int, q: int) -> int:
    try:
        theta = theta_sequence(p, q)
    except (NotCoprime, ValueError) as exc:
        return _usage_error(str(exc))
    payload = {
        "manifest": _manifest(
            command, {"p": p, "q": q}, {"vanishing_rel": TOL_VANISHING}
        ),
        "p": p,
        "q": q,
        "entries": [_entry_json(n, e) for n, e in enumerate(theta.entries)],
    }
    _emit(payload)
    return EXIT_OK


def cmd_gauss(args) -> int:
    if args.n is None:
        return _emit_theta_table("gauss", args.p, args.q)
    try:
        entry = gauss_sum(args.p, args.q, args.n)
    except (NotCoprime, ValueError) as exc:
        return _usage_error(str(exc))
    payload = {
        "manifest": _manifest(
            "gauss",
            {"p": args.p, "q": args.q, "n": args.n},
            {"vanishing_rel": TOL_VANISHING},
        ),
        **_entry_json(args.n, entry),
    }
    _emit(payload)
    return EXIT_OK


def cmd_theta(args) -> int:
    return _emit_theta_table("theta", args.p, args.q)


def cmd_sums(args) -> int:
    try:
        if args.k is not None:
            reports = [sum_report(args.p, args.q, args.k)]
        else:
            reports = verify_sum_identities(
                args.p, args.q, k_max=args.k_max, budget=args.budget
            )
    except PolyfilError as exc:
        return _usage_error(str(exc))
    payload = {
        "manifest": _manifest(
            "sums",
            {"p": args.p, "q": args.q, "k": args.k, "k_max": args.k_max,
             "budget": args.budget},
            {"per_term": TOL_SUMS_PER_TERM},
        ),
        "reports": [
            {
                "p": r.p, "q": r.q, "k": r.k,
                "t_value": r.t_value,
                "e_value": _complex_json(r.e_value),
                "term_count": r.term_count,
                "residual": r.residual,
                "passed": r.residual <= TOL_SUMS_PER_TERM * max(1, r.term_count),
            }
            for r in reports
        ],
    }
    _emit(payload)
    ok = all(r.residual <= TOL_SUMS_PER_TERM * max(1, r.term_count) for r in reports)
    return EXIT_OK if ok else EXIT_VERIFICATION_FAILED


def cmd_rho(args) -> int:
    try:
        rho = inter_side_angle(args.M, args.q)
    except ValueError as exc:
        return _usage_error(str(exc))
    payload = {
        "manifest": _manifest("rho", {"M": args.M, "q": args.q}, {}),
        "M": args.M,
        "q": args.q,
        "rho": float(f"{rho:.12g}"),
    }
    _emit(payload)
    return EXIT_OK


def cmd_rotation(args) -> int:
    try:
        cert = certify_rotation_angle(args.M, args.p, args.q)
        matrix = rotation_product(theta_sequence(args.p, args.q), cert.rho)
    except (PolyfilError, ValueError) as exc:
        return _usage_error(str(exc))
    aa = axis_angle_of(matrix)
    payload = {
        "manifest": _manifest(
            "rotation",
            {"M": args.M, "p": args.p, "q": args.q},
            {"angle": TOL_ROTATION_ANGLE},
        ),
        "M": args.M,
        "p": args.p,
        "q": args.q,
        "rho": cert.rho,
        "matrix": [list(row) for row in matrix],
        "axis": list(aa.axis) if aa.axis is not None and aa.axis_stable else None,
        "angle": cert.angle,
        "angle_error": cert.angle_error,
        "falsification_margin": cert.falsification_margin,
    }
    _emit(payload)
    return EXIT_OK


# ------------------------------------------------------------ verify suites


def _outcome(
    case_id: str, passed: bool, residual: float | None, skipped: bool = False
) -> dict:
    return {
        "case_id": case_id,
        "passed": bool(passed) and not skipped,
        "residual": residual,  # None for skipped cases (JSON null)
        "budget_skipped": skipped,
    }


def _suite_vanishing(q_max: int, budget: int) -> list[dict]:
    outcomes = []
    for p, q in _coprime_pairs(q_max):
        theta = theta_sequence(p, q)
        expected_modulus = math.sqrt(q) if q % 2 == 1 else math.sqrt(2 * q)
        tol = TOL_VANISHING * max(1.0, math.sqrt(q))
        residual = 0.0
        pattern_ok = True
        for n, entry in enumerate(theta.entries):
            should_vanish = (2 * n + 2 - q) % 4 == 0
            if entry.vanishing != should_vanish:
                pattern_ok = False
            if should_vanish:
                residual = max(residual, entry.modulus)
            else:
                residual = max(residual, abs(entry.modulus - expected_modulus))
        outcomes.append(
            _outcome(f"vanishing/p={p}/q={q}", pattern_ok and residual <= tol, residual)
        )
    return outcomes


def _suite_lemma4(q_max: int, budget: int) -> list[dict]:
    outcomes = []
    for p, q in _coprime_pairs(q_max):
        defect = max_phase_defect(p, q)
        outcomes.append(
            _outcome(f"lemma4/p={p}/q={q}", defect <= TOL_PHASE_MODEL, defect)
        )
    return outcomes


def _suite_sums(q_max: int, budget: int) -> list[dict]:
    outcomes = []
    for p, q in _coprime_pairs(q_max):
        if q < 2:
            continue
        theta = None
        phase = None
        adm_count = sum(1 for n in range(q) if (2 * n + 2 - q) % 4 != 0)
        spent = 0
        for k in range(1, q // 2 + 1):
            case_id = f"sums/p={p}/q={q}/k={k}"
            cost = comb(adm_count, 2 * k)
            if spent + cost > budget:
                outcomes.append(_outcome(case_id, False, None, skipped=True))
                continue
            spent += cost
            if theta is None:
                theta = theta_sequence(p, q)
                phase = quadratic_phase(p, q)
            report = sum_report(p, q, k, theta=theta, phase=phase)
            tol = TOL_SUMS_PER_TERM * max(1, report.term_count)
            outcomes.append(_outcome(case_id, report.residual <= tol, report.residual))
    return outcomes


def _suite_theorem2(q_max: int, m_max: int, budget: int) -> list[dict]:
    outcomes = []
    for p, q in _coprime_pairs(q_max):
        for M in range(3, m_max + 1):
            cert = certify_rotation_angle(M, p, q)
            ok = (
                cert.angle_error <= TOL_ROTATION_ANGLE
                and cert.falsification_margin > MIN_FALSIFICATION_MARGIN
            )
            outcomes.append(
                _outcome(f"theorem2/M={M}/p={p}/q={q}", ok, cert.angle_error)
            )
    return outcomes


def _suite_lemma3(budget: int) -> list[dict]:
    rng = random.Random(_LEMMA3_SEED)
    outcomes = []
    # sign anchor: two opposite in-plane vectors at x = 1 must give 2
    anchor = trace_identity_eval(1.0, [0.0, math.pi])
    outcomes.append(
        _outcome(
            "lemma3/anchor-opposite-pair",
            abs(anchor.lhs - 2.0) <= 1e-12 and abs(anchor.rhs - 2.0) <= 1e-12,
            max(abs(anchor.lhs - 2.0), abs(anchor.rhs - 2.0)),
        )
    )
    for i in range(100):
        n = rng.randint(1, 8)
        x = rng.uniform(-2.0, 2.0)
        phis = [rng.uniform(0.0, 2.0 * math.pi) for _ in range(n)]
        result = trace_identity_eval(x, phis)
        tol = TOL_TRACE_IDENTITY * (1.0 + abs(x)) ** n
        residual = abs(result.lhs - result.rhs)
        outcomes.append(_outcome(f"lemma3/random-{i:03d}", residual <= tol, residual))
    return outcomes


def cmd_verify(args) -> int:
    suites = {
        "sums": lambda: _suite_sums(args.q_max, args.budget),
        "theorem2": lambda: _suite_theorem2(args.q_max, args.m_max, args.budget),
        "lemma3": lambda: _suite_lemma3(args.budget),
        "lemma4": lambda: _suite_lemma4(args.q_max, args.budget),
        "vanishing": lambda: _suite_vanishing(args.q_max, args.budget),
    }
    selected = list(suites) if args.suite == "all" else [args.suite]
    outcomes: list[dict] = []
    for name in selected:
        outcomes.extend(suites[name]())
    outcomes.sort(key=lambda o: o["case_id"])

    n_failed = sum(1 for o in outcomes if not o["passed"] and not o["budget_skipped"])
    n_skipped = sum(1 for o in outcomes if o["budget_skipped"])
    manifest = _manifest(
        "verify",
        {"suite": args.suite, "q_max": args.q_max, "m_max": args.m_max,
         "budget": args.budget},
        {
            "sums_per_term": TOL_SUMS_PER_TERM,
            "vanishing_rel": TOL_VANISHING,
            "phase_model": TOL_PHASE_MODEL,
            "rotation_angle": TOL_ROTATION_ANGLE,
            "falsification_margin_min": MIN_FALSIFICATION_MARGIN,
            "trace_identity": TOL_TRACE_IDENTITY,
        },
    )
    if args.format == "csv":
        writer = csv.writer(sys.stdout)
        print(f"# manifest: {json.dumps(manifest)}")
        writer.writerow(["case_id", "passed", "residual", "budget_skipped"])
        for o in outcomes:
            writer.writerow([o["case_id"], o["passed"], o["residual"], o["budget_skipped"]])
    else:
        _emit({
            "manifest": manifest,
            "total": len(outcomes),
            "failed": n_failed,
            "skipped": n_skipped,
            "outcomes": outcomes,
        })
    return EXIT_OK if n_failed == 0 else EXIT_VERIFICATION_FAILED


# ---------------------------------------------------------------- simulate


def cmd_simulate(args) -> int:
    try:
        config = SimulationConfig(
            M=args.M, p=args.p, q=args.q,
            grid_points=args.grid, dt_factor=args.dt_factor,
        )
    except (ValueError, PolyfilError) as exc:
        return _usage_error(str(exc))

    start = initial_tangent(config.M, config.grid_points)
    try:
        evolved = evolve(start, config.rational_time, config)
    except BlowUp as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BLOWUP

    report = analyze_polygon(evolved, config)
    curve = reconstruct_curve(evolved)
    rms_initial = rms_distance(evolved, start)

    prefix = args.out or f"simulate_M{config.M}_p{config.p}_q{config.q}"
    n = config.grid_points
    ds = config.ds
    with open(f"{prefix}.tangent.csv", "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["s", "Tx", "Ty", "Tz"])
        for j in range(n):
            writer.writerow([j * ds, *evolved.samples[j]])
    with open(f"{prefix}.curve.csv", "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["s", "Xx", "Xy", "Xz"])
        for j in range(n + 1):
            writer.writerow([j * ds, *curve.positions[j]])

    summary = {
        "manifest": _manifest(
            "simulate",
            {"M": config.M, "p": config.p, "q": config.q,
             "grid": config.grid_points, "dt_factor": config.dt_factor,
             "scheme": config.scheme, "out": prefix},
            {"relative_error": args.tol},
        ),
        "time": config.rational_time,
        "sides": report.sides,
        "detected_sides": report.detected_sides,
        "angle_median": report.angle_median,
        "angle_spread": report.angle_spread,
        "predicted_rho": report.predicted_rho,
        "relative_error": report.relative_error,
        "rms_from_initial": rms_initial,
        "mean_height": curve.mean_height,
        "vertical_drift_rate": vertical_drift_rate(evolved),
        "files": [f"{prefix}.tangent.csv", f"{prefix}.curve.csv"],
    }
    with open(f"{prefix}.summary.json", "w") as handle:
        json.dump(summary, handle, indent=2)
        handle.write("\n")
    _emit(summary)
    return EXIT_OK if report.relative_error <= args.tol else EXIT_VERIFICATION_FAILED


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polyfil",
        description=(
            "Gauss-sum identities, rotation products, and tangent-flow "
            "simulation for regular polygonal filament evolution"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gauss", help="evaluate one Gauss sum (or the full table)")
    g.add_argument("--p", type=int, required=True)
    g.add_argument("--q", type=int, required=True)
    g.add_argument("--n", type=int, default=None)
    g.set_defaults(func=cmd_gauss)

    t = sub.add_parser("theta", help="full argument table for (p, q)")
    t.add_argument("--p", type=int, required=True)
    t.add_argument("--q", type=int, required=True)
    t.set_defaults(func=cmd_theta)

    s = sub.add_parser("sums", help="cosine / exponential sum reports for (p, q)")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--k", type=int, default=None)
    s.add_argument("--k-max", dest="k_max", type=int, default=None)
    s.add_argument("--budget", type=int, default=DEFAULT_TERM_BUDGET)
    s.set_defaults(func=cmd_sums)

    r = sub.add_parser("rho", help="predicted inter-side angle for (M, q)")
    r.add_argument("--M", type=int, required=True)
    r.add_argument("--q", type=int, required=True)
    r.set_defaults(func=cmd_rho)

    rot = sub.add_parser("rotation", help="ordered corner-rotation product")
    rot.add_argument("--M", type=int, required=True)
    rot.add_argument("--p", type=int, required=True)
    rot.add_argument("--q", type=int, required=True)
    rot.set_defaults(func=cmd_rotation)

    v = sub.add_parser("verify", help="run a verification suite over coprime (p, q)")
    v.add_argument("--suite", choices=["sums", "theorem2", "lemma3", "lemma4",
                                       "vanishing", "all"], required=True)
    v.add_argument("--q-max", dest="q_max", type=int, default=16)
    v.add_argument("--m-max", dest="m_max", type=int, default=10)
    v.add_argument("--budget", type=int, default=DEFAULT_TERM_BUDGET)
    v.add_argument("--format", choices=["json", "csv"], default="json")
    v.set_defaults(func=cmd_verify)

    sim = sub.add_parser("simulate", help="evolve a polygon and measure plateaus")
    sim.add_argument("--M", type=int, required=True)
    sim.add_argument("--p", type=int, required=True)
    sim.add_argument("--q", type=int, required=True)
    sim.add_argument("--grid", type=int, default=None)
    sim.add_argument("--dt-factor", dest="dt_factor", type=float, default=0.4)
    sim.add_argument("--out", type=str, default=None)
    sim.add_argument("--tol", type=float, default=DEFAULT_SIMULATE_TOL)
    sim.set_defaults(func=cmd_simulate)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
