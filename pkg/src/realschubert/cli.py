"""Batch command-line front end.

Problem specifications come in as YAML files; reports go out as JSON
(full, replayable: resolved config, seeds, squaring coefficients) and CSV
(one row per solution).  Exit codes are a stable contract: 0 success,
2 invalid specification, 3 solver deficiency, 4 certification defect.

JSON reports deliberately carry no wall-clock timing, so identical seeds
produce byte-identical files; timing is printed to the summary instead.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from fractions import Fraction

import numpy as np
import yaml

from .errors import (
    CountMismatchError,
    DimensionMismatchError,
    ExhaustedScheduleError,
    MacMillanMismatchError,
    PathCrossingError,
    SchubertError,
    SpecValidationError,
    UnpairedComplexSolutionError,
    UnreachedToleranceError,
)
from .feedback import place_poles, plant_from_osculating, stability_report
from .osculating import as_fraction
from .partitions import (
    BoxShape,
    ConditionKind,
    SpecialCondition,
    check_partition,
)
from .reality import (
    ScheduleConfig,
    shapiro_experiment,
    theorem_schedule_run,
)
from .systems import SchubertProblem, build_system
from .tracking import TrackerConfig, degeneration_probe, solve

EXIT_OK = 0
EXIT_SPEC = 2
EXIT_DEFICIENT = 3
EXIT_CERTIFICATION = 4


# ------------------------------------------------------------ spec loading


def parse_conditions(items):
    """[{kind: row|column, a: int, s: number}, ...] -> [(cond, Fraction)]"""
    out = []
    for item in items:
        kind = str(item.get("kind", "row")).lower()
        if kind not in ("row", "column"):
            raise SpecValidationError(f"unknown condition kind {kind!r}")
        cond = SpecialCondition(
            ConditionKind.ROW if kind == "row" else ConditionKind.COLUMN,
            int(item.get("a", 1)),
        )
        if "s" not in item:
            raise SpecValidationError("condition missing curve parameter 's'")
        out.append((cond, as_fraction(item["s"])))
    return out


def load_problem_spec(path):
    """Read a YAML problem specification into (problem, config, seed)."""
    with open(path) as fh:
        raw = yaml.safe_load(fh)
    if not isinstance(raw, dict):
        raise SpecValidationError("spec file must be a mapping")
    try:
        m = int(raw["m"])
        p = int(raw["p"])
    except KeyError as exc:
        raise SpecValidationError(f"spec missing required key {exc}") from exc
    box = BoxShape(m, p)
    at_zero = tuple(raw.get("at_zero", ()) or ())
    at_infinity = tuple(raw.get("at_infinity", ()) or ())
    check_partition(at_zero, box)
    check_partition(at_infinity, box)
    special = parse_conditions(raw.get("conditions", ()) or ())
    problem = SchubertProblem(box, at_zero, at_infinity, tuple(special))
    cfg = TrackerConfig()
    for key, val in (raw.get("config") or {}).items():
        if not hasattr(cfg, key):
            raise SpecValidationError(f"unknown config override {key!r}")
        setattr(cfg, key, type(getattr(cfg, key))(val))
    seed = int(raw.get("seed", 0))
    return problem, cfg, seed


# ---------------------------------------------------------- serialization


def _json_default(obj):
    if isinstance(obj, Fraction):
        return float(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return [[z.real, z.imag] for z in obj.ravel()]
        return obj.tolist()
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    raise TypeError(f"not serializable: {type(obj)}")


def write_json(path, payload):
    text = json.dumps(payload, sort_keys=True, indent=2, default=_json_default)
    with open(path, "w") as fh:
        fh.write(text + "\n")


def problem_dict(problem):
    return {
        "m": problem.box.m,
        "p": problem.box.p,
        "at_zero": list(problem.at_zero),
        "at_infinity": list(problem.at_infinity),
        "conditions": [
            {"kind": c.kind.value, "a": c.a, "s": float(s)}
            for c, s in problem.special
        ],
    }


def squaring_dict(system):
    return [
        {
            "label": g.label,
            "squaring": None if g.squaring is None else g.squaring.tolist(),
        }
        for g in system.groups
    ]


def solution_dict(sol, tol):
    return {
        "chart_coordinates": None
        if sol.x is None
        else [[z.real, z.imag] for z in sol.x],
        "representative": [
            [[z.real, z.imag] for z in r] for r in sol.representative
        ],
        "residual": sol.residual,
        "minor_residual": sol.minor_residual,
        "sigma_min": sol.sigma_min,
        "sigma_max": sol.sigma_max,
        "imag_magnitude": sol.imag_mag,
        "is_real": bool(sol.imag_mag < tol),
        "refined_extended_precision": sol.refined_mp,
    }


def solve_report(problem, sols, cfg, seed, reality_tol):
    system = build_system(problem, seed=seed)
    return {
        "problem": problem_dict(problem),
        "expected": sols.expected,
        "found": sols.found,
        "deficiency": sols.deficiency,
        "seed": seed,
        "config": cfg.to_dict(),
        "squaring": squaring_dict(system),
        "path_stats": {k: int(v) for k, v in sols.path_stats.items()},
        "spurious_filtered": sols.spurious,
        "solutions": [solution_dict(s, reality_tol) for s in sols.solutions],
    }


def write_csv(path, sols, tol):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        header = ["index", "is_real", "residual", "sigma_min", "imag_magnitude"]
        ncoord = len(sols.solutions[0].coords()) if sols.solutions else 0
        for i in range(ncoord):
            header += [f"re_x{i}", f"im_x{i}"]
        w.writerow(header)
        for i, s in enumerate(sols.solutions):
            rec = [
                i,
                int(s.imag_mag < tol),
                f"{s.residual:.3e}",
                f"{s.sigma_min:.3e}",
                f"{s.imag_mag:.3e}",
            ]
            for z in s.coords():
                rec += [repr(float(z.real)), repr(float(z.imag))]
            w.writerow(rec)


# ------------------------------------------------------------- subcommands


def cmd_degree(args):
    problem, _, _ = load_problem_spec(args.spec)
    d = problem.expected_count()
    print(d)
    return EXIT_OK


def cmd_solve(args):
    problem, cfg, seed = load_problem_spec(args.spec)
    if args.seed is not None:
        seed = args.seed
    if args.tolerance is not None:
        cfg.refine_tol = args.tolerance
    t0 = time.perf_counter()
    sols = solve(problem, cfg, seed)
    elapsed = time.perf_counter() - t0
    report = solve_report(problem, sols, cfg, seed, reality_tol=1e-8)
    if sols.deficiency != 0:
        report["error"] = (
            f"CountMismatch: found {sols.found} of {sols.expected}"
        )
    if args.json:
        write_json(args.json, report)
    if args.csv:
        write_csv(args.csv, sols, tol=1e-8)
    print(
        f"{sols.found}/{sols.expected} solutions "
        f"({sum(1 for s in sols.solutions if s.imag_mag < 1e-8)} real) "
        f"in {elapsed:.2f}s"
    )
    return EXIT_OK if sols.deficiency == 0 else EXIT_DEFICIENT


def _conditions_arg(args, box):
    if args.conditions:
        conds = []
        for token in args.conditions.split(","):
            token = token.strip().lower()
            kind, a = token[0], int(token[1:])
            conds.append(
                SpecialCondition(
                    ConditionKind.ROW if kind == "r" else ConditionKind.COLUMN,
                    a,
                )
            )
    else:
        conds = [
            SpecialCondition(ConditionKind.ROW, 1) for _ in range(box.dim)
        ]
    return conds


def cmd_verify_shapiro(args):
    box = BoxShape(args.m, args.p)
    conds = _conditions_arg(args, box)
    summary = shapiro_experiment(box, conds, args.trials, seed=args.seed)
    if args.json:
        write_json(args.json, summary.to_dict())
    print(f"{summary.all_real_trials}/{summary.trials} all-real")
    return EXIT_OK if summary.all_real else EXIT_DEFICIENT


def cmd_theorem(args):
    box = BoxShape(args.m, args.p)
    conds = _conditions_arg(args, box)
    sched = ScheduleConfig(ratio=Fraction(args.ratio))
    report = theorem_schedule_run(
        box, (), (), conds, schedule=sched, seed=args.seed
    )
    if args.json:
        write_json(args.json, report.to_dict())
    print(
        f"{report.verdict.value}: {report.real_count}/{report.total} real "
        f"at ratio {report.achieved_ratio}"
    )
    return EXIT_OK


def cmd_degenerate(args):
    problem, cfg, seed = load_problem_spec(args.spec)
    if args.seed is not None:
        seed = args.seed
    report = degeneration_probe(problem, args.condition, cfg, seed)
    payload = {
        "problem": problem_dict(problem),
        "condition_index": args.condition,
        "final_parameter": float(report.final_parameter),
        "counts": {str(k): v for k, v in report.counts.items()},
        "expected_counts": {str(k): v for k, v in report.expected_counts.items()},
        "conserved": report.conserved,
    }
    if args.json:
        write_json(args.json, payload)
    print(
        f"limits {dict(report.counts)} expected {dict(report.expected_counts)} "
        f"conserved={report.conserved}"
    )
    return EXIT_OK if report.conserved else EXIT_DEFICIENT


def cmd_pole_place(args):
    box = BoxShape(args.m, args.p)
    plant = plant_from_osculating(box)
    poles = [Fraction(tok.strip()) for tok in args.poles.split(",")]
    result = place_poles(plant, poles, seed=args.seed)
    report = stability_report(plant, result)
    payload = report.to_dict()
    payload["total_solutions"] = result.total_solutions
    payload["complex_solutions"] = result.complex_solutions
    payload["expected"] = result.expected
    payload["laws"] = [
        dict(entry, matrix=law.matrix.tolist())
        for entry, law in zip(payload["laws"], result.laws)
    ]
    if args.json:
        write_json(args.json, payload)
    print(
        f"{len(result.laws)} real feedback laws of {result.total_solutions}; "
        f"corollary witnessed: {report.corollary_witnessed}"
    )
    return EXIT_OK if report.corollary_witnessed else EXIT_DEFICIENT


# -------------------------------------------------------------- dispatcher


def build_parser():
    ap = argparse.ArgumentParser(
        prog="realschubert",
        description="Numerical Schubert calculus on osculating flags: "
        "enumerate, solve, certify reality, place poles.",
    )
    ap.add_argument("--threads", type=int, default=1,
                    help="accepted for interface stability; the solver is "
                    "vectorized and single-process")
    sub = ap.add_subparsers(dest="command", required=True)

    d = sub.add_parser("degree", help="exact enumerative degree of a problem spec")
    d.add_argument("spec")
    d.set_defaults(func=cmd_degree)

    s = sub.add_parser("solve", help="solve a problem spec and report solutions")
    s.add_argument("spec")
    s.add_argument("--json")
    s.add_argument("--csv")
    s.add_argument("--seed", type=int)
    s.add_argument("--tolerance", type=float)
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify-shapiro", help="random real-instance reality trials")
    v.add_argument("-m", type=int, required=True)
    v.add_argument("-p", type=int, required=True)
    v.add_argument("--conditions", help="comma list like r1,r1,r2,c2 "
                   "(default: all r1)")
    v.add_argument("--trials", type=int, default=20)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--json")
    v.set_defaults(func=cmd_verify_shapiro)

    t = sub.add_parser("theorem", help="clustered-schedule all-real certification")
    t.add_argument("-m", type=int, required=True)
    t.add_argument("-p", type=int, required=True)
    t.add_argument("--conditions")
    t.add_argument("--ratio", default="1/16")
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--json")
    t.set_defaults(func=cmd_theorem)

    g = sub.add_parser("degenerate", help="drive one condition point to 0 and "
                       "classify the limits")
    g.add_argument("spec")
    g.add_argument("--condition", type=int, required=True)
    g.add_argument("--seed", type=int)
    g.add_argument("--json")
    g.set_defaults(func=cmd_degenerate)

    pp = sub.add_parser("pole-place", help="real static feedback for prescribed poles")
    pp.add_argument("-m", type=int, required=True)
    pp.add_argument("-p", type=int, required=True)
    pp.add_argument("--poles", required=True, help="comma list, e.g. -1,-2,-3,-4")
    pp.add_argument("--seed", type=int, default=0)
    pp.add_argument("--json")
    pp.set_defaults(func=cmd_pole_place)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (
        SpecValidationError,
        DimensionMismatchError,
        MacMillanMismatchError,
        FileNotFoundError,
        yaml.YAMLError,
    ) as exc:
        print(f"invalid specification: {exc}", file=sys.stderr)
        return EXIT_SPEC
    except (CountMismatchError, ExhaustedScheduleError) as exc:
        print(f"solver deficiency: {exc}", file=sys.stderr)
        return EXIT_DEFICIENT
    except (
        UnpairedComplexSolutionError,
        PathCrossingError,
        UnreachedToleranceError,
        SchubertError,
    ) as exc:
        print(f"certification defect: {exc}", file=sys.stderr)
        return EXIT_CERTIFICATION


if __name__ == "__main__":
    sys.exit(main())
