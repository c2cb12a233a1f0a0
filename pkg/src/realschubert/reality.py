"""Reality classification, transversality checks, and experiment suites.

Clustering the osculation points toward the curve origin forces every
solution of a special Schubert problem to be real.  The rates at which the
points must rush to 0 are not known explicitly, so the constructive
surrogate here is a geometric schedule s_k = base * ratio^(n-k) with retry
on a smaller ratio; the achieved ratio is part of the report.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import (
    ExhaustedScheduleError,
    SpecValidationError,
    UnpairedComplexSolutionError,
)
from .partitions import BoxShape
from .systems import SchubertProblem
from .tracking import (
    SolutionSet,
    TrackerConfig,
    parameter_sweep,
    solve,
)


class Verdict(Enum):
    ALL_REAL = "AllReal"
    MIXED_REALITY = "MixedReality"
    DEFICIENT = "Deficient"


@dataclass
class RealityReport:
    total: int
    real_count: int
    pair_count: int
    imag_magnitudes: list
    sigma_mins: list
    verdict: Verdict
    expected: int
    achieved_ratio: Optional[Fraction] = None
    solutions: Optional[SolutionSet] = None

    def to_dict(self):
        return {
            "total": self.total,
            "real_count": self.real_count,
            "pair_count": self.pair_count,
            "imag_magnitudes": self.imag_magnitudes,
            "sigma_mins": self.sigma_mins,
            "verdict": self.verdict.value,
            "expected": self.expected,
            "achieved_ratio": None
            if self.achieved_ratio is None
            else float(self.achieved_ratio),
        }


@dataclass
class ScheduleConfig:
    """Geometric point schedule s_k = base * ratio^(n-k), k = 1..n."""

    ratio: Fraction = Fraction(1, 16)
    base: Fraction = Fraction(1)
    max_retries: int = 3

    def __post_init__(self):
        self.ratio = Fraction(self.ratio)
        self.base = Fraction(self.base)
        if not 0 < self.ratio < 1:
            raise SpecValidationError("schedule ratio must lie in (0, 1)")
        if self.base <= 0:
            raise SpecValidationError("schedule base must be positive")

    def points(self, n: int, ratio: Optional[Fraction] = None):
        rho = self.ratio if ratio is None else ratio
        return [self.base * rho ** (n - k) for k in range(1, n + 1)]


def classify(solutions: SolutionSet, tol: float = 1e-8) -> RealityReport:
    """Split a verified solution set into real points and conjugate pairs.

    A solution is real iff its largest imaginary magnitude, relative to the
    coordinate scale and measured after refinement, is below tol.  Every
    non-real solution must have a conjugate partner; a pairing failure is a
    certification defect and raises."""
    sols = solutions.solutions
    imag = [s.imag_mag for s in sols]
    sig = [s.sigma_min for s in sols]
    real_idx = [i for i, s in enumerate(sols) if s.imag_mag < tol]
    complex_idx = [i for i in range(len(sols)) if i not in real_idx]
    pair_tol = max(solutions.dedup_tol, 10 * tol)
    unpaired = set(complex_idx)
    pairs = 0
    for i in list(unpaired):
        if i not in unpaired:
            continue
        xi = np.conj(sols[i].coords())
        partner = None
        for j in unpaired:
            if j == i:
                continue
            xj = sols[j].coords()
            if len(xj) == len(xi) and np.linalg.norm(xj - xi) <= pair_tol * (
                1 + np.linalg.norm(xi)
            ):
                partner = j
                break
        if partner is not None:
            unpaired.discard(i)
            unpaired.discard(partner)
            pairs += 1
    if solutions.deficiency != 0:
        verdict = Verdict.DEFICIENT
    elif unpaired:
        raise UnpairedComplexSolutionError(
            f"{len(unpaired)} non-real solutions have no conjugate partner"
        )
    elif complex_idx:
        verdict = Verdict.MIXED_REALITY
    else:
        verdict = Verdict.ALL_REAL
    return RealityReport(
        total=len(sols),
        real_count=len(real_idx),
        pair_count=pairs,
        imag_magnitudes=imag,
        sigma_mins=sig,
        verdict=verdict,
        expected=solutions.expected,
        solutions=solutions,
    )


def transversality(system, solutions: SolutionSet, threshold: float = 1e-8):
    """Per-solution transversality: smallest Jacobian singular value above
    threshold * matrix norm.  All-transverse is the numerical surrogate for
    the intersection scheme being reduced."""
    kernel = system.kernel()
    out = []
    for s in solutions.solutions:
        _, J = kernel.residual_jacobian(s.x.reshape(1, -1))
        sv = np.linalg.svd(J[0], compute_uv=False)
        out.append(bool(sv[-1] > threshold * sv[0]))
    return out


def _schedule_problem(box, at_zero, at_infinity, conditions, params):
    return SchubertProblem(
        box, at_zero, at_infinity, tuple(zip(conditions, params))
    )


def _solve_schedule(problem, schedule, rho, cfg, seed):
    """Direct solve; on deficiency, solve a well-spread generic instance
    and continue its solutions toward the schedule through geometrically
    shrinking ratios, letting the points rush to 0 gradually."""
    sols = solve(problem, cfg, seed)
    if sols.deficiency == 0:
        return sols
    n = len(problem.special)
    conditions = problem.conditions()
    cur = problem.with_parameters([Fraction(k) for k in range(1, n + 1)])
    sols = solve(cur, cfg, seed)
    if sols.deficiency != 0:
        return sols
    base = schedule.base if schedule is not None else Fraction(1)
    ratios = [max(rho, Fraction(1, 2))]
    while ratios[-1] > rho:
        ratios.append(max(rho, ratios[-1] / 2))
    for r in ratios:
        nxt = cur.with_parameters(
            ScheduleConfig(ratio=r, base=base).points(n)
        )
        sols = parameter_sweep(cur, nxt, sols, cfg, seed)
        cur = nxt
    return sols


def theorem_schedule_run(
    box: BoxShape,
    at_zero,
    at_infinity,
    conditions,
    schedule: Optional[ScheduleConfig] = None,
    config: Optional[TrackerConfig] = None,
    seed: int = 0,
    tol: float = 1e-8,
) -> RealityReport:
    """Pick schedule points, solve, and certify that every solution is real.

    Retries with ratio/4 up to the configured number of times; raises
    ExhaustedScheduleError (with the last report as witness) if no ratio
    yields an all-real verdict."""
    sched = schedule or ScheduleConfig()
    cfg = config or TrackerConfig()
    n = len(conditions)
    last = None
    for attempt in range(sched.max_retries + 1):
        rho = sched.ratio / 4**attempt
        problem = _schedule_problem(
            box, at_zero, at_infinity, conditions, sched.points(n, rho)
        )
        sols = _solve_schedule(problem, sched, rho, cfg, seed)
        report = classify(sols, tol)
        report.achieved_ratio = rho
        if report.verdict is Verdict.ALL_REAL:
            return report
        last = report
    raise ExhaustedScheduleError(
        f"no all-real verdict within {sched.max_retries} retries "
        f"(last verdict {last.verdict.value})",
        witness=last,
    )


@dataclass
class ExperimentSummary:
    box: BoxShape
    conditions: list
    trials: int
    all_real_trials: int
    reports: list = field(default_factory=list)
    failures: list = field(default_factory=list)
    seed: int = 0

    @property
    def all_real(self) -> bool:
        return self.all_real_trials == self.trials and not self.failures

    def to_dict(self):
        return {
            "m": self.box.m,
            "p": self.box.p,
            "conditions": [
                {"kind": c.kind.value, "a": c.a} for c in self.conditions
            ],
            "trials": self.trials,
            "all_real_trials": self.all_real_trials,
            "failures": self.failures,
            "seed": self.seed,
            "reports": self.reports,
        }


def _draw_parameters(rng, n, min_gap=1e-3):
    """Distinct reals in [-1, 1], pairwise gaps and distance to 0 at least
    min_gap; exact binary rationals."""
    for _ in range(1000):
        vals = rng.uniform(-1.0, 1.0, size=n)
        ok = all(abs(v) >= min_gap for v in vals)
        for i in range(n):
            for j in range(i + 1, n):
                ok = ok and abs(vals[i] - vals[j]) >= min_gap
        if ok:
            return [Fraction(float(v)) for v in vals]
    raise SpecValidationError("could not draw well-separated parameters")


def shapiro_experiment(
    box: BoxShape,
    conditions,
    trials: int,
    seed: int = 0,
    config: Optional[TrackerConfig] = None,
    tol: float = 1e-8,
) -> ExperimentSummary:
    """Randomized evidence that real osculation points give all-real
    solutions: draw distinct real points, solve, classify, and count the
    all-real trials.  Trial-level solver failures are recorded, not fatal.
    Each trial derives its RNG stream from (seed, trial index)."""
    cfg = config or TrackerConfig()
    summary = ExperimentSummary(box, list(conditions), trials, 0, seed=seed)
    for trial in range(trials):
        rng = np.random.default_rng([seed, 101, trial])
        params = _draw_parameters(rng, len(summary.conditions))
        problem = SchubertProblem(
            box, (), (), tuple(zip(summary.conditions, params))
        )
        try:
            sols = solve(problem, cfg, seed=seed + trial)
            report = classify(sols, tol)
        except Exception as exc:  # recorded, not fatal
            summary.failures.append({"trial": trial, "error": str(exc)})
            continue
        entry = {
            "trial": trial,
            "parameters": [float(s) for s in params],
            "verdict": report.verdict.value,
            "total": report.total,
            "real": report.real_count,
            "sigma_min": min(report.sigma_mins, default=None),
        }
        summary.reports.append(entry)
        if report.verdict is Verdict.ALL_REAL:
            summary.all_real_trials += 1
        else:
            summary.failures.append(
                {"trial": trial, "error": f"verdict {report.verdict.value}"}
            )
    return summary
