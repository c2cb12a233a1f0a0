"""Reality classification and the schedule/experiment machinery."""

from fractions import Fraction

import numpy as np
import pytest

from realschubert.errors import UnpairedComplexSolutionError
from realschubert.partitions import BoxShape, degree, row
from realschubert.reality import (
    ScheduleConfig,
    Verdict,
    classify,
    shapiro_experiment,
    theorem_schedule_run,
    transversality,
)
from realschubert.systems import SchubertProblem, build_system
from realschubert.tracking import (
    Solution,
    SolutionSet,
    TrackerConfig,
    solve,
)


def synthetic_set(points, expected=None, dedup_tol=1e-6):
    """Wrap raw coordinate vectors as an already-verified solution set."""
    sols = []
    for x in points:
        x = np.asarray(x, dtype=complex)
        scale = max(1.0, np.abs(x).max())
        sols.append(
            Solution(
                x=x,
                representative=x.reshape(1, -1),
                residual=0.0,
                minor_residual=0.0,
                sigma_min=1.0,
                sigma_max=1.0,
                imag_mag=float(np.abs(x.imag).max() / scale),
            )
        )
    n = len(points) if expected is None else expected
    return SolutionSet(
        problem=None,
        solutions=sols,
        expected=n,
        seed=0,
        config=TrackerConfig(),
        dedup_tol=dedup_tol,
    )


def test_classify_counts_real_and_pairs():
    z = 0.3 + 0.7j
    report = classify(
        synthetic_set([[1.0, 2.0], [z, 0.1], [np.conj(z), 0.1]])
    )
    assert report.verdict is Verdict.MIXED_REALITY
    assert report.total == 3
    assert report.real_count == 1
    assert report.pair_count == 1
    assert report.total == report.real_count + 2 * report.pair_count


def test_classify_all_real():
    report = classify(synthetic_set([[1.0, 2.0], [3.0, -4.0]]))
    assert report.verdict is Verdict.ALL_REAL
    assert report.real_count == 2


def test_classify_deficient():
    report = classify(synthetic_set([[1.0, 0.0]], expected=2))
    assert report.verdict is Verdict.DEFICIENT


def test_classify_unpaired_complex_raises():
    with pytest.raises(UnpairedComplexSolutionError):
        classify(synthetic_set([[0.5 + 0.5j, 0.0]]))


def test_classify_involution_stable():
    rng = np.random.default_rng(8)
    pts = []
    for _ in range(4):
        z = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        pts += [z, np.conj(z)]
    pts.append(rng.standard_normal(3).astype(complex))
    a = classify(synthetic_set(pts))
    b = classify(synthetic_set([np.conj(x) for x in pts]))
    assert (a.total, a.real_count, a.pair_count, a.verdict) == (
        b.total,
        b.real_count,
        b.pair_count,
        b.verdict,
    )


def test_schedule_points_decrease_to_zero():
    pts = ScheduleConfig().points(4)
    assert pts == [
        Fraction(1, 4096),
        Fraction(1, 256),
        Fraction(1, 16),
        Fraction(1),
    ]
    assert all(s > 0 for s in pts)


def test_theorem_run_m2_p2():
    report = theorem_schedule_run(BoxShape(2, 2), (), (), [row(1)] * 4, seed=3)
    assert report.verdict is Verdict.ALL_REAL
    assert report.total == report.real_count == 2
    assert report.achieved_ratio == Fraction(1, 16)


def test_theorem_run_m2_p3():
    report = theorem_schedule_run(BoxShape(2, 3), (), (), [row(1)] * 6, seed=3)
    assert report.verdict is Verdict.ALL_REAL
    assert report.total == report.real_count == 5


def test_theorem_run_mixed_conditions():
    conds = [row(2), row(1), row(1)]
    expect = degree((), (), conds, BoxShape(2, 2))
    report = theorem_schedule_run(BoxShape(2, 2), (), (), conds, seed=3)
    assert report.verdict is Verdict.ALL_REAL
    assert report.total == report.real_count == expect


def test_all_real_stable_under_small_perturbation():
    # A transverse all-real configuration stays all-real when every point
    # moves by a relative 1e-4.
    box = BoxShape(2, 2)
    sched = ScheduleConfig(ratio=Fraction(1, 2))
    base = sched.points(4)
    rng = np.random.default_rng(12)
    params = [
        s * (1 + Fraction(float(rng.uniform(-1e-4, 1e-4)))) for s in base
    ]
    problem = SchubertProblem(
        box, (), (), tuple((row(1), s) for s in params)
    )
    report = classify(solve(problem, TrackerConfig(), seed=3))
    assert report.verdict is Verdict.ALL_REAL


def test_transversality_m2_p2():
    problem = SchubertProblem(
        BoxShape(2, 2),
        (),
        (),
        tuple((row(1), Fraction(k)) for k in (1, 2, 3, 4)),
    )
    sols = solve(problem, TrackerConfig(), seed=1)
    system = build_system(problem, seed=sols.seed, ambient_change=sols.ambient_change)
    assert transversality(system, sols) == [True, True]


def test_real_count_parity_matches_degree():
    # Complex solutions of a real system come in pairs, so the real count
    # has the parity of the total degree.
    box = BoxShape(2, 3)
    problem = SchubertProblem(
        box,
        (),
        (),
        tuple(
            (row(1), Fraction(s))
            for s in (-3, Fraction(-5, 4), Fraction(1, 3), 1, 2, 7)
        ),
    )
    sols = solve(problem, TrackerConfig(), seed=4)
    report = classify(sols)
    assert report.real_count % 2 == sols.expected % 2


def test_shapiro_experiment_small():
    summary = shapiro_experiment(BoxShape(2, 2), [row(1)] * 4, trials=3, seed=9)
    assert summary.trials == 3
    assert summary.all_real_trials == 3
    assert summary.all_real
    assert not summary.failures


def test_shapiro_experiment_deterministic():
    a = shapiro_experiment(BoxShape(2, 2), [row(1)] * 4, trials=2, seed=9)
    b = shapiro_experiment(BoxShape(2, 2), [row(1)] * 4, trials=2, seed=9)
    assert a.to_dict() == b.to_dict()
