"""Determinantal system builder: minors against exact rational determinant
oracles, equation counts, membership soundness, and Jacobian consistency."""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from realschubert.osculating import gamma_point, osculating_plane
from realschubert.partitions import BoxShape, column, row
from realschubert.systems import (
    LocalChart,
    SchubertProblem,
    build_system,
    incidence_equations_column,
    incidence_equations_row,
    row_condition_group,
    schubert_equations_at_ends,
)


def fraction_det(rows):
    """Exact determinant by fraction-free-ish Gaussian elimination; the
    independent oracle for symbolic minor expansion."""
    a = [list(map(Fraction, r)) for r in rows]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        inv = 1 / a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] * inv
            for k in range(c, n):
                a[r][k] -= f * a[c][k]
    return det


def chart_rows(chart, y_flat):
    """Rows of [identity-in-pivots | Y] as exact Fractions."""
    m = len(y_flat) // chart.p
    rows = []
    for r in range(chart.p):
        rows.append(
            [Fraction(1 if c == r else 0) for c in range(chart.p)]
            + [Fraction(y_flat[r * m + c]) for c in range(m)]
        )
    return rows


def test_single_minor_value_at_origin():
    # m=p=2, one Row(1) at s=1: the raw 4x4 determinant at Y=0 is the
    # lower-right minor of K_2(1), namely (1/2)(1/2) - (1/6)(1) = 1/12.
    box = BoxShape(2, 2)
    chart = LocalChart(2, 2)
    rng = np.random.default_rng(0)
    group = row_condition_group(chart, Fraction(1), 1, box, rng)
    assert len(group.minors) == 1
    mref = group.minors[0]
    raw_at_origin = mref.poly((Fraction(0),) * 4) / mref.scale
    assert raw_at_origin == Fraction(1, 12)


@settings(max_examples=25, deadline=None)
@given(
    y=st.lists(
        st.fractions(
            min_value=-3, max_value=3, max_denominator=8
        ),
        min_size=4,
        max_size=4,
    ),
    s=st.fractions(min_value=-2, max_value=2, max_denominator=4),
)
def test_minor_matches_rational_determinant(y, s):
    # Symbolic expansion of the a=1 stack agrees with a direct exact
    # determinant of the numeric stacked matrix at every rational point.
    box = BoxShape(2, 2)
    chart = LocalChart(2, 2)
    rng = np.random.default_rng(0)
    group = row_condition_group(chart, s, 1, box, rng)
    mref = group.minors[0]
    stack = chart_rows(chart, y) + [
        list(r) for r in osculating_plane(s, 2, 4).rows
    ]
    assert mref.poly(tuple(map(Fraction, y))) == mref.scale * fraction_det(
        stack
    )


def test_equation_counts_per_condition():
    chart3 = LocalChart(3, 3)
    box3 = BoxShape(3, 3)
    assert len(incidence_equations_row(chart3, 1, 1, box3)) == 1
    assert len(incidence_equations_row(chart3, 1, 2, box3)) == 2
    assert len(incidence_equations_row(chart3, 1, 3, box3)) == 3
    assert len(incidence_equations_column(chart3, 1, 2, box3)) == 2
    assert len(schubert_equations_at_ends(chart3, (2, 1), 0, box3)) == 3
    assert len(schubert_equations_at_ends(chart3, (2, 1), "inf", box3)) == 3


def test_system_is_square():
    box = BoxShape(2, 3)
    problem = SchubertProblem(
        box,
        (1,),
        (1,),
        ((row(2), Fraction(1)), (column(2), Fraction(2))),
    )
    system = build_system(problem, seed=11)
    assert len(system.equations) == box.dim
    for eq in system.equations:
        assert eq.max_abs_coeff() == 1


def test_row_membership_soundness():
    # An H explicitly containing gamma(s) kills every Row(1) equation at s.
    box = BoxShape(2, 3)
    chart = LocalChart(2, 3)
    rng = np.random.default_rng(5)
    s = 1.5
    H = rng.standard_normal((3, 5))
    H[0] = [float(v) for v in gamma_point(Fraction(3, 2), 5)]
    x = chart.from_full(H)
    eqs = incidence_equations_row(chart, Fraction(3, 2), 1, box)
    for eq in eqs:
        assert abs(eq(tuple(x))) < 1e-10


def test_column_membership_soundness():
    # H containing a 2-plane of K_3(s) satisfies the Column(2) condition.
    box = BoxShape(2, 3)
    chart = LocalChart(2, 3)
    rng = np.random.default_rng(6)
    K = np.array(
        [[float(v) for v in r] for r in osculating_plane(Fraction(2), 3, 5).rows]
    )
    H = np.vstack([K[0], K[1], rng.standard_normal(5)])
    x = chart.from_full(H)
    eqs = incidence_equations_column(chart, Fraction(2), 2, box, seed=3)
    for eq in eqs:
        assert abs(eq(tuple(x))) < 1e-10


def test_end_condition_detects_flag_meeting():
    # m=p=2, condition (1) at 0 in the chart [I|Y] is equivalent to det Y=0.
    chart = LocalChart(2, 2)
    box = BoxShape(2, 2)
    eqs = schubert_equations_at_ends(chart, (1,), 0, box, seed=2)
    x_sing = (1.0, 2.0, 2.0, 4.0)  # Y singular
    x_reg = (1.0, 2.0, 3.0, 4.0)
    assert all(abs(eq(x_sing)) < 1e-12 for eq in eqs)
    assert any(abs(eq(x_reg)) > 1e-6 for eq in eqs)


@pytest.mark.parametrize(
    "problem",
    [
        SchubertProblem(
            BoxShape(2, 2),
            (),
            (),
            tuple((row(1), Fraction(k)) for k in (1, 2, 3, 4)),
        ),
        SchubertProblem(
            BoxShape(2, 3),
            (1,),
            (),
            (
                (row(2), Fraction(1)),
                (column(2), Fraction(-2)),
                (row(1), Fraction(1, 2)),
            ),
        ),
        SchubertProblem(
            BoxShape(3, 2),
            (),
            (1,),
            (
                (row(2), Fraction(2)),
                (column(2), Fraction(3)),
                (row(1), Fraction(-1)),
            ),
        ),
    ],
)
def test_jacobian_matches_finite_differences(problem):
    system = build_system(problem, seed=9)
    rng = np.random.default_rng(17)
    n = system.nvars
    h = 1e-6
    for _ in range(6):
        x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        val, jac = system.evaluate_and_jacobian(x)
        for j in range(n):
            dx = np.zeros(n, dtype=complex)
            dx[j] = h
            fd = (system.evaluate(x + dx) - system.evaluate(x - dx)) / (2 * h)
            assert np.abs(jac[:, j] - fd).max() < 1e-6


def test_kernel_agrees_with_dual_number_route():
    problem = SchubertProblem(
        BoxShape(2, 2),
        (),
        (),
        tuple((row(1), Fraction(k)) for k in (1, 2, 3, 4)),
    )
    system = build_system(problem, seed=4)
    kernel = system.kernel()
    rng = np.random.default_rng(3)
    X = rng.standard_normal((8, 4)) + 1j * rng.standard_normal((8, 4))
    R, J = kernel.residual_jacobian(X)
    for i in range(8):
        val, jac = system.evaluate_and_jacobian(X[i])
        assert np.abs(R[i] - val).max() < 1e-12
        assert np.abs(J[i] - jac).max() < 1e-11


def test_squaring_reproducible_from_seed():
    problem = SchubertProblem(
        BoxShape(2, 3),
        (),
        (),
        (
            (row(2), Fraction(1)),
            (column(2), Fraction(2)),
            (row(1), Fraction(3)),
            (row(1), Fraction(4)),
        ),
    )
    a = build_system(problem, seed=21)
    b = build_system(problem, seed=21)
    for ga, gb in zip(a.groups, b.groups):
        if ga.squaring is None:
            assert gb.squaring is None
        else:
            assert np.array_equal(ga.squaring, gb.squaring)
