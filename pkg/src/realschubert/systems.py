"""Build square determinantal polynomial systems for Schubert problems.

A p-plane H is parametrized by the local chart [I | Y] (identity in the
pivot columns, chart unknowns Y elsewhere).  Each condition becomes the
vanishing of the maximal minors of a stacked matrix [H; K]; families with
more minors than codimension are squared up to exactly codim-many random
real combinations, recorded for reproducibility.  All coefficients are kept
exact (Fractions, with floats taken at their exact binary value), so
endpoints can later be polished in extended precision.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import DimensionMismatchError, SpecValidationError
from .multipoly import Poly, poly_det
from .osculating import as_fraction, flag_at_end, osculating_plane
from .partitions import (
    BoxShape,
    ConditionKind,
    SpecialCondition,
    check_partition,
    codimension,
    degree,
    pad,
    trim,
)


@dataclass(frozen=True)
class LocalChart:
    """Chart [I | Y]: identity in the pivot columns, one unknown per other slot."""

    m: int
    p: int
    pivot_columns: tuple = None

    def __post_init__(self):
        if self.pivot_columns is None:
            object.__setattr__(self, "pivot_columns", tuple(range(self.p)))
        pc = tuple(sorted(self.pivot_columns))
        if len(pc) != self.p or pc[0] < 0 or pc[-1] >= self.m + self.p:
            raise SpecValidationError(f"bad pivot columns {self.pivot_columns}")
        object.__setattr__(self, "pivot_columns", pc)

    @property
    def nvars(self) -> int:
        return self.m * self.p

    @property
    def free_columns(self) -> tuple:
        pivots = set(self.pivot_columns)
        return tuple(c for c in range(self.m + self.p) if c not in pivots)

    def var_index(self, r: int, c: int) -> int:
        """Chart variable sitting at row r, ambient column c (a free column)."""
        return r * self.m + self.free_columns.index(c)

    def h_polys(self):
        """The p x (m+p) chart matrix as Poly entries."""
        n = self.nvars
        rows = []
        for r in range(self.p):
            row = []
            for c in range(self.m + self.p):
                if c in self.pivot_columns:
                    row.append(
                        Poly.constant(n, 1 if self.pivot_columns.index(c) == r else 0)
                    )
                else:
                    row.append(Poly.variable(n, self.var_index(r, c)))
            rows.append(row)
        return rows

    def h_varmap(self) -> np.ndarray:
        """(p, m+p) int array: chart variable index per entry, -1 for constants."""
        vm = -np.ones((self.p, self.m + self.p), dtype=int)
        for r in range(self.p):
            for c in self.free_columns:
                vm[r, c] = self.var_index(r, c)
        return vm

    def h_values(self, x: np.ndarray) -> np.ndarray:
        """Numeric chart matrix [I | Y] at the chart point x (length m*p)."""
        H = np.zeros((self.p, self.m + self.p), dtype=complex)
        for r, c in enumerate(self.pivot_columns):
            H[r, c] = 1.0
        for r in range(self.p):
            for c in self.free_columns:
                H[r, c] = x[self.var_index(r, c)]
        return H

    def from_full(self, H: np.ndarray) -> np.ndarray:
        """Chart coordinates of a full-rank p x (m+p) representative."""
        G = H[:, list(self.pivot_columns)]
        Y = np.linalg.solve(G, H[:, list(self.free_columns)])
        x = np.zeros(self.nvars, dtype=complex)
        for r in range(self.p):
            for j, c in enumerate(self.free_columns):
                x[self.var_index(r, c)] = Y[r, j]
        return x


@dataclass(frozen=True)
class SchubertProblem:
    """A zero-dimensional special Schubert problem on G(p, m+p).

    General conditions (partitions) sit at 0 and infinity; each special
    condition sits at a finite, nonzero curve parameter, all distinct.
    """

    box: BoxShape
    at_zero: tuple = ()
    at_infinity: tuple = ()
    special: tuple = ()  # ((SpecialCondition, Fraction), ...)

    def __post_init__(self):
        w = check_partition(self.at_zero, self.box)
        v = check_partition(self.at_infinity, self.box)
        object.__setattr__(self, "at_zero", w)
        object.__setattr__(self, "at_infinity", v)
        sp = []
        for cond, s in self.special:
            cond.validate(self.box)
            s = as_fraction(s)
            if s == 0:
                raise SpecValidationError("special condition parameter must be nonzero")
            sp.append((cond, s))
        params = [s for _, s in sp]
        if len(set(params)) != len(params):
            raise SpecValidationError(f"curve parameters must be distinct: {params}")
        object.__setattr__(self, "special", tuple(sp))
        total = codimension(w) + codimension(v) + sum(c.a for c, _ in sp)
        if total != self.box.dim:
            raise DimensionMismatchError(self.box.dim, total)

    def conditions(self):
        return [c for c, _ in self.special]

    def parameters(self):
        return [s for _, s in self.special]

    def expected_count(self) -> int:
        return degree(self.at_zero, self.at_infinity, self.conditions(), self.box)

    def with_parameters(self, params: Sequence) -> "SchubertProblem":
        if len(params) != len(self.special):
            raise SpecValidationError("parameter count mismatch")
        return SchubertProblem(
            self.box,
            self.at_zero,
            self.at_infinity,
            tuple((c, as_fraction(s)) for (c, _), s in zip(self.special, params)),
        )


# ------------------------------------------------------------------ groups


@dataclass
class MinorRef:
    """One maximal minor: a row/column selection of [H; const_rows]."""

    rows: tuple  # indices into the stacked matrix (H rows are 0..p-1)
    cols: tuple
    scale: Fraction  # normalization of the raw determinant
    poly: Poly  # normalized expansion (max |coeff| = 1)


@dataclass
class ConditionGroup:
    """All minors of one condition, plus its squared-up equations."""

    label: str
    const_rows: tuple  # rows appended below H, exact Fraction entries
    minors: list
    squaring: Optional[np.ndarray]  # (neq, nminors) float, None = identity
    eq_scales: list = field(default_factory=list)
    equations: list = field(default_factory=list)  # normalized Polys


def _stack_polys(chart: LocalChart, const_rows) -> list:
    n = chart.nvars
    rows = chart.h_polys()
    for r in const_rows:
        rows.append([Poly.constant(n, x) for x in r])
    return rows


def _minor_polys(chart, const_rows, size, row_choices, col_choices):
    stack = _stack_polys(chart, const_rows)
    minors = []
    for rsel in row_choices:
        for csel in col_choices:
            sub = [[stack[i][j] for j in csel] for i in rsel]
            raw = poly_det(sub)
            mx = raw.max_abs_coeff()
            scale = Fraction(1) if mx == 0 else 1 / mx
            minors.append(MinorRef(tuple(rsel), tuple(csel), scale, raw * scale))
    return minors


def _square_up(label, const_rows, minors, neq, rng) -> ConditionGroup:
    group = ConditionGroup(label, tuple(const_rows), minors, None)
    if len(minors) == neq == 1:
        group.eq_scales = [Fraction(1)]
        group.equations = [minors[0].poly]
        return group
    if len(minors) < neq:
        raise SpecValidationError(
            f"{label}: {len(minors)} minors cannot be squared to {neq} equations"
        )
    coeffs = rng.standard_normal((neq, len(minors)))
    group.squaring = coeffs
    for j in range(neq):
        eq = Poly.constant(minors[0].poly.nvars, 0)
        for i, mref in enumerate(minors):
            eq = eq + mref.poly * Fraction(coeffs[j, i])
        mx = eq.max_abs_coeff()
        scale = Fraction(1) if mx == 0 else 1 / mx
        group.eq_scales.append(scale)
        group.equations.append(eq * scale)
    return group


def _apply_ambient_change(rows, Q: Optional[np.ndarray]):
    """Right-multiply exact rows by the (float) ambient change, exactly."""
    if Q is None:
        return [tuple(r) for r in rows]
    out = []
    for r in rows:
        rf = np.array([float(x) for x in r])
        out.append(tuple(Fraction(float(v)) for v in rf @ Q))
    return out


def row_condition_group(
    chart: LocalChart, s, a: int, box: BoxShape, rng, Q=None
) -> ConditionGroup:
    """tau_a(s): H meets the osculating (m+1-a)-plane nontrivially.

    The stacked (p + m+1-a) x (m+p) matrix drops rank, i.e. all maximal
    minors (column selections) vanish; squared up to a equations.
    """
    if not 1 <= a <= box.m:
        raise SpecValidationError(f"row condition needs 1 <= a <= m, got {a}")
    k = box.m + 1 - a
    const = _apply_ambient_change(
        osculating_plane(s, k, box.ambient).rows, Q
    )
    size = box.p + k
    rows = [tuple(range(size))]
    cols = list(itertools.combinations(range(box.ambient), size))
    minors = _minor_polys(chart, const, size, rows, cols)
    return _square_up(f"row(a={a}, s={s})", const, minors, a, rng)


def column_condition_group(
    chart: LocalChart, s, a: int, box: BoxShape, rng, Q=None
) -> ConditionGroup:
    """tau^a(s): dim(H intersect K_(m-1+a)(s)) >= a.

    The stacked (p + m-1+a) x (m+p) matrix has rank <= m+p-1, i.e. all
    (m+p)-minors (row selections) vanish; squared up to a equations.
    """
    if not 1 <= a <= box.p:
        raise SpecValidationError(f"column condition needs 1 <= a <= p, got {a}")
    k = box.m - 1 + a
    const = _apply_ambient_change(
        osculating_plane(s, k, box.ambient).rows, Q
    )
    nrows = box.p + k
    rows = list(itertools.combinations(range(nrows), box.ambient))
    cols = [tuple(range(box.ambient))]
    minors = _minor_polys(chart, const, box.ambient, rows, cols)
    return _square_up(f"column(a={a}, s={s})", const, minors, a, rng)


def _essential_positions(w, p):
    wp = pad(trim(w), p) + (0,)
    return [i + 1 for i in range(p) if wp[i] > wp[i + 1]]


def end_condition_group(
    chart: LocalChart, w, end, box: BoxShape, rng, Q=None
) -> ConditionGroup:
    """sigma_w at 0 or infinity: dim(H intersect F_(m+i-w_i)) >= i for each i.

    Only the essential rows (corners of w) contribute minors; the union is
    squared up to |w| equations.
    """
    w = check_partition(w, box)
    if not w:
        raise SpecValidationError("empty partition yields no equations")
    wp = pad(w, box.p)
    all_minors = []
    const_rows = []
    offset = 0
    # each essential i gets its own block of flag rows below H
    blocks = []
    for i in _essential_positions(w, box.p):
        j = box.m + i - wp[i - 1]
        flag = _apply_ambient_change(flag_at_end(j, box.ambient, end).rows, Q)
        blocks.append((i, j, offset, flag))
        const_rows.extend(flag)
        offset += j
    for i, j, off, flag in blocks:
        stack_rows = list(range(box.p)) + [
            box.p + off + t for t in range(j)
        ]
        size = box.p + j - i + 1  # rank bound + 1
        rows = [
            tuple(stack_rows[t] for t in sel)
            for sel in itertools.combinations(range(len(stack_rows)), size)
        ]
        cols = list(itertools.combinations(range(box.ambient), size))
        all_minors.extend(_minor_polys(chart, const_rows, size, rows, cols))
    return _square_up(
        f"end(w={w}, at={end})", const_rows, all_minors, codimension(w), rng
    )


# ---------------------------------------------------------- public wrappers


def incidence_equations_row(chart, s, a, box, seed=0):
    """Squared-up equations for tau_a(s) in the given chart."""
    rng = np.random.default_rng(seed)
    return row_condition_group(chart, as_fraction(s), a, box, rng).equations


def incidence_equations_column(chart, s, a, box, seed=0):
    """Squared-up equations for tau^a(s) in the given chart."""
    rng = np.random.default_rng(seed)
    return column_condition_group(chart, as_fraction(s), a, box, rng).equations


def schubert_equations_at_ends(chart, w, end, box, seed=0):
    """Squared-up equations for sigma_w at 0 or infinity; empty w -> []."""
    if not trim(w):
        return []
    rng = np.random.default_rng(seed)
    return end_condition_group(chart, w, end, box, rng).equations


# ------------------------------------------------------------------ system


class CompiledKernel:
    """Shared-monomial table for fast batched evaluation of the system and
    its Jacobian: one gather/product for the monomials, one matmul for
    residuals and all partial derivatives."""

    def __init__(self, equations, nvars):
        self.nvars = nvars
        self.neq = len(equations)
        derivs = [[eq.diff(v) for v in range(nvars)] for eq in equations]
        mons = set()
        for eq in equations:
            mons.update(eq.terms)
        for row in derivs:
            for d in row:
                mons.update(d.terms)
        self.E = np.array(sorted(mons), dtype=np.int64)
        if self.E.size == 0:
            self.E = np.zeros((1, nvars), dtype=np.int64)
        index = {tuple(e): i for i, e in enumerate(self.E)}
        M = len(self.E)
        C = np.zeros((M, self.neq * (1 + nvars)))
        for e_i, eq in enumerate(equations):
            for mon, c in eq.terms.items():
                C[index[mon], e_i] = float(c)
            for v in range(nvars):
                for mon, c in derivs[e_i][v].terms.items():
                    C[index[mon], self.neq + e_i * nvars + v] = float(c)
        self.C = C
        self.C_res = np.ascontiguousarray(C[:, : self.neq])
        self.degrees = tuple(eq.degree() for eq in equations)
        self.dmax = int(self.E.max())
        self._arange = np.arange(nvars)[:, None]

    def _monomials(self, X: np.ndarray) -> np.ndarray:
        P = X[:, :, None] ** np.arange(self.dmax + 1)
        return P[:, self._arange, self.E.T].prod(axis=1)

    def residual(self, X: np.ndarray) -> np.ndarray:
        """X: (B, nvars) complex -> (B, neq)."""
        return self._monomials(X) @ self.C_res

    def residual_jacobian(self, X: np.ndarray):
        """X: (B, nvars) -> residual (B, neq), Jacobian (B, neq, nvars)."""
        FJ = self._monomials(X) @ self.C
        F = FJ[:, : self.neq]
        J = FJ[:, self.neq :].reshape(-1, self.neq, self.nvars)
        return F, J


def _det_and_grad(A: np.ndarray, varmap: np.ndarray, nvars: int):
    """Determinant of A and its gradient w.r.t. the chart variables, by
    Gaussian elimination with partial pivoting carried on dual numbers."""
    A = A.astype(complex).copy()
    k = A.shape[0]
    G = np.zeros((k, k, nvars), dtype=complex)
    for i in range(k):
        for j in range(k):
            if varmap[i, j] >= 0:
                G[i, j, varmap[i, j]] = 1.0
    det = 1.0 + 0j
    dgrad = np.zeros(nvars, dtype=complex)
    for c in range(k):
        piv = c + int(np.argmax(np.abs(A[c:, c])))
        if piv != c:
            A[[c, piv]] = A[[piv, c]]
            G[[c, piv]] = G[[piv, c]]
            det, dgrad = -det, -dgrad
        pv = A[c, c]
        pg = G[c, c]
        if pv == 0:
            return _det_and_grad_cofactor(A, G, nvars)
        dgrad = dgrad * pv + det * pg
        det = det * pv
        if c + 1 < k:
            f = A[c + 1 :, c] / pv
            fg = (G[c + 1 :, c] - f[:, None] * pg[None, :]) / pv
            G[c + 1 :, c + 1 :] -= (
                fg[:, None, :] * A[c, c + 1 :][None, :, None]
                + f[:, None, None] * G[c, c + 1 :, :][None, :, :]
            )
            A[c + 1 :, c + 1 :] -= f[:, None] * A[c, c + 1 :][None, :]
    return det, dgrad


def _det_and_grad_cofactor(A, G, nvars):
    """Fallback at an exactly zero pivot: d(det)/dx = sum over entries of
    cofactor * d(entry)/dx."""
    k = A.shape[0]
    det = 0.0 + 0j
    grad = np.zeros(nvars, dtype=complex)
    for i in range(k):
        for j in range(k):
            if not G[i, j].any():
                continue
            sub = np.delete(np.delete(A, i, axis=0), j, axis=1)
            cof = ((-1) ** (i + j)) * (np.linalg.det(sub) if k > 1 else 1.0)
            grad += cof * G[i, j]
    return det, grad


class PolynomialSystem:
    """Square system of mp squared-up determinantal equations in the chart
    unknowns; immutable after construction, safe for concurrent evaluation."""

    def __init__(self, problem, chart, groups, seed, ambient_change=None):
        self.problem = problem
        self.chart = chart
        self.groups = groups
        self.seed = seed
        self.ambient_change = ambient_change
        self.equations = [eq for g in groups for eq in g.equations]
        if len(self.equations) != chart.nvars:
            raise SpecValidationError(
                f"built {len(self.equations)} equations for {chart.nvars} unknowns"
            )
        self._kernel = None

    @property
    def nvars(self) -> int:
        return self.chart.nvars

    def kernel(self) -> CompiledKernel:
        if self._kernel is None:
            self._kernel = CompiledKernel(self.equations, self.nvars)
        return self._kernel

    def degrees(self):
        return self.kernel().degrees

    def evaluate(self, point) -> np.ndarray:
        x = np.asarray(point, dtype=complex).reshape(1, -1)
        return self.kernel().residual(x)[0]

    def evaluate_and_jacobian(self, point):
        """Residuals and exact Jacobian via forward-mode differentiation
        through the minor determinants (differentiated LU), combined with
        the recorded squaring coefficients and scales."""
        x = np.asarray(point, dtype=complex)
        H = self.chart.h_values(x)
        vm_h = self.chart.h_varmap()
        res = []
        jac = []
        for g in self.groups:
            const = np.array([[float(v) for v in r] for r in g.const_rows])
            stack = np.vstack([H, const.astype(complex)]) if len(const) else H
            vm = np.vstack(
                [vm_h, -np.ones((len(const), H.shape[1]), dtype=int)]
            ) if len(const) else vm_h
            vals = np.empty(len(g.minors), dtype=complex)
            grads = np.empty((len(g.minors), self.nvars), dtype=complex)
            for i, mref in enumerate(g.minors):
                sub = stack[np.ix_(mref.rows, mref.cols)]
                vsub = vm[np.ix_(mref.rows, mref.cols)]
                d, dg = _det_and_grad(sub, vsub, self.nvars)
                vals[i] = d * float(mref.scale)
                grads[i] = dg * float(mref.scale)
            if g.squaring is None:
                res.append(vals[0] * float(g.eq_scales[0]))
                jac.append(grads[0] * float(g.eq_scales[0]))
            else:
                for j in range(g.squaring.shape[0]):
                    sc = float(g.eq_scales[j])
                    res.append(sc * (g.squaring[j] @ vals))
                    jac.append(sc * (g.squaring[j] @ grads))
        return np.array(res), np.array(jac)

    def minor_residual(self, point) -> float:
        """Worst relative residual over every (unsquared) maximal minor."""
        x = np.asarray(point, dtype=complex)
        absx = np.abs(x)
        worst = 0.0
        for g in self.groups:
            for mref in g.minors:
                num = 0.0 + 0j
                den = 1e-300
                for e, c in mref.poly.terms.items():
                    cf = float(c)
                    t = 1.0
                    for i, k in enumerate(e):
                        if k:
                            t *= absx[i] ** k
                    den += abs(cf) * t
                num = mref.poly(x)
                worst = max(worst, abs(num) / den)
        return worst


def build_system(
    problem: SchubertProblem,
    chart: Optional[LocalChart] = None,
    seed: int = 0,
    ambient_change: Optional[np.ndarray] = None,
) -> PolynomialSystem:
    """Assemble the mp x mp squared-up system for the problem.

    Equation order: conditions at 0, at infinity, then the special
    conditions in listed order.  The seed fixes every squaring matrix.
    """
    box = problem.box
    if chart is None:
        chart = LocalChart(box.m, box.p)
    rng = np.random.default_rng(seed)
    Q = ambient_change
    groups = []
    if problem.at_zero:
        groups.append(end_condition_group(chart, problem.at_zero, 0, box, rng, Q))
    if problem.at_infinity:
        groups.append(
            end_condition_group(chart, problem.at_infinity, "inf", box, rng, Q)
        )
    for cond, s in problem.special:
        if cond.kind is ConditionKind.ROW:
            groups.append(row_condition_group(chart, s, cond.a, box, rng, Q))
        else:
            groups.append(column_condition_group(chart, s, cond.a, box, rng, Q))
    return PolynomialSystem(problem, chart, groups, seed, ambient_change)
