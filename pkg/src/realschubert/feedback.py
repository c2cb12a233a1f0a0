"""Static real feedback via the osculating pencil: the m-input p-output
plant whose behavior is the pencil of osculating m-planes, pole placement
by intersecting the corresponding incidence conditions, and closed-loop
verification.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Optional

import numpy as np

from .errors import MacMillanMismatchError, SchubertError, SpecValidationError
from .multipoly import Poly, poly_det
from .osculating import as_fraction, osculating_plane, translation_matrix
from .partitions import BoxShape, row
from .systems import SchubertProblem
from .tracking import SolutionSet, TrackerConfig, solve


@dataclass
class Plant:
    """m x (m+p) univariate polynomial matrix [N(s) : D(s)].

    Row j holds the polynomials s^(c-j)/(c-j)! (zero for c < j), so the
    evaluation at any s is the osculating m-plane of the factorial-scaled
    moment curve.  The largest degree among maximal minors is the MacMillan
    degree of the plant."""

    box: BoxShape
    entries: list  # m rows of (m+p) univariate Poly(1)
    macmillan_degree: int

    @property
    def m(self) -> int:
        return self.box.m

    @property
    def p(self) -> int:
        return self.box.p

    def evaluate(self, s) -> np.ndarray:
        d = self.box.m + self.box.p
        out = np.zeros((self.box.m, d), dtype=complex)
        for j in range(self.box.m):
            for c in range(d):
                out[j, c] = complex(self.entries[j][c]((s,)))
        return out

    def evaluate_exact(self, s: Fraction):
        d = self.box.m + self.box.p
        return [
            [self.entries[j][c]((Fraction(s),)) for c in range(d)]
            for j in range(self.box.m)
        ]


@dataclass
class FeedbackLaw:
    """Real p x (m+p) matrix with orthonormal rows; its rowspan is a
    solution p-plane of the pole-placement intersection."""

    matrix: np.ndarray
    residual: float
    sigma_min: float

    @property
    def p(self) -> int:
        return self.matrix.shape[0]


@dataclass
class PlacementResult:
    plant: Plant
    poles: list
    laws: list
    total_solutions: int
    complex_solutions: int
    expected: int
    solutions: Optional[SolutionSet] = None


def plant_from_osculating(box: BoxShape) -> Plant:
    """Polynomial realization of the osculating pencil, with the MacMillan
    degree computed by scanning the degrees of all maximal minors and
    checked against the Grassmannian dimension m*p."""
    m, p = box.m, box.p
    d = m + p
    entries = []
    for j in range(m):
        row_polys = []
        for c in range(d):
            if c < j:
                row_polys.append(Poly(1, {}))
            else:
                row_polys.append(
                    Poly(1, {(c - j,): Fraction(1, math.factorial(c - j))})
                )
        entries.append(row_polys)
    deg = 0
    for cols in combinations(range(d), m):
        minor = poly_det([[entries[j][c] for c in cols] for j in range(m)])
        if not minor.is_zero():
            deg = max(deg, minor.degree())
    if deg != m * p:
        raise MacMillanMismatchError(
            f"MacMillan degree of the osculating pencil is {deg}, "
            f"expected {m * p}"
        )
    return Plant(box=box, entries=entries, macmillan_degree=deg)


def _canonical_real_law(rep: np.ndarray) -> np.ndarray:
    """Orthonormalize the real part of a (numerically real) representative
    and canonicalize row signs."""
    q, r = np.linalg.qr(rep.real.T.conj())
    law = (q * np.sign(np.where(np.diag(r) == 0, 1.0, np.diag(r)))).T
    for i in range(law.shape[0]):
        lead = law[i, np.argmax(np.abs(law[i]) > 1e-12)]
        if lead < 0:
            law[i] = -law[i]
    return law


def place_poles(
    plant: Plant,
    poles,
    config: Optional[TrackerConfig] = None,
    seed: int = 0,
    real_tol: float = 1e-8,
) -> PlacementResult:
    """Solve the pole-placement intersection: all p-planes meeting the
    plant's rowspan at each prescribed pole, i.e. the problem with one
    Row(1) condition per pole.  Real solutions come back as normalized
    feedback laws; non-real ones are counted."""
    poles = [as_fraction(s) for s in poles]
    if len(set(poles)) != len(poles):
        raise SpecValidationError("prescribed poles must be pairwise distinct")
    if len(poles) != plant.box.dim:
        raise SpecValidationError(
            f"need {plant.box.dim} poles for an m={plant.m}, p={plant.p} plant"
        )
    if any(s == 0 for s in poles):
        raise SpecValidationError("poles must be nonzero")
    problem = SchubertProblem(
        plant.box, (), (), tuple((row(1), s) for s in poles)
    )
    cfg = config or TrackerConfig()
    sols = solve(problem, cfg, seed)
    laws = []
    n_complex = 0
    for s in sols.solutions:
        if s.imag_mag < real_tol:
            laws.append(
                FeedbackLaw(
                    matrix=_canonical_real_law(s.representative),
                    residual=s.residual,
                    sigma_min=s.sigma_min,
                )
            )
        else:
            n_complex += 1
    return PlacementResult(
        plant=plant,
        poles=poles,
        laws=laws,
        total_solutions=sols.found,
        complex_solutions=n_complex,
        expected=sols.expected,
        solutions=sols,
    )


def closed_loop_poles(plant: Plant, law: FeedbackLaw) -> np.ndarray:
    """Natural frequencies of the closed loop: roots of det[plant(s); law].

    The characteristic polynomial (degree = MacMillan degree) is recovered
    by evaluating the stacked determinant at mp+1 sample points and
    interpolating; the roots come from numpy's companion-matrix solver."""
    n = plant.macmillan_degree
    samples = np.arange(n + 1, dtype=float) - n / 2
    vals = np.empty(n + 1, dtype=complex)
    for i, s in enumerate(samples):
        stack = np.vstack([plant.evaluate(s), law.matrix.astype(complex)])
        vals[i] = np.linalg.det(stack)
    coeffs = np.polyfit(samples, vals.real, n)
    scale = np.abs(coeffs).max()
    if scale == 0 or abs(coeffs[0]) < 1e-10 * scale:
        raise SchubertError(
            "closed-loop determinant is degenerate "
            "(zero or degree-deficient leading coefficient)"
        )
    return np.roots(coeffs)


@dataclass
class LawVerdict:
    is_real: bool
    pole_error: float
    stable: bool
    roots: list


@dataclass
class StabilityReport:
    poles: list
    poles_all_negative: bool
    verdicts: list = field(default_factory=list)
    corollary_witnessed: bool = False

    def to_dict(self):
        return {
            "poles": [float(s) for s in self.poles],
            "poles_all_negative": self.poles_all_negative,
            "laws": [
                {
                    "is_real": v.is_real,
                    "pole_error": v.pole_error,
                    "stable": v.stable,
                    "roots": [[z.real, z.imag] for z in v.roots],
                }
                for v in self.verdicts
            ],
            "corollary_witnessed": self.corollary_witnessed,
        }


def _match_poles(roots, poles) -> float:
    """Greedy matching of computed roots to prescribed poles; returns the
    largest relative mismatch."""
    roots = list(roots)
    worst = 0.0
    for s in poles:
        target = complex(float(s), 0.0)
        j = min(range(len(roots)), key=lambda i: abs(roots[i] - target))
        worst = max(worst, abs(roots[j] - target) / max(1.0, abs(target)))
        roots.pop(j)
    return worst


def stability_report(plant: Plant, result: PlacementResult) -> StabilityReport:
    """Check each feedback law: closed-loop roots against the prescribed
    poles, stability (all roots in the open left half-plane), and whether
    the real-stabilizability statement is witnessed: at least one law, all
    solutions real, all loops stable.  Stabilization only makes sense for
    negative poles; a non-negative pole disables the witness but the
    per-law report is still produced."""
    poles = result.poles
    all_neg = all(s < 0 for s in poles)
    report = StabilityReport(poles=poles, poles_all_negative=all_neg)
    for law in result.laws:
        roots = closed_loop_poles(plant, law)
        err = _match_poles(roots, poles)
        stable = bool(np.all(roots.real < 0))
        report.verdicts.append(
            LawVerdict(
                is_real=True,
                pole_error=err,
                stable=stable,
                roots=list(roots),
            )
        )
    report.corollary_witnessed = (
        all_neg
        and len(result.laws) > 0
        and result.complex_solutions == 0
        and all(v.stable for v in report.verdicts)
    )
    return report


def translated_plant_frame(plant: Plant, c) -> np.ndarray:
    """The real matrix by which translation s -> s + c along the curve acts
    on feedback laws: the unipotent translation in the ambient coordinates."""
    return np.array(
        [
            [float(x) for x in r]
            for r in translation_matrix(as_fraction(c), plant.box.m + plant.box.p)
        ]
    )
