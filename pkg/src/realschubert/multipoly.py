"""Sparse multivariate polynomials with exact Fraction coefficients.

Internal helper for the determinantal system builder: just enough ring
arithmetic to expand minors of matrices whose entries are constants or
single chart variables, differentiate the result, and hand float/mpmath
coefficient tables to the numeric kernels.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Tuple

Monomial = Tuple[int, ...]


class Poly:
    """Polynomial in a fixed number of variables, {exponent tuple: Fraction}."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Dict[Monomial, Fraction] | None = None):
        self.nvars = nvars
        self.terms = {e: c for e, c in (terms or {}).items() if c != 0}

    @classmethod
    def constant(cls, nvars: int, c) -> "Poly":
        c = Fraction(c)
        return cls(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "Poly":
        e = tuple(1 if j == i else 0 for j in range(nvars))
        return cls(nvars, {e: Fraction(1)})

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def __add__(self, other: "Poly") -> "Poly":
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return Poly(self.nvars, out)

    def __sub__(self, other: "Poly") -> "Poly":
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) - c
        return Poly(self.nvars, out)

    def __neg__(self) -> "Poly":
        return Poly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other) -> "Poly":
        if isinstance(other, Poly):
            out: Dict[Monomial, Fraction] = {}
            for e1, c1 in self.terms.items():
                for e2, c2 in other.terms.items():
                    e = tuple(a + b for a, b in zip(e1, e2))
                    out[e] = out.get(e, Fraction(0)) + c1 * c2
            return Poly(self.nvars, out)
        c = Fraction(other)
        return Poly(self.nvars, {e: x * c for e, x in self.terms.items()})

    __rmul__ = __mul__

    def diff(self, var: int) -> "Poly":
        out: Dict[Monomial, Fraction] = {}
        for e, c in self.terms.items():
            if e[var] == 0:
                continue
            ne = tuple(x - 1 if j == var else x for j, x in enumerate(e))
            out[ne] = out.get(ne, Fraction(0)) + c * e[var]
        return Poly(self.nvars, out)

    def max_abs_coeff(self) -> Fraction:
        return max((abs(c) for c in self.terms.values()), default=Fraction(0))

    def normalized(self) -> "Poly":
        """Scale so the largest coefficient magnitude is 1 (zero stays zero)."""
        mx = self.max_abs_coeff()
        if mx == 0 or mx == 1:
            return self
        return self * (1 / mx)

    def __call__(self, x):
        """Evaluate at a point of arbitrary numeric type (float, complex, mpf)."""
        total = 0
        for e, c in self.terms.items():
            t = c.numerator / c.denominator if isinstance(x[0], complex) else c
            for i, k in enumerate(e):
                if k:
                    t = t * x[i] ** k
            total = total + t
        return total

    def __repr__(self):
        return f"Poly({self.nvars}, {len(self.terms)} terms, deg {self.degree()})"


def poly_det(rows) -> Poly:
    """Determinant of a square matrix of Polys.

    Dynamic programming over column subsets (expansion row by row); suitable
    for the small stacked matrices that occur here (size <= 10).
    """
    n = len(rows)
    if n == 0:
        raise ValueError("empty matrix")
    nvars = rows[0][0].nvars
    states = {0: Poly.constant(nvars, 1)}
    for row in rows:
        new: Dict[int, Poly] = {}
        for mask, acc in states.items():
            for c in range(n):
                bit = 1 << c
                if mask & bit:
                    continue
                entry = row[c]
                if entry.is_zero():
                    continue
                sign = -1 if bin(mask >> (c + 1)).count("1") % 2 else 1
                term = acc * entry if sign == 1 else acc * entry * -1
                key = mask | bit
                new[key] = new[key] + term if key in new else term
        states = new
        if not states:
            return Poly.constant(nvars, 0)
    return states.get((1 << n) - 1, Poly.constant(nvars, 0))
