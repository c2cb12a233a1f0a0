"""The rational normal curve, its osculating subspaces, and the end flags.

The curve is parametrized in the factorial-scaled moment basis,
gamma(s) = (1, s, s^2/2!, ..., s^(d-1)/(d-1)!), so that the osculating
k-plane at 0 is exactly the first-k coordinate plane and every osculating
matrix is unit upper-triangular up to a column shift.  Row spans are
parametrization-invariant, so nothing is lost by fixing this choice.

Exact rational rows (Fraction entries) are used for containment and
combinatorial checks; callers convert explicitly to floats for the solver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Union

import numpy as np

from .errors import SpecValidationError

Scalar = Union[int, float, Fraction]


def as_fraction(s: Scalar) -> Fraction:
    """Exact conversion; floats are taken at their exact binary value."""
    if isinstance(s, Rational):
        return Fraction(s)
    return Fraction(float(s))


@dataclass(frozen=True)
class OsculatingPlane:
    """The k-plane osculating the curve at s, as a k x d row matrix."""

    k: int
    s: object  # Fraction, or the string "inf" for the reversed coordinate flag
    rows: tuple  # k rows of d Fraction entries each

    @property
    def d(self) -> int:
        return len(self.rows[0])

    def as_array(self) -> np.ndarray:
        return np.array([[float(x) for x in r] for r in self.rows])


def gamma_point(s: Scalar, d: int):
    """gamma(s) = (1, s, s^2/2!, ..., s^(d-1)/(d-1)!) with exact entries."""
    if d < 2:
        raise SpecValidationError(f"ambient dimension must be >= 2, got {d}")
    s = as_fraction(s)
    return tuple(s**j / math.factorial(j) for j in range(d))


def osculating_plane(s: Scalar, k: int, d: int) -> OsculatingPlane:
    """Rows gamma(s), gamma'(s), ..., gamma^(k-1)(s).

    Row j has zeros in columns < j and s^(c-j)/(c-j)! in column c >= j.
    """
    if not 1 <= k <= d:
        raise SpecValidationError(f"need 1 <= k <= d, got k={k}, d={d}")
    s = as_fraction(s)
    rows = tuple(
        tuple(
            s ** (c - j) / math.factorial(c - j) if c >= j else Fraction(0)
            for c in range(d)
        )
        for j in range(k)
    )
    return OsculatingPlane(k, s, rows)


def flag_at_infinity(k: int, d: int) -> OsculatingPlane:
    """Limit of osculating k-planes as s grows: the span of the last k
    coordinate vectors e_d, e_(d-1), ..., e_(d-k+1)."""
    if not 1 <= k <= d:
        raise SpecValidationError(f"need 1 <= k <= d, got k={k}, d={d}")
    rows = tuple(
        tuple(Fraction(1 if c == d - 1 - j else 0) for c in range(d))
        for j in range(k)
    )
    return OsculatingPlane(k, "inf", rows)


def flag_at_end(k: int, d: int, end) -> OsculatingPlane:
    """Flag subspace used for the general conditions at 0 or infinity."""
    if end == 0:
        return osculating_plane(0, k, d)
    if end in ("inf", float("inf")):
        return flag_at_infinity(k, d)
    raise SpecValidationError(f"end must be 0 or 'inf', got {end!r}")


def translation_matrix(c: Scalar, d: int):
    """Unipotent upper-triangular U(c) with U[j][k] = c^(k-j)/(k-j)!.

    gamma(s+c) = gamma(s) . U(c), and the same holds for every derivative,
    so every osculating row span at s maps to the one at s+c.
    """
    c = as_fraction(c)
    return tuple(
        tuple(
            c ** (k - j) / math.factorial(k - j) if k >= j else Fraction(0)
            for k in range(d)
        )
        for j in range(d)
    )
