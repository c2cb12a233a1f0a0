"""Partitions in a p x m box, Pieri products, and exact enumerative degrees.

Partitions are plain tuples of weakly decreasing nonnegative integers with
trailing zeros stripped; ``pad``/``trim`` convert between the padded and the
canonical form.  All counting is done in exact integer arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import DimensionMismatchError, SpecValidationError

Partition = tuple  # weakly decreasing nonnegative ints, no trailing zeros


@dataclass(frozen=True)
class BoxShape:
    """The p x m box: parts bounded by m, at most p of them."""

    m: int
    p: int

    def __post_init__(self):
        if self.m < 1 or self.p < 1:
            raise SpecValidationError(f"box needs m,p >= 1, got {self.m}x{self.p}")

    @property
    def dim(self) -> int:
        """Dimension m*p of the Grassmannian of p-planes in (m+p)-space."""
        return self.m * self.p

    @property
    def ambient(self) -> int:
        return self.m + self.p


class ConditionKind(Enum):
    ROW = "row"
    COLUMN = "column"


@dataclass(frozen=True)
class SpecialCondition:
    """A codimension-a special Schubert condition.

    ROW(a):    meet the osculating (m+1-a)-plane nontrivially.
    COLUMN(a): meet the osculating (m-1+a)-plane in dimension >= a.
    ROW(1) and COLUMN(1) coincide.
    """

    kind: ConditionKind
    a: int

    def __post_init__(self):
        if self.a < 1:
            raise SpecValidationError(f"condition needs a >= 1, got {self.a}")

    def validate(self, box: BoxShape) -> None:
        bound = box.m if self.kind is ConditionKind.ROW else box.p
        if self.a > bound:
            raise SpecValidationError(
                f"{self.kind.value} condition a={self.a} exceeds bound {bound} "
                f"in box {box.m}x{box.p}"
            )

    def as_partition(self) -> Partition:
        if self.kind is ConditionKind.ROW:
            return (self.a,)
        return (1,) * self.a

    def conjugated(self) -> "SpecialCondition":
        kind = (
            ConditionKind.COLUMN
            if self.kind is ConditionKind.ROW
            else ConditionKind.ROW
        )
        return SpecialCondition(kind, self.a)


def row(a: int) -> SpecialCondition:
    return SpecialCondition(ConditionKind.ROW, a)


def column(a: int) -> SpecialCondition:
    return SpecialCondition(ConditionKind.COLUMN, a)


def trim(w: Sequence[int]) -> Partition:
    """Canonical form: drop trailing zeros."""
    w = tuple(w)
    while w and w[-1] == 0:
        w = w[:-1]
    return w


def pad(w: Sequence[int], p: int) -> Partition:
    w = tuple(w)
    if len(w) > p:
        raise SpecValidationError(f"partition {w} longer than {p}")
    return w + (0,) * (p - len(w))


def check_partition(w: Sequence[int], box: BoxShape) -> Partition:
    """Validate w against the box and return its canonical form."""
    w = trim(w)
    if any(w[i] < w[i + 1] for i in range(len(w) - 1)):
        raise SpecValidationError(f"partition {w} is not weakly decreasing")
    if any(x < 0 for x in w):
        raise SpecValidationError(f"partition {w} has negative parts")
    if len(w) > box.p:
        raise SpecValidationError(f"partition {w} has more than p={box.p} parts")
    if w and w[0] > box.m:
        raise SpecValidationError(f"partition {w} has a part exceeding m={box.m}")
    return w


def codimension(w: Sequence[int]) -> int:
    """Weight |w|, the codimension of the Schubert cycle of type w."""
    return sum(w)


def conjugate(w: Sequence[int]) -> Partition:
    """Transpose of the Young diagram."""
    w = trim(w)
    if not w:
        return ()
    return tuple(sum(1 for x in w if x > j) for j in range(w[0]))


def contains(v: Sequence[int], w: Sequence[int]) -> bool:
    """Diagram containment v >= w rowwise."""
    v, w = trim(v), trim(w)
    return len(v) >= len(w) and all(v[i] >= w[i] for i in range(len(w)))


def complement(v: Sequence[int], box: BoxShape) -> Partition:
    """The complementary partition (m - v_p, ..., m - v_1) in the box."""
    vp = pad(check_partition(v, box), box.p)
    return trim(tuple(box.m - x for x in reversed(vp)))


def pieri_row(w: Sequence[int], a: int, box: BoxShape) -> frozenset:
    """The Pieri index set w*a: add a boxes to w, no two in the same column.

    Equivalently the horizontal strips: v_1 >= w_1 >= v_2 >= w_2 >= ...
    """
    w = check_partition(w, box)
    if a < 1 or a > box.m:
        raise SpecValidationError(f"row Pieri needs 1 <= a <= m, got a={a}")
    if codimension(w) + a > box.dim:
        raise SpecValidationError("resulting weight exceeds the box area")
    wp = pad(w, box.p)
    out = []

    def extend(i, prefix, remaining):
        if remaining < 0:
            return
        if i == box.p:
            if remaining == 0:
                out.append(trim(prefix))
            return
        lo = wp[i]
        hi = box.m if i == 0 else min(prefix[-1], wp[i - 1])
        for vi in range(lo, hi + 1):
            extend(i + 1, prefix + (vi,), remaining - (vi - wp[i]))

    extend(0, (), a)
    return frozenset(out)


def pieri_column(w: Sequence[int], a: int, box: BoxShape) -> frozenset:
    """Dual Pieri set: add a boxes to w, no two in the same row.

    Equivalently the vertical strips: v_i - w_i in {0, 1} for every row.
    """
    w = check_partition(w, box)
    if a < 1 or a > box.p:
        raise SpecValidationError(f"column Pieri needs 1 <= a <= p, got a={a}")
    if codimension(w) + a > box.dim:
        raise SpecValidationError("resulting weight exceeds the box area")
    wp = pad(w, box.p)
    out = []

    def extend(i, prefix, remaining):
        if remaining < 0:
            return
        if i == box.p:
            if remaining == 0:
                out.append(trim(prefix))
            return
        for add in (0, 1):
            vi = wp[i] + add
            if vi > box.m:
                continue
            if i > 0 and vi > prefix[-1]:
                continue
            extend(i + 1, prefix + (vi,), remaining - add)

    extend(0, (), a)
    return frozenset(out)


def pieri(w: Sequence[int], cond: SpecialCondition, box: BoxShape) -> frozenset:
    if cond.kind is ConditionKind.ROW:
        return pieri_row(w, cond.a, box)
    return pieri_column(w, cond.a, box)


def degree(
    w: Sequence[int],
    v: Sequence[int],
    conditions: Iterable[SpecialCondition],
    box: BoxShape,
) -> int:
    """Number of solutions of the zero-dimensional Schubert problem.

    Counts Pieri chains from w that end at the box complement of v, one step
    per special condition.  Raises DimensionMismatchError unless the
    codimensions sum to m*p.
    """
    w = check_partition(w, box)
    v = check_partition(v, box)
    conditions = tuple(conditions)
    for c in conditions:
        c.validate(box)
    total = codimension(w) + codimension(v) + sum(c.a for c in conditions)
    if total != box.dim:
        raise DimensionMismatchError(box.dim, total)
    target = complement(v, box)

    @lru_cache(maxsize=None)
    def count(u: Partition, i: int) -> int:
        if i == len(conditions):
            return 1 if u == target else 0
        return sum(count(x, i + 1) for x in pieri(u, conditions[i], box))

    return count(w, 0)


def hook_length_count(p: int, m: int) -> int:
    """Standard Young tableaux of the p x m rectangle, by the hook-length
    formula: (mp)! / prod of hooks.  Equals the all-ones special Schubert
    degree.  Exact integer arithmetic; never overflows."""
    if m < 1 or p < 1:
        raise SpecValidationError("hook_length_count needs m,p >= 1")
    hooks = 1
    for i in range(p):
        for j in range(m):
            hooks *= (m - j) + (p - i) - 1
    return math.factorial(m * p) // hooks
