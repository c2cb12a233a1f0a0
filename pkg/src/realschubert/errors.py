"""Exception hierarchy shared by all modules."""


class SchubertError(Exception):
    """Base class for all errors raised by this package."""


class SpecValidationError(SchubertError):
    """A problem specification violates an invariant (bad partition, repeated
    parameter, out-of-range condition, ...)."""


class DimensionMismatchError(SpecValidationError):
    """Codimensions do not sum to m*p; the intersection is not expected to be
    zero-dimensional.  Carries the deficit mp - sum(codims)."""

    def __init__(self, expected, got):
        self.expected = expected
        self.got = got
        super().__init__(
            f"codimension sum {got} != {expected} = m*p "
            f"(deficit {expected - got})"
        )


class CountMismatchError(SchubertError):
    """The number of verified solutions differs from the combinatorial degree."""


class UnreachedToleranceError(SchubertError):
    """A tracked path neither converged nor certifiably diverged."""


class PathCrossingError(SchubertError):
    """Two endpoints of a parameter sweep collided within the dedup tolerance."""


class UnpairedComplexSolutionError(SchubertError):
    """A non-real solution has no complex-conjugate partner; certification defect."""


class UnresolvedLimitError(SchubertError):
    """A degeneration limit point satisfies no candidate Schubert condition."""


class ExhaustedScheduleError(SchubertError):
    """theorem_schedule_run failed to reach an all-real verdict within the
    allowed retries.  Carries the last (mixed-reality) report as a witness."""

    def __init__(self, message, witness=None):
        self.witness = witness
        super().__init__(message)


class MacMillanMismatchError(SchubertError):
    """The computed MacMillan degree of the plant differs from m*p."""
