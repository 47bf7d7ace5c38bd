"""Exception types raised by locproj."""


class LocProjError(Exception):
    """Base class for all library errors."""


class ZeroGradeDenominator(LocProjError, ValueError):
    """A denominator factor ``1 - x**e`` restricts to ``1 - t**0``."""


class EmptyWindow(LocProjError, ValueError):
    """Truncated series arithmetic left no degree where the result is known."""


class OutOfWindow(LocProjError, IndexError):
    """A coefficient outside the validity window was requested."""


class UnitWeight(LocProjError, ValueError):
    """``lambda`` of a character containing the trivial weight."""


class IndexTooLarge(LocProjError, ValueError):
    """A symmetric function uses ``e_i`` beyond the computed lambda degree."""


class BadRank(LocProjError, ValueError):
    pass


class DegenerateGrading(LocProjError, ValueError):
    """Fixed points are not isolated under the chosen one-parameter subgroup."""


class NotSymmetric(LocProjError, ValueError):
    pass


class Unstable(LocProjError, RuntimeError):
    """A truncated computation did not settle between successive truncations."""


class BadRange(LocProjError, ValueError):
    pass


class NoStabilization(LocProjError, RuntimeError):
    """The cutoff escalation budget ran out before the series settled."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace or []
