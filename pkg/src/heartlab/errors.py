"""Exception hierarchy shared by all heartlab modules."""


class HeartlabError(Exception):
    """Base class for every error raised by heartlab."""


class DomainError(HeartlabError, ValueError):
    """An argument lies outside the domain of an operation."""


class SignDomainError(DomainError):
    """A log-scale subtraction would produce a non-positive quantity."""


class BracketError(HeartlabError):
    """No sign change across a bisection bracket.

    The endpoint values are kept so callers can report them.
    """

    def __init__(self, message, lo=None, hi=None, f_lo=None, f_hi=None):
        super().__init__(message)
        self.lo = lo
        self.hi = hi
        self.f_lo = f_lo
        self.f_hi = f_hi


class ParamError(DomainError):
    """A family coefficient tuple violates a standing inequality."""


class DepthError(HeartlabError):
    """The turn budget was exhausted before a separatrix reached the gap."""


class ResonanceError(HeartlabError):
    """Two connection parameters coincide within the tie tolerance."""

    def __init__(self, message, first=None, second=None):
        super().__init__(message)
        self.first = first
        self.second = second


class ConsistencyError(HeartlabError):
    """Internal bookkeeping disagreed with itself (e.g. a mark mismatch)."""
