"""Exception hierarchy.

Everything raised on purpose derives from :class:`HellyError`, so callers
(the CLI in particular) can map failures onto exit codes.
"""


class HellyError(Exception):
    """Base class for all errors raised by this package."""


class PreconditionError(HellyError, ValueError):
    """Input violates a stated precondition of an operation."""


class UnboundedError(PreconditionError):
    """The halfspace family has a nonzero recession direction."""


class DegenerateInputError(PreconditionError):
    """Input is lower dimensional (flat polytope, affinely dependent points)."""


class OriginNotInteriorError(PreconditionError):
    """The origin (or the chosen center) is not strictly interior."""


class SpanDeficientError(PreconditionError):
    """A vector family does not span the ambient space."""


class EnumerationOverflowError(PreconditionError):
    """A brute-force enumeration would exceed its configured cap."""


class NumericalFailure(HellyError, ArithmeticError):
    """A numerical routine failed to converge or lost too much precision."""


class CertificateError(HellyError):
    """A containment certificate failed its independent re-check."""
