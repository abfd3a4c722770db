"""Exception hierarchy shared by every module."""


class ConvexCertError(Exception):
    """Base class for all errors raised by convexcert."""


class ParseError(ConvexCertError):
    """Malformed expression text.  ``offset`` is the byte offset of the problem."""

    def __init__(self, message, offset):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class UnknownIdentifier(ParseError):
    pass


class ArityError(ParseError):
    pass


class DomainError(ConvexCertError, ValueError):
    """A point lies outside a function's domain, or evaluation left the reals."""


class ClassificationError(ConvexCertError, ValueError):
    """A triple has the wrong LOWER/UPPER/MIDDLE class for the requested gap."""


class PreconditionError(ConvexCertError, ValueError):
    pass


class EmptyGrid(ConvexCertError, ValueError):
    pass


class InfeasibleWindow(ConvexCertError, ValueError):
    """The admissible parameter window of a polygonal construction is empty."""


class BadP(ConvexCertError, ValueError):
    pass


class DegenerateSegment(ConvexCertError, ValueError):
    """Alignment was requested relative to a segment with equal endpoints."""
