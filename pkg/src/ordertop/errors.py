"""Exception types shared across the package."""


class OrdertopError(Exception):
    """Base class for all errors raised by this package."""


class PosetFormatError(OrdertopError):
    """A poset/lasso/step-function text input could not be parsed.

    Carries the 1-based line number of the offending line when known.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DuplicateLabelError(OrdertopError):
    """Two elements were declared with the same label."""


class CycleError(OrdertopError):
    """The cover relation contains a directed cycle."""


class NotALatticeError(OrdertopError):
    """A sup/inf needed by a lattice computation does not exist."""


class SizeBoundExceeded(OrdertopError):
    """An exhaustive enumeration was requested beyond its size bound."""


class TruncationNotLattice(OrdertopError):
    """A finite truncation of a gallery lattice failed the pairwise
    sup/inf check (the truncation broke lattice-ness)."""


class WindowTooSmall(OrdertopError):
    """A persistence window is too short to certify a stable fact."""


class WitnessMismatch(OrdertopError):
    """A subsequence-extraction witness is inconsistent with its parent
    sequence (values outside the range, or the claimed limit fails)."""


class UnboundedFiber(OrdertopError):
    """Some non-tail value of the parent sequence recurs cofinally, so
    every-fiber-bounded preprocessing cannot hold."""


class NoEscapeWithinDepth(OrdertopError):
    """No dyadic tree level within the depth bound satisfies the escape
    inequality."""


class ParameterOutOfRange(OrdertopError):
    """A numeric parameter violates its documented constraint."""


class NotConvergentInMeasure(OrdertopError):
    """A sequence does not converge in measure: some threshold in the
    extraction schedule is never reached."""
