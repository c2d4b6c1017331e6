"""Exception hierarchy.

The CLI maps these onto exit codes: input errors -> 1, mathematical
precondition failures -> 2, internal-consistency failures -> 3.
"""


class FsingError(Exception):
    """Base class for all errors raised by this package."""


class InputError(FsingError, ValueError):
    """Malformed or inconsistent input (bad ring, bad expression, ...)."""


class RingMismatchError(InputError):
    pass


class ExponentOverflowError(InputError, OverflowError):
    pass


class ParseError(InputError):
    def __init__(self, message, column=None):
        if column is not None:
            message = f"{message} at column {column}"
        super().__init__(message)
        self.column = column


class PreconditionError(FsingError):
    """A mathematical hypothesis of an algorithm does not hold."""


class NotCohenMacaulayError(PreconditionError):
    pass


class NotTorsionFreeError(PreconditionError):
    pass


class InvalidTestElementError(PreconditionError):
    pass


class CyclicityError(PreconditionError):
    """No cyclic generator found for the Frobenius-map module."""


class NoTestElementError(PreconditionError):
    pass


class ResolutionIncompleteError(PreconditionError):
    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class InternalConsistencyError(FsingError, RuntimeError):
    """A provably-terminating computation did not terminate, or a
    computed result failed its own postcondition check."""


class IterationCapError(InternalConsistencyError):
    pass
