"""Exception types shared across the package."""


class ConsortexError(Exception):
    """Base class for all errors raised by this package."""


class UniverseMismatchError(ConsortexError):
    """Two values over different attribute universes were combined."""


class CapacityError(ConsortexError):
    """An exhaustive operation was requested above its size cap."""


class QualificationError(ConsortexError):
    """An expert was asked a question outside its block."""


class ProtocolError(ConsortexError):
    """An answer or message violated the answering contract."""


class ConflictingEvidenceError(ConsortexError):
    """Two contributions for the same named example contradict each other."""


class MalformedDesignError(ConsortexError):
    """A block family does not meet the shape required by a design check."""


class InvalidDomainError(ConsortexError):
    """A block family does not cover the attribute universe."""


class FormatError(ConsortexError):
    """A text input could not be parsed."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NotReadyError(ConsortexError):
    """A result was requested before the producing run finished."""


class StaleQueryError(ConsortexError):
    """An answer referenced a query that is no longer pending."""


class UnknownExpertError(ConsortexError):
    """A message carried an expert token the session does not know."""


class UnknownSessionError(ConsortexError):
    """A message carried a session id the service does not know."""
