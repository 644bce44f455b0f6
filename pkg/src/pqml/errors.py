"""Exception types shared across the package."""


class PqmlError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(PqmlError):
    """Formula text does not conform to the grammar.

    Carries the offending position so CLI output can point at it.
    """

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class FrameFormatError(PqmlError):
    """A frame description (JSON or gallery spec) is malformed."""


class EvaluationError(PqmlError):
    """A formula cannot be evaluated: unbound free variable or a valuation
    value outside the admissible family."""


class GuardrailError(PqmlError):
    """An operation would enumerate too much (powerset over a large world
    set, too many valuations).  Can be overridden where documented."""


class InternalInvariantError(PqmlError):
    """An internal consistency check failed.  Indicates a bug, never bad
    user input."""
