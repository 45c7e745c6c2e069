"""Exception types shared across the toolkit."""


class BianchikitError(Exception):
    """Base class for all toolkit-specific errors."""


class RingMismatchError(BianchikitError):
    """Operands live in different rings (wrong d, or wrong modulus)."""


class WordSyntaxError(BianchikitError):
    """Malformed word or presentation text.  Carries a position when known."""

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class GuardExceeded(BianchikitError):
    """A configured size/memory guard was hit before the computation finished."""


class EnumerationLimitExceeded(BianchikitError):
    """Coset enumeration defined more cosets than the caller allowed."""


class NotInSubgroupError(BianchikitError):
    """A word handed to a subgroup rewriting map does not lie in the subgroup."""


class RelatorViolation(BianchikitError):
    """Proposed generator images fail to satisfy a relator."""


class TraceCongruenceError(BianchikitError):
    """The trace congruence failed for a kernel element.  Must never fire."""


class MonodromyError(BianchikitError):
    """A permutation assignment is not a valid connected-cover monodromy."""


class PipelineError(BianchikitError):
    """Cross-validation inside the filling pipeline failed."""
