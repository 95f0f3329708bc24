"""Exception types shared across the toolkit.

Each class maps to a distinct CLI exit code (see cli.EXIT_CODES).
"""


class HardyPursuitError(Exception):
    """Base class for all toolkit errors."""


class MalformedInputError(HardyPursuitError):
    """Input file or payload does not match the expected schema."""


class ParameterDomainError(HardyPursuitError):
    """A kernel parameter or evaluation point lies outside its domain."""


class DegeneratePlanError(HardyPursuitError):
    """A fixed parameter plan contains (numerically) dependent kernels."""

    def __init__(self, index: int, message: str | None = None):
        self.index = index
        super().__init__(message or f"plan entry {index} is numerically in the span of its predecessors")


class ExhaustedDictionaryError(HardyPursuitError):
    """Every candidate parameter on the selection grid is degenerate."""


class IllConditionedError(HardyPursuitError):
    """A linear system's condition estimate exceeds the allowed bound."""
