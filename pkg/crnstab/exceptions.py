from __future__ import annotations


class CrnstabError(Exception):
    """Base class for every error raised by crnstab."""


class NetworkParseError(CrnstabError, ValueError):
    """Raised when network or history text does not follow the grammar.

    Attributes:
        line: 1-based line number of the offending input line (0 when unknown).
        column: 1-based column of the offending token (0 when unknown).
    """

    def __init__(self, message: str, line: int = 0, column: int = 0) -> None:
        self.line = line
        self.column = column
        location = f"line {line}, column {column}: " if line else ""
        super().__init__(f"{location}{message}")


class AnalysisError(CrnstabError):
    """Raised when a structural or equilibrium computation cannot be completed."""


class NotWeaklyReversibleError(AnalysisError):
    pass


class ConvergenceError(AnalysisError):
    pass


class RealizationError(CrnstabError):
    """Raised when a linear-conjugate realization cannot be written as a network."""


class SpeciesMismatchError(CrnstabError, ValueError):
    pass


class ReactionCountMismatchError(CrnstabError, ValueError):
    pass


class SimulationError(CrnstabError):
    """Raised when the delayed integration cannot continue."""


class StepLimitError(SimulationError, ValueError):
    """Raised when a delay-aligned grid would need more steps than the solver allows."""


class PositivityLostError(SimulationError):
    """Raised when a state component drops to zero or below.

    Attributes:
        time: Grid time at which the violation was detected.
        state: The offending state vector.
    """

    def __init__(self, message: str, time: float, state: list[float]) -> None:
        self.time = time
        self.state = state
        super().__init__(message)


class FunctionalDomainError(CrnstabError, ValueError):
    """Raised when a functional is evaluated outside its domain."""
