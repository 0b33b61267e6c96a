"""
Exception hierarchy for the Max3Sat suite.

Errors about malformed input also derive from ValueError (or IndexError for
out-of-range variables) so generic handlers keep working.
"""

from typing import Optional


class Max3SatError(Exception):
    """Base class for every error raised by the suite."""


class InstanceError(Max3SatError, ValueError):
    """An instance, clause or literal violates its structural invariants."""


class DimacsParseError(Max3SatError, ValueError):
    """Malformed DIMACS CNF input."""

    def __init__(self, reason: str, line_number: Optional[int] = None):
        self.reason = reason
        self.line_number = line_number
        if line_number is None:
            super().__init__(reason)
        else:
            super().__init__(f"line {line_number}: {reason}")


class AssignmentLengthError(Max3SatError, ValueError):
    """An assignment does not match the instance's variable count."""


class GeneratorConfigError(Max3SatError, ValueError):
    """Invalid generator parameters."""


class VariableIndexError(Max3SatError, IndexError):
    """Variable index outside [0, n)."""


class IdenticalParentsError(Max3SatError):
    """Partition crossover was asked to mix two equal assignments."""


class PyramidLevelError(Max3SatError, ValueError):
    """Insertion would leave a gap in the pyramid levels."""


class ExhaustiveLimitError(Max3SatError):
    """Exhaustive enumeration requested above the configured variable limit."""


class AnalysisInputError(Max3SatError, ValueError):
    """Empty, mismatched or malformed input for an analysis routine."""


class RunConfigError(Max3SatError, ValueError):
    """Invalid optimizer run configuration."""
