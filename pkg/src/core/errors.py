"""
Index Policy Evaluation Toolkit

Module: errors.py

Exception hierarchy shared by every package. Each exception class carries
the process exit code that main.py reports when the error escapes a
command, so library code only has to raise the right type.
"""

from typing import Optional, Sequence


class PolicyEvalError(Exception):
    """
    Base class for all errors raised by the toolkit.

    Attributes:
        exit_code (int): Process exit code used by the command-line surface
    """
    exit_code = 1


class ConfigurationError(PolicyEvalError):
    """Invalid configuration file, unknown keys or inconsistent settings."""
    exit_code = 2


class ArgumentError(PolicyEvalError, ValueError):
    """An argument is outside its documented range or domain."""
    exit_code = 2


class InputFormatError(PolicyEvalError):
    """
    A CSV or JSON input could not be parsed.

    Attributes:
        line (int, optional): 1-based line number of the offending row
    """
    exit_code = 2

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DataInvariantError(PolicyEvalError):
    """
    Parsed data violates a structural invariant of the domain model.

    Attributes:
        invariant (str): Short name of the violated invariant
        row (int, optional): 1-based data row number, when the violation is row-local
    """
    exit_code = 3

    def __init__(self, invariant: str, message: str, row: Optional[int] = None):
        self.invariant = invariant
        self.row = row
        prefix = f"[{invariant}]"
        if row is not None:
            prefix += f" row {row}:"
        super().__init__(f"{prefix} {message}")


class NumericalError(PolicyEvalError):
    """A numerical procedure failed or produced a meaningless result."""
    exit_code = 4


class DegenerateDataError(NumericalError):
    """The data leaves an estimator without the samples it needs."""


class DegenerateVarianceError(NumericalError):
    """A variance is zero or the hybrid curvature is not positive."""


class ConvergenceError(NumericalError):
    """An iterative solver did not converge within its iteration bound."""


class RankDeficiencyError(NumericalError):
    """
    The regression design matrix is rank deficient.

    Attributes:
        columns (list): Names of the columns found linearly dependent
    """

    def __init__(self, columns: Sequence[str]):
        self.columns = list(columns)
        super().__init__(
            f"design matrix is rank deficient; dependent columns: {', '.join(self.columns)}"
        )
