"""
The exceptions raised by this package.

Input problems derive from InputError, numerical verification problems from VerificationFailure.
The command line interface maps them to exit codes 1 and 2 respectively.
"""

from __future__ import annotations

from typing import Any, Optional


class ExpPeriodsError(Exception):
    """Base class of all errors raised on purpose by this package."""


class InputError(ExpPeriodsError, ValueError):
    """
    The request cannot be carried out with the data given.

    :param message: (str): What is wrong with the input.
    :param line: (Optional[int]): Line of the offending input, for text inputs.
    :param column: (Optional[int]): Column of the offending input, for text inputs.
    """

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None) -> None:
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)
        self.line = line
        self.column = column


class VerificationFailure(ExpPeriodsError):
    """
    A numerical check failed.

    :param message: (str): Description of the failed check.
    :param partial: (Any): The best result available when the check failed, if any.
    """

    def __init__(self, message: str, partial: Any = None) -> None:
        super().__init__(message)
        self.partial = partial


class ToleranceNotMet(VerificationFailure):
    """The quadrature could not reach the requested absolute error."""


class RankDeficiency(VerificationFailure):
    """The period matrix does not have the expected numerical rank."""


class IllConditionedKernel(VerificationFailure):
    """The kernel of the period matrix is not numerically one-dimensional."""


class SeriesDivergence(VerificationFailure):
    """The truncated residue series does not show decaying blocks."""


class CertificateMismatch(VerificationFailure):
    """A reduction certificate does not reproduce the reduced polynomial."""
