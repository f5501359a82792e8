# This file is part of ternary.
#
# SPDX-License-Identifier: MIT

from __future__ import annotations

from fractions import Fraction


class TernaryError(Exception):
    """Base class for ternary Errors."""

    def __init__(self, msg: str = ""):
        super().__init__(msg)
        self.msg = msg


class ValidationError(TernaryError):
    """Exception raised when the inputs of an operation violate its preconditions.

    Attributes:
        msg -- A message error carrying further details
    """


class ConfigurationError(TernaryError):
    """Exception raised when the configuration file or the environment hold unusable values.

    Attributes:
        msg -- A message error carrying further details
    """


class FactoringBudgetExceededError(TernaryError):
    """Exception raised when an integer is beyond the desk-scale factoring cutoff.

    Attributes:
        msg -- A message error carrying further details
        value -- the cofactor that could not be split
    """

    def __init__(self, msg: str, value: int):
        super().__init__(msg)
        self.value = value


class CertificationBudgetExceededError(TernaryError):
    """Exception raised when an interval decision cannot be made within the precision budget.

    Attributes:
        msg -- A message error carrying further details
        bits -- the last working precision tried
    """

    def __init__(self, msg: str, bits: int):
        super().__init__(msg)
        self.bits = bits


class RationalRatioError(TernaryError):
    """Exception raised when log c / log b is rational, i.e. b and c are multiplicatively
    dependent.

    Attributes:
        msg -- A message error carrying further details
        value -- the exact rational value of the ratio
    """

    def __init__(self, msg: str, value: Fraction):
        super().__init__(msg)
        self.value = value


class QuotientRangeError(TernaryError):
    """Exception raised when convergents are requested beyond the certified quotients.

    Attributes:
        msg -- A message error carrying further details
    """


class InvariantViolationError(TernaryError):
    """Exception raised when a hard mathematical invariant fails on concrete data.

    Attributes:
        msg -- A message error carrying further details
        context -- the offending values
    """

    def __init__(self, msg: str, context: dict | None = None):
        super().__init__(msg)
        self.context = context or {}


class LemmaViolationError(TernaryError):
    """Exception raised when an applicable lemma report carries a false conclusion.

    Attributes:
        msg -- A message error carrying further details
        report -- the offending report
    """

    def __init__(self, msg: str, report=None):
        super().__init__(msg)
        self.report = report


class ReportFormatError(TernaryError):
    """Exception raised when a persisted scan cannot be parsed.

    Attributes:
        msg -- A message error carrying further details
        line -- 1-based line number of the offending line
    """

    def __init__(self, msg: str, line: int):
        super().__init__(msg)
        self.line = line
