# This file is part of ternary.
#
# SPDX-License-Identifier: MIT
"""
Certified real arithmetic.

Intervals carry exact rational endpoints. Logarithms are enclosed with MPFR evaluations rounded
toward minus and plus infinity, so every decision taken on an interval is rigorous. A decision that
cannot be taken at the current precision is retried with twice the working bits by ``certify``.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass
from fractions import Fraction
from typing import TypeVar

import gmpy2

from ternary.diophantine.config import DEFAULT_PRECISION, Precision
from ternary.diophantine.exceptions import CertificationBudgetExceededError, ValidationError

logger = logging.getLogger(__name__)

T = TypeVar("T")

# Above this size the log1p route would build huge powers, the direct difference is used instead.
_EXACT_RATIO_MAX_BITS = 1 << 16


def _as_fraction(value: int | Fraction | Interval) -> Interval:
    if isinstance(value, Interval):
        return value
    return Interval.point(value)


@dataclass(frozen=True)
class Interval:
    """
    Closed interval [lo, hi] with exact rational endpoints.

    Attributes
    ----------
    lo: Fraction
        Lower endpoint.
    hi: Fraction
        Upper endpoint, not below ``lo``.
    """

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if self.lo > self.hi:
            raise ValidationError(f"Empty interval [{self.lo}, {self.hi}].")

    @classmethod
    def point(cls, value: int | Fraction) -> Interval:
        return cls(Fraction(value), Fraction(value))

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, value: int | Fraction) -> bool:
        return self.lo <= value <= self.hi

    def __add__(self, other):
        other = _as_fraction(other)
        return Interval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other):
        other = _as_fraction(other)
        return Interval(self.lo - other.hi, self.hi - other.lo)

    def __rsub__(self, other):
        return _as_fraction(other) - self

    def __mul__(self, other):
        other = _as_fraction(other)
        products = (
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        )
        return Interval(min(products), max(products))

    __rmul__ = __mul__

    def reciprocal(self) -> Interval:
        if self.lo <= 0 <= self.hi:
            raise ZeroDivisionError(f"Interval [{self.lo}, {self.hi}] contains zero.")
        return Interval(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other):
        return self * _as_fraction(other).reciprocal()

    def __rtruediv__(self, other):
        return _as_fraction(other) * self.reciprocal()

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            raise ValidationError("Intervals are raised to non-negative integer powers only.")
        if exponent % 2 == 1 or self.lo >= 0:
            return Interval(self.lo**exponent, self.hi**exponent)
        if self.hi <= 0:
            return Interval(self.hi**exponent, self.lo**exponent)
        return Interval(Fraction(0), max(self.lo**exponent, self.hi**exponent))

    def __abs__(self):
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Interval(Fraction(0), max(-self.lo, self.hi))

    def floor(self) -> int | None:
        """The common floor of every point of the interval, None when it is not determined."""
        low = math.floor(self.lo)
        return low if low == math.floor(self.hi) else None

    def ceil(self) -> int | None:
        high = math.ceil(self.hi)
        return high if high == math.ceil(self.lo) else None

    def compare(self, other) -> int | None:
        """
        Certified three-way comparison.

        Returns -1 when every point is below every point of ``other``, 1 when every point is above
        and None when the intervals overlap.
        """
        other = _as_fraction(other)
        if self.hi < other.lo:
            return -1
        if self.lo > other.hi:
            return 1
        return None

    def sign(self) -> int | None:
        return self.compare(0)


def _mpfr_bound(value: Fraction, round_mode) -> gmpy2.mpfr:
    exact = gmpy2.mpq(value.numerator, value.denominator)
    rounded = gmpy2.mpfr(exact)
    if round_mode == gmpy2.RoundDown and gmpy2.mpq(rounded) > exact:
        rounded = gmpy2.next_below(rounded)
    elif round_mode == gmpy2.RoundUp and gmpy2.mpq(rounded) < exact:
        rounded = gmpy2.next_above(rounded)
    return rounded


def _to_fraction(value: gmpy2.mpfr) -> Fraction:
    return Fraction(*map(int, value.as_integer_ratio()))


def _enclose(function, argument: Fraction, bits: int) -> Interval:
    # function must be increasing; both roundings then point outward
    bounds = []
    for round_mode in (gmpy2.RoundDown, gmpy2.RoundUp):
        with gmpy2.context(precision=bits, round=round_mode):
            bounds.append(_to_fraction(function(_mpfr_bound(argument, round_mode))))
    return Interval(*bounds)


def log_interval(x: int | Fraction, bits: int) -> Interval:
    """
    Enclosure of the natural logarithm of a positive rational.

    Parameters
    ----------
    x : int | Fraction
        The argument, positive.
    bits : int
        Working precision of the MPFR evaluations.

    Returns
    -------
    Interval
        An interval of relative width about 2**-bits containing ln x.
    """
    x = Fraction(x)
    if x <= 0:
        raise ValidationError(f"log of non-positive value {x}.")
    if x == 1:
        return Interval.point(0)
    return _enclose(gmpy2.log, x, bits)


def log1p_interval(x: int | Fraction, bits: int) -> Interval:
    """Enclosure of ln(1 + x) for rational x > -1, accurate also when x is tiny."""
    x = Fraction(x)
    if x <= -1:
        raise ValidationError(f"log1p of value {x} <= -1.")
    if x == 0:
        return Interval.point(0)
    return _enclose(gmpy2.log1p, x, bits)


def linear_form_interval(m: int, c: int, n: int, b: int, bits: int) -> Interval:
    """
    Enclosure of m·ln c − n·ln b for non-negative integer exponents.

    Moderate sizes go through ln(1 + (c^m − b^n)/b^n) so the cancellation between the two
    logarithms happens exactly. Large exponents fall back to the difference of the enclosures.
    """
    if m < 0 or n < 0 or c < 1 or b < 1:
        raise ValidationError("Linear forms take non-negative exponents and positive bases.")
    if m * c.bit_length() <= _EXACT_RATIO_MAX_BITS and n * b.bit_length() <= _EXACT_RATIO_MAX_BITS:
        numerator, denominator = c**m, b**n
        return log1p_interval(Fraction(numerator - denominator, denominator), bits)
    return m * log_interval(c, bits) - n * log_interval(b, bits)


def certify(
    evaluate: Callable[[int], T | None],
    precision: Precision = DEFAULT_PRECISION,
    what: str = "decision",
) -> T:
    """
    Run ``evaluate`` at growing precision until it takes a decision.

    Parameters
    ----------
    evaluate : Callable[[int], T | None]
        Receives the working precision in bits, returns None while undecided.
    precision : Precision
        Start and maximum working precision. Precision doubles between attempts.
    what : str
        Description of the decision used in logs and errors.

    Returns
    -------
    T
        The first decision taken.

    Raises
    ------
    CertificationBudgetExceededError
        If the maximum precision is reached without a decision.
    """
    bits = precision.start_bits
    while bits <= precision.max_bits:
        decision = evaluate(bits)
        if decision is not None:
            return decision
        logger.debug("Could not certify %s at %d bits, doubling precision", what, bits)
        bits *= 2
    raise CertificationBudgetExceededError(
        f"certification budget exhausted: {what} undecided at {precision.max_bits} bits",
        bits // 2,
    )
