# This file is part of ternary.
#
# SPDX-License-Identifier: MIT
"""
Continued fractions of rationals and of ratios log c / log b.

Quotients of a log-ratio are certified: each one is the common floor of an enclosure of the
remainder, so it is correct and not a floating point guess.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import gcd

import gmpy2

from ternary.diophantine.config import DEFAULT_PRECISION, Precision
from ternary.diophantine.exceptions import (
    InvariantViolationError,
    QuotientRangeError,
    RationalRatioError,
    ValidationError,
)
from ternary.diophantine.interval import Interval, certify, linear_form_interval, log_interval
from ternary.diophantine.numeric import perfect_power_root

logger = logging.getLogger(__name__)


class TargetKind(Enum):
    RATIONAL = "rational"
    LOG_RATIO = "log_ratio"


@dataclass(frozen=True)
class RealTarget:
    """
    The real number being expanded: top/bottom for rationals, ln(top)/ln(bottom) for log-ratios.

    Use the ``rational`` and ``log_ratio`` constructors, they validate their arguments.
    """

    kind: TargetKind
    top: int
    bottom: int

    @classmethod
    def rational(cls, p: int, q: int) -> RealTarget:
        if q < 1 or p < 0:
            raise ValidationError(f"Rational targets need p >= 0 and q >= 1, got {p}/{q}.")
        common = gcd(p, q)
        return cls(TargetKind.RATIONAL, p // common, q // common)

    @classmethod
    def log_ratio(cls, c: int, b: int) -> RealTarget:
        """
        Raises
        ------
        RationalRatioError
            If b and c are powers of a common integer, the ratio is then rational.
        """
        if b < 2 or c < 2:
            raise ValidationError(f"Log-ratio targets need b, c >= 2, got ({c}, {b}).")
        root_c, k_c = perfect_power_root(c)
        root_b, k_b = perfect_power_root(b)
        if root_c == root_b:
            value = Fraction(k_c, k_b)
            raise RationalRatioError(f"log {c} / log {b} is the rational {value}", value)
        return cls(TargetKind.LOG_RATIO, c, b)

    @property
    def is_rational(self) -> bool:
        return self.kind is TargetKind.RATIONAL

    @property
    def value(self) -> Fraction:
        if not self.is_rational:
            raise ValidationError("A log-ratio has no exact rational value.")
        return Fraction(self.top, self.bottom)

    def enclosure(self, bits: int) -> Interval:
        if self.is_rational:
            return Interval.point(self.value)
        return log_interval(self.top, bits) / log_interval(self.bottom, bits)

    def offset(self, p: int, q: int, bits: int) -> Interval:
        """Enclosure of q·ln c - p·ln b for a log-ratio, of q·α - p for a rational."""
        if self.is_rational:
            return Interval.point(q * self.value - p)
        if p < 0:
            return linear_form_interval(q, self.top, 0, self.bottom, bits) + (-p) * log_interval(
                self.bottom, bits
            )
        return linear_form_interval(q, self.top, p, self.bottom, bits)

    def scale(self, bits: int) -> Interval:
        """The factor with |α - p/q| = |offset(p, q)| / (q·scale)."""
        if self.is_rational:
            return Interval.point(1)
        return log_interval(self.bottom, bits)

    def __str__(self):
        if self.is_rational:
            return f"{self.top}/{self.bottom}"
        return f"log {self.top} / log {self.bottom}"


@dataclass(frozen=True)
class Convergent:
    """p/q, the index-th convergent."""

    index: int
    p: int
    q: int

    @property
    def value(self) -> Fraction:
        return Fraction(self.p, self.q)

    def to_dict(self) -> dict:
        return {"index": self.index, "p": self.p, "q": self.q}


@dataclass(frozen=True)
class ContinuedFraction:
    """
    Partial quotients of a target.

    Attributes
    ----------
    target: RealTarget
    quotients: tuple[int, ...]
        a0 >= 0 then a_i >= 1.
    certified_count: int
        How many leading quotients are proven exact. All of them for rationals.
    """

    target: RealTarget
    quotients: tuple[int, ...]
    certified_count: int

    def __post_init__(self):
        if not self.quotients or self.quotients[0] < 0:
            raise ValidationError("A continued fraction starts with a quotient a0 >= 0.")
        if any(a < 1 for a in self.quotients[1:]):
            raise ValidationError("Partial quotients after a0 must be positive.")
        if not 1 <= self.certified_count <= len(self.quotients):
            raise ValidationError("certified_count out of range.")

    def bracket(self) -> Interval:
        """
        A rational interval containing the target, built from the certified quotients only.
        """
        if self.target.is_rational and self.certified_count == len(self.quotients):
            return Interval.point(self.target.value)
        known = convergents(self, self.certified_count - 1)
        last = known[-1]
        p_prev, q_prev = (known[-2].p, known[-2].q) if len(known) >= 2 else (1, 0)
        mediant = Fraction(last.p + p_prev, last.q + q_prev)
        return Interval(min(last.value, mediant), max(last.value, mediant))

    def to_dict(self, with_convergents: bool = True) -> dict:
        body = {
            "target": str(self.target),
            "quotients": list(self.quotients[: self.certified_count]),
            "certified_count": self.certified_count,
        }
        if with_convergents:
            body["convergents"] = [
                conv.to_dict() for conv in convergents(self, self.certified_count - 1)
            ]
        return body


def cf_of_rational(p: int, q: int) -> ContinuedFraction:
    """
    Euclidean expansion of p/q. The last quotient is at least 2 unless the expansion has a single
    term.
    """
    target = RealTarget.rational(p, q)
    numerator, denominator = target.top, target.bottom
    quotients = []
    while denominator:
        quotient, remainder = divmod(numerator, denominator)
        quotients.append(quotient)
        numerator, denominator = denominator, remainder
    return ContinuedFraction(target, tuple(quotients), len(quotients))


def convergents(cf: ContinuedFraction, upto: int) -> list[Convergent]:
    """
    Convergents p_0/q_0 ... p_upto/q_upto from p_i = a_i·p_(i-1) + p_(i-2), q likewise, seeded
    with p_(-1) = 1, q_(-1) = 0.

    Raises
    ------
    QuotientRangeError
        If ``upto`` reaches past the certified quotients.
    """
    if upto < 0:
        raise ValidationError(f"Convergent index must be non-negative, got {upto}.")
    if upto >= cf.certified_count:
        raise QuotientRangeError(
            f"Convergent {upto} requested but only {cf.certified_count} quotients are certified."
        )
    p_prev, q_prev, p_cur, q_cur = 0, 1, 1, 0
    result = []
    for index, quotient in enumerate(cf.quotients[: upto + 1]):
        p_prev, p_cur = p_cur, quotient * p_cur + p_prev
        q_prev, q_cur = q_cur, quotient * q_cur + q_prev
        result.append(Convergent(index, p_cur, q_cur))
    return result


def _expand(target: RealTarget, count: int, bits: int) -> list[int]:
    remainder = target.enclosure(bits)
    quotients = []
    while len(quotients) < count:
        quotient = remainder.floor()
        if quotient is None:
            break
        quotients.append(quotient)
        if remainder.lo == quotient:
            # next remainder unbounded at this precision
            break
        remainder = (remainder - quotient).reciprocal()
    return quotients


def cf_log_ratio(
    c: int,
    b: int,
    count: int,
    precision: Precision = DEFAULT_PRECISION,
    allow_common_factor: bool = False,
) -> ContinuedFraction:
    """
    Certified leading quotients of log c / log b.

    Parameters
    ----------
    c, b : int
        Integers >= 2, coprime unless ``allow_common_factor`` is set.
    count : int
        Number of quotients wanted.
    precision : Precision
        Working precision schedule.
    allow_common_factor : bool
        Only multiplicative independence is needed by the expansion itself.

    Returns
    -------
    ContinuedFraction
        Exactly ``count`` certified quotients.

    Raises
    ------
    RationalRatioError
        If b and c are multiplicatively dependent.
    CertificationBudgetExceededError
        If the quotients cannot be certified within the precision budget.
    """
    if count < 1:
        raise ValidationError(f"count must be positive, got {count}.")
    target = RealTarget.log_ratio(c, b)
    if not allow_common_factor and gcd(b, c) != 1:
        raise ValidationError(f"gcd({b}, {c}) != 1.")

    def attempt(bits: int) -> list[int] | None:
        quotients = _expand(target, count, bits)
        return quotients if len(quotients) >= count else None

    quotients = certify(attempt, precision, what=f"{count} quotients of {target}")
    logger.debug("Certified %d quotients of %s", count, target)
    return ContinuedFraction(target, tuple(quotients), count)


def extend(
    cf: ContinuedFraction, count: int, precision: Precision = DEFAULT_PRECISION
) -> ContinuedFraction:
    """Return an expansion of the same target with at least ``count`` certified quotients."""
    if count <= cf.certified_count:
        return cf
    if cf.target.is_rational:
        raise QuotientRangeError(
            f"{cf.target} has only {len(cf.quotients)} quotients, {count} requested."
        )
    return cf_log_ratio(
        cf.target.top, cf.target.bottom, count, precision, allow_common_factor=True
    )


def _power_side(c: int, b: int, exponents: tuple[int, int]) -> tuple[gmpy2.mpz, gmpy2.mpz]:
    """c^u·b^v as a (numerator, denominator) pair of integers."""
    u, v = exponents
    c, b = gmpy2.mpz(c), gmpy2.mpz(b)
    return c ** max(u, 0) * b ** max(v, 0), c ** max(-u, 0) * b ** max(-v, 0)


def _log_estimate(c: int, b: int, exponents: tuple[int, int]) -> gmpy2.mpfr:
    numerator, denominator = _power_side(c, b, exponents)
    bits = 2 * max(numerator.bit_length(), denominator.bit_length()) + 64
    with gmpy2.context(precision=bits):
        return gmpy2.log(numerator) - gmpy2.log(denominator)


def _largest_fitting(fits, guess: int) -> int:
    # fits(0) always holds and fits is monotone
    low = max(guess, 0)
    while not fits(low):
        low //= 2
    step = 1
    while fits(low + step):
        low += step
        step *= 2
    high = low + step
    while high - low > 1:
        middle = (low + high) // 2
        if fits(middle):
            low = middle
        else:
            high = middle
    return low


def shanks_quotients(c: int, b: int, count: int) -> list[int]:
    """
    Quotients of log c / log b by exact power comparison.

    With x0 = c and x1 = b, each quotient is the largest a with x1^a <= x0, and the pair moves on
    to (x1, x0 / x1^a). Every x is kept as c^u·b^v through its exponents, so a comparison is one
    integer inequality. The quotient is estimated from high precision logarithms and then fixed
    by exact comparisons. Stops early if the ratio turns out rational.
    """
    if b < 2 or c < 2:
        raise ValidationError(f"shanks_quotients needs b, c >= 2, got ({c}, {b}).")
    x0, x1 = (1, 0), (0, 1)
    quotients = []
    while len(quotients) < count:

        def fits(a: int, x0=x0, x1=x1) -> bool:
            numerator, denominator = _power_side(c, b, (a * x1[0] - x0[0], a * x1[1] - x0[1]))
            return numerator <= denominator

        estimate = _log_estimate(c, b, x0) / _log_estimate(c, b, x1)
        quotient = _largest_fitting(fits, int(gmpy2.floor(estimate)))
        quotients.append(quotient)
        x2 = (x0[0] - quotient * x1[0], x0[1] - quotient * x1[1])
        numerator, denominator = _power_side(c, b, x2)
        if numerator == denominator:
            break
        x0, x1 = x1, x2
    return quotients


@dataclass(frozen=True)
class LegendreLocation:
    """
    Attributes
    ----------
    applicable: bool
        |α - p/q| < 1/(2q²) holds.
    index: int | None
        Index of the convergent equal to p/q in lowest terms, when applicable.
    """

    applicable: bool
    index: int | None = None


def legendre_locate(
    cf: ContinuedFraction, p: int, q: int, precision: Precision = DEFAULT_PRECISION
) -> LegendreLocation:
    """
    Locate p/q among the convergents when it is close enough to the target to be one.

    Parameters
    ----------
    cf : ContinuedFraction
        Expansion of the target. Extended internally if the convergent lies further.
    p, q : int
        The candidate fraction, q >= 1.
    precision : Precision

    Returns
    -------
    LegendreLocation
        Not applicable when |α - p/q| >= 1/(2q²).

    Raises
    ------
    CertificationBudgetExceededError
        If the closeness test cannot be decided.
    InvariantViolationError
        If a close fraction is not found among the convergents.
    """
    if q < 1:
        raise ValidationError(f"q must be positive, got {q}.")
    target = cf.target

    def close_enough(bits: int) -> bool | None:
        order = (abs(target.offset(p, q, bits)) * (2 * q)).compare(target.scale(bits))
        return None if order is None else order < 0

    if target.is_rational:
        close = abs(target.value - Fraction(p, q)) < Fraction(1, 2 * q * q)
    else:
        close = certify(close_enough, precision, what=f"|{target} - {p}/{q}| < 1/(2q^2)")
    if not close:
        return LegendreLocation(False)

    common = gcd(p, q)
    wanted = (p // common, q // common)
    p_prev, q_prev, p_cur, q_cur = 0, 1, 1, 0
    index, current = 0, cf
    while True:
        if index >= current.certified_count:
            if target.is_rational:
                break
            current = extend(current, 2 * current.certified_count, precision)
        quotient = current.quotients[index]
        p_prev, p_cur = p_cur, quotient * p_cur + p_prev
        q_prev, q_cur = q_cur, quotient * q_cur + q_prev
        if (p_cur, q_cur) == wanted:
            return LegendreLocation(True, index)
        if q_cur > wanted[1]:
            break
        index += 1
    raise InvariantViolationError(
        f"{p}/{q} is within 1/(2q^2) of {target} but is not a convergent",
        {"p": p, "q": q, "target": str(target)},
    )


@dataclass(frozen=True)
class GapBounds:
    """
    1/(q_i·(q_(i+1) + q_i)) < |α - p_i/q_i| < 1/(q_i·q_(i+1)).
    """

    lower_holds: bool
    upper_holds: bool


def gap_bounds_check(
    cf: ContinuedFraction, i: int, precision: Precision = DEFAULT_PRECISION
) -> GapBounds:
    """
    Certify the two-sided distance bounds of the i-th convergent.

    Raises
    ------
    QuotientRangeError
        If quotient i+1 is not certified.
    ValidationError
        For a rational target whose (i+1)-th convergent is the target itself, where the upper bound
        degenerates into an equality.
    """
    if i < 0 or i + 1 >= cf.certified_count:
        raise QuotientRangeError(f"Index {i} needs {i + 2} certified quotients.")
    target = cf.target
    if target.is_rational and i + 2 >= len(cf.quotients):
        raise ValidationError(f"Convergent {i + 1} of {target} is the target itself.")
    pair = convergents(cf, i + 1)
    p_i, q_i, q_next = pair[i].p, pair[i].q, pair[i + 1].q

    def decide(bits: int) -> GapBounds | None:
        distance = abs(target.offset(p_i, q_i, bits))
        scale = target.scale(bits)
        lower = (distance * (q_next + q_i)).compare(scale)
        upper = (distance * q_next).compare(scale)
        if lower is None or upper is None:
            return None
        return GapBounds(lower > 0, upper < 0)

    return certify(decide, precision, what=f"distance bounds of convergent {i} of {target}")
