# This file is part of ternary.
#
# SPDX-License-Identifier: MIT
"""
Order machinery: least exponents with r^n = ±1 (mod s), lifting them to s·t, and the congruences
two solutions of A^X + λB^Y = C^Z must satisfy.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from math import gcd, prod

import gmpy2

from ternary.diophantine.config import DEFAULT_FACTORING, FactoringBudget
from ternary.diophantine.exceptions import InvariantViolationError, ValidationError
from ternary.diophantine.numeric import factorize, mod_pow, multiplicative_order, p_adic_valuation
from ternary.diophantine.report import LemmaReport
from ternary.diophantine.triple import TransformedInstance, TransformedSolution

logger = logging.getLogger(__name__)

ODD_OR_FOUR_DIVIDES = "2 does not divide C or 4 divides C^Z1"

_MAX_DIVISOR_BITS = 1 << 20


@dataclass(frozen=True)
class OrderRecord:
    """
    Least n1 with r^n1 = δ1 (mod s), δ1 in {1, -1}, and the cofactor f of r^n1 = s·f + δ1.

    The cofactor can be astronomically large, it is only built when ``f`` is read. Valuations of f
    at the primes of s are available through ``cofactor_valuation`` without building it.

    Attributes
    ----------
    r: int
    s: int
    n1: int
    delta1: int
    """

    r: int
    s: int
    n1: int
    delta1: int

    def __post_init__(self):
        if self.delta1 not in (1, -1):
            raise ValidationError(f"delta1 must be +1 or -1, got {self.delta1}.")
        if mod_pow(self.r, self.n1, self.s) != self.delta1 % self.s:
            raise InvariantViolationError(
                f"{self.r}^{self.n1} is not {self.delta1:+d} modulo {self.s}",
                {"r": self.r, "s": self.s, "n1": self.n1, "delta1": self.delta1},
            )

    @cached_property
    def f(self) -> int:
        f, remainder = divmod(self.r**self.n1 - self.delta1, self.s)
        if remainder or f < 1:
            raise InvariantViolationError(
                f"{self.r}^{self.n1} - ({self.delta1}) is not a positive multiple of {self.s}",
                {"r": self.r, "s": self.s, "n1": self.n1},
            )
        return f

    @property
    def f_bits(self) -> int:
        """Approximate bit length of f."""
        return max(1, self.n1 * self.r.bit_length() - self.s.bit_length() + 1)

    def cofactor_valuation(self, p: int, cap: int) -> int:
        """
        min(v_p(f), cap), computed modulo a power of p.

        Parameters
        ----------
        p : int
            A prime.
        cap : int
            Valuations above this value are reported as ``cap``.
        """
        if cap <= 0:
            return 0
        depth = cap + p_adic_valuation(p, self.s)
        modulus = p**depth
        residue = (int(gmpy2.powmod(self.r, self.n1, modulus)) - self.delta1) % modulus
        if residue == 0:
            return cap
        return min(p_adic_valuation(p, residue) - (depth - cap), cap)

    def gcd_with_power(
        self, base: int, exponent: int, budget: FactoringBudget = DEFAULT_FACTORING
    ) -> int:
        """gcd(base^exponent, f), one prime of ``base`` at a time."""
        if exponent == 0:
            return 1
        return prod(
            p ** self.cofactor_valuation(p, exponent * e)
            for p, e in factorize(base, budget)
        )

    def to_dict(self) -> dict:
        body = {"r": self.r, "s": self.s, "n1": self.n1, "delta1": self.delta1}
        if self.f_bits <= 4096:
            body["f"] = self.f
        else:
            body["f_bits"] = self.f_bits
        return body


def least_pm1(r: int, s: int, budget: FactoringBudget = DEFAULT_FACTORING) -> OrderRecord:
    """
    Least positive n1 with r^n1 = ±1 (mod s).

    n1 is the multiplicative order d of r when -1 is not a power of r modulo s, d/2 otherwise.

    Parameters
    ----------
    r : int
        The base, at least 2.
    s : int
        The modulus, at least 3 and coprime to r.
    budget : FactoringBudget
        Factoring limits used by the order computation.

    Raises
    ------
    ValidationError
        If s < 3 (the two signs coincide modulo 2) or gcd(r, s) != 1.
    """
    if r < 2:
        raise ValidationError(f"Base must be at least 2, got {r}.")
    if s < 3:
        raise ValidationError(f"Modulus must be at least 3, got {s}: the signs +1 and -1 coincide.")
    if gcd(r, s) != 1:
        raise ValidationError(f"gcd({r}, {s}) != 1.")
    order = multiplicative_order(r, s, budget)
    if order % 2 == 0 and mod_pow(r, order // 2, s) == s - 1:
        return OrderRecord(r, s, order // 2, -1)
    return OrderRecord(r, s, order, 1)


def check_pm1_multiples(record: OrderRecord, n: int) -> dict:
    """
    Check that r^n = ±1 (mod s) exactly when n1 divides n, and that r^n1 - δ1 then divides
    r^n - δ with δ = δ1^(n/n1).

    Returns
    -------
    dict
        ``congruence``, ``n1_divides``, ``equivalent`` (the two agree) and ``divides``. The last
        one is None when n1 does not divide n or r^n1 is too large to build.
    """
    if n < 1:
        raise ValidationError(f"n must be positive, got {n}.")
    congruence = mod_pow(record.r, n, record.s) in (1, record.s - 1)
    n1_divides = n % record.n1 == 0
    divides = None
    if n1_divides and record.n1 * record.r.bit_length() <= _MAX_DIVISOR_BITS:
        divisor = record.r**record.n1 - record.delta1
        delta = record.delta1 ** (n // record.n1)
        divides = divisor == 1 or (int(gmpy2.powmod(record.r, n, divisor)) - delta) % divisor == 0
    return {
        "congruence": congruence,
        "n1_divides": n1_divides,
        "equivalent": congruence == n1_divides,
        "divides": divides,
    }


@dataclass(frozen=True)
class LiftQuery:
    """
    A candidate exponent n' with r^n' = δ' (mod s·t), against the record of r modulo s.

    Every prime of t divides s, and s is odd or divisible by 4.
    """

    base: OrderRecord
    t: int
    n_prime: int
    delta_prime: int

    def __post_init__(self):
        _check_lift_modulus(self.base.s, self.t)
        if self.n_prime < 1:
            raise ValidationError(f"n' must be positive, got {self.n_prime}.")
        if self.delta_prime not in (1, -1):
            raise ValidationError(f"delta' must be +1 or -1, got {self.delta_prime}.")

    @classmethod
    def of(
        cls,
        r: int,
        s: int,
        t: int,
        n_prime: int,
        delta_prime: int,
        budget: FactoringBudget = DEFAULT_FACTORING,
    ) -> LiftQuery:
        _check_lift_modulus(s, t)
        return cls(least_pm1(r, s, budget), t, n_prime, delta_prime)


def _check_lift_modulus(s: int, t: int):
    if s % 4 == 2:
        raise ValidationError(f"s = {s} is 2 mod 4: neither odd nor divisible by 4.")
    if t < 2:
        raise ValidationError(f"t must be at least 2, got {t}.")
    rest = t
    while (common := gcd(rest, s)) > 1:
        rest //= common
    if rest != 1:
        raise ValidationError(f"t = {t} has a prime factor not dividing s = {s}.")


@dataclass(frozen=True)
class LiftReport:
    """
    Attributes
    ----------
    congruence_holds: bool
        r^n' = δ' (mod s·t).
    n1_divides: bool
        n1 divides n'.
    divisibility_holds: bool
        n'/n1 = 0 (mod t / gcd(t, f)).
    n2: int | None
        n'/n1 when integral.
    delta_consistent: bool | None
        δ' = δ1^n2 when n2 is defined.
    """

    congruence_holds: bool
    n1_divides: bool
    divisibility_holds: bool
    n2: int | None = None
    delta_consistent: bool | None = None

    @property
    def implication_holds(self) -> bool:
        """A congruence modulo s·t forces both divisibilities."""
        return not self.congruence_holds or (self.n1_divides and self.divisibility_holds)

    def to_dict(self) -> dict:
        return {
            "congruence_holds": self.congruence_holds,
            "n1_divides": self.n1_divides,
            "divisibility_holds": self.divisibility_holds,
            "n2": self.n2,
            "delta_consistent": self.delta_consistent,
        }


def verify_order_lift(query: LiftQuery, budget: FactoringBudget = DEFAULT_FACTORING) -> LiftReport:
    """
    Evaluate the three facts of an order lift independently.

    Parameters
    ----------
    query : LiftQuery
        The record of r modulo s with the candidate n', δ' and the factor t.
    budget : FactoringBudget
        Factoring limits for t.

    Returns
    -------
    LiftReport
        Each fact on its own, so the implication can be tested.
    """
    record = query.base
    modulus = record.s * query.t
    congruence = mod_pow(record.r, query.n_prime, modulus) == query.delta_prime % modulus
    n1_divides = query.n_prime % record.n1 == 0
    if not n1_divides:
        return LiftReport(congruence, False, False)
    n2 = query.n_prime // record.n1
    common = record.gcd_with_power(query.t, 1, budget)
    divisibility = n2 % (query.t // common) == 0
    report = LiftReport(congruence, True, divisibility, n2, query.delta_prime == record.delta1**n2)
    if not report.implication_holds:
        logger.warning("Order lift implication failed for %s", query)
    return report


def _orient(first: TransformedSolution, second: TransformedSolution, key) -> tuple:
    if key(second) < key(first):
        return second, first, "swapped"
    return first, second, "as-given"


def check_pair_congruence(
    inst: TransformedInstance, s1: TransformedSolution, s2: TransformedSolution
) -> LemmaReport:
    """
    For two distinct solutions with Z1 <= Z2: A^|X1·Y2 - X2·Y1| = (-λ)^(Y1+Y2) (mod C^Z1).

    Whether the cross term X1·Y2 - X2·Y1 is nonzero is only recorded. It vanishes on
    proportional pairs such as (1, 1, 1) and (2, 2, 4) of 5 - 3 = 2, where the congruence
    reads 1 = 1; ``values["known_exception"]`` marks those.

    Raises
    ------
    ValidationError
        If an input does not solve the instance or the two solutions coincide.
    """
    inst.require_solution(s1)
    inst.require_solution(s2)
    if s1 == s2:
        raise ValidationError("Identical solutions do not form a pair.")
    first, second, orientation = _orient(s1, s2, lambda s: s.Z)
    report = LemmaReport("pair-congruence", orientation=orientation)
    cross = first.X * second.Y - second.X * first.Y
    modulus = inst.C**first.Z
    report.observe("cross-term-nonzero", cross != 0)
    expected = (-inst.lam) ** (first.Y + second.Y) % modulus
    report.conclude("congruence", mod_pow(inst.A, abs(cross), modulus) == expected)
    report.values = {"cross_term": cross, "modulus_exponent": first.Z}
    if cross == 0:
        report.values["known_exception"] = "X1*Y2 = X2*Y1, the congruence is trivial"
    return report


def check_cofactor_gcd(
    inst: TransformedInstance,
    s1: TransformedSolution,
    s2: TransformedSolution,
    solutions: list[TransformedSolution] | None = None,
    budget: FactoringBudget = DEFAULT_FACTORING,
) -> LemmaReport:
    """
    For solutions with Z1 < Z2 and Z1 minimal: gcd(C^(Z2-Z1), f) divides Y2, when C is odd or
    4 divides C^Z1. Here f is the cofactor of the least ±1 exponent of A modulo C^Z1.

    Parameters
    ----------
    inst : TransformedInstance
    s1, s2 : TransformedSolution
        The pair, auto-ordered by Z.
    solutions : list[TransformedSolution] | None
        The known solutions of the instance, used to check that Z1 is minimal.
    budget : FactoringBudget

    Raises
    ------
    ValidationError
        On non-solutions, equal Z values or a Z1 that is not minimal.
    """
    inst.require_solution(s1)
    inst.require_solution(s2)
    first, second, orientation = _orient(s1, s2, lambda s: s.Z)
    if first.Z == second.Z:
        raise ValidationError(f"Both solutions have Z = {first.Z}, the check needs Z1 < Z2.")
    if solutions is not None and any(other.Z < first.Z for other in solutions):
        raise ValidationError(f"Z1 = {first.Z} is not minimal over the given solutions.")

    report = LemmaReport("cofactor-gcd", orientation=orientation)
    s = inst.C**first.Z
    report.require(ODD_OR_FOUR_DIVIDES, inst.C % 2 == 1 or s % 4 == 0)
    if s < 3:
        # the least ±1 exponent is undefined modulo 2
        report.values = {"gcd": None}
        return report
    record = least_pm1(inst.A, s, budget)
    common = record.gcd_with_power(inst.C, second.Z - first.Z, budget)
    report.conclude("gcd-divides-Y2", second.Y % common == 0)
    report.values = {"gcd": common, "n1": record.n1, "delta1": record.delta1}
    return report
