# This file is part of ternary.
#
# SPDX-License-Identifier: MIT
"""
Solvers for a^x + b^y = c^z and for the two-term equations u^l + v^m = k and u^l - v^m = k, the
exponent ceiling of the three-term equation, and its transform set.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from math import gcd

from ternary.diophantine.config import DEFAULT_PRECISION, Precision
from ternary.diophantine.exceptions import InvariantViolationError, ValidationError
from ternary.diophantine.interval import certify, log_interval
from ternary.diophantine.numeric import perfect_power_exponent
from ternary.diophantine.triple import (
    ExponentPair,
    Role,
    Solution,
    TransformedInstance,
    TransformedSolution,
    Triple,
)

logger = logging.getLogger(__name__)

CEILING_FACTOR = 6500
MAX_TWO_TERM_SOLUTIONS = 2


def gelfond_bound(t: Triple, precision: Precision = DEFAULT_PRECISION) -> int:
    """
    ⌈6500·(ln max{a, b, c})³⌉, an exponent ceiling no solution reaches.

    The value is certified: the enclosure of the real number has a single ceiling.
    """

    def decide(bits: int) -> int | None:
        return (CEILING_FACTOR * log_interval(t.max, bits) ** 3).ceil()

    return certify(decide, precision, what=f"exponent ceiling of {t}")


@dataclass(frozen=True)
class SolutionSet:
    """
    Solutions of a^x + b^y = c^z with exponents up to ``effective_cap``.

    Attributes
    ----------
    triple: Triple
    cap: int
        The cap asked for.
    effective_cap: int
        min(cap, bound).
    bound: int
        The exponent ceiling of the triple.
    solutions: tuple[Solution, ...]
        Sorted by (z, y, x).
    """

    triple: Triple
    cap: int
    effective_cap: int
    bound: int
    solutions: tuple[Solution, ...]

    @property
    def complete(self) -> bool:
        """True when the cap reaches the ceiling, i.e. no solution can be missing."""
        return self.cap >= self.bound

    @property
    def count(self) -> int:
        return len(self.solutions)

    def to_dict(self) -> dict:
        return {
            "a": self.triple.a,
            "b": self.triple.b,
            "c": self.triple.c,
            "cap": self.cap,
            "effective_cap": self.effective_cap,
            "bound": self.bound,
            "complete": self.complete,
            "solutions": [solution.as_list() for solution in self.solutions],
        }


def _largest_power_below(base: int, power: int, exponent: int, limit: int) -> tuple[int, int]:
    while power * base < limit:
        power *= base
        exponent += 1
    return power, exponent


def _exact_exponent(rest: int, base: int) -> int | None:
    if rest < 2:
        return None
    return perfect_power_exponent(rest, base)


def enumerate_solutions(
    t: Triple, cap: int, precision: Precision = DEFAULT_PRECISION
) -> SolutionSet:
    """
    All solutions of a^x + b^y = c^z with max{x, y, z} <= min(cap, ceiling).

    z runs while c^z <= a^cap + b^cap. The larger of a^x and b^y lies in [c^z/2, c^z), which
    holds at most one power of each base: the largest one below c^z. Both candidates move up
    with z, and the other exponent is read off the difference as an exact power.

    Parameters
    ----------
    t : Triple
    cap : int
        Exponent cap, at least 1.
    precision : Precision
        Used for the exponent ceiling.

    Returns
    -------
    SolutionSet
        Flagged incomplete when the cap is below the ceiling.
    """
    if cap < 1:
        raise ValidationError(f"cap must be positive, got {cap}.")
    bound = gelfond_bound(t, precision)
    effective = min(cap, bound)
    if cap < bound:
        logger.debug("Cap %d is below the exponent ceiling %d of %s", cap, bound, t)

    reach = t.a**effective + t.b**effective
    found = set()
    c_power = 1
    a_power, x = 1, 0
    b_power, y = 1, 0
    for z in range(1, effective + 1):
        c_power *= t.c
        if c_power > reach:
            break
        a_power, x = _largest_power_below(t.a, a_power, x, c_power)
        b_power, y = _largest_power_below(t.b, b_power, y, c_power)
        if 1 <= x <= effective and 2 * a_power > c_power:
            other = _exact_exponent(c_power - a_power, t.b)
            if other is not None and other <= effective:
                found.add(Solution(x, other, z))
        if 1 <= y <= effective and 2 * b_power > c_power:
            other = _exact_exponent(c_power - b_power, t.a)
            if other is not None and other <= effective:
                found.add(Solution(other, y, z))

    for solution in found:
        if not solution.solves(t):
            raise InvariantViolationError(
                f"{solution.as_list()} does not solve {t}", {"triple": t.as_tuple()}
            )
    ordered = sorted(found, key=lambda solution: solution.sort_key)
    return SolutionSet(t, cap, effective, bound, tuple(ordered))


def check_two_term_parameters(u: int, v: int, k: int, cap: int = 1):
    """Validate the parameters of u^l ± v^m = k: min{u, v, k} > 1 and gcd(u, v) = 1."""
    if min(u, v, k) < 2:
        raise ValidationError(f"u, v, k must all exceed 1, got ({u}, {v}, {k}).")
    if gcd(u, v) != 1:
        raise ValidationError(f"gcd({u}, {v}) != 1.")
    if cap < 1:
        raise ValidationError(f"cap must be positive, got {cap}.")


def _at_most_two(pairs: list[ExponentPair], equation: str) -> tuple[ExponentPair, ...]:
    if len(pairs) > MAX_TWO_TERM_SOLUTIONS:
        raise InvariantViolationError(
            f"{equation} has {len(pairs)} solutions, at most two are possible",
            {"pairs": [pair.as_list() for pair in pairs]},
        )
    return tuple(sorted(pairs))


def solve_sum(u: int, v: int, k: int, cap: int = 64) -> tuple[ExponentPair, ...]:
    """
    All (l, m) with u^l + v^m = k and l, m <= cap.

    Raises
    ------
    InvariantViolationError
        If a third solution shows up.
    """
    check_two_term_parameters(u, v, k, cap)
    pairs = []
    u_power = 1
    for l in range(1, cap + 1):  # noqa: E741
        u_power *= u
        if u_power >= k:
            break
        rest = k - u_power
        if rest < 2:
            continue
        m = perfect_power_exponent(rest, v)
        if m is not None and m <= cap:
            pairs.append(ExponentPair(l, m))
    return _at_most_two(pairs, f"{u}^l + {v}^m = {k}")


def solve_diff(u: int, v: int, k: int, cap: int = 64) -> tuple[ExponentPair, ...]:
    """
    All (l, m) with u^l - v^m = k and l, m <= cap.

    Raises
    ------
    InvariantViolationError
        If a third solution shows up.
    """
    check_two_term_parameters(u, v, k, cap)
    pairs = []
    u_power = 1
    for l in range(1, cap + 1):  # noqa: E741
        u_power *= u
        rest = u_power - k
        if rest < 2:
            continue
        m = perfect_power_exponent(rest, v)
        if m is not None and m <= cap:
            pairs.append(ExponentPair(l, m))
    return _at_most_two(pairs, f"{u}^l - {v}^m = {k}")


def transformed_instances(t: Triple) -> tuple[TransformedInstance, ...]:
    """(a, b, c, +1), (c, a, b, -1) and (c, b, a, -1), in this order."""
    return tuple(TransformedInstance.of(t, role) for role in Role)


def map_solution(inst: TransformedInstance, s: Solution) -> TransformedSolution:
    """
    Carry a solution of the origin triple over to A^X + λB^Y = C^Z.

    Raises
    ------
    ValidationError
        If ``s`` does not solve the origin triple.
    """
    if not s.solves(inst.origin):
        raise ValidationError(f"{s.as_list()} does not solve {inst.origin}.")
    mapped = TransformedSolution(*inst.role.exponents(s))
    if not inst.is_solution(mapped):
        raise InvariantViolationError(
            f"{mapped.as_list()} does not solve {inst}", {"solution": s.as_list()}
        )
    return mapped


def two_solution_family(k: int) -> tuple[Triple, tuple[Solution, Solution]]:
    """
    The triple (2, 2^k - 1, 2^k + 1) with its solutions (1, 1, 1) and (k + 2, 2, 2).

    Raises
    ------
    ValidationError
        If k < 2.
    """
    if k < 2:
        raise ValidationError(f"k must be at least 2, got {k}.")
    triple = Triple(2, 2**k - 1, 2**k + 1)
    solutions = (Solution(1, 1, 1), Solution(k + 2, 2, 2))
    for solution in solutions:
        if not solution.solves(triple):
            raise InvariantViolationError(
                f"{solution.as_list()} does not solve {triple}", {"k": k}
            )
    return triple, solutions


def is_family_member(t: Triple) -> bool:
    """Whether t is (2, 2^k - 1, 2^k + 1) for some k >= 2, with a and b in either order."""
    if t.a == 2:
        odd = t.b
    elif t.b == 2:
        odd = t.a
    else:
        return False
    return t.c == odd + 2 and odd >= 3 and (odd + 1) & odd == 0
