# This file is part of ternary.
#
# SPDX-License-Identifier: MIT
"""
Exact integer primitives: perfect powers, modular exponentiation, factorization, valuations and
multiplicative orders.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from math import gcd, lcm, prod

import gmpy2
from sympy import isprime, primerange
from sympy.ntheory import pollard_rho

from ternary.diophantine.config import DEFAULT_FACTORING, FactoringBudget
from ternary.diophantine.exceptions import FactoringBudgetExceededError, ValidationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PrimeFactorization:
    """
    Complete factorization of an integer n >= 2.

    Attributes
    ----------
    factors: tuple[tuple[int, int], ...]
        (prime, exponent) pairs, primes strictly increasing.
    """

    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        previous = 1
        for prime, exponent in self.factors:
            if prime <= previous or exponent < 1:
                raise ValidationError(f"Malformed factorization {self.factors}.")
            previous = prime

    @property
    def value(self) -> int:
        """The integer this factorization reconstructs."""
        return prod(prime**exponent for prime, exponent in self.factors)

    @property
    def primes(self) -> list[int]:
        return [prime for prime, _ in self.factors]

    def __iter__(self):
        return iter(self.factors)


def perfect_power_exponent(n: int, base: int) -> int | None:
    """
    Find e with base**e == n.

    Parameters
    ----------
    n : int
        The candidate power, at least 2.
    base : int
        The base, at least 2.

    Returns
    -------
    int | None
        The exponent if n is an exact power of base, None otherwise.
    """
    if n < 2 or base < 2:
        raise ValidationError(f"perfect_power_exponent needs n, base >= 2, got ({n}, {base}).")
    rest, exponent = gmpy2.remove(n, base)
    if rest != 1:
        return None
    return int(exponent)


def perfect_power_root(n: int) -> tuple[int, int]:
    """
    Write n = root**k with k maximal.

    Two integers >= 2 are multiplicatively dependent exactly when their roots coincide.
    """
    if n < 2:
        raise ValidationError(f"perfect_power_root needs n >= 2, got {n}.")
    root, exponent = n, 1
    reduced = True
    while reduced:
        reduced = False
        for k in primerange(2, root.bit_length() + 1):
            candidate, exact = gmpy2.iroot(root, k)
            if exact:
                root, exponent = int(candidate), exponent * k
                reduced = True
                break
    return root, exponent


def mod_pow(r: int, e: int, m: int) -> int:
    """
    r**e mod m, in O(log e) multiplications.
    """
    if m < 2:
        raise ValidationError(f"Modulus must be at least 2, got {m}.")
    if r < 0 or e < 0:
        raise ValidationError("mod_pow works on non-negative base and exponent.")
    return int(gmpy2.powmod(r, e, m))


def p_adic_valuation(p: int, n: int) -> int:
    """
    Largest alpha with p**alpha dividing n.
    """
    if n < 1:
        raise ValidationError(f"Valuations are taken of positive integers, got {n}.")
    if not isprime(p):
        raise ValidationError(f"{p} is not a prime.")
    return int(gmpy2.remove(n, p)[1])


@lru_cache(maxsize=4)
def _trial_primes(limit: int) -> tuple[int, ...]:
    return tuple(primerange(2, limit))


def _split(n: int, budget: FactoringBudget) -> list[int]:
    """Prime factors of a cofactor free of small primes, with multiplicity."""
    if isprime(n):
        return [n]
    if n.bit_length() > budget.max_bits:
        raise FactoringBudgetExceededError(
            f"factoring budget exceeded: composite cofactor of {n.bit_length()} bits", n
        )
    root, k = perfect_power_root(n)
    if k > 1:
        return _split(root, budget) * k
    logger.debug("Splitting %d-bit cofactor with rho", n.bit_length())
    divisor = pollard_rho(n, seed=budget.seed, max_steps=budget.max_steps)
    if divisor is None:
        raise FactoringBudgetExceededError(
            f"factoring budget exceeded: rho found no divisor of a {n.bit_length()}-bit cofactor",
            n,
        )
    return _split(divisor, budget) + _split(n // divisor, budget)


def factorize(n: int, budget: FactoringBudget = DEFAULT_FACTORING) -> PrimeFactorization:
    """
    Factor n completely: trial division below the budget's limit, then seeded rho splitting.

    Parameters
    ----------
    n : int
        The integer to factor, at least 2.
    budget : FactoringBudget
        Limits of the fallback method.

    Returns
    -------
    PrimeFactorization
        The factorization, deterministic for a given budget.

    Raises
    ------
    FactoringBudgetExceededError
        If a composite cofactor is beyond the budget. Partial results are never returned.
    """
    if n < 2:
        raise ValidationError(f"factorize needs n >= 2, got {n}.")
    exponents: dict[int, int] = {}
    rest = n
    for prime in _trial_primes(budget.trial_limit):
        if prime * prime > rest:
            break
        if rest % prime == 0:
            rest, multiplicity = gmpy2.remove(rest, prime)
            rest = int(rest)
            exponents[prime] = int(multiplicity)
    if rest > 1:
        for prime in _split(rest, budget):
            exponents[prime] = exponents.get(prime, 0) + 1
    return PrimeFactorization(tuple(sorted(exponents.items())))


def carmichael_lambda(n: int, budget: FactoringBudget = DEFAULT_FACTORING) -> int:
    """
    Exponent of the unit group modulo n.
    """
    if n < 1:
        raise ValidationError(f"carmichael_lambda needs n >= 1, got {n}.")
    if n == 1:
        return 1
    parts = []
    for prime, exponent in factorize(n, budget):
        if prime == 2 and exponent >= 3:
            parts.append(2 ** (exponent - 2))
        else:
            parts.append(prime ** (exponent - 1) * (prime - 1))
    return lcm(*parts)


def multiplicative_order(r: int, s: int, budget: FactoringBudget = DEFAULT_FACTORING) -> int:
    """
    Least n >= 1 with r**n == 1 (mod s).

    The order is found by starting from the Carmichael function of s and removing prime factors
    while the power stays 1.

    Raises
    ------
    ValidationError
        If gcd(r, s) != 1 or s < 2.
    FactoringBudgetExceededError
        If s or its Carmichael function cannot be factored within budget.
    """
    if s < 2:
        raise ValidationError(f"Modulus must be at least 2, got {s}.")
    if gcd(r, s) != 1:
        raise ValidationError(f"gcd({r}, {s}) != 1, the order is undefined.")
    residue = r % s
    order = carmichael_lambda(s, budget)
    if order == 1:
        return 1
    for prime in factorize(order, budget).primes:
        while order % prime == 0 and gmpy2.powmod(residue, order // prime, s) == 1:
            order //= prime
    return order
