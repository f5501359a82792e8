# This file is part of ternary.
#
# SPDX-License-Identifier: MIT
"""
Value types of the equations a^x + b^y = c^z, A^X + λB^Y = C^Z and u^l ± v^m = k.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from math import gcd

from ternary.diophantine.exceptions import ValidationError


def _check_exponents(**exponents: int):
    for name, value in exponents.items():
        if not isinstance(value, int) or value < 1:
            raise ValidationError(f"Exponent {name} must be a positive integer, got {value!r}.")


@dataclass(frozen=True)
class Triple:
    """
    Base triple (a, b, c) of a^x + b^y = c^z.

    Bases are pairwise coprime and larger than 1. A triple sharing a prime between two bases has
    no solution at all, so nothing is lost by rejecting it here.

    Attributes
    ----------
    a: int
    b: int
    c: int
    """

    a: int
    b: int
    c: int

    def __post_init__(self):
        for name in ("a", "b", "c"):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 2:
                raise ValidationError(f"Base {name} must be an integer >= 2, got {value!r}.")
        if gcd(self.a, self.b) != 1 or gcd(self.b, self.c) != 1 or gcd(self.a, self.c) != 1:
            raise ValidationError(f"Bases {self.as_tuple()} are not pairwise coprime.")

    @property
    def max(self) -> int:
        return max(self.a, self.b, self.c)

    def as_tuple(self) -> tuple[int, int, int]:
        return self.a, self.b, self.c

    def __str__(self):
        return f"({self.a}, {self.b}, {self.c})"


@dataclass(frozen=True)
class Solution:
    """Exponents (x, y, z) of a solution of a^x + b^y = c^z."""

    x: int
    y: int
    z: int

    def __post_init__(self):
        _check_exponents(x=self.x, y=self.y, z=self.z)

    def solves(self, triple: Triple) -> bool:
        return triple.a**self.x + triple.b**self.y == triple.c**self.z

    @property
    def sort_key(self) -> tuple[int, int, int]:
        return self.z, self.y, self.x

    def as_list(self) -> list[int]:
        return [self.x, self.y, self.z]


class Role(Enum):
    """
    The three ways of reading a^x + b^y = c^z as A^X + λB^Y = C^Z.

    The value names the bases (A, B, C) in terms of (a, b, c).
    """

    ABC = "abc"
    CAB = "cab"
    CBA = "cba"

    @property
    def sign(self) -> int:
        return 1 if self is Role.ABC else -1

    def bases(self, triple: Triple) -> tuple[int, int, int]:
        named = {"a": triple.a, "b": triple.b, "c": triple.c}
        return tuple(named[letter] for letter in self.value)

    def exponents(self, solution: Solution) -> tuple[int, int, int]:
        # each exponent travels with its base
        if self is Role.ABC:
            return solution.x, solution.y, solution.z
        if self is Role.CAB:
            return solution.z, solution.x, solution.y
        return solution.z, solution.y, solution.x


@dataclass(frozen=True)
class TransformedSolution:
    """Exponents (X, Y, Z) of a solution of A^X + λB^Y = C^Z."""

    X: int
    Y: int
    Z: int

    def __post_init__(self):
        _check_exponents(X=self.X, Y=self.Y, Z=self.Z)

    def as_list(self) -> list[int]:
        return [self.X, self.Y, self.Z]


@dataclass(frozen=True)
class TransformedInstance:
    """
    One element (A, B, C, λ) of the transform set of a triple.

    Attributes
    ----------
    A: int
    B: int
    C: int
    lam: int
        The sign λ, +1 or -1.
    origin: Triple
        The triple the instance was built from.
    role: Role
        Which reading of the origin this instance is.
    """

    A: int
    B: int
    C: int
    lam: int
    origin: Triple
    role: Role

    def __post_init__(self):
        if (self.A, self.B, self.C) != self.role.bases(self.origin) or self.lam != self.role.sign:
            raise ValidationError(
                f"({self.A}, {self.B}, {self.C}, {self.lam}) is not the {self.role.value} reading "
                f"of {self.origin}."
            )

    @classmethod
    def of(cls, origin: Triple, role: Role) -> TransformedInstance:
        A, B, C = role.bases(origin)
        return cls(A, B, C, role.sign, origin, role)

    def is_solution(self, solution: TransformedSolution) -> bool:
        return self.A**solution.X + self.lam * self.B**solution.Y == self.C**solution.Z

    def require_solution(self, solution: TransformedSolution):
        if not self.is_solution(solution):
            raise ValidationError(
                f"{solution.as_list()} does not solve {self.A}^X {'+' if self.lam > 0 else '-'} "
                f"{self.B}^Y = {self.C}^Z."
            )

    def as_tuple(self) -> tuple[int, int, int, int]:
        return self.A, self.B, self.C, self.lam

    def __str__(self):
        return f"({self.A}, {self.B}, {self.C}, {self.lam:+d})"


@dataclass(frozen=True, order=True)
class ExponentPair:
    """Exponents (l, m) of a solution of u^l + v^m = k or u^l - v^m = k."""

    l: int  # noqa: E741
    m: int

    def __post_init__(self):
        _check_exponents(l=self.l, m=self.m)

    def as_list(self) -> list[int]:
        return [self.l, self.m]
