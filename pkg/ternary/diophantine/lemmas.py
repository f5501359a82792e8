# This file is part of ternary.
#
# SPDX-License-Identifier: MIT
"""
Structural checks on solutions: gap rules of the two-term equations, convergent criteria of
log-ratios, the three-solution condition, and the polylogarithmic threshold.

Every check returns a LemmaReport. Inequalities between logarithms are certified, square roots are
removed by squaring, so no verdict rests on floating point.
"""

from __future__ import annotations

import logging
from collections import Counter
from fractions import Fraction
from math import gcd

from ternary.diophantine.config import (
    DEFAULT_FACTORING,
    DEFAULT_PRECISION,
    FactoringBudget,
    Precision,
)
from ternary.diophantine.congruence import ODD_OR_FOUR_DIVIDES, least_pm1
from ternary.diophantine.contfrac import ContinuedFraction, cf_log_ratio, legendre_locate
from ternary.diophantine.equation import check_two_term_parameters
from ternary.diophantine.exceptions import CertificationBudgetExceededError, ValidationError
from ternary.diophantine.interval import certify, linear_form_interval, log_interval
from ternary.diophantine.report import GapKind, GapWitness, LemmaReport
from ternary.diophantine.triple import (
    ExponentPair,
    Solution,
    TransformedInstance,
    TransformedSolution,
    Triple,
)

logger = logging.getLogger(__name__)

LARGE_BASE = 10**62
COMPANION_LIMIT = 5 * 10**27
THRESHOLD_FACTOR = 6500**6
THRESHOLD_POWER = 18


def _orient_pairs(
    pair1: ExponentPair, pair2: ExponentPair
) -> tuple[ExponentPair, ExponentPair, str]:
    if pair1 == pair2:
        raise ValidationError("Identical pairs do not form a pair of solutions.")
    if pair2.l < pair1.l:
        return pair2, pair1, "swapped"
    return pair1, pair2, "as-given"


def _witness(kind: GapKind, u: int, v: int, low: ExponentPair, high: ExponentPair):
    """t from u^(l2-l1) = v^e·t + 1 and the matching second equation, None if not integral."""
    u_gap = u ** (high.l - low.l)
    if kind is GapKind.SUM:
        if low.m <= high.m:
            return None
        v_gap, v_anchor = v ** (low.m - high.m), v**high.m
    else:
        if high.m <= low.m:
            return None
        v_gap, v_anchor = v ** (high.m - low.m), v**low.m
    t, remainder = divmod(u_gap - 1, v_anchor)
    if remainder or t < 1 or v_gap != u**low.l * t + 1:
        return None
    return GapWitness(kind, t, u_gap, v_gap)


def check_gap_sum(
    u: int, v: int, k: int, pair1: ExponentPair, pair2: ExponentPair
) -> LemmaReport:
    """
    Two solutions (l1, m1), (l2, m2) of u^l + v^m = k with l1 < l2.

    Conclusions: m1 > m2, max{u^(l2-l1), v^(m1-m2)}² > k, u^(l2-l1)·v^(m1-m2) = 1 (mod k), and
    a positive integer t with u^(l2-l1) = v^m2·t + 1, v^(m1-m2) = u^l1·t + 1.

    Raises
    ------
    ValidationError
        On identical pairs, pairs not solving the equation or invalid (u, v, k).
    """
    check_two_term_parameters(u, v, k)
    for pair in (pair1, pair2):
        if u**pair.l + v**pair.m != k:
            raise ValidationError(f"{pair.as_list()} does not solve {u}^l + {v}^m = {k}.")
    low, high, orientation = _orient_pairs(pair1, pair2)
    report = LemmaReport("gap-sum", orientation=orientation)

    descending = report.conclude("m1 > m2", low.m > high.m)
    u_gap = u ** (high.l - low.l)
    if descending:
        v_gap = v ** (low.m - high.m)
        report.conclude("max gap squared exceeds k", max(u_gap, v_gap) ** 2 > k)
        report.conclude("gap product is 1 mod k", (u_gap * v_gap) % k == 1 % k)
    else:
        report.conclude("max gap squared exceeds k", False)
        report.conclude("gap product is 1 mod k", False)
    report.witness = _witness(GapKind.SUM, u, v, low, high)
    report.conclude("witness t", report.witness is not None)
    return report


def check_gap_diff(
    u: int, v: int, k: int, pair1: ExponentPair, pair2: ExponentPair
) -> LemmaReport:
    """
    Two solutions (l1, m1), (l2, m2) of u^l - v^m = k with l1 < l2.

    Conclusions: m1 < m2, the witness t of u^(l2-l1) = v^m1·t + 1, v^(m2-m1) = u^l1·t + 1,
    v^(m2-m1) > u^(l2-l1) > v^m1, v^(m2-m1) > k and v^(m2-m1) - u^(l2-l1) = k·t.
    """
    check_two_term_parameters(u, v, k)
    for pair in (pair1, pair2):
        if u**pair.l - v**pair.m != k:
            raise ValidationError(f"{pair.as_list()} does not solve {u}^l - {v}^m = {k}.")
    low, high, orientation = _orient_pairs(pair1, pair2)
    report = LemmaReport("gap-diff", orientation=orientation)

    ascending = report.conclude("m1 < m2", low.m < high.m)
    report.witness = _witness(GapKind.DIFF, u, v, low, high)
    report.conclude("witness t", report.witness is not None)
    u_gap = u ** (high.l - low.l)
    if ascending:
        v_gap = v ** (high.m - low.m)
        report.conclude("gaps interleave", v_gap > u_gap > v**low.m)
        report.conclude("v gap exceeds k", v_gap > k)
        t = report.witness.t if report.witness else None
        report.conclude("gap difference is k*t", t is not None and v_gap - u_gap == k * t)
    else:
        for name in ("gaps interleave", "v gap exceeds k", "gap difference is k*t"):
            report.conclude(name, False)
    return report


def _require_solution(t: Triple, *solutions: Solution):
    for solution in solutions:
        if not solution.solves(t):
            raise ValidationError(f"{solution.as_list()} does not solve {t}.")


def _log_form_below(m: int, c: int, n: int, b: int, bound: Fraction, precision: Precision, what):
    """
    Certify 0 < m·ln c - n·ln b and (m·ln c - n·ln b)² < bound.

    The bound is given squared so square roots of powers stay exact.
    """

    def decide(bits: int):
        form = linear_form_interval(m, c, n, b, bits)
        sign = form.sign()
        if sign is None:
            return None
        if sign < 0:
            return False
        order = (form**2).compare(bound)
        return None if order is None else order < 0

    return certify(decide, precision, what=what)


def _locate(
    cf: ContinuedFraction | None, c: int, b: int, p: int, q: int, precision: Precision
) -> int | None:
    if cf is None:
        cf = cf_log_ratio(c, b, 2, precision)
    return legendre_locate(cf, p, q, precision).index


def _single_solution_report(
    name: str,
    t: Triple,
    letter: str,
    exponent: int,
    base: int,
    z: int,
    cf: ContinuedFraction | None,
    precision: Precision,
    preconditions: list[tuple[str, bool]],
) -> LemmaReport:
    """
    Shared body of the two convergent criteria, for the term g^e of a solution: concludes
    gcd(e, z) = 1, 0 < z·ln c - e·ln g < 2/c^(z/2) and that e/z is a convergent of ln c / ln g.
    """
    report = LemmaReport(name)
    for precondition in preconditions:
        report.require(*precondition)
    report.conclude(f"gcd({letter}, z) = 1", gcd(exponent, z) == 1)
    inequality = _log_form_below(
        z,
        t.c,
        exponent,
        base,
        Fraction(4, t.c**z),
        precision,
        f"0 < z log c - e log g < 2/c^(z/2) for {t}",
    )
    report.conclude("log-ratio inequality", inequality)
    index = _locate(cf, t.c, base, exponent, z, precision)
    report.conclude("convergent", index is not None)
    report.values = {"convergent_index": index}
    if report.applicable and inequality and index is None:
        logger.warning("%s: inequality holds but %d/%d is not located", name, exponent, z)
    return report


def check_convergent_y(
    t: Triple,
    s: Solution,
    cf: ContinuedFraction | None = None,
    precision: Precision = DEFAULT_PRECISION,
) -> LemmaReport:
    """
    For a solution with a^(2x) < c^z, b >= 3 and c >= 16: gcd(y, z) = 1, y/z is a convergent of
    log c / log b and 0 < log c/log b - y/z < 2/(z·c^(z/2)·log b).

    Parameters
    ----------
    t : Triple
    s : Solution
        Must solve t.
    cf : ContinuedFraction | None
        Expansion of log c / log b, computed when missing.
    precision : Precision
    """
    _require_solution(t, s)
    preconditions = [
        ("a^2x < c^z", t.a ** (2 * s.x) < t.c**s.z),
        ("b >= 3", t.b >= 3),
        ("c >= 16", t.c >= 16),
    ]
    return _single_solution_report(
        "convergent-y", t, "y", s.y, t.b, s.z, cf, precision, preconditions
    )


def check_convergent_x(
    t: Triple,
    s: Solution,
    cf: ContinuedFraction | None = None,
    precision: Precision = DEFAULT_PRECISION,
) -> LemmaReport:
    """
    For a solution with b^(2y) < c^z and a >= 10^62: x/z is a convergent of log c / log a with
    0 < log c/log a - x/z < 2/(z·c^(z/2)·log a). Never applicable at desk scale, the inequality is
    still evaluated.
    """
    _require_solution(t, s)
    preconditions = [
        ("b^2y < c^z", t.b ** (2 * s.y) < t.c**s.z),
        ("a >= 10^62", t.a >= LARGE_BASE),
    ]
    return _single_solution_report(
        "convergent-x", t, "x", s.x, t.a, s.z, cf, precision, preconditions
    )


def _orient_solutions(s: Solution, s_prime: Solution, ordered) -> tuple[Solution, Solution, str]:
    if s == s_prime:
        raise ValidationError("Identical solutions do not form a pair.")
    if ordered(s, s_prime):
        return s, s_prime, "as-given"
    if ordered(s_prime, s):
        return s_prime, s, "swapped"
    return s, s_prime, "as-given"


def check_convergent_pair_y(
    t: Triple,
    s: Solution,
    s_prime: Solution,
    cf: ContinuedFraction | None = None,
    precision: Precision = DEFAULT_PRECISION,
) -> LemmaReport:
    """
    Two solutions with x > x' and z < z'.

    Under the ordering alone: 0 < log c/log b - y'/z' < 2/(z'·a·c·log b). When moreover
    c = max{a, b, c} >= 10^62, (y'/d)/(z'/d) is a convergent of log c / log b, d = gcd(y', z').
    """
    _require_solution(t, s, s_prime)
    first, second, orientation = _orient_solutions(
        s, s_prime, lambda one, other: one.x > other.x and one.z < other.z
    )
    report = LemmaReport("convergent-pair-y", orientation=orientation)
    ordering = "x > x' and z < z'"
    ordered = report.require(ordering, first.x > second.x and first.z < second.z)
    report.require("c = max >= 10^62", t.c == t.max and t.c >= LARGE_BASE)
    if not ordered:
        return report
    # 0 < z'·ln c - y'·ln b < 2/(a·c)
    inequality = _log_form_below(
        second.z,
        t.c,
        second.y,
        t.b,
        Fraction(4, (t.a * t.c) ** 2),
        precision,
        f"0 < z' log c - y' log b < 2/(ac) for {t}",
    )
    report.conclude("log-ratio inequality", inequality, requires=(ordering,))
    index = _locate(cf, t.c, t.b, second.y, second.z, precision)
    report.conclude("convergent", index is not None)
    report.values = {"convergent_index": index}
    return report


def check_convergent_pair_x(
    t: Triple,
    s: Solution,
    s_prime: Solution,
    cf: ContinuedFraction | None = None,
    precision: Precision = DEFAULT_PRECISION,
) -> LemmaReport:
    """
    Two solutions with y > y' and z <= z'.

    Under the ordering alone: x < x', b^(y-y')·c^(z'-z) = 1 (mod a^x) and
    0 < log c/log a - x'/z' < 2/(z'·a^x·log a), hence also < 2/(z'·a·log a). When moreover
    a = max{a, b, c} >= 10^62, (x'/d)/(z'/d) is a convergent of log c / log a.
    """
    _require_solution(t, s, s_prime)
    first, second, orientation = _orient_solutions(
        s, s_prime, lambda one, other: one.y > other.y and one.z <= other.z
    )
    report = LemmaReport("convergent-pair-x", orientation=orientation)
    ordering = "y > y' and z <= z'"
    ordered = report.require(ordering, first.y > second.y and first.z <= second.z)
    report.require("a = max >= 10^62", t.a == t.max and t.a >= LARGE_BASE)
    if not ordered:
        return report
    requires = (ordering,)
    report.conclude("x < x'", first.x < second.x, requires=requires)
    modulus = t.a**first.x
    residue = pow(t.b, first.y - second.y, modulus) * pow(t.c, second.z - first.z, modulus)
    report.conclude("congruence mod a^x", residue % modulus == 1 % modulus, requires=requires)
    sharp = _log_form_below(
        second.z,
        t.c,
        second.x,
        t.a,
        Fraction(4, t.a ** (2 * first.x)),
        precision,
        f"0 < z' log c - x' log a < 2/a^x for {t}",
    )
    report.conclude("log-ratio inequality 2/a^x", sharp, requires=requires)
    loose = _log_form_below(
        second.z,
        t.c,
        second.x,
        t.a,
        Fraction(4, t.a**2),
        precision,
        f"0 < z' log c - x' log a < 2/a for {t}",
    )
    report.conclude("log-ratio inequality 2/a", loose, requires=requires)
    index = _locate(cf, t.c, t.a, second.x, second.z, precision)
    report.conclude("convergent", index is not None)
    report.values = {"convergent_index": index}
    return report


def exceeds_polylog_threshold(
    t: int | Fraction, precision: Precision = DEFAULT_PRECISION
) -> bool | None:
    """
    Certified truth of t > 6500^6·(ln t)^18.

    True for every t >= 10^62 and false well below it. Returns None when the comparison cannot be
    decided within the precision budget.
    """
    t = Fraction(t)
    if t < 2:
        raise ValidationError(f"t must be at least 2, got {t}.")

    def decide(bits: int) -> bool | None:
        order = (THRESHOLD_FACTOR * log_interval(t, bits) ** THRESHOLD_POWER).compare(t)
        return None if order is None else order < 0

    try:
        return certify(decide, precision, what=f"threshold comparison at {t}")
    except CertificationBudgetExceededError:
        logger.warning("Threshold comparison at %s is indeterminate", t)
        return None


def check_three_solutions(
    inst: TransformedInstance,
    s1: TransformedSolution,
    s2: TransformedSolution,
    s3: TransformedSolution,
    solutions: list[TransformedSolution] | None = None,
    budget: FactoringBudget = DEFAULT_FACTORING,
) -> LemmaReport:
    """
    Three solutions of A^X + λB^Y = C^Z sorted to Z1 <= Z2 <= Z3.

    Preconditions: Z1 < Z2, C odd or 4 | C^Z1, and C^(2(Z2-Z1)) > max{a, b, c}.
    Conclusions: Y2·|X2·Y3 - X3·Y2| >= C^(Z2-Z1) and C^(Z2-Z1)/gcd(C^(Z2-Z1), f) divides
    |X2·Y3 - X3·Y2| (both needing the first two preconditions), max{a, b, c} < 10^62
    (needing all). Whether C = max{a, b, c} implies max < 5·10^27 is recorded, never asserted.

    Raises
    ------
    ValidationError
        On non-solutions, repeated solutions or a Z1 that is not minimal over ``solutions``.
    """
    given = [s1, s2, s3]
    for solution in given:
        inst.require_solution(solution)
    if len(set(given)) < 3:
        raise ValidationError("Three distinct solutions are needed.")
    ordered = sorted(given, key=lambda s: (s.Z, s.Y, s.X))
    first, second, third = ordered
    if solutions is not None and any(other.Z < first.Z for other in solutions):
        raise ValidationError(f"Z1 = {first.Z} is not minimal over the given solutions.")

    report = LemmaReport(
        "three-solutions", orientation="as-given" if ordered == given else "swapped"
    )
    largest = inst.origin.max
    ordering = report.require("Z1 < Z2 <= Z3", first.Z < second.Z <= third.Z)
    parity = report.require(ODD_OR_FOUR_DIVIDES, inst.C % 2 == 1 or inst.C**first.Z % 4 == 0)
    report.require("C^(2(Z2-Z1)) > max", inst.C ** (2 * (second.Z - first.Z)) > largest)

    cross = abs(second.X * third.Y - third.X * second.Y)
    report.values = {"cross_term": cross}
    if ordering:
        gap_power = inst.C ** (second.Z - first.Z)
        requires = ("Z1 < Z2 <= Z3", ODD_OR_FOUR_DIVIDES)
        report.conclude("Y2 * cross term >= C^(Z2-Z1)", second.Y * cross >= gap_power, requires)
        if parity:
            record = least_pm1(inst.A, inst.C**first.Z, budget)
            common = record.gcd_with_power(inst.C, second.Z - first.Z, budget)
            divisible = cross % (gap_power // common) == 0
            report.conclude("cross term divisible by C^(Z2-Z1)/gcd", divisible, requires)
            report.values["gcd"] = common
        # also depends on a linear-forms bound outside these checks
        companion = inst.C != largest or largest < COMPANION_LIMIT
        report.observe("C = max implies max < 5*10^27", companion)
    report.conclude("max < 10^62", largest < LARGE_BASE)
    return report


def check_same_z(inst: TransformedInstance, solutions: list[TransformedSolution]) -> LemmaReport:
    """At most two solutions of A^X + λB^Y = C^Z share a value of Z."""
    for solution in solutions:
        inst.require_solution(solution)
    report = LemmaReport("same-z")
    counts = Counter(solution.Z for solution in set(solutions))
    report.conclude("at most two solutions per Z", all(n <= 2 for n in counts.values()))
    report.values = {"largest_group": max(counts.values(), default=0)}
    return report
