# This file is part of ternary.
#
# SPDX-License-Identifier: MIT

import math
import time
from math import gcd

import pytest

from ternary.diophantine.equation import (
    SolutionSet,
    enumerate_solutions,
    gelfond_bound,
    is_family_member,
    map_solution,
    solve_diff,
    solve_sum,
    transformed_instances,
    two_solution_family,
)
from ternary.diophantine.exceptions import ValidationError
from ternary.diophantine.triple import (
    ExponentPair,
    Role,
    Solution,
    TransformedInstance,
    TransformedSolution,
    Triple,
)


@pytest.mark.parametrize(
    "a, b, c",
    [(0, 3, 5), (2, 1, 5), (2, 4, 5), (6, 5, 9), (3, 5, 15), (2.0, 3, 5)],
)
def test_triple_validation(a, b, c):
    with pytest.raises(ValidationError):
        Triple(a, b, c)


def test_solution_validation():
    with pytest.raises(ValidationError):
        Solution(0, 1, 1)
    with pytest.raises(ValidationError):
        TransformedSolution(1, -1, 2)
    with pytest.raises(ValidationError):
        ExponentPair(1, 0)


def test_exponent_ceiling_of_small_triple():
    assert gelfond_bound(Triple(2, 3, 5)) == 27098
    assert gelfond_bound(Triple(3, 5, 2)) == 27098


@pytest.mark.parametrize("triple", [(2, 3, 7), (5, 7, 12), (11, 13, 29), (101, 2, 3)])
def test_exponent_ceiling_matches_floating_point(triple):
    t = Triple(*triple)
    approx = 6500 * math.log(t.max) ** 3
    bound = gelfond_bound(t)
    assert bound - 1 < approx + 1e-6
    assert approx - 1e-6 < bound


def test_solutions_of_three_five_two():
    solution_set = enumerate_solutions(Triple(3, 5, 2), 50)
    assert solution_set.solutions == (Solution(1, 1, 3), Solution(3, 1, 5), Solution(1, 3, 7))
    assert solution_set.count == 3
    assert solution_set.effective_cap == 50
    assert not solution_set.complete


def test_solutions_of_two_three_five():
    solution_set = enumerate_solutions(Triple(2, 3, 5), 50)
    assert solution_set.solutions == (Solution(1, 1, 1), Solution(4, 2, 2))


def test_large_cap_stays_fast():
    started = time.perf_counter()
    solution_set = enumerate_solutions(Triple(2, 3, 5), 2000)
    assert time.perf_counter() - started < 10
    assert solution_set.solutions == (Solution(1, 1, 1), Solution(4, 2, 2))


@pytest.mark.slow
def test_solutions_of_two_three_five_up_to_the_ceiling():
    solution_set = enumerate_solutions(Triple(2, 3, 5), 27098)
    assert solution_set.complete
    assert solution_set.solutions == (Solution(1, 1, 1), Solution(4, 2, 2))


def test_cap_limits_every_exponent():
    assert enumerate_solutions(Triple(3, 5, 2), 5).solutions == (
        Solution(1, 1, 3),
        Solution(3, 1, 5),
    )


def test_cap_at_ceiling_is_complete():
    t = Triple(2, 3, 5)
    solution_set = SolutionSet(t, 27098, 27098, 27098, (Solution(1, 1, 1), Solution(4, 2, 2)))
    assert solution_set.complete
    assert solution_set.to_dict()["complete"] is True


def test_cap_must_be_positive():
    with pytest.raises(ValidationError):
        enumerate_solutions(Triple(2, 3, 5), 0)


@pytest.mark.parametrize("k", range(2, 21))
def test_two_solution_family(k):
    triple, expected = two_solution_family(k)
    assert triple == Triple(2, 2**k - 1, 2**k + 1)
    assert enumerate_solutions(triple, max(50, k + 10)).solutions == expected
    assert is_family_member(triple)
    assert is_family_member(Triple(triple.b, triple.a, triple.c))


def test_two_solution_family_needs_k_above_one():
    with pytest.raises(ValidationError):
        two_solution_family(1)


@pytest.mark.parametrize("triple", [(2, 5, 7), (3, 5, 2), (2, 7, 3), (4, 3, 5)])
def test_not_family_members(triple):
    assert not is_family_member(Triple(*triple))


def _naive_solutions(t: Triple, cap: int) -> set[Solution]:
    c_powers = {t.c**z: z for z in range(1, cap + 1)}
    found = set()
    for x in range(1, cap + 1):
        for y in range(1, cap + 1):
            z = c_powers.get(t.a**x + t.b**y)
            if z is not None:
                found.add(Solution(x, y, z))
    return found


def _coprime_triples(limit):
    for a in range(2, limit + 1):
        for b in range(2, limit + 1):
            if gcd(a, b) != 1:
                continue
            for c in range(2, limit + 1):
                if gcd(a, c) == 1 and gcd(b, c) == 1:
                    yield Triple(a, b, c)


def test_enumeration_matches_naive_search():
    for t in _coprime_triples(12):
        assert set(enumerate_solutions(t, 15).solutions) == _naive_solutions(t, 15), t


@pytest.mark.slow
def test_enumeration_matches_naive_search_up_to_thirty():
    for t in _coprime_triples(30):
        assert set(enumerate_solutions(t, 25).solutions) == _naive_solutions(t, 25), t


def test_solve_sum():
    assert solve_sum(2, 3, 11) == (ExponentPair(1, 2), ExponentPair(3, 1))
    assert solve_sum(2, 3, 5) == (ExponentPair(1, 1),)
    assert solve_sum(2, 3, 4) == ()


def test_solve_diff():
    assert solve_diff(2, 3, 5) == (ExponentPair(3, 1), ExponentPair(5, 3))
    assert solve_diff(2, 5, 3) == (ExponentPair(3, 1), ExponentPair(7, 3))


def test_solve_respects_cap():
    assert solve_diff(2, 3, 5, cap=4) == (ExponentPair(3, 1),)


@pytest.mark.parametrize("u, v, k", [(2, 4, 10), (1, 3, 5), (2, 3, 1), (6, 9, 15)])
def test_two_term_parameters(u, v, k):
    with pytest.raises(ValidationError):
        solve_sum(u, v, k)
    with pytest.raises(ValidationError):
        solve_diff(u, v, k)


@pytest.mark.slow
def test_two_term_equations_have_at_most_two_solutions():
    for u in range(2, 101):
        for v in range(2, 101):
            if gcd(u, v) != 1:
                continue
            for k in range(2, 101):
                assert len(solve_sum(u, v, k)) <= 2
                assert len(solve_diff(u, v, k)) <= 2


def test_transformed_instances():
    instances = transformed_instances(Triple(3, 5, 2))
    assert [inst.as_tuple() for inst in instances] == [(3, 5, 2, 1), (2, 3, 5, -1), (2, 5, 3, -1)]
    assert [inst.role for inst in instances] == [Role.ABC, Role.CAB, Role.CBA]


def test_transformed_instance_must_match_its_origin():
    with pytest.raises(ValidationError):
        TransformedInstance(2, 3, 5, 1, Triple(3, 5, 2), Role.CAB)


@pytest.mark.parametrize(
    "role, expected",
    [(Role.ABC, [1, 3, 7]), (Role.CAB, [7, 1, 3]), (Role.CBA, [7, 3, 1])],
)
def test_map_solution(role, expected):
    inst = TransformedInstance.of(Triple(3, 5, 2), role)
    mapped = map_solution(inst, Solution(1, 3, 7))
    assert mapped.as_list() == expected
    assert inst.is_solution(mapped)


def test_map_solution_rejects_non_solutions():
    inst = TransformedInstance.of(Triple(3, 5, 2), Role.CAB)
    with pytest.raises(ValidationError):
        map_solution(inst, Solution(2, 1, 3))
