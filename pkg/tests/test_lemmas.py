# This file is part of ternary.
#
# SPDX-License-Identifier: MIT

from math import gcd

import pytest

from ternary.diophantine.contfrac import cf_log_ratio
from ternary.diophantine.equation import solve_diff, solve_sum
from ternary.diophantine.exceptions import LemmaViolationError, ValidationError
from ternary.diophantine.lemmas import (
    check_convergent_pair_x,
    check_convergent_pair_y,
    check_convergent_x,
    check_convergent_y,
    check_gap_diff,
    check_gap_sum,
    check_same_z,
    check_three_solutions,
    exceeds_polylog_threshold,
)
from ternary.diophantine.report import GapKind
from ternary.diophantine.triple import (
    ExponentPair,
    Role,
    Solution,
    TransformedInstance,
    TransformedSolution,
    Triple,
)


def test_gap_sum():
    report = check_gap_sum(2, 3, 11, ExponentPair(3, 1), ExponentPair(1, 2))
    assert report.ok
    assert report.orientation == "swapped"
    assert report.witness.kind is GapKind.SUM
    assert report.witness.t == 1
    assert report.witness.reconstruct_k() == 11
    assert report.conclusion("max gap squared exceeds k").asserted


def test_gap_diff():
    report = check_gap_diff(2, 3, 5, ExponentPair(3, 1), ExponentPair(5, 3))
    assert report.ok
    assert report.witness.t == 1
    assert report.witness.reconstruct_k() == 5
    assert [verdict.name for verdict in report.conclusions] == [
        "m1 < m2",
        "witness t",
        "gaps interleave",
        "v gap exceeds k",
        "gap difference is k*t",
    ]


def test_gap_diff_with_larger_witness():
    report = check_gap_diff(2, 5, 3, ExponentPair(3, 1), ExponentPair(7, 3))
    assert report.ok
    assert report.witness.t == 3
    assert report.witness.reconstruct_k() == 3


def test_gap_checks_reject_non_solutions():
    with pytest.raises(ValidationError):
        check_gap_sum(2, 3, 11, ExponentPair(1, 2), ExponentPair(2, 1))
    with pytest.raises(ValidationError):
        check_gap_diff(2, 3, 5, ExponentPair(3, 1), ExponentPair(3, 1))


def _gap_suites(limit):
    pairs_seen = 0
    for u in range(2, limit + 1):
        for v in range(2, limit + 1):
            if gcd(u, v) != 1:
                continue
            for k in range(2, limit + 1):
                for solve, check in ((solve_sum, check_gap_sum), (solve_diff, check_gap_diff)):
                    pairs = solve(u, v, k, 64)
                    if len(pairs) == 2:
                        pairs_seen += 1
                        report = check(u, v, k, *pairs)
                        assert report.ok, report.to_dict()
                        assert report.witness.reconstruct_k() == k
    return pairs_seen


def test_gap_suites():
    assert _gap_suites(40) > 0


@pytest.mark.slow
def test_gap_suites_up_to_one_hundred():
    assert _gap_suites(100) > 0


def test_convergent_y_applicable():
    report = check_convergent_y(Triple(2, 15, 17), Solution(1, 1, 1))
    assert report.applicable and report.ok
    assert report.values == {"convergent_index": 0}


def test_convergent_y_with_power_of_two_c():
    report = check_convergent_y(Triple(3, 13, 16), Solution(1, 1, 1))
    assert report.applicable and report.ok
    assert report.values["convergent_index"] == 0


def test_convergent_y_not_applicable_for_small_c():
    report = check_convergent_y(Triple(3, 5, 2), Solution(1, 1, 3))
    assert not report.applicable
    assert report.ok
    assert report.conclusion("log-ratio inequality").holds
    assert not report.conclusion("convergent").asserted


def test_convergent_y_uses_given_expansion():
    cf = cf_log_ratio(17, 15, 4)
    report = check_convergent_y(Triple(2, 15, 17), Solution(1, 1, 1), cf)
    assert report.values["convergent_index"] == 0


def test_convergent_x_never_applicable_at_small_scale():
    report = check_convergent_x(Triple(5, 3, 2), Solution(1, 3, 5))
    assert not report.applicable
    assert report.ok


def test_convergent_checks_reject_non_solutions():
    with pytest.raises(ValidationError):
        check_convergent_y(Triple(3, 5, 2), Solution(1, 1, 2))


def test_convergent_pair_y():
    t = Triple(3, 5, 2)
    report = check_convergent_pair_y(t, Solution(1, 3, 7), Solution(3, 1, 5))
    assert report.orientation == "swapped"
    assert report.precondition("x > x' and z < z'")
    assert not report.applicable
    assert report.conclusion("log-ratio inequality").asserted
    assert report.conclusion("log-ratio inequality").holds
    assert report.values == {"convergent_index": 2}
    assert report.ok


def test_convergent_pair_y_without_ordering():
    report = check_convergent_pair_y(Triple(3, 5, 2), Solution(1, 1, 3), Solution(1, 3, 7))
    assert not report.applicable
    assert report.conclusions == []


def test_convergent_pair_x():
    report = check_convergent_pair_x(Triple(5, 3, 2), Solution(1, 3, 5), Solution(3, 1, 7))
    assert report.precondition("y > y' and z <= z'")
    assert report.ok
    for name in ("x < x'", "congruence mod a^x", "log-ratio inequality 2/a^x"):
        verdict = report.conclusion(name)
        assert verdict.asserted and verdict.holds
    assert report.values["convergent_index"] == 2


def test_convergent_pair_x_without_ordering():
    report = check_convergent_pair_x(Triple(3, 5, 2), Solution(1, 3, 7), Solution(3, 1, 5))
    assert not report.applicable
    assert report.conclusions == []


@pytest.mark.parametrize(
    "t, expected",
    [(10**37, False), (10**60, False), (10**62, True), (10**80, True)],
)
def test_polylog_threshold(t, expected):
    assert exceeds_polylog_threshold(t) is expected


def test_polylog_threshold_is_monotone():
    points = [int(10 ** (60 + 20 * i / 49)) for i in range(50)]
    outcomes = [exceeds_polylog_threshold(t) for t in points]
    assert outcomes == sorted(outcomes)
    assert outcomes[-1] is True


def test_polylog_threshold_rejects_small_arguments():
    with pytest.raises(ValidationError):
        exceeds_polylog_threshold(1)


def _three_five_two(role=Role.ABC):
    inst = TransformedInstance.of(Triple(3, 5, 2), role)
    origin = ((1, 1, 3), (3, 1, 5), (1, 3, 7))
    solutions = [TransformedSolution(*role.exponents(Solution(*s))) for s in origin]
    return inst, solutions


def test_three_solutions():
    inst, solutions = _three_five_two()
    report = check_three_solutions(inst, *reversed(solutions), solutions=solutions)
    assert report.applicable and report.ok
    assert report.orientation == "swapped"
    assert report.values == {"cross_term": 8, "gcd": 1}
    for verdict in report.conclusions:
        assert verdict.holds, verdict
    assert [verdict.name for verdict in report.conclusions if not verdict.asserted] == [
        "C = max implies max < 5*10^27"
    ]


def test_three_solutions_on_negative_sign():
    inst, solutions = _three_five_two(Role.CAB)
    report = check_three_solutions(inst, *solutions)
    assert not report.precondition("Z1 < Z2 <= Z3")
    assert report.ok
    assert [verdict.name for verdict in report.conclusions] == ["max < 10^62"]


def test_three_solutions_rejects():
    inst, solutions = _three_five_two()
    with pytest.raises(ValidationError):
        check_three_solutions(inst, solutions[0], solutions[0], solutions[1])
    with pytest.raises(ValidationError):
        check_three_solutions(
            inst, *solutions, solutions=[*solutions, TransformedSolution(1, 1, 1)]
        )


def test_same_z():
    inst, solutions = _three_five_two(Role.CBA)
    report = check_same_z(inst, solutions)
    assert report.ok
    assert report.values == {"largest_group": 2}


def test_violation_is_raised():
    report = check_gap_sum(2, 3, 11, ExponentPair(1, 2), ExponentPair(3, 1))
    report.conclude("forced", False, requires=())
    with pytest.raises(LemmaViolationError) as info:
        report.raise_on_violation()
    assert info.value.report is report
    assert report.summary() == {"lemma": "gap-sum", "applicable": True, "violations": ["forced"]}
