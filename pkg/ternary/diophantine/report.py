# This file is part of ternary.
#
# SPDX-License-Identifier: MIT
"""
Reports produced by the structural checks.

A report lists preconditions and conclusions separately. A conclusion is *asserted* when the
preconditions it depends on all hold; an asserted conclusion that is false is a violation, while
an unasserted one is only diagnostic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from ternary.diophantine.exceptions import LemmaViolationError, ValidationError


@dataclass(frozen=True)
class Verdict:
    """A named boolean fact of a report."""

    name: str
    holds: bool
    asserted: bool = True

    def to_dict(self) -> dict:
        return {"name": self.name, "holds": self.holds, "asserted": self.asserted}


class GapKind(Enum):
    SUM = "sum"
    DIFF = "diff"


@dataclass(frozen=True)
class GapWitness:
    """
    The integer t tying two solutions of u^l ± v^m = k together.

    For sums u^(l2-l1) = v^m2·t + 1 and v^(m1-m2) = u^l1·t + 1. For differences
    u^(l2-l1) = v^m1·t + 1 and v^(m2-m1) = u^l1·t + 1.

    Attributes
    ----------
    kind: GapKind
    t: int
    u_gap: int
        u^(l2-l1).
    v_gap: int
        v^(m1-m2) for sums, v^(m2-m1) for differences.
    """

    kind: GapKind
    t: int
    u_gap: int
    v_gap: int

    def reconstruct_k(self) -> int:
        """Rebuild k from the witness equations alone."""
        u_low, remainder_u = divmod(self.v_gap - 1, self.t)
        v_low, remainder_v = divmod(self.u_gap - 1, self.t)
        if remainder_u or remainder_v:
            raise ValidationError(f"Witness {self} is not integral.")
        if self.kind is GapKind.SUM:
            # u^l1 + v^m2 * v^(m1-m2)
            return u_low + v_low * self.v_gap
        return u_low - v_low

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "t": self.t, "u_gap": self.u_gap, "v_gap": self.v_gap}


@dataclass
class LemmaReport:
    """
    Outcome of one structural check.

    Attributes
    ----------
    lemma: str
        Identifier of the check, e.g. ``gap-sum`` or ``three-solutions``.
    preconditions: list[Verdict]
    conclusions: list[Verdict]
    orientation: str
        ``as-given`` or ``swapped`` when the inputs were reordered to the check's ordering.
    witness: GapWitness | None
    values: dict
        Diagnostic quantities, JSON serializable.
    """

    lemma: str
    preconditions: list[Verdict] = field(default_factory=list)
    conclusions: list[Verdict] = field(default_factory=list)
    orientation: str = "as-given"
    witness: GapWitness | None = None
    values: dict = field(default_factory=dict)

    def require(self, name: str, holds: bool) -> bool:
        self.preconditions.append(Verdict(name, bool(holds)))
        return bool(holds)

    def precondition(self, name: str) -> bool:
        for verdict in self.preconditions:
            if verdict.name == name:
                return verdict.holds
        raise KeyError(name)

    def conclude(self, name: str, holds: bool, requires: tuple[str, ...] | None = None) -> bool:
        """
        Record a conclusion.

        Parameters
        ----------
        name : str
            Name of the conclusion.
        holds : bool
            Its truth value on the inputs.
        requires : tuple[str, ...] | None
            Names of the preconditions the conclusion depends on, all of them when None.

        Returns
        -------
        bool
            ``holds``.
        """
        if requires is None:
            asserted = self.applicable
        else:
            asserted = all(self.precondition(required) for required in requires)
        self.conclusions.append(Verdict(name, bool(holds), asserted))
        return bool(holds)

    def observe(self, name: str, holds: bool) -> bool:
        """Record a diagnostic conclusion, never asserted whatever the preconditions."""
        self.conclusions.append(Verdict(name, bool(holds), asserted=False))
        return bool(holds)

    def conclusion(self, name: str) -> Verdict:
        for verdict in self.conclusions:
            if verdict.name == name:
                return verdict
        raise KeyError(name)

    @property
    def applicable(self) -> bool:
        return all(verdict.holds for verdict in self.preconditions)

    @property
    def violations(self) -> list[Verdict]:
        return [verdict for verdict in self.conclusions if verdict.asserted and not verdict.holds]

    @property
    def ok(self) -> bool:
        return not self.violations

    def raise_on_violation(self):
        if self.violations:
            names = ", ".join(verdict.name for verdict in self.violations)
            raise LemmaViolationError(f"{self.lemma}: asserted conclusion(s) false: {names}", self)

    def to_dict(self) -> dict:
        body = {
            "lemma": self.lemma,
            "applicable": self.applicable,
            "orientation": self.orientation,
            "preconditions": [verdict.to_dict() for verdict in self.preconditions],
            "conclusions": [verdict.to_dict() for verdict in self.conclusions],
        }
        if self.witness is not None:
            body["witness"] = self.witness.to_dict()
        if self.values:
            body["values"] = self.values
        return body

    def summary(self) -> dict:
        """Compact form stored in scan records."""
        return {
            "lemma": self.lemma,
            "applicable": self.applicable,
            "violations": [verdict.name for verdict in self.violations],
        }
