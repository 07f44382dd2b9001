"""Totally ordered weight monoids with an absorbing infeasibility element.

A weight value is either a finite ``int`` or ``ERROR`` (represented as
``None``), the unique maximum of the order that absorbs under combination.
Three monoids are supported:

* ``MIN_SUM``  -- extended integers, natural order, addition (minimization)
* ``MAX_SUM``  -- extended integers, reversed order, addition (maximization)
* ``DECISION`` -- {0, 1} with max as combination (feasibility problems)
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

WeightValue = Optional[int]

ERROR: WeightValue = None

# Finite values saturate at the 64-bit signed bound; anything beyond is
# treated as infeasible rather than wrapping.
_BOUND = 2**63 - 1


class Kind(enum.Enum):
    MIN_SUM = "min-sum"
    MAX_SUM = "max-sum"
    DECISION = "decision"


class Orientation(enum.Enum):
    MINIMIZE = "minimize"
    MAXIMIZE = "maximize"


def is_error(a: WeightValue) -> bool:
    return a is None


@dataclass(frozen=True)
class WeightSet:
    """One of the three supported weight monoids."""

    kind: Kind

    @property
    def orientation(self) -> Orientation:
        if self.kind is Kind.MAX_SUM:
            return Orientation.MAXIMIZE
        return Orientation.MINIMIZE

    @property
    def neutral(self) -> int:
        return 0

    def combine(self, a: WeightValue, b: WeightValue) -> WeightValue:
        """Monoid combination; ERROR absorbs, overflow saturates to ERROR."""
        if a is None or b is None:
            return ERROR
        if self.kind is Kind.DECISION:
            return a if a > b else b
        c = a + b
        if c > _BOUND or c < -_BOUND:
            return ERROR
        return c

    def prefer(self, a: WeightValue, b: WeightValue) -> WeightValue:
        """Minimum under the set's order; ERROR loses to any finite value."""
        if a is None:
            return b
        if b is None:
            return a
        if self.kind is Kind.MAX_SUM:
            return a if a >= b else b
        return a if a <= b else b

    def better(self, a: WeightValue, b: WeightValue) -> bool:
        """True iff a is strictly preferred over b."""
        if a is None:
            return False
        if b is None:
            return True
        if self.kind is Kind.MAX_SUM:
            return a > b
        return a < b


MIN_SUM = WeightSet(Kind.MIN_SUM)
MAX_SUM = WeightSet(Kind.MAX_SUM)
DECISION = WeightSet(Kind.DECISION)


def format_weight(a: WeightValue) -> str:
    return "INFEASIBLE" if a is None else str(a)
