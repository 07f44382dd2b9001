"""Unary counting automata for color-class size constraints.

The alphabet is the single symbol "one more vertex of this color"; an
automaton accepts the unary string of length t iff t is an admitted class
size.  State predicates (the accepting set, and the singletons used when a
disjoint union splits a class between two subtrees) are represented as
bitmasks over the state indices.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

StatePredicate = int  # bitmask over states


@dataclass(frozen=True)
class CountingAutomaton:
    transitions: tuple[int, ...]  # state -> state on the unary symbol
    start: int
    accepting: StatePredicate

    @property
    def num_states(self) -> int:
        return len(self.transitions)

    def __post_init__(self) -> None:
        n = len(self.transitions)
        if not 0 <= self.start < n:
            raise ValueError("start state out of range")
        if any(not 0 <= t < n for t in self.transitions):
            raise ValueError("transition target out of range")
        if self.accepting >> n:
            raise ValueError("accepting set mentions unknown states")


def dfa_from_finite_set(sizes: Iterable[int]) -> CountingAutomaton:
    """Chain automaton with an absorbing overflow state.

    Accepts the unary string of length t iff t is in ``sizes``.  An empty
    set yields a single rejecting sink.
    """
    values = sorted(set(sizes))
    if any(v < 0 for v in values):
        raise ValueError("sizes must be non-negative")
    if not values:
        return CountingAutomaton((0,), 0, 0)
    m = values[-1]
    transitions = tuple(min(i + 1, m + 1) for i in range(m + 2))
    accepting = 0
    for v in values:
        accepting |= 1 << v
    return CountingAutomaton(transitions, 0, accepting)


def step(a: CountingAutomaton, s: int) -> int:
    return a.transitions[s]


def power(a: CountingAutomaton, s: int, n: int) -> int:
    """n-fold transition from s; stops early on a self-loop."""
    delta = a.transitions
    for _ in range(n):
        t = delta[s]
        if t == s:
            return s
        s = t
    return s


def accepting_predicate(a: CountingAutomaton) -> StatePredicate:
    return a.accepting


def singleton_predicate(s: int) -> StatePredicate:
    return 1 << s


def predicate_holds(pred: StatePredicate, s: int) -> bool:
    return bool(pred >> s & 1)


def accepts_count(a: CountingAutomaton, t: int) -> bool:
    return predicate_holds(a.accepting, power(a, a.start, t))
