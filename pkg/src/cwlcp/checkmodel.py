"""Problem models: colors, per-vertex color lists, weights, check predicate.

A model's check predicate sees a vertex, its color index and the vector of
per-color neighbor counts.  ``cap`` is the stability bound: counts may be
truncated at ``cap`` without changing any check value, which bounds the
matrix entries of the dynamic program.  Models may additionally constrain
the final size of any color class through a counting automaton.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Mapping, Sequence

from .sizedfa import CountingAutomaton, dfa_from_finite_set
from .weights import DECISION, MAX_SUM, MIN_SUM, WeightSet

CheckFn = Callable[[str, int, Sequence[int]], bool]


@dataclass(frozen=True)
class ProblemModel:
    name: str
    colors: tuple[str, ...]
    weights: WeightSet
    vertices: tuple[str, ...]
    allowed: Mapping[str, tuple[int, ...]]
    vertex_weights: Mapping[str, tuple[int, ...]]
    check: CheckFn
    cap: int
    size_constraints: Mapping[int, CountingAutomaton] = field(default_factory=dict)

    def __post_init__(self) -> None:
        n = len(self.vertices)
        if not 1 <= self.cap <= max(1, n):
            raise ValueError(f"stability cap {self.cap} outside [1, {n}]")
        for v in self.vertices:
            if not self.allowed[v]:
                raise ValueError(f"empty color list for vertex {v!r}")

    @property
    def q(self) -> int:
        return len(self.colors)

    def color_index(self, name: str) -> int:
        return self.colors.index(name)


def evaluate_check(m: ProblemModel, v: str, a: int, counts: Sequence[int]) -> bool:
    """Check predicate with counts clamped at the stability cap."""
    cap = m.cap
    clamped = tuple(c if c <= cap else cap for c in counts)
    return m.check(v, a, clamped)


def stability_cap(m: ProblemModel) -> int:
    return m.cap


def weight_of(m: ProblemModel, v: str, a: int) -> int:
    return m.vertex_weights[v][a]


def color_list(m: ProblemModel, v: str) -> tuple[int, ...]:
    return m.allowed[v]


def with_cap(m: ProblemModel, cap: int) -> ProblemModel:
    return replace(m, cap=cap)


def with_size_constraint(m: ProblemModel, color: int, sizes) -> ProblemModel:
    constraints = dict(m.size_constraints)
    constraints[color] = dfa_from_finite_set(sizes)
    return replace(m, size_constraints=constraints)


def _uniform(vertices: Sequence[str], q: int,
             per_color_weights: Sequence[int]) -> tuple[dict, dict]:
    all_colors = tuple(range(q))
    w = tuple(per_color_weights)
    return ({v: all_colors for v in vertices}, {v: w for v in vertices})


# ---------------------------------------------------------------------------
# Degree-constraint matrices (LCVP)


@dataclass(frozen=True)
class IntSet:
    """Finite or cofinite set of non-negative integers."""

    values: frozenset[int]
    cofinite: bool = False

    def __contains__(self, n: int) -> bool:
        return (n not in self.values) if self.cofinite else (n in self.values)

    @staticmethod
    def finite(*values: int) -> "IntSet":
        return IntSet(frozenset(values))

    @staticmethod
    def all_but(*values: int) -> "IntSet":
        return IntSet(frozenset(values), cofinite=True)


NATURALS = IntSet.all_but()


# ---------------------------------------------------------------------------
# Built-in models


def k_coloring(vertices: Sequence[str], k: int) -> ProblemModel:
    if k < 1:
        raise ValueError("k_coloring needs k >= 1")
    allowed, w = _uniform(vertices, k, [0] * k)

    def check(v: str, a: int, n: Sequence[int]) -> bool:
        return n[a] == 0

    return ProblemModel(f"kcoloring({k})", tuple(str(i) for i in range(1, k + 1)),
                        DECISION, tuple(vertices), allowed, w, check, cap=1)


def max_independent_set(vertices: Sequence[str]) -> ProblemModel:
    allowed, w = _uniform(vertices, 2, [0, 1])

    def check(v: str, a: int, n: Sequence[int]) -> bool:
        return a == 0 or n[1] == 0

    return ProblemModel("mis", ("0", "1"), MAX_SUM, tuple(vertices),
                        allowed, w, check, cap=1)


def odd_dominating_set(vertices: Sequence[str]) -> ProblemModel:
    allowed, w = _uniform(vertices, 2, [0, 1])

    def check(v: str, a: int, n: Sequence[int]) -> bool:
        return (a + n[1]) % 2 == 1

    return ProblemModel("odd", ("0", "1"), MIN_SUM, tuple(vertices),
                        allowed, w, check, cap=max(1, len(vertices)))


def k_roman(vertices: Sequence[str], k: int) -> ProblemModel:
    """Labelings 0..k+1 where any vertex below k has closed-neighborhood sum
    at least its active-neighbor count plus k."""
    if k < 1:
        raise ValueError("k_roman needs k >= 1")
    q = k + 2
    allowed, w = _uniform(vertices, q, list(range(q)))

    def check(v: str, a: int, n: Sequence[int]) -> bool:
        return a + sum(j * n[j] for j in range(q)) >= k + sum(n[1:])

    return ProblemModel(f"kroman({k})", tuple(str(i) for i in range(q)),
                        MIN_SUM, tuple(vertices), allowed, w, check, cap=k + 1)


def lcvp(vertices: Sequence[str], matrix: Sequence[Sequence[IntSet]], *,
         colors: tuple[str, ...] | None = None,
         per_color_weights: Sequence[int] | None = None,
         weight_set: WeightSet = MIN_SUM,
         name: str = "lcvp") -> ProblemModel:
    """Locally checkable vertex partitioning given a q x q constraint matrix."""
    q = len(matrix)
    if any(len(row) != q for row in matrix):
        raise ValueError("constraint matrix must be square")
    if colors is None:
        colors = tuple(str(i) for i in range(q))
    if per_color_weights is None:
        per_color_weights = [0] * q
    allowed, w = _uniform(vertices, q, per_color_weights)
    rows = [tuple(row) for row in matrix]

    def check(v: str, a: int, n: Sequence[int]) -> bool:
        row = rows[a]
        return all(n[j] in row[j] for j in range(q))

    mentioned = [x for row in rows for entry in row for x in entry.values]
    d = 1 + max(mentioned, default=0)
    cap = max(1, min(len(vertices), d))
    return ProblemModel(name, colors, weight_set, tuple(vertices),
                        allowed, w, check, cap=cap)


def min_dominating_set(vertices: Sequence[str]) -> ProblemModel:
    matrix = [[NATURALS, IntSet.all_but(0)],
              [NATURALS, NATURALS]]
    return lcvp(vertices, matrix, colors=("0", "1"),
                per_color_weights=[0, 1], weight_set=MIN_SUM, name="mds")


def specified_size_global_k_roman(vertices: Sequence[str], k: int,
                                  sizes: Sequence[int],
                                  variant: str = "strict") -> ProblemModel:
    """Global Roman-style labeling with every color class size pinned.

    ``variant`` selects the complement-side inequality: ``paper`` uses the
    class-size difference as the complement neighbor count verbatim, while
    ``strict`` additionally discounts the vertex's own membership in its
    color class, which is what the two-graph definition yields.
    """
    if k < 1:
        raise ValueError("needs k >= 1")
    q = k + 2
    sizes = tuple(sizes)
    if len(sizes) != q:
        raise ValueError(f"need {q} class sizes, got {len(sizes)}")
    if any(s < 0 for s in sizes) or sum(sizes) != len(vertices):
        raise ValueError("class sizes must be non-negative and sum to |V|")
    if variant not in ("strict", "paper"):
        raise ValueError(f"unknown variant {variant!r}")
    allowed, w = _uniform(vertices, q, list(range(q)))

    if variant == "paper":
        def check(v: str, a: int, n: Sequence[int]) -> bool:
            own = a + sum((j - 1) * n[j] for j in range(1, q))
            comp = sum((j - 1) * (sizes[j] - n[j]) for j in range(1, q))
            return own >= k and comp >= k
    else:
        def check(v: str, a: int, n: Sequence[int]) -> bool:
            own = a + sum((j - 1) * n[j] for j in range(1, q))
            comp = a + sum((j - 1) * (sizes[j] - n[j] - (1 if j == a else 0))
                           for j in range(1, q))
            return own >= k and comp >= k

    constraints = {a: dfa_from_finite_set({sizes[a]}) for a in range(q)}
    return ProblemModel(f"globalkroman({k},{variant})",
                        tuple(str(i) for i in range(q)), MIN_SUM,
                        tuple(vertices), allowed, w, check,
                        cap=max(1, len(vertices)), size_constraints=constraints)


def specified_size_k_community(vertices: Sequence[str], k: int,
                               sizes: Sequence[int]) -> ProblemModel:
    """Partition into k classes of pinned sizes where each vertex's
    normalized internal degree dominates its degree to every class."""
    sizes = tuple(sizes)
    if k < 2 or len(sizes) != k:
        raise ValueError("community needs k >= 2 sizes")
    if any(s < 2 for s in sizes) or sum(sizes) != len(vertices):
        raise ValueError("community sizes must be >= 2 and sum to |V|")
    allowed, w = _uniform(vertices, k, [0] * k)

    def check(v: str, a: int, n: Sequence[int]) -> bool:
        # ratio comparison n_a/(s_a - 1) >= n_b/s_b, cross-multiplied
        return all(n[a] * sizes[b] >= n[b] * (sizes[a] - 1) for b in range(k))

    constraints = {a: dfa_from_finite_set({sizes[a]}) for a in range(k)}
    return ProblemModel(f"community({k})", tuple(str(i) for i in range(1, k + 1)),
                        DECISION, tuple(vertices), allowed, w, check,
                        cap=max(1, len(vertices)), size_constraints=constraints)


def specified_size_pds(vertices: Sequence[str], s_in: int,
                       required: Sequence[str] = ()) -> ProblemModel:
    """Two-class model for proportionally dense subgraphs of a pinned size;
    ``required`` vertices are forced into the subgraph side."""
    n = len(vertices)
    if not 2 <= s_in < n:
        raise ValueError("pds needs 2 <= s_in < |V|")
    unknown = set(required) - set(vertices)
    if unknown:
        raise ValueError(f"required vertices not in graph: {sorted(unknown)}")
    s_out = n - s_in
    required_set = frozenset(required)
    allowed = {v: ((0,) if v in required_set else (0, 1)) for v in vertices}
    w = {v: (0, 0) for v in vertices}

    def check(v: str, a: int, counts: Sequence[int]) -> bool:
        return a == 1 or counts[0] * s_out >= counts[1] * (s_in - 1)

    constraints = {0: dfa_from_finite_set({s_in}),
                   1: dfa_from_finite_set({s_out})}
    return ProblemModel(f"pds({s_in})", ("S", "notS"), DECISION,
                        tuple(vertices), allowed, w, check,
                        cap=max(1, n), size_constraints=constraints)


def quasi_clique(vertices: Sequence[str], num: int, den: int,
                 s_in: int) -> ProblemModel:
    """Two-class model: every subgraph-side vertex needs internal degree at
    least gamma * (s_in - 1), gamma = num/den."""
    n = len(vertices)
    if not 0 < num <= den:
        raise ValueError("gamma must satisfy 0 < gamma <= 1")
    if not 2 <= s_in <= n:
        raise ValueError("quasi-clique needs 2 <= s_in <= |V|")
    allowed, w = _uniform(vertices, 2, [0, 0])

    def check(v: str, a: int, counts: Sequence[int]) -> bool:
        return a == 1 or counts[0] * den >= num * (s_in - 1)

    constraints = {0: dfa_from_finite_set({s_in}),
                   1: dfa_from_finite_set({n - s_in})}
    return ProblemModel(f"quasiclique({num}/{den},{s_in})", ("S", "notS"),
                        DECISION, tuple(vertices), allowed, w, check,
                        cap=max(1, n), size_constraints=constraints)


def instantiate_builtin(problem: str, vertices: Sequence[str], *,
                        k: int | None = None,
                        sizes: Sequence[int] | None = None,
                        gamma: tuple[int, int] | None = None,
                        required: Sequence[str] = (),
                        variant: str = "strict") -> ProblemModel:
    """Dispatch a builtin identifier with its parameters (CLI surface)."""
    def need(cond: bool, what: str) -> None:
        if not cond:
            raise ValueError(f"problem {problem!r} requires {what}")

    if problem == "mis":
        return max_independent_set(vertices)
    if problem == "odd":
        return odd_dominating_set(vertices)
    if problem == "mds":
        return min_dominating_set(vertices)
    if problem == "kcoloring":
        need(k is not None, "--k")
        return k_coloring(vertices, k)
    if problem == "kroman":
        need(k is not None, "--k")
        return k_roman(vertices, k)
    if problem == "globalkroman":
        need(k is not None and sizes is not None, "--k and --sizes")
        return specified_size_global_k_roman(vertices, k, sizes, variant)
    if problem == "community":
        need(k is not None and sizes is not None, "--k and --sizes")
        return specified_size_k_community(vertices, k, sizes)
    if problem == "pds":
        need(sizes is not None and len(sizes) in (1, 2), "--sizes s_in[,s_out]")
        if len(sizes) == 2 and sum(sizes) != len(vertices):
            raise ValueError("pds sizes must sum to |V|")
        return specified_size_pds(vertices, sizes[0], required)
    if problem == "quasiclique":
        need(gamma is not None, "--gamma")
        need(sizes is not None and len(sizes) >= 1, "--sizes s_in")
        return quasi_clique(vertices, gamma[0], gamma[1], sizes[0])
    raise ValueError(f"unknown problem {problem!r}")
