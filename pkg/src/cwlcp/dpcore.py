"""Dynamic program over clique-width expressions.

State is a pair of k x q count matrices (stored as flat tuples, row per
label, column per color), plus one (automaton state, state predicate) pair
per size-constrained color:

* ``C[i,a]`` -- capped number of vertices of the subexpression with final
  label i and color a;
* ``N[i,a]`` -- capped number of promised upcoming neighbors of color a
  shared by every vertex with label i.

Evaluation is lazy and memoized: starting from the root profiles, only
reachable keys are ever computed.  Per operation:

* a leaf accepts exactly the unit matrices of its allowed colors and pays
  the vertex weight, with its row of N supplying the neighbor counts;
* a disjoint union splits C entrywise between the children under the capped
  sum (and splits each tracked class through an intermediate automaton
  state);
* a join folds the opposite class counts into the N rows of its two labels;
* a rename requires the vacated row of C to be zero and splits the target
  row between the two merged rows of the child.

Matrices use 1-based labels and 0-based color indices in the helper
constructors; internally everything is flat and 0-based.
"""

from __future__ import annotations

import sys
import time
from dataclasses import dataclass
from itertools import product

from .checkmodel import ProblemModel
from .cwexpr import Create, CwExpression, Join, Rename, Union, analyze
from .errors import InternalCheckError
from .sizedfa import power
from .weights import ERROR, WeightValue

Matrix = tuple[int, ...]

_CREATE, _UNION, _JOIN, _RENAME = range(4)


@dataclass
class SolveStats:
    nodes: int
    memo_entries: int
    elapsed_ms: float


@dataclass
class Solution:
    weight: WeightValue
    coloring: dict[str, int] | None = None
    stats: SolveStats | None = None


def zero_matrix(k: int, q: int) -> Matrix:
    return (0,) * (k * q)


def matrix_with(k: int, q: int, entries: dict[tuple[int, int], int]) -> Matrix:
    """Matrix from {(label, color): value} with 1-based labels."""
    m = [0] * (k * q)
    for (label, color), value in entries.items():
        m[(label - 1) * q + color] = value
    return tuple(m)


def split_pairs(total: int, cap: int) -> tuple[tuple[int, int], ...]:
    """All (c1, c2) in [0, cap]^2 with min(cap, c1 + c2) == total."""
    if total < cap:
        return tuple((i, total - i) for i in range(total + 1))
    return tuple((c1, c2)
                 for c1 in range(cap + 1)
                 for c2 in range(max(0, cap - c1), cap + 1))


class Solver:
    """One solve owns its memo tables; model and expression are shared."""

    def __init__(self, model: ProblemModel, expr: CwExpression,
                 use_pruning: bool = True):
        analysis = analyze(expr)
        if not analysis.report.ok:
            first = analysis.report.violations[0]
            raise ValueError(f"expression fails validation: {first.kind}: "
                             f"{first.message}")
        if set(analysis.graph.vertices) != set(model.vertices):
            raise ValueError("expression vertex set does not match the model")
        self.model = model
        self.expr = expr
        self.graph = analysis.graph
        self.k = expr.k
        self.q = model.q
        self.kq = self.k * self.q
        self.cap = model.cap
        self.use_pruning = use_pruning
        self.nodes = analysis.nodes
        self.used = analysis.used_labels
        # evaluation recursion follows the expression tree depth
        sys.setrecursionlimit(max(sys.getrecursionlimit(),
                                  3 * len(self.nodes) + 2000))

        q = self.q
        self.kinds: list[int] = []
        self.children: list[tuple[int, ...]] = []
        self.join_rows: list[tuple[int, int] | None] = []
        self.unit_maps: list[dict[Matrix, int] | None] = []
        self.zero_idx: list[tuple[int, ...]] = []
        self.memos: list[dict | None] = []
        for nid, (node, child_ids) in enumerate(self.nodes):
            self.children.append(child_ids)
            unused = [(l - 1) * q + c
                      for l in range(1, self.k + 1)
                      if l not in self.used[nid]
                      for c in range(q)]
            self.zero_idx.append(tuple(unused))
            if isinstance(node, Create):
                self.kinds.append(_CREATE)
                self.join_rows.append(None)
                base = (node.label - 1) * q
                units = {}
                for a in model.allowed[node.vertex]:
                    m = [0] * self.kq
                    m[base + a] = 1
                    units[tuple(m)] = a
                self.unit_maps.append(units)
                self.memos.append(None)
            elif isinstance(node, Union):
                self.kinds.append(_UNION)
                self.join_rows.append(None)
                self.unit_maps.append(None)
                self.memos.append({})
            elif isinstance(node, Join):
                self.kinds.append(_JOIN)
                self.join_rows.append((node.i - 1, node.j - 1))
                self.unit_maps.append(None)
                self.memos.append(None)
            else:
                self.kinds.append(_RENAME)
                self.join_rows.append((node.i - 1, node.j - 1))
                self.unit_maps.append(None)
                self.memos.append({})

        self.tracked = tuple(sorted(model.size_constraints))
        self.automata = tuple(model.size_constraints[a] for a in self.tracked)
        self.init_trackers = tuple((a.start, a.accepting) for a in self.automata)
        self.exact = self.cap >= len(model.vertices)
        self.reach: list[frozenset[Matrix]] | None = None
        if use_pruning:
            self.reach = self._compute_reach()

    # -- reachable capped count profiles, ignoring checks ------------------

    def _compute_reach(self) -> list[frozenset[Matrix]]:
        cap, kq = self.cap, self.kq
        reach: list[frozenset[Matrix]] = []
        for nid, kind in enumerate(self.kinds):
            if kind == _CREATE:
                reach.append(frozenset(self.unit_maps[nid]))
            elif kind == _UNION:
                a, b = self.children[nid]
                left, right = reach[a], reach[b]
                if len(left) > len(right):
                    left, right = right, left
                acc = set()
                for x in left:
                    for y in right:
                        s = tuple(min(cap, x[t] + y[t]) for t in range(kq))
                        acc.add(s)
                reach.append(frozenset(acc))
            elif kind == _JOIN:
                reach.append(reach[self.children[nid][0]])
            else:
                ri, rj = self.join_rows[nid]
                bi, bj, q = ri * self.q, rj * self.q, self.q
                acc = set()
                for x in reach[self.children[nid][0]]:
                    m = list(x)
                    for c in range(q):
                        m[bj + c] = min(cap, x[bi + c] + x[bj + c])
                        m[bi + c] = 0
                    acc.add(tuple(m))
                reach.append(frozenset(acc))
        return reach

    # -- evaluation ---------------------------------------------------------

    def lambda_value(self, nid: int, C: Matrix, N: Matrix,
                     trackers: tuple | None = None) -> WeightValue:
        """Minimum weight of a coloring of the subexpression matching
        (C, N, trackers); ERROR when none exists."""
        if len(C) != self.kq or len(N) != self.kq:
            raise ValueError("matrix dimensions do not match k x q")
        if any(v < 0 or v > self.cap for v in C + N):
            raise ValueError("matrix entries must lie in [0, cap]")
        if trackers is None:
            trackers = self.init_trackers
        return self._lam(nid, C, N, trackers)

    def _lam(self, nid: int, C: Matrix, N: Matrix, trk: tuple) -> WeightValue:
        kind = self.kinds[nid]
        if kind == _CREATE:
            return self._eval_create(nid, C, N, trk)[0]
        if kind == _JOIN:
            return self._lam(self.children[nid][0], C, self._join_n(nid, C, N), trk)
        memo = self.memos[nid]
        key = (C, N, trk)
        hit = memo.get(key)
        if hit is not None:
            return hit[0]
        if kind == _UNION:
            entry = self._eval_union(nid, C, N, trk)
        else:
            entry = self._eval_rename(nid, C, N, trk)
        memo[key] = entry
        return entry[0]

    def _eval_create(self, nid: int, C: Matrix, N: Matrix, trk: tuple):
        a = self.unit_maps[nid].get(C)
        if a is None:
            return ERROR, None
        node = self.nodes[nid][0]
        base = (node.label - 1) * self.q
        if not self.model.check(node.vertex, a, N[base:base + self.q]):
            return ERROR, None
        for t, (state, pred) in enumerate(trk):
            if self.tracked[t] == a:
                state = self.automata[t].transitions[state]
            if not pred >> state & 1:
                return ERROR, None
        return self.model.vertex_weights[node.vertex][a], a

    def _join_n(self, nid: int, C: Matrix, N: Matrix) -> Matrix:
        ri, rj = self.join_rows[nid]
        q, cap = self.q, self.cap
        bi, bj = ri * q, rj * q
        out = list(N)
        for c in range(q):
            v = N[bi + c] + C[bj + c]
            out[bi + c] = v if v < cap else cap
            v = N[bj + c] + C[bi + c]
            out[bj + c] = v if v < cap else cap
        return tuple(out)

    def _masked(self, N: Matrix, zero_idx: tuple[int, ...]) -> Matrix:
        if not zero_idx:
            return N
        out = list(N)
        for t in zero_idx:
            out[t] = 0
        return tuple(out)

    def _split_candidates(self, nid: int, C: Matrix):
        """Yield (C1, C2) split pairs for a union node."""
        left, right = self.children[nid]
        cap, kq = self.cap, self.kq
        if self.use_pruning:
            ra, rb = self.reach[left], self.reach[right]
            swap = len(ra) > len(rb)
            known_set, other_set = (rb, ra) if swap else (ra, rb)
            for x in known_set:
                opts = []
                ok = True
                for t in range(kq):
                    c = C[t]
                    if c < cap:
                        y = c - x[t]
                        if y < 0:
                            ok = False
                            break
                        opts.append((y,))
                    else:
                        lo = cap - x[t]
                        opts.append(tuple(range(lo if lo > 0 else 0, cap + 1)))
                if not ok:
                    continue
                for combo in product(*opts):
                    if combo in other_set:
                        yield (combo, x) if swap else (x, combo)
        else:
            dead_left = set(self.zero_idx[left])
            dead_right = set(self.zero_idx[right])
            per_entry = []
            for t in range(kq):
                pairs = split_pairs(C[t], cap)
                if t in dead_left:
                    pairs = tuple(p for p in pairs if p[0] == 0)
                if t in dead_right:
                    pairs = tuple(p for p in pairs if p[1] == 0)
                per_entry.append(pairs)
            for combo in product(*per_entry):
                yield tuple(p[0] for p in combo), tuple(p[1] for p in combo)

    def _eval_union(self, nid: int, C: Matrix, N: Matrix, trk: tuple):
        left, right = self.children[nid]
        N1 = self._masked(N, self.zero_idx[left])
        N2 = self._masked(N, self.zero_idx[right])
        ws = self.model.weights
        best: WeightValue = ERROR
        choice = None
        qv = self.q
        if self.tracked and self.exact and self.use_pruning:
            state_opts = None  # forced per split below
        else:
            state_opts = (list(product(*(range(a.num_states)
                                         for a in self.automata)))
                          if self.tracked else [()])
        for C1, C2 in self._split_candidates(nid, C):
            if self.tracked and state_opts is None:
                opts = [tuple(power(self.automata[t], trk[t][0],
                                    sum(C1[color::qv]))
                              for t, color in enumerate(self.tracked))]
            else:
                opts = state_opts
            for qs in opts:
                trk1 = tuple((trk[t][0], 1 << qs[t])
                             for t in range(len(qs)))
                trk2 = tuple((qs[t], trk[t][1]) for t in range(len(qs)))
                w1 = self._lam(left, C1, N1, trk1)
                if w1 is None:
                    continue
                w2 = self._lam(right, C2, N2, trk2)
                if w2 is None:
                    continue
                w = ws.combine(w1, w2)
                if ws.better(w, best):
                    best = w
                    choice = (C1, C2, qs)
        return best, choice

    def _eval_rename(self, nid: int, C: Matrix, N: Matrix, trk: tuple):
        ri, rj = self.join_rows[nid]
        q, cap = self.q, self.cap
        bi, bj = ri * q, rj * q
        if any(C[bi + c] for c in range(q)):
            return ERROR, None
        out = list(N)
        out[bi:bi + q] = N[bj:bj + q]
        Ne = tuple(out)
        child = self.children[nid][0]
        reach = self.reach[child] if self.use_pruning else None
        ws = self.model.weights
        best: WeightValue = ERROR
        choice = None
        per_color = [split_pairs(C[bj + c], cap) for c in range(q)]
        for combo in product(*per_color):
            ce = list(C)
            for c in range(q):
                ce[bi + c], ce[bj + c] = combo[c]
            Ce = tuple(ce)
            if reach is not None and Ce not in reach:
                continue
            w = self._lam(child, Ce, Ne, trk)
            if ws.better(w, best):
                best = w
                choice = Ce
        return best, choice

    # -- root enumeration and reconstruction --------------------------------

    def _root_candidates(self):
        root = len(self.nodes) - 1
        if self.use_pruning:
            cands = self.reach[root]
            if self.tracked and self.exact:
                qv = self.q
                out = []
                for C in cands:
                    ok = True
                    for t, color in enumerate(self.tracked):
                        a = self.automata[t]
                        if not a.accepting >> power(a, a.start, sum(C[color::qv])) & 1:
                            ok = False
                            break
                    if ok:
                        out.append(C)
                return out
            return cands
        used_cells = [t for t in range(self.kq) if t not in set(self.zero_idx[root])]
        cands = []
        for combo in product(range(self.cap + 1), repeat=len(used_cells)):
            m = [0] * self.kq
            for pos, val in zip(used_cells, combo):
                m[pos] = val
            cands.append(tuple(m))
        return cands

    def solve(self, want_coloring: bool = False) -> Solution:
        start = time.perf_counter()
        root = len(self.nodes) - 1
        N0 = (0,) * self.kq
        ws = self.model.weights
        best: WeightValue = ERROR
        best_c: Matrix | None = None
        for C in self._root_candidates():
            w = self._lam(root, C, N0, self.init_trackers)
            if ws.better(w, best):
                best, best_c = w, C
        coloring = None
        if want_coloring and best is not None:
            coloring = {}
            self._walk(root, best_c, N0, self.init_trackers, coloring)
        elapsed = (time.perf_counter() - start) * 1000.0
        memo_entries = sum(len(m) for m in self.memos if m is not None)
        return Solution(best, coloring,
                        SolveStats(len(self.nodes), memo_entries, elapsed))

    def _walk(self, nid: int, C: Matrix, N: Matrix, trk: tuple,
              out: dict[str, int]) -> None:
        kind = self.kinds[nid]
        if kind == _CREATE:
            node = self.nodes[nid][0]
            a = self.unit_maps[nid].get(C)
            if a is None:
                raise InternalCheckError("reconstruction hit an invalid leaf")
            out[node.vertex] = a
            return
        if kind == _JOIN:
            self._walk(self.children[nid][0], C, self._join_n(nid, C, N), trk, out)
            return
        entry = self.memos[nid].get((C, N, trk))
        if entry is None or entry[1] is None:
            raise InternalCheckError("missing reconstruction choice")
        if kind == _UNION:
            C1, C2, qs = entry[1]
            left, right = self.children[nid]
            trk1 = tuple((trk[t][0], 1 << qs[t]) for t in range(len(qs)))
            trk2 = tuple((qs[t], trk[t][1]) for t in range(len(qs)))
            self._walk(left, C1, self._masked(N, self.zero_idx[left]), trk1, out)
            self._walk(right, C2, self._masked(N, self.zero_idx[right]), trk2, out)
            return
        ri, rj = self.join_rows[nid]
        q = self.q
        outn = list(N)
        outn[ri * q:ri * q + q] = N[rj * q:rj * q + q]
        self._walk(self.children[nid][0], entry[1], tuple(outn), trk, out)


def solve(model: ProblemModel, expr: CwExpression, want_coloring: bool = False,
          use_pruning: bool = True) -> Solution:
    return Solver(model, expr, use_pruning=use_pruning).solve(want_coloring)


def reachable_profiles(model: ProblemModel, expr: CwExpression) -> list[frozenset[Matrix]]:
    """Per node (postorder, root last): exact set of capped count profiles
    achievable by valid colorings, ignoring check functions."""
    return Solver(model, expr, use_pruning=True).reach


def unpruned_root_space(model: ProblemModel, expr: CwExpression) -> int:
    """Number of root matrices the pruning-free enumeration would visit."""
    solver = Solver(model, expr, use_pruning=False)
    root = len(solver.nodes) - 1
    used_cells = solver.kq - len(solver.zero_idx[root])
    return (solver.cap + 1) ** used_cells
