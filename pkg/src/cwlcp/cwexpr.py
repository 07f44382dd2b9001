"""Clique-width expression ASTs: parsing, validation, realization, families.

Expression files hold a single s-expression built from::

    (node <name> <label>)      create a vertex with a label in [1,k]
    (union <e> <e>)            disjoint union
    (join <i> <j> <e>)         add all edges between label classes i and j
    (rename <i> <j> <e>)       relabel class i to j
    (k <int> <e>)              optional wrapper declaring a larger label budget

``;`` starts a line comment.  The validator enforces irredundancy (no join
re-adds an existing edge) and that every rename target class is nonempty at
the point of renaming; vacuous joins (an empty side) are reported as
warnings only.
"""

from __future__ import annotations

import re
import sys
from dataclasses import dataclass, field
from typing import Iterator, Union as TUnion

from .errors import ParseError
from .graph import Graph, make_graph

_NAME_RE = re.compile(r"^[A-Za-z0-9_]+$")


@dataclass(frozen=True)
class Create:
    vertex: str
    label: int


@dataclass(frozen=True)
class Union:
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Join:
    i: int
    j: int
    child: "Node"


@dataclass(frozen=True)
class Rename:
    i: int
    j: int
    child: "Node"


Node = TUnion[Create, Union, Join, Rename]


@dataclass
class CwExpression:
    root: Node
    k: int


@dataclass(frozen=True)
class Violation:
    kind: str
    node_id: int
    message: str


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)
    warnings: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass
class LabelState:
    labels: dict[str, int]
    unused: frozenset[int]


# Redundant joins re-add an existing edge; empty rename targets violate the
# relabeling restriction the algorithm relies on.
REDUNDANT_JOIN = "redundant-join"
EMPTY_RENAME_TARGET = "empty-rename-target"
LABEL_OUT_OF_RANGE = "label-out-of-range"
DUPLICATE_VERTEX = "duplicate-vertex"
EQUAL_JOIN_LABELS = "equal-join-labels"
EQUAL_RENAME_LABELS = "equal-rename-labels"
VACUOUS_JOIN = "vacuous-join"


def _children(node: Node) -> tuple[Node, ...]:
    if isinstance(node, Create):
        return ()
    if isinstance(node, Union):
        return (node.left, node.right)
    return (node.child,)


def flatten(root: Node) -> list[tuple[Node, tuple[int, ...]]]:
    """Postorder list of (node, child ids); ids index into the list itself."""
    result: list[tuple[Node, tuple[int, ...]]] = []
    id_stack: list[int] = []
    stack: list[tuple[Node, bool]] = [(root, False)]
    while stack:
        node, done = stack.pop()
        if not done:
            stack.append((node, True))
            for ch in reversed(_children(node)):
                stack.append((ch, False))
            continue
        nch = len(_children(node))
        child_ids = tuple(id_stack[len(id_stack) - nch:]) if nch else ()
        del id_stack[len(id_stack) - nch:]
        result.append((node, child_ids))
        id_stack.append(len(result) - 1)
    return result


@dataclass
class Analysis:
    nodes: list[tuple[Node, tuple[int, ...]]]
    report: ValidationReport
    used_labels: list[frozenset[int]]
    graph: Graph
    labels: dict[str, int]


def analyze(expr: CwExpression) -> Analysis:
    """One bottom-up pass: validation, per-node label usage, realization."""
    nodes = flatten(expr.root)
    report = ValidationReport()
    used_labels: list[frozenset[int]] = []
    # classes[i] is consumed destructively by node i's unique parent
    classes: list[dict[int, set[str]]] = []
    edge_sets: list[set[frozenset[str]]] = []
    vertex_order: list[str] = []
    seen_vertices: set[str] = set()
    k = expr.k

    def check_label(label: int, nid: int) -> None:
        if not 1 <= label <= k:
            report.violations.append(Violation(
                LABEL_OUT_OF_RANGE, nid, f"label {label} outside [1,{k}]"))

    for nid, (node, child_ids) in enumerate(nodes):
        if isinstance(node, Create):
            check_label(node.label, nid)
            if node.vertex in seen_vertices:
                report.violations.append(Violation(
                    DUPLICATE_VERTEX, nid, f"vertex {node.vertex!r} created twice"))
            else:
                seen_vertices.add(node.vertex)
                vertex_order.append(node.vertex)
            cls: dict[int, set[str]] = {node.label: {node.vertex}}
            edges: set[frozenset[str]] = set()
        elif isinstance(node, Union):
            a, b = child_ids
            cls, edges = classes[a], edge_sets[a]
            other_cls, other_edges = classes[b], edge_sets[b]
            for label, members in other_cls.items():
                cls.setdefault(label, set()).update(members)
            edges |= other_edges
            classes[b] = edge_sets[b] = None  # type: ignore[assignment]
        elif isinstance(node, Join):
            check_label(node.i, nid)
            check_label(node.j, nid)
            if node.i == node.j:
                report.violations.append(Violation(
                    EQUAL_JOIN_LABELS, nid, f"join with i = j = {node.i}"))
            (cid,) = child_ids
            cls, edges = classes[cid], edge_sets[cid]
            classes[cid] = edge_sets[cid] = None  # type: ignore[assignment]
            side_i = cls.get(node.i, set())
            side_j = cls.get(node.j, set())
            if not side_i or not side_j:
                report.warnings.append(Violation(
                    VACUOUS_JOIN, nid,
                    f"join {node.i},{node.j} with an empty label class"))
            if node.i != node.j:
                redundant = 0
                for u in side_i:
                    for w in side_j:
                        e = frozenset((u, w))
                        if e in edges:
                            redundant += 1
                        else:
                            edges.add(e)
                if redundant:
                    report.violations.append(Violation(
                        REDUNDANT_JOIN, nid,
                        f"join {node.i},{node.j} re-adds {redundant} existing edge(s)"))
        else:  # Rename
            check_label(node.i, nid)
            check_label(node.j, nid)
            if node.i == node.j:
                report.violations.append(Violation(
                    EQUAL_RENAME_LABELS, nid, f"rename with i = j = {node.i}"))
            (cid,) = child_ids
            cls, edges = classes[cid], edge_sets[cid]
            classes[cid] = edge_sets[cid] = None  # type: ignore[assignment]
            if not cls.get(node.j):
                report.violations.append(Violation(
                    EMPTY_RENAME_TARGET, nid,
                    f"rename {node.i}->{node.j}: target class {node.j} is empty"))
            moved = cls.pop(node.i, set())
            if moved:
                cls.setdefault(node.j, set()).update(moved)
        classes.append(cls)
        edge_sets.append(edges)
        used_labels.append(frozenset(l for l, m in cls.items() if m))

    final_cls = classes[-1]
    labels = {v: label for label, members in final_cls.items() for v in members}
    graph = make_graph(vertex_order, [tuple(e) for e in edge_sets[-1]])
    return Analysis(nodes, report, used_labels, graph, labels)


def validate(expr: CwExpression) -> ValidationReport:
    return analyze(expr).report


def realize(expr: CwExpression) -> tuple[Graph, LabelState]:
    an = analyze(expr)
    if not an.report.ok:
        first = an.report.violations[0]
        raise ValueError(f"expression fails validation: {first.kind}: {first.message}")
    unused = frozenset(range(1, expr.k + 1)) - an.used_labels[-1]
    return an.graph, LabelState(an.labels, unused)


def final_labels(expr: CwExpression) -> dict[str, int]:
    return realize(expr)[1].labels


def unused_labels(expr: CwExpression) -> frozenset[int]:
    return realize(expr)[1].unused


def check_realizes(expr: CwExpression, g: Graph) -> bool:
    realized, _ = realize(expr)
    return (set(realized.vertices) == set(g.vertices)
            and realized.edges == g.edges)


# ---------------------------------------------------------------------------
# Parsing


_TOKEN_RE = re.compile(r"\(|\)|[^\s();]+")


def _tokenize(text: str) -> Iterator[tuple[str, int, int]]:
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split(";", 1)[0]
        for m in _TOKEN_RE.finditer(body):
            yield m.group(0), lineno, m.start() + 1


class _Tokens:
    def __init__(self, text: str) -> None:
        self.items = list(_tokenize(text))
        self.pos = 0

    def peek(self):
        return self.items[self.pos] if self.pos < len(self.items) else None

    def next(self, what: str):
        tok = self.peek()
        if tok is None:
            raise ParseError(f"unexpected end of input, expected {what}")
        self.pos += 1
        return tok

    def expect(self, literal: str) -> None:
        tok, line, col = self.next(repr(literal))
        if tok != literal:
            raise ParseError(f"line {line}:{col}: expected {literal!r}, got {tok!r}")


def _parse_int(tokens: _Tokens, what: str) -> int:
    tok, line, col = tokens.next(what)
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"line {line}:{col}: expected {what}, got {tok!r}") from None


def _parse_label(tokens: _Tokens) -> int:
    tok, line, col = tokens.next("label")
    try:
        value = int(tok)
    except ValueError:
        raise ParseError(f"line {line}:{col}: expected label, got {tok!r}") from None
    if value < 1:
        raise ParseError(f"line {line}:{col}: label must be positive, got {value}")
    return value


def _parse_node(tokens: _Tokens, names: set[str]) -> Node:
    tokens.expect("(")
    head, line, col = tokens.next("operator")
    if head == "node":
        name_tok, nline, ncol = tokens.next("vertex name")
        if not _NAME_RE.match(name_tok):
            raise ParseError(f"line {nline}:{ncol}: invalid vertex name {name_tok!r}")
        if name_tok in names:
            raise ParseError(f"line {nline}:{ncol}: duplicate vertex {name_tok!r}")
        names.add(name_tok)
        label = _parse_label(tokens)
        tokens.expect(")")
        return Create(name_tok, label)
    if head == "union":
        left = _parse_node(tokens, names)
        right = _parse_node(tokens, names)
        tokens.expect(")")
        return Union(left, right)
    if head in ("join", "rename"):
        i = _parse_label(tokens)
        j = _parse_label(tokens)
        if i == j:
            raise ParseError(f"line {line}:{col}: {head} with i = j = {i}")
        child = _parse_node(tokens, names)
        tokens.expect(")")
        return Join(i, j, child) if head == "join" else Rename(i, j, child)
    raise ParseError(f"line {line}:{col}: unknown operator {head!r}")


def _max_label(root: Node) -> int:
    best = 0
    for node, _ in flatten(root):
        if isinstance(node, Create):
            best = max(best, node.label)
        elif isinstance(node, (Join, Rename)):
            best = max(best, node.i, node.j)
    return best


def parse_expression(text: str) -> CwExpression:
    tokens = _Tokens(text)
    if not tokens.items:
        raise ParseError("empty expression")
    # recursion depth tracks nesting; tokens bound it
    sys.setrecursionlimit(max(sys.getrecursionlimit(), len(tokens.items) + 2000))
    declared_k = None
    if (len(tokens.items) >= 2 and tokens.items[0][0] == "("
            and tokens.items[1][0] == "k"):
        tokens.expect("(")
        tokens.next("'k'")
        declared_k = _parse_int(tokens, "label budget")
        root = _parse_node(tokens, set())
        tokens.expect(")")
    else:
        root = _parse_node(tokens, set())
    extra = tokens.peek()
    if extra is not None:
        tok, line, col = extra
        raise ParseError(f"line {line}:{col}: trailing input {tok!r}")
    k = _max_label(root)
    if declared_k is not None:
        if declared_k < k:
            raise ParseError(
                f"declared label budget {declared_k} smaller than used label {k}")
        k = declared_k
    return CwExpression(root, k)


def to_text(expr: CwExpression) -> str:
    """Serialize back to the expression file format."""
    parts: list[str] = []
    stack: list[TUnion[Node, str]] = [expr.root]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            parts.append(item)
            continue
        if isinstance(item, Create):
            parts.append(f"(node {item.vertex} {item.label})")
        elif isinstance(item, Union):
            parts.append("(union")
            stack.extend([")", item.right, item.left])
        elif isinstance(item, Join):
            parts.append(f"(join {item.i} {item.j}")
            stack.extend([")", item.child])
        else:
            parts.append(f"(rename {item.i} {item.j}")
            stack.extend([")", item.child])
    body = " ".join(parts).replace(" )", ")")
    if expr.k > _max_label(expr.root):
        return f"(k {expr.k} {body})"
    return body


# ---------------------------------------------------------------------------
# Standard families


def _path_root(n: int, names: list[str]) -> Node:
    e: Node = Create(names[0], 1)
    if n == 1:
        return e
    e = Join(1, 2, Union(e, Create(names[1], 2)))
    last, free = 2, 3
    for i in range(2, n):
        e = Rename(last, 1, Join(last, free, Union(e, Create(names[i], free))))
        last, free = free, last
    return e


def _cycle_root(n: int, names: list[str]) -> Node:
    # v1 keeps label 2 for the closing join; v3 seeds the retired class 1.
    e: Node = Join(2, 3, Union(Create(names[0], 2), Create(names[1], 3)))
    e = Join(3, 1, Union(e, Create(names[2], 1)))
    e = Join(1, 4, Union(e, Create(names[3], 4)))
    last = 4
    for i in range(4, n):
        free = 7 - last  # the other of {3, 4}
        e = Rename(free, 1, e)
        e = Join(last, free, Union(e, Create(names[i], free)))
        last = free
    return Join(last, 2, e)


def _complete_root(n: int, names: list[str]) -> Node:
    e: Node = Create(names[0], 1)
    for i in range(1, n):
        e = Rename(2, 1, Join(1, 2, Union(e, Create(names[i], 2))))
    return e


def _bipartite_root(a_count: int, b_count: int) -> Node:
    e: Node = Create("a1", 1)
    for i in range(2, a_count + 1):
        e = Union(e, Create(f"a{i}", 1))
    for i in range(1, b_count + 1):
        e = Union(e, Create(f"b{i}", 2))
    return Join(1, 2, e)


def build_family(family: str, n: int, m: int | None = None) -> CwExpression:
    """Expressions for standard graph families; always validate clean."""
    names = [f"v{i}" for i in range(1, n + 1)]
    if family == "path":
        if n < 1:
            raise ValueError("path needs n >= 1")
        return CwExpression(_path_root(n, names), 3)
    if family == "cycle":
        if n < 3:
            raise ValueError("cycle needs n >= 3")
        if n == 3:
            return build_family("complete", 3)
        return CwExpression(_cycle_root(n, names), 4)
    if family == "complete":
        if n < 1:
            raise ValueError("complete needs n >= 1")
        return CwExpression(_complete_root(n, names), 2)
    if family == "complete_bipartite":
        if m is None or n < 1 or m < 1:
            raise ValueError("complete_bipartite needs m, n >= 1")
        return CwExpression(_bipartite_root(n, m), 2)
    raise ValueError(f"unknown family {family!r}")


def trivial_expression(g: Graph) -> CwExpression:
    """k = |V| expression: one label per vertex, one join per edge."""
    if g.n == 0:
        raise ValueError("empty graph has no expression")
    verts = g.vertices
    label_of = {v: i + 1 for i, v in enumerate(verts)}
    e: Node = Create(verts[0], 1)
    for i in range(1, g.n):
        e = Union(e, Create(verts[i], i + 1))
    for edge in sorted(g.edges, key=lambda s: sorted(s)):
        u, v = sorted(edge)
        e = Join(label_of[u], label_of[v], e)
    return CwExpression(e, g.n)
