"""Simple finite undirected graphs with named vertices.

File format (UTF-8, line oriented)::

    # comment
    v <name>
    e <name> <name>

Names match ``[A-Za-z0-9_]+``; blank lines are ignored.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import ParseError

_NAME_RE = re.compile(r"^[A-Za-z0-9_]+$")


@dataclass
class Graph:
    vertices: tuple[str, ...]
    edges: frozenset[frozenset[str]]
    index: dict[str, int] = field(init=False, repr=False)
    adj: dict[str, set[str]] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self.index = {name: i for i, name in enumerate(self.vertices)}
        self.adj = {name: set() for name in self.vertices}
        for edge in self.edges:
            u, v = tuple(edge)
            self.adj[u].add(v)
            self.adj[v].add(u)

    @property
    def n(self) -> int:
        return len(self.vertices)

    def neighbors(self, v: str) -> set[str]:
        if v not in self.adj:
            raise KeyError(f"unknown vertex {v!r}")
        return set(self.adj[v])

    def has_edge(self, u: str, v: str) -> bool:
        if u not in self.adj or v not in self.adj:
            raise KeyError(f"unknown vertex in edge query ({u!r}, {v!r})")
        return v in self.adj[u]

    def degree(self, v: str) -> int:
        return len(self.adj[v])


def make_graph(vertices: list[str] | tuple[str, ...], edges) -> Graph:
    """Build a graph, checking the simple-graph invariants."""
    seen: set[str] = set()
    for name in vertices:
        if not _NAME_RE.match(name):
            raise ParseError(f"invalid vertex name {name!r}")
        if name in seen:
            raise ParseError(f"duplicate vertex {name!r}")
        seen.add(name)
    edge_set: set[frozenset[str]] = set()
    for u, v in edges:
        if u == v:
            raise ParseError(f"self-loop at {u!r}")
        if u not in seen or v not in seen:
            raise ParseError(f"edge ({u!r}, {v!r}) references unknown vertex")
        edge_set.add(frozenset((u, v)))
    return Graph(tuple(vertices), frozenset(edge_set))


def parse_graph(text: str) -> Graph:
    vertices: list[str] = []
    edges: list[tuple[str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "v" and len(parts) == 2:
            vertices.append(parts[1])
        elif parts[0] == "e" and len(parts) == 3:
            edges.append((parts[1], parts[2]))
        else:
            raise ParseError(f"line {lineno}: malformed line {line!r}")
    try:
        return make_graph(vertices, edges)
    except ParseError as exc:
        raise ParseError(str(exc)) from None


def neighbors(g: Graph, v: str) -> set[str]:
    return g.neighbors(v)


def has_edge(g: Graph, u: str, v: str) -> bool:
    return g.has_edge(u, v)


def complement(g: Graph) -> Graph:
    verts = g.vertices
    edges = [
        (verts[i], verts[j])
        for i in range(len(verts))
        for j in range(i + 1, len(verts))
        if not g.has_edge(verts[i], verts[j])
    ]
    return make_graph(list(verts), edges)


def path_graph(n: int, prefix: str = "v") -> Graph:
    names = [f"{prefix}{i}" for i in range(1, n + 1)]
    return make_graph(names, [(names[i], names[i + 1]) for i in range(n - 1)])


def cycle_graph(n: int, prefix: str = "v") -> Graph:
    names = [f"{prefix}{i}" for i in range(1, n + 1)]
    edges = [(names[i], names[(i + 1) % n]) for i in range(n)]
    return make_graph(names, edges)


def complete_graph(n: int, prefix: str = "v") -> Graph:
    names = [f"{prefix}{i}" for i in range(1, n + 1)]
    edges = [(names[i], names[j]) for i in range(n) for j in range(i + 1, n)]
    return make_graph(names, edges)


def complete_bipartite_graph(m: int, n: int) -> Graph:
    left = [f"a{i}" for i in range(1, m + 1)]
    right = [f"b{i}" for i in range(1, n + 1)]
    return make_graph(left + right, [(u, v) for u in left for v in right])
