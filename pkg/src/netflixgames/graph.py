"""Undirected simple graphs with stable integer vertex ids.

Vertex ids are dense integers assigned when a graph is first built; deleting
vertices keeps the surviving ids, so vertex sets computed on a subgraph still
mean something in the host graph. Labels live in a side table.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Mapping, Sequence

Edge = tuple[int, int]


class GraphError(ValueError):
    """Raised for malformed graph or capacity input."""


def _edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


class Graph:
    """Immutable undirected simple graph.

    ``adj`` maps every vertex id to the frozenset of its neighbours. All
    iteration helpers return vertices in ascending id order.
    """

    __slots__ = ("_adj", "_labels")

    def __init__(self, adj: Mapping[int, Iterable[int]], labels: Mapping[int, str] | None = None):
        frozen = {v: frozenset(nb) for v, nb in adj.items()}
        for v, nb in frozen.items():
            if v in nb:
                raise GraphError(f"self-loop at vertex {v}")
            for u in nb:
                if u not in frozen or v not in frozen[u]:
                    raise GraphError(f"asymmetric adjacency between {v} and {u}")
        self._adj = dict(sorted(frozen.items()))
        labels = labels or {}
        self._labels = {v: str(labels.get(v, v)) for v in self._adj}

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]], labels: Sequence[str] | None = None) -> Graph:
        adj: dict[int, set[int]] = {v: set() for v in range(n)}
        for u, v in edges:
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if v in adj[u]:
                raise GraphError(f"duplicate edge {u}-{v}")
            adj[u].add(v)
            adj[v].add(u)
        lab = dict(enumerate(labels)) if labels is not None else None
        return cls(adj, lab)

    # -- basic queries -------------------------------------------------

    @property
    def n(self) -> int:
        return len(self._adj)

    def __len__(self) -> int:
        return len(self._adj)

    def __contains__(self, v: object) -> bool:
        return v in self._adj

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(self._adj)

    @property
    def edges(self) -> list[Edge]:
        return sorted(_edge(u, v) for u, nb in self._adj.items() for v in nb if u < v)

    @property
    def m(self) -> int:
        return sum(len(nb) for nb in self._adj.values()) // 2

    def neighbours(self, v: int) -> frozenset[int]:
        return self._adj[v]

    def sorted_neighbours(self, v: int) -> list[int]:
        return sorted(self._adj[v])

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return u in self._adj and v in self._adj[u]

    def label(self, v: int) -> str:
        return self._labels[v]

    @property
    def labels(self) -> dict[int, str]:
        return dict(self._labels)

    def vertex_by_label(self, label: str) -> int:
        for v, lab in self._labels.items():
            if lab == label:
                return v
        raise GraphError(f"unknown vertex {label!r}")

    def ids(self, labels: Iterable[str]) -> frozenset[int]:
        return frozenset(self.vertex_by_label(x) for x in labels)

    def names(self, vs: Iterable[int]) -> list[str]:
        return [self._labels[v] for v in sorted(vs)]

    def min_degree(self) -> int:
        return min((len(nb) for nb in self._adj.values()), default=0)

    # -- derived graphs ------------------------------------------------

    def remove_vertices(self, s: Iterable[int]) -> Graph:
        s = set(s)
        unknown = s - self._adj.keys()
        if unknown:
            raise GraphError(f"unknown vertices {sorted(unknown)}")
        adj = {v: nb - s for v, nb in self._adj.items() if v not in s}
        return Graph(adj, self._labels)

    def remove_edges(self, b: Iterable[Sequence[int]]) -> Graph:
        adj = {v: set(nb) for v, nb in self._adj.items()}
        for u, v in b:
            if not self.has_edge(u, v):
                raise GraphError(f"unknown edge {u}-{v}")
            adj[u].discard(v)
            adj[v].discard(u)
        return Graph(adj, self._labels)

    def add_edges(self, b: Iterable[Sequence[int]]) -> Graph:
        adj = {v: set(nb) for v, nb in self._adj.items()}
        for u, v in b:
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if v in adj[u]:
                raise GraphError(f"duplicate edge {u}-{v}")
            adj[u].add(v)
            adj[v].add(u)
        return Graph(adj, self._labels)

    def induced(self, keep: Iterable[int]) -> Graph:
        return self.remove_vertices(self._adj.keys() - set(keep))

    def components(self) -> list[list[int]]:
        seen: set[int] = set()
        out = []
        for s in self._adj:
            if s in seen:
                continue
            comp = [s]
            seen.add(s)
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for w in sorted(self._adj[u]):
                    if w not in seen:
                        seen.add(w)
                        comp.append(w)
                        queue.append(w)
            out.append(sorted(comp))
        return out

    # -- comparisons ---------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._adj == other._adj and self._labels == other._labels

    def __hash__(self) -> int:
        return hash((tuple(self._adj.items()), tuple(self._labels.items())))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def is_connected(g: Graph) -> bool:
    if g.n == 0:
        raise GraphError("empty graph")
    return len(g.components()) == 1


def complete_graph(n: int, labels: Sequence[str] | None = None) -> Graph:
    return Graph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n)], labels)


# -- text formats ------------------------------------------------------


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def parse_graph(text: str) -> Graph:
    """Parse an edge-list document.

    Each non-blank line is ``u v`` (an edge) or ``node u`` (a vertex that may
    be isolated). ``#`` starts a comment. Labels get ids in order of first
    appearance.
    """
    ids: dict[str, int] = {}
    edges: list[Edge] = []
    seen: set[Edge] = set()

    def vid(tok: str) -> int:
        if tok not in ids:
            ids[tok] = len(ids)
        return ids[tok]

    for lineno, toks in _lines(text):
        if len(toks) == 2 and toks[0] == "node":
            vid(toks[1])
            continue
        if len(toks) != 2:
            raise GraphError(f"line {lineno}: expected 'u v' or 'node u'")
        a, b = toks
        if a == b:
            raise GraphError(f"line {lineno}: self-loop at {a!r}")
        e = _edge(vid(a), vid(b))
        if e in seen:
            raise GraphError(f"line {lineno}: duplicate edge {a}-{b}")
        seen.add(e)
        edges.append(e)
    if not ids:
        raise GraphError("empty graph document")
    labels = sorted(ids, key=ids.__getitem__)
    return Graph.from_edges(len(ids), edges, labels)


def serialize_graph(g: Graph) -> str:
    lines = [f"node {g.label(v)}" for v in g.vertices if g.degree(v) == 0]
    lines += [f"{g.label(u)} {g.label(v)}" for u, v in g.edges]
    return "\n".join(lines) + "\n"


def uniform_capacity(g: Graph, k: int) -> dict[int, int]:
    if k < 0:
        raise GraphError("capacity must be nonnegative")
    return {v: k for v in g.vertices}


def parse_capacity(text: str, g: Graph) -> dict[int, int]:
    """Parse ``vertex k`` lines plus an optional ``default k`` line."""
    default = None
    given: dict[int, int] = {}
    for lineno, toks in _lines(text):
        if len(toks) != 2:
            raise GraphError(f"line {lineno}: expected 'vertex k'")
        try:
            k = int(toks[1])
        except ValueError:
            raise GraphError(f"line {lineno}: capacity {toks[1]!r} is not an integer") from None
        if k < 0:
            raise GraphError(f"line {lineno}: negative capacity")
        if toks[0] == "default":
            default = k
        else:
            try:
                given[g.vertex_by_label(toks[0])] = k
            except GraphError:
                raise GraphError(f"line {lineno}: unknown vertex {toks[0]!r}") from None
    kappa = {}
    for v in g.vertices:
        if v in given:
            kappa[v] = given[v]
        elif default is not None:
            kappa[v] = default
        else:
            raise GraphError(f"no capacity for vertex {g.label(v)!r} and no default")
    return kappa


def effective_capacity(g: Graph, kappa: Mapping[int, int], v: int) -> int:
    """Number of neighbours ``v`` nominates: min(kappa(v), degree(v))."""
    return min(kappa[v], g.degree(v))
