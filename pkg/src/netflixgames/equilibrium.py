"""Driver/passenger spanning subgraphs and the constructive existence procedure."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .graph import Edge, Graph, GraphError, _edge, complete_graph, effective_capacity


@dataclass(frozen=True)
class DPSubgraph:
    """Spanning bipartite subgraph H of ``host`` with driver side ``D``.

    Every driver has H-degree min(kappa, degree_G) and every passenger has
    H-degree at least one. Instances are not validated on construction; see
    :func:`validate_dp_subgraph`.
    """

    host: Graph
    kappa: Mapping[int, int]
    D: frozenset[int]
    P: frozenset[int]
    edges: frozenset[Edge] = field(default_factory=frozenset)

    def h_neighbours(self, v: int) -> list[int]:
        out = [b if a == v else a for a, b in self.edges if v in (a, b)]
        return sorted(out)

    def h_degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def to_dict(self) -> dict:
        g = self.host
        return {
            "D": g.names(self.D),
            "P": g.names(self.P),
            "H": [[g.label(u), g.label(v)] for u, v in sorted(self.edges)],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def dp_subgraph_from_dict(data: Mapping, host: Graph, kappa: Mapping[int, int]) -> DPSubgraph:
    edges = frozenset(_edge(host.vertex_by_label(a), host.vertex_by_label(b)) for a, b in data["H"])
    return DPSubgraph(host, kappa, host.ids(data["D"]), host.ids(data["P"]), edges)


def validate_dp_subgraph(cand: DPSubgraph) -> tuple[bool, list[str]]:
    """Check every defining clause; return ``(ok, violations)``."""
    g = cand.host
    problems = []
    V = set(g.vertices)
    if cand.D & cand.P:
        problems.append(f"D and P overlap at {g.names(cand.D & cand.P)}")
    missing = V - (cand.D | cand.P)
    if missing:
        problems.append(f"vertices {g.names(missing)} in neither D nor P")
    extra = (cand.D | cand.P) - V
    if extra:
        problems.append(f"unknown vertices {sorted(extra)}")
    deg = {v: 0 for v in V}
    for u, v in sorted(cand.edges):
        if u not in V or v not in V or not g.has_edge(u, v):
            problems.append(f"edge {u}-{v} is not an edge of the host graph")
            continue
        if not ((u in cand.D and v in cand.P) or (u in cand.P and v in cand.D)):
            problems.append(f"edge {g.label(u)}-{g.label(v)} does not join D to P")
        deg[u] += 1
        deg[v] += 1
    for v in sorted(cand.D & V):
        want = effective_capacity(g, cand.kappa, v)
        if deg[v] != want:
            problems.append(f"driver {g.label(v)} has H-degree {deg[v]}, needs {want}")
    for v in sorted(cand.P & V):
        if deg[v] < 1:
            problems.append(f"passenger {g.label(v)} is not covered by any driver")
    return not problems, problems


def _find_component(g: Graph, kappa: Mapping[int, int]) -> tuple[set[int], set[int], set[Edge]]:
    # Unrolled induction: peel off a Case-1 star per frame, then rebuild H
    # from the innermost subgraph outwards.
    frames = []
    cur = g
    while cur.n > 0:
        low = next((v for v in cur.vertices if cur.degree(v) <= kappa[v]), None)
        if low is None:
            # Case 2: trim the lowest id vertex down to its capacity,
            # dropping its highest id neighbours first.
            low = cur.vertices[0]
            excess = cur.sorted_neighbours(low)[kappa[low]:]
            cur = cur.remove_edges((low, u) for u in excess)
        star = cur.sorted_neighbours(low)
        rest = cur.remove_vertices([low, *star])
        frames.append((cur, low, star, rest))
        cur = rest

    D: set[int] = set()
    P: set[int] = set()
    H: set[Edge] = set()
    hdeg: dict[int, int] = {}
    for level, i, star, rest in reversed(frames):
        star_set = set(star)
        for j in sorted(D):
            need = min(level.degree(j), kappa[j]) - hdeg[j]
            if need <= 0:
                continue
            chosen = sorted(level.neighbours(j) & star_set)[:need]
            H.update(_edge(j, p) for p in chosen)
            hdeg[j] += len(chosen)
        D.add(i)
        P.update(star)
        H.update(_edge(i, p) for p in star)
        hdeg[i] = len(star)
    return D, P, H


def find_dp_subgraph(g: Graph, kappa: Mapping[int, int]) -> DPSubgraph:
    """Construct a kappa-DP-subgraph of ``g`` in polynomial time.

    Follows the inductive existence argument: a vertex whose degree is within
    its capacity becomes a driver for its whole neighbourhood, the rest is
    solved recursively and drivers left short of their capacity are topped
    up with edges into the new passengers. If no such vertex exists, the
    lowest id vertex sheds edges until it qualifies. Disconnected graphs are
    handled one component at a time.
    """
    if g.n == 0:
        raise GraphError("empty graph")
    D: set[int] = set()
    P: set[int] = set()
    H: set[Edge] = set()
    for comp in g.components():
        d, p, h = _find_component(g.induced(comp), kappa)
        D |= d
        P |= p
        H |= h
    return DPSubgraph(g, dict(kappa), frozenset(D), frozenset(P), frozenset(H))


def _check_complete_args(n: int, k: int) -> None:
    if n < 2 or not 1 <= k <= n - 1:
        raise GraphError(f"need 1 <= k <= n-1, got n={n}, k={k}")


def construct_complete_min(n: int, k: int, labels: Iterable[str] | None = None) -> DPSubgraph:
    """Smallest driver set on K_n with uniform capacity k: ceil(n/(1+k)) drivers.

    Driver d covers a contiguous block of k passengers; the last block is
    pulled back so it ends on the last passenger, which keeps every block
    inside the passenger list while still covering all of it.
    """
    _check_complete_args(n, k)
    g = complete_graph(n, list(labels) if labels is not None else None)
    size = math.ceil(n / (1 + k))
    drivers = list(range(size))
    rest = list(range(size, n))
    edges = set()
    for d in drivers:
        start = min(d * k, len(rest) - k)
        edges.update(_edge(d, p) for p in rest[start:start + k])
    return DPSubgraph(g, {v: k for v in range(n)}, frozenset(drivers), frozenset(rest), frozenset(edges))


def construct_complete_max(n: int, k: int, labels: Iterable[str] | None = None) -> DPSubgraph:
    """Largest driver set on K_n with uniform capacity k: n-k drivers share k passengers."""
    _check_complete_args(n, k)
    g = complete_graph(n, list(labels) if labels is not None else None)
    drivers = range(n - k)
    rest = range(n - k, n)
    edges = frozenset(_edge(d, p) for d in drivers for p in rest)
    return DPSubgraph(g, {v: k for v in range(n)}, frozenset(drivers), frozenset(rest), edges)
