"""Exhaustive ground truth for driver sets on small graphs."""

from __future__ import annotations

import itertools
import json
import logging
import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping

from .equilibrium import DPSubgraph
from .graph import Graph, GraphError, _edge, effective_capacity

log = logging.getLogger(__name__)

DEFAULT_CAP = 16


class CapExceeded(GraphError):
    pass


class _Flow:
    """Edmonds-Karp on an adjacency-list residual network. Graphs here are tiny."""

    def __init__(self, n: int):
        self.n = n
        self.to: list[int] = []
        self.cap: list[int] = []
        self.out: list[list[int]] = [[] for _ in range(n)]

    def add(self, u: int, v: int, c: int) -> int:
        self.out[u].append(len(self.to))
        self.to.append(v)
        self.cap.append(c)
        self.out[v].append(len(self.to))
        self.to.append(u)
        self.cap.append(0)
        return len(self.to) - 2

    def maxflow(self, s: int, t: int) -> int:
        total = 0
        while True:
            via = [-1] * self.n
            via[s] = -2
            queue = deque([s])
            while queue and via[t] == -1:
                u = queue.popleft()
                for e in self.out[u]:
                    v = self.to[e]
                    if self.cap[e] > 0 and via[v] == -1:
                        via[v] = e
                        queue.append(v)
            if via[t] == -1:
                return total
            push = math.inf
            v = t
            while v != s:
                e = via[v]
                push = min(push, self.cap[e])
                v = self.to[e ^ 1]
            v = t
            while v != s:
                e = via[v]
                self.cap[e] -= push
                self.cap[e ^ 1] += push
                v = self.to[e ^ 1]
            total += push


def _demands(g: Graph, kappa: Mapping[int, int], d: frozenset[int]) -> dict[int, int]:
    return {v: effective_capacity(g, kappa, v) for v in d}


def is_d_set(g: Graph, kappa: Mapping[int, int], d: Iterable[int]) -> DPSubgraph | None:
    """Return a DP-subgraph with driver side ``d``, or None if none exists.

    Drivers must send exactly min(kappa, degree) unit arcs along graph edges
    into P, and every passenger must receive at least one. Solved as a flow
    with lower bounds: source->driver arcs are forced to their demand,
    passenger->sink arcs carry at least one unit, reduced to plain max flow
    through a super source and super sink.
    """
    d = frozenset(d)
    unknown = d - set(g.vertices)
    if unknown:
        raise GraphError(f"unknown vertices {sorted(unknown)}")
    P = frozenset(g.vertices) - d
    need = _demands(g, kappa, d)
    # cheap necessary conditions
    for v in d:
        if need[v] > len(g.neighbours(v) & P):
            return None
    for p in P:
        if not g.neighbours(p) & d:
            return None
    if sum(need.values()) < len(P):
        return None

    drivers = sorted(d)
    passengers = sorted(P)
    idx = {v: k for k, v in enumerate(drivers + passengers)}
    s, t = len(idx), len(idx) + 1
    ss, tt = s + 2, s + 3
    net = _Flow(s + 4)
    excess = [0] * (s + 4)
    arcs = {}
    for v in drivers:
        # lower bound = upper bound = demand: only the lower bound survives as excess
        excess[s] -= need[v]
        excess[idx[v]] += need[v]
        for p in sorted(g.neighbours(v) & P):
            arcs[_edge(v, p)] = net.add(idx[v], idx[p], 1)
    for p in passengers:
        upper = len(g.neighbours(p) & d)
        net.add(idx[p], t, upper - 1)
        excess[idx[p]] -= 1
        excess[t] += 1
    net.add(t, s, math.inf)
    required = 0
    for u, e in enumerate(excess):
        if e > 0:
            net.add(ss, u, e)
            required += e
        elif e < 0:
            net.add(u, tt, -e)
    if net.maxflow(ss, tt) != required:
        return None
    edges = frozenset(edge for edge, a in arcs.items() if net.cap[a] == 0)
    return DPSubgraph(g, dict(kappa), d, P, edges)


def is_d_set_backtrack(g: Graph, kappa: Mapping[int, int], d: Iterable[int]) -> DPSubgraph | None:
    """Same question as :func:`is_d_set`, answered by trying every nomination choice."""
    d = frozenset(d)
    P = frozenset(g.vertices) - d
    drivers = sorted(d)
    options = []
    for v in drivers:
        k = effective_capacity(g, kappa, v)
        options.append(list(itertools.combinations(sorted(g.neighbours(v) & P), k)))
    for choice in itertools.product(*options):
        covered = set().union(*choice) if choice else set()
        if covered >= P:
            edges = frozenset(_edge(v, p) for v, ps in zip(drivers, choice) for p in ps)
            return DPSubgraph(g, dict(kappa), d, P, edges)
    return None


@dataclass
class DSetReport:
    graph: Graph
    kappa: Mapping[int, int]
    all_d_sets: list[frozenset[int]]
    delta_min: int
    delta_max: int
    witnesses: dict[int, DPSubgraph]

    def to_dict(self) -> dict:
        g = self.graph
        return {
            "count": len(self.all_d_sets),
            "delta_min": self.delta_min,
            "delta_max": self.delta_max,
            "d_sets": [g.names(s) for s in self.all_d_sets],
            "witnesses": {str(k): w.to_dict() for k, w in sorted(self.witnesses.items())},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _subsets(vertices: tuple[int, ...]):
    for size in range(len(vertices) + 1):
        yield from itertools.combinations(vertices, size)


def enumerate_d_sets(g: Graph, kappa: Mapping[int, int], cap: int = DEFAULT_CAP) -> DSetReport:
    """Scan all vertex subsets (by size, then lexicographically) and keep the D-sets."""
    if g.n > cap:
        raise CapExceeded(
            f"{g.n} vertices exceeds the enumeration cap of {cap}; "
            f"raise the cap to scan all 2^{g.n} subsets"
        )
    if g.n > 12:
        log.warning("enumerating 2^%d subsets", g.n)
    found = []
    witnesses: dict[int, DPSubgraph] = {}
    for sub in _subsets(g.vertices):
        h = is_d_set(g, kappa, sub)
        if h is None:
            continue
        found.append(frozenset(sub))
        witnesses.setdefault(len(sub), h)
    sizes = [len(s) for s in found]
    lo, hi = min(sizes), max(sizes)
    return DSetReport(g, dict(kappa), found, lo, hi, {lo: witnesses[lo], hi: witnesses[hi]})


def delta_min(g: Graph, kappa: Mapping[int, int], cap: int = DEFAULT_CAP) -> int:
    """Smallest D-set size; stops at the first feasible size."""
    if g.n > cap:
        raise CapExceeded(f"{g.n} vertices exceeds the enumeration cap of {cap}")
    for sub in _subsets(g.vertices):
        if is_d_set(g, kappa, sub) is not None:
            return len(sub)
    raise AssertionError("every graph has a D-set")


def verify_delta_monotonicity(
    g: Graph, kappa: Mapping[int, int], kappa2: Mapping[int, int], cap: int = DEFAULT_CAP
) -> tuple[bool, int, int]:
    """Check min D-set size under ``kappa2`` <= max D-set size under ``kappa``."""
    for v in g.vertices:
        if kappa[v] > kappa2[v]:
            raise GraphError(f"capacities not ordered at vertex {g.label(v)}")
    lo = delta_min(g, kappa2, cap)
    hi = enumerate_d_sets(g, kappa, cap).delta_max
    return lo <= hi, lo, hi


def bound_formulas(g: Graph, kappa: Mapping[int, int]) -> tuple[int, int, bool]:
    """``(ceil(n/(1+max kappa)), n - min kappa, applicable)``.

    ``applicable`` is whether some capacity is at most the minimum degree, in
    which case the two numbers bracket the smallest and largest D-set sizes.
    """
    n = g.n
    kmax = max(kappa[v] for v in g.vertices)
    kmin = min(kappa[v] for v in g.vertices)
    applicable = kmin <= g.min_degree()
    return -(-n // (1 + kmax)), n - kmin, applicable


def bound_table(n: int, ks: Iterable[int]) -> list[tuple[int, int, int]]:
    """Closed-form bounds on K_n with uniform capacity k, one row per k."""
    rows = []
    for k in ks:
        if not 1 <= k <= n - 1:
            raise GraphError(f"k={k} outside 1..{n - 1}")
        rows.append((k, -(-n // (1 + k)), n - k))
    return rows
