"""Utilities, strategy profiles, Nash checks and profile classification."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .equilibrium import DPSubgraph, validate_dp_subgraph
from .graph import Graph, GraphError, _edge, effective_capacity


class SpecError(ValueError):
    pass


@dataclass(frozen=True)
class UtilitySpec:
    """Common payoff f(own + inflow) - c * own over actions {0..x_max}.

    ``f`` is tabulated on 0..len(f)-1; evaluating past the table raises.
    """

    x_max: int
    f: tuple[Fraction, ...]
    c: Fraction
    q_star: int

    @property
    def actions(self) -> range:
        return range(self.x_max + 1)

    def benefit(self, total: int) -> Fraction:
        if not 0 <= total < len(self.f):
            raise SpecError(f"f is tabulated on 0..{len(self.f) - 1}, asked for f({total})")
        return self.f[total]

    def surplus(self, x: int) -> Fraction:
        return self.benefit(x) - self.c * x


def _satiation_point(f: Sequence[Fraction], c: Fraction, x_max: int) -> int:
    vals = [f[x] - c * x for x in range(x_max + 1)]
    best = max(vals)
    for q in range(x_max + 1):
        if vals[q] == best and _tail_ok(f, c, q):
            return q
    raise SpecError("no action maximises f(x) - c x with a non-increasing tail")


def _tail_ok(f: Sequence[Fraction], c: Fraction, q: int) -> bool:
    vals = [f[x] - c * x for x in range(q, len(f))]
    return all(a >= b for a, b in zip(vals, vals[1:]))


def make_spec(f: Sequence, c, x_max: int, q_star: int | None = None) -> UtilitySpec:
    """Build a tabulated spec; ``q_star`` defaults to the smallest valid maximiser."""
    ff = tuple(Fraction(v) for v in f)
    cc = Fraction(c)
    if x_max < 0 or len(ff) < x_max + 1:
        raise SpecError("f must be tabulated at least on 0..x_max")
    if q_star is None:
        if cc <= 0:
            raise SpecError("cost c must be positive")
        q_star = _satiation_point(ff, cc, x_max)
    return UtilitySpec(x_max, ff, cc, q_star)


def make_netflix_spec(c, n: int = 1) -> UtilitySpec:
    """Binary purchase game: f(0)=0, f(x)=1 for x>=1, 0 < c < 1.

    The table covers totals up to ``n`` (own action plus inflow on an
    ``n``-player graph).
    """
    cc = Fraction(c)
    if not 0 < cc < 1:
        raise SpecError(f"Netflix cost must lie strictly between 0 and 1, got {cc}")
    f = (Fraction(0),) + (Fraction(1),) * max(n, 1)
    return UtilitySpec(1, f, cc, 1)


def make_capped_linear_spec(q_star: int, n: int, x_max: int | None = None) -> UtilitySpec:
    """f(x) = 2 min(x, q*), c = 1: surplus rises by 1 up to q*, then falls by 1."""
    x_max = q_star if x_max is None else x_max
    f = [2 * min(x, q_star) for x in range(n * x_max + 1)]
    return make_spec(f, 1, x_max, q_star)


def validate_spec(spec: UtilitySpec) -> tuple[bool, list[str]]:
    problems = []
    if spec.c <= 0:
        problems.append(f"cost c = {spec.c} is not positive")
    if len(spec.f) < spec.x_max + 1:
        problems.append("f is not tabulated over the whole action set")
        return False, problems
    if not 0 <= spec.q_star <= spec.x_max:
        problems.append(f"q* = {spec.q_star} is not an action")
        return False, problems
    vals = [spec.surplus(x) for x in spec.actions]
    if vals[spec.q_star] != max(vals):
        best = vals.index(max(vals))
        problems.append(f"q* = {spec.q_star} does not maximise f(x) - c x (x = {best} does better)")
    if not _tail_ok(spec.f, spec.c, spec.q_star):
        problems.append(f"f(x) - c x increases somewhere above q* = {spec.q_star}")
    return not problems, problems


def spec_from_dict(data: Mapping, n: int) -> UtilitySpec:
    """Load ``{"c": ..., "x_max": ..., "f": [...], "q_star"?, "saturate"?}``.

    With ``saturate`` the table is extended with its last value so that it
    covers the largest possible total ``n * x_max``.
    """
    f = list(data["f"])
    x_max = int(data["x_max"])
    need = n * x_max + 1
    if data.get("saturate") and len(f) < need:
        f += [f[-1]] * (need - len(f))
    if len(f) < need:
        raise SpecError(f"f table has {len(f)} entries, needs {need} (0..n*x_max)")
    spec = make_spec(f, Fraction(str(data["c"])), x_max, data.get("q_star"))
    ok, problems = validate_spec(spec)
    if not ok:
        raise SpecError("; ".join(problems))
    return spec


# -- profiles ------------------------------------------------------------


@dataclass(frozen=True)
class StrategyProfile:
    """Action vector and nomination sets, both keyed by vertex id."""

    graph: Graph
    actions: Mapping[int, int]
    nominations: Mapping[int, frozenset[int]]
    _nominators: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        nominators: dict[int, list[int]] = {v: [] for v in self.graph.vertices}
        for j in self.graph.vertices:
            for i in self.nominations[j]:
                if not self.graph.has_edge(i, j):
                    raise GraphError(
                        f"{self.graph.label(j)} nominates non-neighbour {self.graph.label(i)}"
                    )
                nominators[i].append(j)
        object.__setattr__(self, "_nominators", nominators)

    def nominators(self, i: int) -> list[int]:
        return self._nominators[i]

    def with_actions(self, actions: Mapping[int, int]) -> StrategyProfile:
        return StrategyProfile(self.graph, dict(actions), self.nominations)

    def action_vector(self) -> tuple[int, ...]:
        return tuple(self.actions[v] for v in self.graph.vertices)


def check_nominations(profile: StrategyProfile, kappa: Mapping[int, int]) -> None:
    """Raise if some |m_i| differs from min(kappa(i), degree(i))."""
    g = profile.graph
    for v in g.vertices:
        want = effective_capacity(g, kappa, v)
        if len(profile.nominations[v]) != want:
            raise GraphError(
                f"vertex {g.label(v)} nominates {len(profile.nominations[v])} neighbours, must nominate {want}"
            )


def inflow(i: int, profile: StrategyProfile) -> int:
    """Total action of the neighbours that nominate ``i``."""
    return sum(profile.actions[j] for j in profile.nominators(i))


def utility(i: int, profile: StrategyProfile, spec: UtilitySpec) -> Fraction:
    x = profile.actions[i]
    return spec.benefit(x + inflow(i, profile)) - spec.c * x


def is_nash(profile: StrategyProfile, spec: UtilitySpec) -> tuple[bool, int | None]:
    """Return ``(True, None)`` or ``(False, v)`` for the first vertex with a profitable deviation.

    Only action deviations are tried: a player's own nominations never enter
    their own payoff, so nomination deviations cannot be profitable.
    """
    for i in profile.graph.vertices:
        received = inflow(i, profile)
        x = profile.actions[i]
        current = spec.benefit(x + received) - spec.c * x
        for a in spec.actions:
            if spec.benefit(a + received) - spec.c * a > current:
                return False, i
    return True, None


@dataclass(frozen=True)
class ProfileClass:
    specialised: bool
    balanced: bool
    nicely_balanced: bool
    nash: bool | None = None
    witness: DPSubgraph | None = None
    problems: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        out = {
            "specialised": self.specialised,
            "balanced": self.balanced,
            "nicely_balanced": self.nicely_balanced,
            "problems": list(self.problems),
        }
        if self.nash is not None:
            out["nash"] = self.nash
        if self.witness is not None:
            out["witness"] = self.witness.to_dict()
        return out


def classify(profile: StrategyProfile, kappa: Mapping[int, int], q_star: int) -> ProfileClass:
    if q_star < 1:
        raise SpecError("classification needs q* >= 1")
    g = profile.graph
    x = profile.actions
    odd = [v for v in g.vertices if x[v] not in (0, q_star)]
    if odd:
        return ProfileClass(False, False, False, problems=(f"{g.names(odd)} play neither 0 nor q*",))
    D = frozenset(v for v in g.vertices if x[v] == q_star)
    P = frozenset(g.vertices) - D
    problems = []
    for d in sorted(D):
        stray = profile.nominations[d] & D
        if stray:
            problems.append(f"driver {g.label(d)} nominates drivers {g.names(stray)}")
    edges = frozenset(_edge(d, p) for d in D for p in profile.nominations[d] & P)
    h = DPSubgraph(g, kappa, D, P, edges)
    ok, why = validate_dp_subgraph(h)
    problems += why
    if problems:
        return ProfileClass(True, False, False, problems=tuple(problems))
    unreturned = [
        p for p in sorted(P)
        if not any(d in D and p in profile.nominations[d] for d in profile.nominations[p])
    ]
    nice_problems = tuple(f"passenger {g.label(p)} nominates none of its drivers" for p in unreturned)
    return ProfileClass(True, True, not unreturned, witness=h, problems=nice_problems)


def build_profile(h: DPSubgraph, spec: UtilitySpec, nicely: bool = True) -> StrategyProfile:
    """Specialised profile supported by ``h``.

    Drivers play q* and nominate their H-neighbours. Passengers play 0 and
    nominate min(kappa, degree) neighbours; with ``nicely`` the lowest id
    H-neighbour goes in first, then lowest id neighbours fill the rest.
    """
    g = h.host
    actions = {}
    noms = {}
    for v in g.vertices:
        size = effective_capacity(g, h.kappa, v)
        if v in h.D:
            actions[v] = spec.q_star
            noms[v] = frozenset(h.h_neighbours(v))
            continue
        actions[v] = 0
        order = g.sorted_neighbours(v)
        if nicely:
            hn = h.h_neighbours(v)
            if hn:
                order.remove(hn[0])
                order.insert(0, hn[0])
        noms[v] = frozenset(order[:size])
    return StrategyProfile(g, actions, noms)


def profile_to_dict(profile: StrategyProfile) -> dict:
    g = profile.graph
    return {
        g.label(v): {"action": profile.actions[v], "nominations": g.names(profile.nominations[v])}
        for v in g.vertices
    }


def profile_from_dict(data: Mapping, g: Graph, kappa: Mapping[int, int]) -> StrategyProfile:
    """Inverse of :func:`profile_to_dict`; every vertex must be present."""
    actions = {}
    noms = {}
    for v in g.vertices:
        lab = g.label(v)
        if lab not in data:
            raise GraphError(f"profile has no entry for vertex {lab!r}")
        entry = data[lab]
        actions[v] = int(entry["action"])
        if actions[v] < 0:
            raise GraphError(f"vertex {lab!r} has a negative action")
        noms[v] = g.ids(entry.get("nominations", []))
        if len(noms[v]) != len(entry.get("nominations", [])):
            raise GraphError(f"vertex {lab!r} lists a nominee twice")
    unknown = set(data) - set(g.labels.values())
    if unknown:
        raise GraphError(f"profile names unknown vertices {sorted(unknown)}")
    profile = StrategyProfile(g, actions, noms)
    check_nominations(profile, kappa)
    return profile


def load_profile(text: str, g: Graph, kappa: Mapping[int, int]) -> StrategyProfile:
    return profile_from_dict(json.loads(text), g, kappa)
