"""Synchronous best-action reply dynamics with nominations held fixed.

Action vectors are tuples indexed by vertex id (ids 0..n-1); nominations are
any indexable of sets with the same indexing.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .game import StrategyProfile, UtilitySpec

Actions = tuple[int, ...]

DEFAULT_HORIZON = 10_000


def _nominators(m: Sequence[Iterable[int]] | Mapping[int, Iterable[int]], n: int) -> list[list[int]]:
    out: list[list[int]] = [[] for _ in range(n)]
    for j in range(n):
        for i in m[j]:
            out[i].append(j)
    return out


def best_action_response(i: int, x: Sequence[int], m, q_star: int) -> int:
    received = sum(x[j] for j in range(len(x)) if i in m[j])
    return max(q_star - received, 0)


def _step(x: Sequence[int], nominators: list[list[int]], q_star: int) -> Actions:
    return tuple(max(q_star - sum(x[j] for j in nom), 0) for nom in nominators)


def best_reply_step(x: Sequence[int], m, q_star: int) -> Actions:
    return _step(x, _nominators(m, len(x)), q_star)


@dataclass
class Trace:
    """States x(0), x(1), ... up to and including the first repeated state.

    ``status`` is ``"settled"`` (period 1), ``"cycle"`` (period >= 2) or
    ``"exhausted"`` when the horizon ran out first. ``entry`` is the first
    time the recurring state appears.
    """

    profiles: list[Actions]
    nominations: object
    status: str
    entry: int | None = None
    period: int | None = None
    horizon: int = DEFAULT_HORIZON
    q_star: int = field(default=0, repr=False)

    @property
    def point(self) -> Actions | None:
        return self.profiles[self.entry] if self.status == "settled" else None

    def summary(self) -> dict:
        return {"status": self.status, "entry": self.entry, "period": self.period, "steps": len(self.profiles) - 1}


def evolve(x0: Sequence[int], m, q_star: int, max_t: int = DEFAULT_HORIZON) -> Trace:
    if max_t < 1:
        raise ValueError("max_t must be at least 1")
    x = tuple(x0)
    nominators = _nominators(m, len(x))
    seen = {x: 0}
    states = [x]
    for t in range(1, max_t + 1):
        x = _step(x, nominators, q_star)
        states.append(x)
        if x in seen:
            entry = seen[x]
            period = t - entry
            status = "settled" if period == 1 else "cycle"
            return Trace(states, m, status, entry, period, max_t, q_star)
        seen[x] = t
    return Trace(states, m, "exhausted", None, None, max_t, q_star)


def settles_in(trace: Trace, target: Sequence[int]) -> int | None:
    if trace.status == "settled" and trace.point == tuple(target):
        return trace.entry
    return None


def is_fixed_point(x: Sequence[int], m, q_star: int) -> bool:
    return best_reply_step(x, m, q_star) == tuple(x)


def fixed_points(m, q_star: int, n: int) -> list[Actions]:
    """All best-reply fixed points in {0..q*}^n, by exhaustive scan.

    Fixed points never exceed q*, so the scan is complete. Only sensible for
    small ``n``.
    """
    nominators = _nominators(m, n)
    return [x for x in itertools.product(range(q_star + 1), repeat=n) if _step(x, nominators, q_star) == x]


@dataclass
class Perturbation:
    vertex: int
    actions: Actions
    trace: Trace


def is_action_stable(
    profile: StrategyProfile, spec: UtilitySpec, delta: int = 1, max_t: int = DEFAULT_HORIZON
) -> tuple[bool, Perturbation | None]:
    """Decide action stability by trying every single-vertex perturbation up to ``delta``.

    A profile that is not a best-reply fixed point is reported unstable with
    the unperturbed profile as the counterexample. Perturbations leaving the
    action set are skipped. Any failing size-1 perturbation refutes every
    delta, and passing at delta=1 witnesses stability, so 1 is enough to
    decide; larger values only explore further.
    """
    if delta < 1:
        raise ValueError("delta must be at least 1")
    g = profile.graph
    m = [profile.nominations[v] for v in g.vertices]
    x = profile.action_vector()
    q = spec.q_star
    first = best_reply_step(x, m, q)
    if first != x:
        bad = next(v for v in g.vertices if first[v] != x[v])
        return False, Perturbation(bad, x, evolve(x, m, q, max_t))
    for v in g.vertices:
        for shift in itertools.chain.from_iterable((-s, s) for s in range(1, delta + 1)):
            a = x[v] + shift
            if not 0 <= a <= spec.x_max:
                continue
            start = x[:v] + (a,) + x[v + 1:]
            trace = evolve(start, m, q, max_t)
            if settles_in(trace, x) is None:
                return False, Perturbation(v, start, trace)
    return True, None


def trace_table(trace: Trace, labels: Sequence[str]) -> str:
    """Tab separated table, one row per period, one column per vertex."""
    rows = ["\t".join(["t", *labels])]
    for t, x in enumerate(trace.profiles):
        rows.append("\t".join([str(t), *map(str, x)]))
    return "\n".join(rows) + "\n"
