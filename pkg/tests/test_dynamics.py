import random

import pytest

from netflixgames.dynamics import (
    best_action_response,
    best_reply_step,
    evolve,
    fixed_points,
    is_action_stable,
    is_fixed_point,
    settles_in,
    trace_table,
)
from netflixgames.equilibrium import DPSubgraph, find_dp_subgraph
from netflixgames.game import StrategyProfile, build_profile, is_nash, make_capped_linear_spec
from netflixgames.graph import complete_graph, parse_graph, uniform_capacity

from instances import (
    SIX_AGENT_ROWS,
    cycle,
    random_connected_graph,
    random_fixed_point_instances,
    random_kappa,
    random_nominations,
    six_agent_profile,
)


def _six_agent():
    p, kappa = six_agent_profile()
    g = p.graph
    m = [p.nominations[v] for v in g.vertices]
    return p, m


def test_best_action_response_examples():
    p, m = _six_agent()
    i = p.graph.vertex_by_label("i")
    assert best_action_response(i, SIX_AGENT_ROWS[0], m, 4) == 3
    k2 = [{1}, {0}]
    assert best_action_response(0, (0, 5), k2, 4) == 0
    assert best_action_response(0, (2,), [set()], 3) == 3


def test_best_reply_step_examples():
    k2 = [{1}, {0}]
    assert best_reply_step((0, 0), k2, 1) == (1, 1)
    assert best_reply_step((1, 1), k2, 1) == (0, 0)
    _, m = _six_agent()
    assert best_reply_step(SIX_AGENT_ROWS[0], m, 4) == SIX_AGENT_ROWS[1]


def test_evolve_k2_cycles():
    tr = evolve((0, 0), [{1}, {0}], 1)
    assert tr.status == "cycle" and tr.period == 2 and tr.entry == 0
    assert tr.profiles == [(0, 0), (1, 1), (0, 0)]
    assert settles_in(tr, (0, 0)) is None


def test_evolve_nicely_balanced_is_settled():
    rng = random.Random(3)
    for _ in range(50):
        g = random_connected_graph(rng, rng.randint(1, 8))
        kappa = random_kappa(rng, g)
        p = build_profile(find_dp_subgraph(g, kappa), make_capped_linear_spec(2, g.n))
        m = [p.nominations[v] for v in g.vertices]
        tr = evolve(p.action_vector(), m, 2)
        assert tr.status == "settled" and tr.entry == 0 and tr.period == 1
        assert settles_in(tr, p.action_vector()) == 0


def test_evolve_six_agent():
    _, m = _six_agent()
    tr = evolve(SIX_AGENT_ROWS[0], m, 4)
    assert tr.profiles == SIX_AGENT_ROWS
    assert tr.status == "cycle" and tr.period == 2 and tr.entry == 12
    assert set(tr.profiles[12:]) == {(0,) * 6, (4,) * 6}


def test_settles_in_wrong_target():
    tr = evolve((0, 1), [{1}, {0}], 1)
    assert tr.status == "settled"
    assert settles_in(tr, (0, 1)) == 0
    assert settles_in(tr, (1, 0)) is None


def test_settles_in_entry_time():
    # a path whose end flips once before settling
    tr = evolve((1, 1), [{1}, set()], 1)
    assert tr.profiles[:2] == [(1, 1), (1, 0)]
    assert settles_in(tr, (1, 0)) == 1


def test_evolve_horizon():
    tr = evolve((0, 0, 0), [{1}, {2}, {0}], 5, max_t=1)
    assert tr.status == "exhausted"
    with pytest.raises(ValueError):
        evolve((0,), [set()], 1, max_t=0)


def test_trace_invariants_random():
    rng = random.Random(4)
    for _ in range(200):
        g = random_connected_graph(rng, rng.randint(1, 7))
        kappa = random_kappa(rng, g)
        m = random_nominations(rng, g, kappa)
        q = rng.randint(1, 4)
        tr = evolve(tuple(rng.randint(0, q + 1) for _ in g.vertices), m, q)
        for a, b in zip(tr.profiles, tr.profiles[1:]):
            assert best_reply_step(a, m, q) == b
        assert tr.profiles[tr.entry + tr.period] == tr.profiles[tr.entry]
        if tr.status == "cycle":
            assert tr.period >= 2
        else:
            assert is_fixed_point(tr.point, m, q)
        for x in tr.profiles[1:]:
            assert all(0 <= a <= q for a in x)


def test_trace_table_layout():
    tr = evolve((0, 0), [{1}, {0}], 1)
    assert trace_table(tr, ["a", "b"]) == "t\ta\tb\n0\t0\t0\n1\t1\t1\n2\t0\t0\n"


def test_fixed_points_are_nash():
    rng = random.Random(5)
    for _ in range(80):
        g = random_connected_graph(rng, rng.randint(2, 6))
        kappa = random_kappa(rng, g)
        m = random_nominations(rng, g, kappa)
        q = rng.randint(1, 3)
        spec = make_capped_linear_spec(q, g.n)
        fps = set(fixed_points(m, q, g.n))
        noms = dict(enumerate(m))
        for x in __import__("itertools").product(range(q + 1), repeat=g.n):
            nash = is_nash(StrategyProfile(g, dict(enumerate(x)), noms), spec)[0]
            assert nash == (x in fps)


def _below(rng, x):
    return tuple(rng.randint(0, a) for a in x)


def test_sandwich_property():
    rng = random.Random(6)
    for g, kappa, m, q, xs in random_fixed_point_instances(rng, 150):
        x0 = _below(rng, xs)
        tr = evolve(x0, m, q, max_t=50)
        states = list(tr.profiles)
        while len(states) < 51:
            states.append(best_reply_step(states[-1], m, q))
        for t in range(50):
            lo, hi = (states[t], states[t + 1]) if t % 2 == 0 else (states[t + 1], states[t])
            assert all(a <= s <= b for a, s, b in zip(lo, xs, hi))


def test_odd_even_pattern():
    rng = random.Random(7)
    for g, kappa, m, q, xs in random_fixed_point_instances(rng, 150):
        x0 = _below(rng, xs)
        if x0 == xs:
            continue
        states = [x0]
        for _ in range(40):
            states.append(best_reply_step(states[-1], m, q))
        for t, x in enumerate(states):
            for i in range(g.n):
                if t % 2 == 1 and xs[i] > 0:
                    assert x[i] != 0
                if t % 2 == 0 and xs[i] < q:
                    assert x[i] != q


def test_even_step_claim_needs_fixed_point_below_qstar():
    # C4, drivers 0 and 2 doubly covering both passengers. Lowering driver 0
    # to q*-1 is repaired by t=1 and driver 0 is back at q* at t=2, so "even
    # t never hits q* when the starting action is below q*" fails here; the
    # pattern holds when conditioned on the fixed point being below q*.
    m = [{1, 3}, {0, 2}, {1, 3}, {0, 2}]
    xs = (2, 0, 2, 0)
    tr = evolve((1, 0, 2, 0), m, 2)
    assert tr.profiles[2][0] == 2
    assert settles_in(tr, xs) == 1


def test_nominee_reacts_to_nominator():
    rng = random.Random(8)
    hits = 0
    for g, kappa, m, q, xs in random_fixed_point_instances(rng, 150):
        states = [_below(rng, xs)]
        for _ in range(30):
            states.append(best_reply_step(states[-1], m, q))
        for t in range(1, 30):
            for i in range(g.n):
                for l in m[i]:
                    if states[t][l] > 0 and states[t][i] > states[t - 1][i]:
                        hits += 1
                        assert states[t + 1][l] < states[t][l]
                    if states[t + 1][l] > 0 and states[t][i] < states[t - 1][i]:
                        hits += 1
                        assert states[t + 1][l] > states[t][l]
    assert hits > 0


def _dp(g, kappa, D, edges):
    return DPSubgraph(g, kappa, frozenset(D), frozenset(g.vertices) - frozenset(D), frozenset(edges))


@pytest.mark.parametrize("q", [1, 2, 3])
def test_path_single_cover_unstable(q):
    g = parse_graph("a b\nb c")
    kappa = {0: 1, 1: 2, 2: 1}
    spec = make_capped_linear_spec(q, 3, q + 1)
    p = build_profile(_dp(g, kappa, {1}, {(0, 1), (1, 2)}), spec)
    stable, cex = is_action_stable(p, spec)
    assert not stable
    assert cex.trace.status == "cycle"


def test_c4_double_cover_stable():
    g = cycle(4)
    kappa = uniform_capacity(g, 2)
    for x_max in (2, 3):
        spec = make_capped_linear_spec(2, 4, x_max)
        p = build_profile(_dp(g, kappa, {0, 2}, g.edges), spec)
        assert is_action_stable(p, spec) == (True, None)
        # a passenger jumping to 2 silences both drivers at once
        stable, cex = is_action_stable(p, spec, delta=2)
        assert not stable and cex.vertex in (1, 3) and cex.actions[cex.vertex] == 2


def test_six_agent_equilibrium_unstable():
    p, _ = six_agent_profile()
    spec = make_capped_linear_spec(4, 6)
    assert is_nash(p, spec)[0]
    stable, cex = is_action_stable(p, spec)
    assert not stable and cex.trace.status != "settled"


def test_non_fixed_point_reported():
    g = complete_graph(2)
    spec = make_capped_linear_spec(1, 2)
    p = StrategyProfile(g, {0: 0, 1: 0}, {0: frozenset({1}), 1: frozenset({0})})
    stable, cex = is_action_stable(p, spec)
    assert not stable and cex.actions == (0, 0)
