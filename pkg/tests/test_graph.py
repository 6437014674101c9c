import itertools
import random
from collections import deque

import pytest

from netflixgames.graph import (
    Graph,
    GraphError,
    complete_graph,
    is_connected,
    parse_capacity,
    parse_graph,
    serialize_graph,
)

from instances import STAR5, path, random_graph


def test_parse_star():
    g = parse_graph(STAR5)
    assert g.n == 5
    l = g.vertex_by_label("l")
    assert g.degree(l) == 4
    assert g.names(g.neighbours(l)) == ["h", "i", "j", "k"]


def test_parse_isolated_node():
    g = parse_graph("node a")
    assert g.n == 1 and g.m == 0


def test_parse_comments_and_crlf():
    g = parse_graph("# a star\r\nl h  # centre first\r\n\r\nl i\r\n")
    assert g.n == 3 and g.m == 2


@pytest.mark.parametrize(
    "text, msg",
    [
        ("a b\na b", "duplicate"),
        ("a b\nb a", "duplicate"),
        ("a b\nc c", "line 2"),
        ("", "empty"),
        ("# nothing\n", "empty"),
        ("a b c", "line 1"),
    ],
)
def test_parse_rejects(text, msg):
    with pytest.raises(GraphError, match=msg):
        parse_graph(text)


def test_labels_first_appearance_order():
    g = parse_graph("z y\nx z\nnode w")
    assert [g.label(v) for v in g.vertices] == ["z", "y", "x", "w"]


def test_is_connected_examples():
    assert is_connected(parse_graph(STAR5))
    assert not is_connected(parse_graph("a b\nc d"))
    assert is_connected(parse_graph("node a"))


def test_remove_vertices():
    g = parse_graph(STAR5)
    h = g.remove_vertices([g.vertex_by_label("l")])
    assert h.n == 4 and h.m == 0
    assert set(h.vertices) == set(g.vertices) - {g.vertex_by_label("l")}
    assert g.remove_vertices([]) == g

    p = parse_graph("a b\nb c")
    q = p.remove_vertices([p.vertex_by_label("b")])
    assert q.n == 2 and q.m == 0
    assert [q.label(v) for v in q.vertices] == ["a", "c"]


def test_remove_vertices_unknown():
    with pytest.raises(GraphError):
        path(3).remove_vertices([7])


def test_remove_edges():
    tri = complete_graph(3)
    assert tri.remove_edges([(0, 2)]).edges == [(0, 1), (1, 2)]
    assert tri.remove_edges([]) == tri
    k4 = complete_graph(4)
    c4 = k4.remove_edges([(0, 2), (1, 3)])
    assert all(c4.degree(v) == 2 for v in c4.vertices)
    assert is_connected(c4) and c4.m == 4
    with pytest.raises(GraphError):
        tri.remove_edges([(0, 5)])


def test_graph_invariants_random():
    rng = random.Random(1)
    for _ in range(100):
        g = random_graph(rng, rng.randint(1, 8))
        for u, v in itertools.combinations(g.vertices, 2):
            assert g.has_edge(u, v) == (v in g.neighbours(u)) == (u in g.neighbours(v))
        for v in g.vertices:
            assert g.degree(v) == len(g.neighbours(v))
            assert v not in g.neighbours(v)
        s = rng.sample(g.vertices, rng.randint(0, g.n - 1))
        h = g.remove_vertices(s)
        for v in h.vertices:
            assert h.degree(v) <= g.degree(v)


def _bfs_connected(g: Graph) -> bool:
    start = g.vertices[0]
    seen = {start}
    queue = deque([start])
    while queue:
        for w in g.neighbours(queue.popleft()):
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return len(seen) == g.n


def test_is_connected_matches_bfs():
    rng = random.Random(2)
    for _ in range(300):
        g = random_graph(rng, rng.randint(1, 7))
        assert is_connected(g) == _bfs_connected(g)


def test_serialize_round_trip():
    rng = random.Random(3)
    for _ in range(50):
        n = rng.randint(1, 8)
        g = random_graph(rng, n)
        g = Graph({v: g.neighbours(v) for v in g.vertices}, {v: f"v{v}" for v in g.vertices})
        back = parse_graph(serialize_graph(g))
        assert set(back.labels.values()) == set(g.labels.values())
        named = lambda h: {frozenset((h.label(u), h.label(v))) for u, v in h.edges}
        assert named(back) == named(g)


def test_parse_capacity():
    g = parse_graph(STAR5)
    kappa = parse_capacity("l 2\ndefault 1\n", g)
    assert kappa[g.vertex_by_label("l")] == 2
    assert kappa[g.vertex_by_label("h")] == 1
    with pytest.raises(GraphError, match="no default"):
        parse_capacity("l 2\n", g)
    with pytest.raises(GraphError, match="unknown"):
        parse_capacity("zz 2\ndefault 1", g)
    with pytest.raises(GraphError):
        parse_capacity("l -1\ndefault 1", g)
