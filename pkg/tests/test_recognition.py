import networkx as nx
import pytest

from csep.errors import InputError
from csep.graph import Graph, complete_bipartite, complete_graph, cycle_graph, join, line_graph, path_graph
from csep.recognition import (check_stem_witness, chordal_certificate, contains_fixed_induced,
                              find_apple, find_cap, find_hole, find_induced, has_long_hole,
                              is_2connected, is_apple_free, is_basic_cap_free, is_cap_free,
                              is_chordal, is_claw_free, is_hole, parse_pattern_table, pattern,
                              pattern_table, verify_embedding)

from conftest import brute_apple, brute_cap, brute_long_hole, random_graph, to_nx


def test_pattern_table_shapes():
    t = pattern_table()
    # frozen: (vertices, edges) per pattern
    assert {k: (g.n, g.m) for k, g in t.items()} == {
        "triangle": (3, 3), "claw": (4, 3), "C5": (5, 5), "C6": (6, 6),
        "A4": (5, 5), "A5": (6, 6), "D6": (7, 12), "E6": (8, 10),
    }


def test_pattern_table_parser_ignores_comments():
    t = parse_pattern_table("# header\nP3 3 0-1 1-2\n\n")
    assert list(t) == ["P3"] and t["P3"].m == 2


def test_unknown_pattern():
    with pytest.raises(InputError):
        pattern("nope")


def test_apples_in_table_are_apples():
    for name in ("A4", "A5"):
        w = find_apple(pattern(name))
        assert w is not None and check_stem_witness(pattern(name), w)


def test_d6_e6_contain_c6_and_claw_and_are_apple_free():
    for name in ("D6", "E6"):
        g = pattern(name)
        assert contains_fixed_induced(g, "C6") is not None
        assert contains_fixed_induced(g, "claw") is not None
        assert is_apple_free(g)
        assert has_long_hole(g, 7) is None


def test_find_induced_against_networkx(rng):
    from networkx.algorithms.isomorphism import GraphMatcher
    for _ in range(150):
        g = random_graph(rng, rng.randint(3, 9))
        for name in ("claw", "C5", "triangle"):
            p = pattern(name)
            ours = find_induced(g, p, name)
            ref = GraphMatcher(to_nx(g), to_nx(p)).subgraph_is_isomorphic()
            assert (ours is not None) == ref
            if ours is not None:
                assert verify_embedding(g, p, ours.embedding)


def test_holes_and_chordality(rng):
    for _ in range(200):
        g = random_graph(rng, rng.randint(0, 10))
        ok, cert = chordal_certificate(g)
        assert ok == nx.is_chordal(to_nx(g))
        if not ok:
            assert is_hole(g, cert.cycle)
        assert (find_hole(g) is None) == ok


def test_chordal_examples():
    assert is_chordal(complete_graph(5)) and is_chordal(path_graph(6))
    assert not is_chordal(cycle_graph(4))
    ok, peo = chordal_certificate(path_graph(3))
    assert ok and sorted(peo) == [0, 1, 2]


def test_long_hole_examples():
    assert has_long_hole(cycle_graph(7), 7) is not None
    assert has_long_hole(cycle_graph(6), 7) is None
    assert len(has_long_hole(cycle_graph(8), 5)) == 8
    with pytest.raises(InputError):
        has_long_hole(cycle_graph(5), 3)


@pytest.mark.parametrize("k", [4, 5, 6])
def test_long_hole_vs_brute_force(rng, k):
    for _ in range(60):
        g = random_graph(rng, rng.randint(4, 9), rng.uniform(0.2, 0.6))
        w = has_long_hole(g, k)
        assert (w is not None) == brute_long_hole(g, k)
        if w is not None:
            assert is_hole(g, w.cycle) and len(w) >= k


def test_apple_and_cap_vs_brute_force(rng):
    for _ in range(120):
        g = random_graph(rng, rng.randint(4, 9), rng.uniform(0.2, 0.7))
        a, c = find_apple(g), find_cap(g)
        assert (a is not None) == brute_apple(g)
        assert (c is not None) == brute_cap(g)
        for w in (a, c):
            if w is not None:
                assert check_stem_witness(g, w)


def test_cap_examples():
    # C4 plus a vertex on one edge is the smallest cap
    cap = Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 0), (4, 0), (4, 1)])
    assert not is_cap_free(cap)
    assert is_cap_free(cycle_graph(6)) and is_apple_free(cycle_graph(6))
    assert is_cap_free(complete_graph(4))


def test_claw_free_line_graphs(rng):
    for _ in range(30):
        lg = line_graph(random_graph(rng, rng.randint(2, 7)))
        assert is_claw_free(lg)
    assert not is_claw_free(complete_bipartite(1, 3))


def test_basic_cap_free():
    assert is_basic_cap_free(cycle_graph(6)) == "almost-triangle-free"
    wheel = join(Graph.from_edges(1, []), cycle_graph(5))
    assert is_basic_cap_free(wheel) == "almost-triangle-free"
    assert is_basic_cap_free(path_graph(4)) == "chordal"
    # two holes sharing a vertex: not 2-connected, not chordal
    bow = Graph.from_edges(7, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (4, 5), (5, 6), (6, 0)])
    assert is_basic_cap_free(bow) is None


def test_2connected():
    assert is_2connected(cycle_graph(4))
    assert not is_2connected(path_graph(3))
    assert not is_2connected(complete_graph(2))
