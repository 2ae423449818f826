import networkx as nx
import pytest

from csep.errors import EnumerationOverflow, InputError
from csep.graph import Graph, complete_bipartite, complete_graph, cycle_graph, empty_graph
from csep.oracle import (SeparationWitness, all_clique_masks, maximal_cliques, maximal_stable_sets,
                         verify_separator, verify_separator_exhaustive, verify_separator_sampled,
                         witness_is_valid)
from csep.separators import CutFamily, all_cuts_fallback, maxclique_separator

from conftest import brute_separates, random_graph, to_nx


def fam(g, masks):
    return CutFamily.build(g.n, g.full, masks)


def test_maximal_cliques_small():
    assert maximal_cliques(cycle_graph(5)) == [(0, 1), (0, 4), (1, 2), (2, 3), (3, 4)]
    assert maximal_cliques(complete_graph(4)) == [(0, 1, 2, 3)]
    assert maximal_stable_sets(empty_graph(3)) == [(0, 1, 2)]
    assert len(maximal_stable_sets(cycle_graph(5))) == 5


def test_maximal_cliques_vs_networkx(rng):
    for _ in range(100):
        g = random_graph(rng, rng.randint(1, 10))
        ref = sorted(tuple(sorted(c)) for c in nx.find_cliques(to_nx(g)))
        assert maximal_cliques(g) == ref


def test_enumeration_cap():
    with pytest.raises(EnumerationOverflow):
        # a perfect matching on 12 vertices has 2^6 maximal stable sets
        maximal_stable_sets(Graph.from_edges(12, [(2 * i, 2 * i + 1) for i in range(6)]), cap=10)


def test_all_cliques_includes_empty():
    assert all_clique_masks(complete_graph(2)) == [0, 1, 3, 2]


def test_star_negative_fixture():
    # K1,3: drop the cut ({center}, leaves) and the pair (center, leaves) goes unseparated
    g = complete_bipartite(1, 3)
    full = maxclique_separator(g)
    broken = fam(g, [w for w in full.masks if w != 1])
    v = verify_separator(g, broken)
    assert not v.ok
    assert v.witness == SeparationWitness((0,), (1, 2, 3))
    assert witness_is_valid(g, broken, v.witness)
    assert verify_separator(g, full).ok


def test_exhaustive_degenerate_cases():
    k1 = complete_graph(1)
    assert not verify_separator_exhaustive(k1, fam(k1, [])).ok
    g = Graph.from_edges(3, [(0, 1)])
    v = verify_separator_exhaustive(g, fam(g, [0, g.full]))
    assert not v.ok and witness_is_valid(g, fam(g, [0, g.full]), v.witness)


def test_exhaustive_guard():
    g = empty_graph(17)
    with pytest.raises(InputError):
        verify_separator_exhaustive(g, all_cuts_fallback(empty_graph(1)))


def test_host_mismatch():
    with pytest.raises(InputError):
        verify_separator(cycle_graph(4), all_cuts_fallback(cycle_graph(3)))


def test_exhaustive_matches_definition(rng):
    for _ in range(80):
        g = random_graph(rng, rng.randint(1, 7))
        masks = [m for m in range(1 << g.n) if rng.random() < 0.15]
        f = fam(g, masks)
        assert verify_separator_exhaustive(g, f).ok == brute_separates(g, masks)


def test_monotone_under_added_cuts(rng):
    for _ in range(50):
        g = random_graph(rng, rng.randint(2, 8))
        masks = [m for m in range(1 << g.n) if rng.random() < 0.2]
        before = verify_separator(g, fam(g, masks)).ok
        after = verify_separator(g, fam(g, masks + [rng.randrange(1 << g.n) for _ in range(5)])).ok
        assert after or not before


def test_witness_format():
    w = SeparationWitness((0, 2), ())
    assert w.format() == "K 1 3\nS\n"


def test_sampled_deterministic_and_sound(rng):
    g = random_graph(rng, 14, 0.4)
    f = maxclique_separator(g)
    assert verify_separator_sampled(g, f, samples=200, seed=3).ok
    broken = fam(g, list(f.masks)[: len(f) // 3])
    a = verify_separator_sampled(g, broken, samples=200, seed=3)
    b = verify_separator_sampled(g, broken, samples=200, seed=3)
    assert a == b


def test_sampled_planted_failure_frequency():
    # remove every cut through vertex 0 except the trivial ones: pairs (K ∋ 0, S) with S non-empty fail
    g = cycle_graph(8)
    f = maxclique_separator(g)
    broken = fam(g, [w for w in f.masks if not w & 1 or w == g.full])
    found = sum(not verify_separator_sampled(g, broken, samples=30, seed=s).ok for s in range(100))
    assert found >= 99
