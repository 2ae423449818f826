"""Shared helpers: random graphs and brute-force oracles independent of the package."""

import itertools
import random

import networkx as nx
import pytest

from csep.graph import Graph


def random_graph(rng: random.Random, n: int, p: float | None = None) -> Graph:
    p = rng.random() if p is None else p
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return Graph.from_edges(n, edges)


def to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h


def subset_masks(n: int):
    return range(1 << n)


def _degrees_within(g: Graph, s: int) -> dict:
    return {v: (g.adj[v] & s).bit_count() for v in range(g.n) if s >> v & 1}


def _is_cycle_subset(g: Graph, s: int) -> bool:
    """g[s] is a single chordless cycle (connected, every degree 2)."""
    if s.bit_count() < 3:
        return False
    if any(d != 2 for d in _degrees_within(g, s).values()):
        return False
    sub = to_nx(g).subgraph([v for v in range(g.n) if s >> v & 1])
    return nx.is_connected(sub)


def brute_long_hole(g: Graph, k: int) -> bool:
    return any(s.bit_count() >= k and _is_cycle_subset(g, s) for s in subset_masks(g.n))


def brute_stem(g: Graph, contacts: int) -> bool:
    """Some hole plus an outside vertex with exactly ``contacts`` neighbours on it (consecutive if 2)."""
    holes = [s for s in subset_masks(g.n) if s.bit_count() >= 4 and _is_cycle_subset(g, s)]
    for s in holes:
        for a in range(g.n):
            if s >> a & 1:
                continue
            hit = g.adj[a] & s
            if hit.bit_count() != contacts:
                continue
            if contacts == 2:
                x, y = [v for v in range(g.n) if hit >> v & 1]
                if not g.has_edge(x, y):
                    continue
            return True
    return False


def brute_apple(g: Graph) -> bool:
    return brute_stem(g, 1)


def brute_cap(g: Graph) -> bool:
    return brute_stem(g, 2)


def brute_is_module(g: Graph, m: int) -> bool:
    for x in range(g.n):
        if m >> x & 1:
            continue
        hit = g.adj[x] & m
        if hit and hit != m:
            return False
    return True


def brute_has_module(g: Graph) -> bool:
    return any(2 <= m.bit_count() < g.n and brute_is_module(g, m) for m in subset_masks(g.n))


def brute_has_clique_cutset(g: Graph) -> bool:
    h = to_nx(g)
    for c in subset_masks(g.n):
        if not g.is_clique_mask(c):
            continue
        rest = [v for v in range(g.n) if not c >> v & 1]
        if len(rest) >= 2 and not nx.is_connected(h.subgraph(rest)):
            return True
    return False


def brute_amalgam(g: Graph) -> bool:
    """Try every 5-labelling (n <= 8 keeps this under a second per graph)."""
    from csep.decompose import AmalgamSplit
    for lab in itertools.product(range(5), repeat=g.n):
        parts = [0] * 5
        for v, x in enumerate(lab):
            parts[x] |= 1 << v
        if AmalgamSplit(*parts).check(g):
            return True
    return False


def brute_separates(g: Graph, masks) -> bool:
    """Definition check over every clique and every stable set, empty ones included."""
    cliques = [s for s in subset_masks(g.n) if g.is_clique_mask(s)]
    stables = [s for s in subset_masks(g.n) if g.is_stable_mask(s)]
    for k in cliques:
        for s in stables:
            if k & s:
                continue
            if not any(w & k == k and not w & s for w in masks):
                return False
    return True


@pytest.fixture
def rng():
    return random.Random(20240611)
