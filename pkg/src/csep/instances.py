"""Seeded generators for in-class graphs and compositions that plant decompositions.

Every generator takes an explicit ``seed`` and uses its own
``random.Random``, so the same arguments always give the same graph.
Compositions are generate-and-validate: callers gate the result with a
recognizer and the batch helpers report how often the gate accepted.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path

from .decompose import AmalgamSplit
from .errors import GenerationError, InputError
from .graph import (Graph, cycle_graph, disjoint_union, format_dimacs, join, line_graph, mask_of,
                    members, relabel)
from .recognition import find_apple, find_cap, is_2connected, is_triangle_free

DEFAULT_RETRIES = 200


def _check_seed_args(n: int, p: float, what: str = "p") -> None:
    if n < 0:
        raise InputError(f"n must be non-negative, got {n}")
    if not 0.0 <= p <= 1.0:
        raise InputError(f"{what} must lie in [0, 1], got {p}")


def shuffled(g: Graph, rng: random.Random) -> Graph:
    perm = list(range(g.n))
    rng.shuffle(perm)
    return relabel(g, perm)


def gen_gnp(n: int, p: float, seed: int) -> Graph:
    _check_seed_args(n, p)
    rng = random.Random(seed)
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return Graph.from_edges(n, edges, name=f"gnp-{n}-{seed}")


def gen_chordal(n: int, density: float, seed: int) -> Graph:
    """Each new vertex attaches to a random clique through a random earlier vertex.

    The new vertex is simplicial when added, so the result is chordal;
    ``density`` is the chance of growing the attachment clique further.
    """
    if n < 1:
        raise InputError(f"chordal generator needs n >= 1, got {n}")
    _check_seed_args(n, density, "density")
    rng = random.Random(seed)
    adj = [0] * n
    for new in range(1, n):
        u = rng.randrange(new)
        clique = 1 << u
        cands = [w for w in range(new) if adj[u] >> w & 1]
        rng.shuffle(cands)
        for w in cands:
            if adj[w] & clique == clique and rng.random() < density:
                clique |= 1 << w
        adj[new] = clique
        for w in range(new):
            if clique >> w & 1:
                adj[w] |= 1 << new
    return Graph(n, tuple(adj), name=f"chordal-{n}-{seed}")


def _triangle_free_fill(n: int, adj: list, p: float, rng: random.Random) -> None:
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n) if not adj[u] >> v & 1]
    rng.shuffle(pairs)
    for u, v in pairs:
        if rng.random() < p and not adj[u] & adj[v]:
            adj[u] |= 1 << v
            adj[v] |= 1 << u


def gen_triangle_free(n: int, p: float, seed: int) -> Graph:
    """Random edge insertion skipping every edge that would close a triangle."""
    _check_seed_args(n, p)
    rng = random.Random(seed)
    adj = [0] * n
    _triangle_free_fill(n, adj, p, rng)
    return Graph(n, tuple(adj), name=f"trianglefree-{n}-{seed}")


def gen_almost_triangle_free(n: int, p: float, seed: int, universal: bool = True,
                             retries: int = DEFAULT_RETRIES) -> Graph:
    """A 2-connected triangle-free graph, plus one universal vertex when asked.

    Starts from a random Hamiltonian cycle, which is 2-connected as soon as
    it has four vertices, then adds edges that keep it triangle-free.
    """
    _check_seed_args(n, p)
    core = n - 1 if universal else n
    rng = random.Random(seed)
    for _ in range(retries):
        if core < 4:
            break
        order = list(range(core))
        rng.shuffle(order)
        adj = [0] * core
        for i in range(core):
            u, v = order[i], order[(i + 1) % core]
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        _triangle_free_fill(core, adj, p, rng)
        g = Graph(core, tuple(adj))
        if is_triangle_free(g) and is_2connected(g):
            break
    else:
        raise GenerationError(f"no 2-connected triangle-free graph after {retries} tries")
    if core < 4:
        raise GenerationError(f"a 2-connected triangle-free core needs 4 vertices, got {core}")
    if universal:
        edges = g.edges() + [(core, v) for v in range(core)]
        g = Graph.from_edges(n, edges)
    return Graph(g.n, g.adj, name=f"almosttrianglefree-{n}-{seed}")


def gen_line_graph(base_n: int, p: float, seed: int) -> Graph:
    base = gen_gnp(base_n, p, seed)
    lg = line_graph(base)
    return Graph(lg.n, lg.adj, name=f"line-{base_n}-{seed}")


# -- compositions ------------------------------------------------------------------------

def _pick_side(g: Graph, spec, rng: random.Random) -> int:
    if isinstance(spec, int):
        if not 1 <= spec <= g.n:
            raise InputError(f"cannot pick {spec} vertices out of {g.n}")
        return mask_of(rng.sample(range(g.n), spec))
    m = mask_of(spec)
    if not m or m >> g.n:
        raise InputError("side spec must be a non-empty set of vertices of its graph")
    return m


def compose_amalgam(g1: Graph, a1_spec, g2: Graph, a2_spec, c_size: int, seed: int = 0):
    """Plant an amalgam: g1, g2 and a fresh clique C, with the mandated joins.

    A side spec is either a vertex collection or a count drawn at random.
    Returns ``(graph, split)``; g1 keeps ids ``0..n1-1``, g2 follows, C last.
    """
    if g1.n < 2 or g2.n < 2:
        raise InputError("each side of an amalgam needs at least two vertices")
    if c_size < 0:
        raise InputError("c_size must be non-negative")
    rng = random.Random(seed)
    a1 = _pick_side(g1, a1_spec, rng)
    a2_local = _pick_side(g2, a2_spec, rng)
    n1, n2 = g1.n, g2.n
    n = n1 + n2 + c_size
    edges = list(g1.edges()) + [(u + n1, v + n1) for u, v in g2.edges()]
    a2 = a2_local << n1
    c = ((1 << c_size) - 1) << (n1 + n2)
    cs = members(c)
    edges += [(x, y) for i, x in enumerate(cs) for y in cs[i + 1:]]
    edges += [(x, y) for x in cs for y in members(a1 | a2)]
    edges += [(x, y) for x in members(a1) for y in members(a2)]
    g = Graph.from_edges(n, edges, name="amalgam")
    split = AmalgamSplit(((1 << n1) - 1) & ~a1, a1, c, a2, (((1 << n2) - 1) << n1) & ~a2)
    problems = split.violations(g, g.full)
    if problems:
        raise InputError("planted split is invalid: " + "; ".join(problems))
    return g, split


def compose_clique_glue(g1: Graph, k1, g2: Graph, k2) -> Graph:
    """Identify clique ``k1`` of g1 with clique ``k2`` of g2, position by position."""
    k1, k2 = list(k1), list(k2)
    if len(k1) != len(k2):
        raise InputError("glued cliques must have equal size")
    if not g1.is_clique_mask(mask_of(k1)) or not g2.is_clique_mask(mask_of(k2)):
        raise InputError("glue sets must be cliques")
    where = {}
    nxt = g1.n
    for v in range(g2.n):
        if v in k2:
            where[v] = k1[k2.index(v)]
        else:
            where[v] = nxt
            nxt += 1
    edges = set(g1.edges())
    for u, v in g2.edges():
        a, b = sorted((where[u], where[v]))
        edges.add((a, b))
    return Graph.from_edges(nxt, sorted(edges), name="glue")


def substitute_module(g: Graph, v: int, m_graph: Graph) -> Graph:
    """Replace ``v`` by a copy of ``m_graph`` wired like ``v`` (appended at the end)."""
    if not 0 <= v < g.n:
        raise InputError(f"vertex {v} out of range")
    if m_graph.n < 1:
        raise InputError("module graph must be non-empty")
    keep = [u for u in range(g.n) if u != v]
    pos = {u: i for i, u in enumerate(keep)}
    base = len(keep)
    edges = [(pos[a], pos[b]) for a, b in g.edges() if v not in (a, b)]
    edges += [(base + a, base + b) for a, b in m_graph.edges()]
    for u in keep:
        if g.has_edge(u, v):
            edges += [(pos[u], base + i) for i in range(m_graph.n)]
    return Graph.from_edges(base + m_graph.n, edges, name="substituted")


# -- composed families used by the pipelines' tests and benchmarks ----------------------------

@dataclass
class GateStats:
    tried: int = 0
    accepted: int = 0
    notes: list = field(default_factory=list)

    @property
    def rate(self) -> float:
        return self.accepted / self.tried if self.tried else 0.0


def _basic_capfree_block(n: int, rng: random.Random) -> Graph:
    if n >= 5 and rng.random() < 0.5:
        return gen_almost_triangle_free(n, rng.uniform(0.0, 0.4), rng.randrange(1 << 30),
                                        universal=rng.random() < 0.5)
    return gen_chordal(n, rng.uniform(0.2, 0.9), rng.randrange(1 << 30))


def _capfree_rec(n: int, rng: random.Random, stats: GateStats, retries: int) -> Graph:
    if n <= 8:
        return _basic_capfree_block(max(n, 1), rng)
    c_size = rng.choice((0, 1, 1, 2))
    n1 = rng.randint(2, n - c_size - 2)
    n2 = n - c_size - n1
    for _ in range(retries):
        g1 = _capfree_rec(n1, rng, stats, retries)
        g2 = _capfree_rec(n2, rng, stats, retries)
        k1 = rng.randint(1, min(2, g1.n))
        k2 = rng.randint(1, min(2, g2.n))
        if (g1.n < 2 or g2.n < 2):
            continue
        g, _split = compose_amalgam(g1, k1, g2, k2, c_size, rng.randrange(1 << 30))
        stats.tried += 1
        if find_cap(g) is None:
            stats.accepted += 1
            return g
    raise GenerationError(f"no cap-free amalgam composition on {n} vertices after {retries} tries")


def gen_capfree_composed(n: int, seed: int, retries: int = DEFAULT_RETRIES, stats: GateStats | None = None) -> Graph:
    """Cap-free graph built from basic blocks glued by random amalgams.

    Every intermediate composition is gated by the cap detector; rejected
    ones are redrawn. Vertex ids are shuffled at the end.
    """
    if n < 1:
        raise InputError(f"n must be positive, got {n}")
    rng = random.Random(seed)
    stats = GateStats() if stats is None else stats
    g = _capfree_rec(n, rng, stats, retries)
    g = shuffled(g, rng)
    return Graph(g.n, g.adj, name=f"capfree-{n}-{seed}")


def gen_applefree_composed(n: int, seed: int, retries: int = DEFAULT_RETRIES,
                           stats: GateStats | None = None) -> Graph:
    """Apple-free, usually not claw-free: a hub over a blown-up short hole, with chordal blocks.

    A C5 or C6 has some vertices replaced by cliques, a hub vertex is joined
    to all of it, and chordal blocks are glued on the hub or on edges through
    the hub. Each step is gated by the apple detector and redrawn on failure.
    """
    if n < 6:
        raise InputError("composed apple-free graphs need n >= 6")
    rng = random.Random(seed)
    stats = GateStats() if stats is None else stats
    g = cycle_graph(6 if n >= 8 and rng.random() < 0.5 else 5)
    core_target = rng.randint(g.n, max(g.n, (n - 1) // 2))
    while g.n < core_target:
        v = rng.randrange(g.n)
        size = min(rng.randint(2, 3), core_target - g.n + 1)
        g = substitute_module(g, v, Graph.from_edges(size, [(i, j) for i in range(size) for j in range(i + 1, size)]))
    hub = g.n
    g = Graph.from_edges(g.n + 1, g.edges() + [(v, hub) for v in range(hub)])
    while g.n < n:
        room = n - g.n
        stats.tried += 1
        size = rng.randint(2, min(7, room + 1))
        block = gen_chordal(size, rng.uniform(0.0, 0.8), rng.randrange(1 << 30))
        if rng.random() < 0.5 or size < 2 or not block.edges():
            cand = compose_clique_glue(g, (hub,), block, (rng.randrange(size),))
        else:
            x = rng.randrange(hub)
            cand = compose_clique_glue(g, (hub, x), block, rng.choice(block.edges()))
        if find_apple(cand) is None:
            stats.accepted += 1
            g = cand
        elif stats.tried > retries * n:
            raise GenerationError("apple-free composition kept failing its gate")
    g = shuffled(g, rng)
    return Graph(g.n, g.adj, name=f"applefree-{n}-{seed}")


def gen_nearly_chordal_composed(n: int, seed: int) -> Graph:
    """Holes, chordal blocks and their joins, unions, clique glues and substitutions.

    Every piece is nearly chordal (a hole minus a closed neighbourhood is a
    path) and the operations only create modules, clique cutsets, components
    and anticomponents, so the engine with chordal leaves applies.
    """
    if n < 1:
        raise InputError(f"n must be positive, got {n}")
    rng = random.Random(seed)

    def piece(k: int) -> Graph:
        if k >= 4 and rng.random() < 0.5:
            return cycle_graph(min(k, rng.randint(4, 8)))
        return gen_chordal(k, rng.uniform(0.2, 0.9), rng.randrange(1 << 30))

    def build(k: int) -> Graph:
        if k <= 6:
            return piece(k)
        op = rng.choice(("glue", "glue", "sub", "union", "join"))
        if op == "sub":
            base = build(k - rng.randint(1, min(3, k - 4)))
            inner = build(k - base.n + 1)
            return substitute_module(base, rng.randrange(base.n), inner)
        k1 = rng.randint(3, k - 3)
        g1 = build(k1)
        if op == "glue":
            g2 = build(k - g1.n + 1)
            return compose_clique_glue(g1, (rng.randrange(g1.n),), g2, (rng.randrange(g2.n),))
        g2 = build(k - g1.n)
        return join(g1, g2) if op == "join" else disjoint_union(g1, g2)

    g = build(n)
    g = shuffled(g, rng)
    return Graph(g.n, g.adj, name=f"nearlychordal-{n}-{seed}")


# -- output --------------------------------------------------------------------------

FAMILIES = ("chordal", "triangle-free", "almost-triangle-free", "line", "gnp",
            "cap-free-amalgam", "apple-free-composed", "nearly-chordal")


def generate(family: str, n: int, seed: int, p: float = 0.3, stats: GateStats | None = None) -> Graph:
    """Dispatch by family name; ``n`` is the vertex count (base vertex count for line graphs)."""
    if n < 1:
        raise InputError(f"n must be positive, got {n}")
    if family == "chordal":
        return gen_chordal(n, p, seed)
    if family == "triangle-free":
        return gen_triangle_free(n, p, seed)
    if family == "almost-triangle-free":
        return gen_almost_triangle_free(n, p, seed)
    if family == "line":
        return gen_line_graph(n, p, seed)
    if family == "gnp":
        return gen_gnp(n, p, seed)
    if family == "cap-free-amalgam":
        return gen_capfree_composed(n, seed, stats=stats)
    if family == "apple-free-composed":
        return gen_applefree_composed(n, seed, stats=stats)
    if family == "nearly-chordal":
        return gen_nearly_chordal_composed(n, seed)
    raise InputError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")


def sidecar(family: str, params: dict, seed: int, g: Graph, planted: dict | None = None) -> dict:
    return {"family": family, "params": params, "seed": seed, "n": g.n, "m": g.m,
            "planted": planted or {}}


def write_instance(g: Graph, path, family: str, params: dict, seed: int, planted: dict | None = None) -> Path:
    """DIMACS file plus ``<path>.json`` sidecar."""
    path = Path(path)
    comments = [f"family {family}", f"seed {seed}"]
    path.write_text(format_dimacs(g, comments))
    side = path.with_name(path.name + ".json")
    side.write_text(json.dumps(sidecar(family, params, seed, g, planted), indent=1, sort_keys=True) + "\n")
    return side
