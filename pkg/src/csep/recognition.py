"""Membership and witness tests for the graph classes the pipelines dispatch on.

Every ``find_*`` function returns ``None`` when the graph is free of the
structure, or a witness that can be re-checked against the host graph.
The matching ``is_*`` predicates are thin wrappers.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .errors import InputError
from .graph import Graph, bits, component_masks, mask_of, shortest_path


@dataclass(frozen=True)
class PatternWitness:
    pattern_name: str
    embedding: tuple  # host ids; embedding[i] realises pattern vertex i


@dataclass(frozen=True)
class HoleWitness:
    cycle: tuple  # cyclic order, length >= 4

    def __len__(self):
        return len(self.cycle)


@dataclass(frozen=True)
class StemWitness:
    """A hole plus a stem vertex (apples and caps)."""

    kind: str
    stem: int
    hole: HoleWitness


# -- pattern table ---------------------------------------------------------------

def parse_pattern_table(text: str) -> dict[str, Graph]:
    table = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        name, n, *edges = line.split()
        pairs = [tuple(int(x) for x in e.split("-")) for e in edges]
        table[name] = Graph.from_edges(int(n), pairs, name=name)
    return table


@lru_cache(maxsize=1)
def pattern_table() -> dict[str, Graph]:
    text = resources.files("csep").joinpath("data/patterns.txt").read_text()
    return parse_pattern_table(text)


def pattern(name: str) -> Graph:
    try:
        return pattern_table()[name]
    except KeyError:
        raise InputError(f"unknown pattern {name!r}") from None


def _search_order(p: Graph) -> list[int]:
    # highest degree first, then grow along edges so candidates get constrained early
    order = [max(range(p.n), key=lambda v: (p.degree(v), -v))]
    placed = 1 << order[0]
    while len(order) < p.n:
        frontier = [v for v in range(p.n) if not placed >> v & 1]
        v = max(frontier, key=lambda u: ((p.adj[u] & placed).bit_count(), p.degree(u), -u))
        order.append(v)
        placed |= 1 << v
    return order


def find_induced(g: Graph, p: Graph, name: str | None = None) -> PatternWitness | None:
    """Backtracking induced-subgraph isomorphism with degree pruning."""
    k = p.n
    if k == 0:
        return PatternWitness(name or p.name or "", ())
    if k > g.n:
        return None
    order = _search_order(p)
    by_degree = {}
    for d in set(p.degree(v) for v in range(k)):
        by_degree[d] = mask_of(v for v in range(g.n) if g.degree(v) >= d)
    image = [None] * k
    full = g.full

    def extend(i: int, used: int) -> bool:
        if i == k:
            return True
        pv = order[i]
        cand = by_degree[p.degree(pv)] & ~used
        for j in range(i):
            qv = order[j]
            h = image[qv]
            cand &= g.adj[h] if p.adj[pv] >> qv & 1 else full & ~g.adj[h]
            if not cand:
                return False
        for h in bits(cand):
            image[pv] = h
            if extend(i + 1, used | 1 << h):
                return True
        image[pv] = None
        return False

    if extend(0, 0):
        return PatternWitness(name or p.name or "", tuple(image))
    return None


def contains_fixed_induced(g: Graph, name: str) -> PatternWitness | None:
    return find_induced(g, pattern(name), name)


def verify_embedding(g: Graph, p: Graph, embedding) -> bool:
    if len(embedding) != p.n or len(set(embedding)) != p.n:
        return False
    for i in range(p.n):
        for j in range(i + 1, p.n):
            if p.has_edge(i, j) != g.has_edge(embedding[i], embedding[j]):
                return False
    return True


def is_hole(g: Graph, cycle) -> bool:
    k = len(cycle)
    if k < 4 or len(set(cycle)) != k:
        return False
    for i in range(k):
        for j in range(i + 1, k):
            adjacent = j == i + 1 or (i == 0 and j == k - 1)
            if g.has_edge(cycle[i], cycle[j]) != adjacent:
                return False
    return True


# -- holes -----------------------------------------------------------------------

def vertex_on_hole(g: Graph, v: int, allowed: int | None = None) -> HoleWitness | None:
    """A hole through ``v`` inside ``g[allowed]`` (default: whole graph).

    For non-adjacent x, y in N(v), a shortest x-y path avoiding the rest of
    N[v] closes a chordless cycle through v.
    """
    allowed = g.full if allowed is None else allowed
    nv = g.adj[v] & allowed
    closed = nv | 1 << v
    for x in bits(nv):
        for y in bits(nv & ~g.adj[x] & ~((1 << (x + 1)) - 1)):
            path = shortest_path(g, x, y, (allowed & ~closed) | 1 << x | 1 << y)
            if path is not None:
                return HoleWitness((v, *path))
    return None


def hole_through_edge(g: Graph, x: int, y: int, allowed: int | None = None) -> HoleWitness | None:
    """A hole containing edge xy inside ``g[allowed]``."""
    allowed = g.full if allowed is None else allowed
    avail = allowed & ~(g.adj[x] & g.adj[y])
    # shortest x-y path with the edge xy removed
    parent = {x: None}
    seen = 1 << x
    frontier = [x]
    while frontier:
        nxt = []
        for u in frontier:
            for w in bits(g.adj[u] & avail & ~seen):
                if u == x and w == y:
                    continue
                seen |= 1 << w
                parent[w] = u
                if w == y:
                    path = [w]
                    while parent[path[-1]] is not None:
                        path.append(parent[path[-1]])
                    return HoleWitness(tuple(path[::-1]))
                nxt.append(w)
        frontier = sorted(nxt)
    return None


def find_hole(g: Graph) -> HoleWitness | None:
    for v in range(g.n):
        h = vertex_on_hole(g, v)
        if h is not None:
            return h
    return None


def mcs_ordering(g: Graph) -> list[int]:
    """Maximum cardinality search visit order (ties: smallest id)."""
    weight = [0] * g.n
    unvisited = g.full
    order = []
    while unvisited:
        v = max(bits(unvisited), key=lambda u: (weight[u], -u))
        order.append(v)
        unvisited &= ~(1 << v)
        for u in bits(g.adj[v] & unvisited):
            weight[u] += 1
    return order


def perfect_elimination_ordering(g: Graph) -> list[int] | None:
    """A perfect elimination ordering, or ``None`` if ``g`` is not chordal."""
    visit = mcs_ordering(g)
    pos = {v: i for i, v in enumerate(visit)}
    for v in visit:
        earlier = [u for u in bits(g.adj[v]) if pos[u] < pos[v]]
        if len(earlier) < 2:
            continue
        parent = max(earlier, key=pos.__getitem__)
        rest = mask_of(earlier) & ~(1 << parent)
        if rest & ~g.adj[parent]:
            return None
    return visit[::-1]


def chordal_certificate(g: Graph):
    """``(True, peo)`` or ``(False, HoleWitness)``."""
    peo = perfect_elimination_ordering(g)
    if peo is not None:
        return True, peo
    hole = find_hole(g)
    assert hole is not None, "MCS rejected a graph without holes"
    return False, hole


def is_chordal(g: Graph) -> bool:
    return perfect_elimination_ordering(g) is not None


def _induced_paths(g: Graph, length: int):
    """Induced paths on ``length`` vertices, each reported once (first < last)."""
    def grow(path, forbidden):
        if len(path) == length:
            if path[0] < path[-1]:
                yield path
            return
        last = path[-1]
        for w in bits(g.adj[last] & ~forbidden):
            yield from grow(path + [w], forbidden | g.adj[last] | 1 << last)

    for s in range(g.n):
        if length == 1:
            yield [s]
        else:
            yield from grow([s], 1 << s)


def has_long_hole(g: Graph, k: int) -> HoleWitness | None:
    """A hole of length at least ``k`` (k >= 4), or ``None``."""
    if k < 4:
        raise InputError(f"hole length bound must be >= 4, got {k}")
    if k > g.n:
        return None
    for path in _induced_paths(g, k - 2):
        a, b = path[0], path[-1]
        blocked = mask_of(path)
        for mid in path[1:-1]:
            blocked |= g.adj[mid]
        blocked |= g.adj[a] & g.adj[b]
        allowed = (g.full & ~blocked) | 1 << a | 1 << b
        # interior must have >= 2 vertices; the direct edge a-b only exists when k == 4
        parent = {b: None}
        seen = 1 << b
        frontier = [b]
        found = None
        while frontier and found is None:
            nxt = []
            for u in frontier:
                for w in bits(g.adj[u] & allowed & ~seen):
                    if u == b and w == a:
                        continue
                    seen |= 1 << w
                    parent[w] = u
                    if w == a:
                        found = w
                        break
                    nxt.append(w)
                if found is not None:
                    break
            frontier = sorted(nxt)
        if found is None:
            continue
        back = [a]
        while parent[back[-1]] is not None:
            back.append(parent[back[-1]])
        # back runs a -> ... -> b; path runs a -> ... -> b
        cycle = tuple(path) + tuple(back[-2:0:-1])
        return HoleWitness(cycle)
    return None


# -- apples and caps ---------------------------------------------------------------

def find_apple(g: Graph) -> StemWitness | None:
    """Stem ``a`` plus a hole meeting N(a) in exactly one vertex."""
    for a in range(g.n):
        outside = g.full & ~g.adj[a] & ~(1 << a)
        for b in bits(g.adj[a]):
            hole = vertex_on_hole(g, b, outside | 1 << b)
            if hole is not None:
                return StemWitness("apple", a, hole)
    return None


def find_cap(g: Graph) -> StemWitness | None:
    """Stem ``a`` plus a hole meeting N(a) in exactly one edge."""
    for a in range(g.n):
        na = g.adj[a]
        outside = g.full & ~na & ~(1 << a)
        for x in bits(na):
            for y in bits(na & g.adj[x] & ~((1 << (x + 1)) - 1)):
                hole = hole_through_edge(g, x, y, outside | 1 << x | 1 << y)
                if hole is not None:
                    return StemWitness("cap", a, hole)
    return None


def is_apple_free(g: Graph) -> bool:
    return find_apple(g) is None


def is_cap_free(g: Graph) -> bool:
    return find_cap(g) is None


def check_stem_witness(g: Graph, w: StemWitness) -> bool:
    cycle = w.hole.cycle
    if w.stem in cycle or not is_hole(g, cycle):
        return False
    hits = [i for i, v in enumerate(cycle) if g.has_edge(w.stem, v)]
    if w.kind == "apple":
        return len(hits) == 1
    if w.kind == "cap":
        k = len(cycle)
        return len(hits) == 2 and (hits[1] - hits[0] == 1 or (hits[0] == 0 and hits[1] == k - 1))
    return False


# -- basic classes ----------------------------------------------------------------

def universal_vertices(g: Graph) -> tuple:
    return tuple(v for v in range(g.n) if g.adj[v] | 1 << v == g.full)


def is_triangle_free(g: Graph, within: int | None = None) -> bool:
    s = g.full if within is None else within
    for u in bits(s):
        for v in bits(g.adj[u] & s & ~((1 << (u + 1)) - 1)):
            if g.adj[u] & g.adj[v] & s:
                return False
    return True


def is_2connected(g: Graph, within: int | None = None) -> bool:
    """At least three vertices, connected, no cut vertex."""
    s = g.full if within is None else within
    if s.bit_count() < 3 or len(component_masks(g, s)) != 1:
        return False
    return all(len(component_masks(g, s & ~(1 << v))) == 1 for v in bits(s))


def is_claw_free(g: Graph) -> bool:
    return contains_fixed_induced(g, "claw") is None


def is_basic_cap_free(g: Graph) -> str | None:
    """``'chordal'``, ``'almost-triangle-free'`` or ``None``."""
    if is_chordal(g):
        return "chordal"
    candidates = [g.full] + [g.full & ~(1 << u) for u in universal_vertices(g)]
    for s in candidates:
        if is_triangle_free(g, s) and is_2connected(g, s):
            return "almost-triangle-free"
    return None


def hole_witness_ok(g: Graph, w: HoleWitness) -> bool:
    return is_hole(g, w.cycle)
