"""Immutable simple graphs over dense integer ids, stored as adjacency bitmasks.

Vertex sets travel through the public API as sorted tuples; internally most
algorithms work on Python ``int`` bitmasks (bit ``i`` set means vertex ``i``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .errors import InputError

VertexSet = tuple  # sorted, duplicate-free tuple of ints


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def bits(mask: int) -> Iterator[int]:
    """Yield the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def members(mask: int) -> VertexSet:
    return tuple(bits(mask))


def lowest(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``0..n-1``.

    ``adj[v]`` is the bitmask of neighbours of ``v``. Use :meth:`from_edges`
    rather than the raw constructor unless the masks are already validated.
    """

    n: int
    adj: tuple
    name: str | None = field(default=None, compare=False)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], name=None) -> "Graph":
        if n < 0:
            raise InputError(f"negative vertex count {n}")
        adj = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise InputError(f"self-loop at {u}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, tuple(adj), name)

    @classmethod
    def from_adjacency(cls, adj: Sequence[int], name=None) -> "Graph":
        adj = tuple(adj)
        n = len(adj)
        full = (1 << n) - 1
        for v, a in enumerate(adj):
            if a & ~full or a >> v & 1:
                raise InputError(f"bad adjacency mask at vertex {v}")
            for u in bits(a):
                if not adj[u] >> v & 1:
                    raise InputError(f"asymmetric adjacency between {u} and {v}")
        return cls(n, adj, name)

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    @property
    def vertices(self) -> range:
        return range(self.n)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in bits(self.adj[u] >> (u + 1) << (u + 1))]

    @property
    def m(self) -> int:
        return sum(a.bit_count() for a in self.adj) // 2

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def is_clique_mask(self, mask: int) -> bool:
        for v in bits(mask):
            if mask & ~self.adj[v] & ~(1 << v):
                return False
        return True

    def is_stable_mask(self, mask: int) -> bool:
        for v in bits(mask):
            if self.adj[v] & mask:
                return False
        return True

    def is_complete(self) -> bool:
        return self.is_clique_mask(self.full)

    def induced(self, vertices: Iterable[int] | int) -> "InducedView":
        return induced_subgraph(self, vertices)

    def __repr__(self) -> str:
        label = f" {self.name!r}" if self.name else ""
        return f"<Graph{label} n={self.n} m={self.m}>"


@dataclass(frozen=True)
class InducedView:
    """``host`` restricted to ``kept``; local id ``i`` is host id ``kept[i]``."""

    host: Graph
    kept: VertexSet
    graph: Graph

    def to_host(self, local: int) -> int:
        return self.kept[local]

    def to_local(self, host_id: int) -> int:
        return self.kept.index(host_id)

    def lift_mask(self, local_mask: int) -> int:
        out = 0
        kept = self.kept
        for i in bits(local_mask):
            out |= 1 << kept[i]
        return out

    def local_mask(self, host_mask: int) -> int:
        out = 0
        for i, h in enumerate(self.kept):
            if host_mask >> h & 1:
                out |= 1 << i
        return out

    @property
    def host_mask(self) -> int:
        return mask_of(self.kept)


def _as_mask(g: Graph, vertices: Iterable[int] | int) -> int:
    if isinstance(vertices, int):
        if vertices & ~g.full:
            raise InputError("vertex mask out of range")
        return vertices
    m = 0
    for v in vertices:
        if not 0 <= v < g.n:
            raise InputError(f"vertex {v} out of range for n={g.n}")
        m |= 1 << v
    return m


def induced_subgraph(g: Graph, vertices: Iterable[int] | int) -> InducedView:
    """Induced subgraph on ``vertices`` (ids or a bitmask), relabelled densely."""
    s = _as_mask(g, vertices)
    kept = members(s)
    pos = {h: i for i, h in enumerate(kept)}
    adj = []
    for h in kept:
        a = 0
        for u in bits(g.adj[h] & s):
            a |= 1 << pos[u]
        adj.append(a)
    return InducedView(g, kept, Graph(len(kept), tuple(adj)))


def complement(g: Graph) -> Graph:
    full = g.full
    return Graph(g.n, tuple(full & ~a & ~(1 << v) for v, a in enumerate(g.adj)))


def component_masks(g: Graph, within: int | None = None) -> list[int]:
    """Connected components of ``g[within]`` as bitmasks, ordered by smallest id."""
    rest = g.full if within is None else within
    out = []
    while rest:
        seen = frontier = rest & -rest
        while frontier:
            nxt = 0
            for v in bits(frontier):
                nxt |= g.adj[v]
            frontier = nxt & rest & ~seen
            seen |= frontier
        out.append(seen)
        rest &= ~seen
    return out


def anticomponent_masks(g: Graph, within: int | None = None) -> list[int]:
    rest = g.full if within is None else within
    out = []
    while rest:
        seen = frontier = rest & -rest
        while frontier:
            nxt = 0
            for v in bits(frontier):
                nxt |= rest & ~g.adj[v]
            frontier = nxt & ~seen
            seen |= frontier
        out.append(seen)
        rest &= ~seen
    return out


def components(g: Graph) -> list[VertexSet]:
    return [members(c) for c in component_masks(g)]


def anticomponents(g: Graph) -> list[VertexSet]:
    return [members(c) for c in anticomponent_masks(g)]


def is_connected(g: Graph, within: int | None = None) -> bool:
    return len(component_masks(g, within)) <= 1


def neighborhood(g: Graph, v: int) -> VertexSet:
    return members(g.adj[v])


def closed_neighborhood(g: Graph, v: int) -> VertexSet:
    return members(g.adj[v] | 1 << v)


def anti_neighborhood(g: Graph, v: int) -> VertexSet:
    return members(g.full & ~g.adj[v] & ~(1 << v))


def shortest_path(g: Graph, src: int, dst: int, allowed: int) -> list[int] | None:
    """BFS path from ``src`` to ``dst`` using only vertices in ``allowed``.

    Both endpoints must be in ``allowed``. Smallest-id parents give a
    deterministic path.
    """
    if src == dst:
        return [src]
    parent = {src: None}
    seen = 1 << src
    frontier = [src]
    while frontier:
        nxt = []
        for v in frontier:
            for u in bits(g.adj[v] & allowed & ~seen):
                seen |= 1 << u
                parent[u] = v
                if u == dst:
                    path = [u]
                    while parent[path[-1]] is not None:
                        path.append(parent[path[-1]])
                    return path[::-1]
                nxt.append(u)
        frontier = sorted(nxt)
    return None


# -- DIMACS -------------------------------------------------------------------

def parse_dimacs(text: str, name=None) -> Graph:
    """Parse the DIMACS ``edge`` format (1-based ids)."""
    n = None
    declared_m = None
    edges = []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line[0] == "c":
            continue
        tok = line.split()
        if tok[0] == "p":
            if n is not None:
                raise InputError(f"line {lineno}: duplicate problem line")
            if len(tok) != 4 or tok[1] not in ("edge", "col"):
                raise InputError(f"line {lineno}: expected 'p edge <n> <m>'")
            try:
                n, declared_m = int(tok[2]), int(tok[3])
            except ValueError:
                raise InputError(f"line {lineno}: non-integer header") from None
            if n < 0 or declared_m < 0:
                raise InputError(f"line {lineno}: negative header value")
        elif tok[0] == "e":
            if n is None:
                raise InputError(f"line {lineno}: edge before problem line")
            if len(tok) != 3:
                raise InputError(f"line {lineno}: expected 'e <u> <v>'")
            try:
                u, v = int(tok[1]) - 1, int(tok[2]) - 1
            except ValueError:
                raise InputError(f"line {lineno}: non-integer vertex id") from None
            if not (0 <= u < n and 0 <= v < n) or u == v:
                raise InputError(f"line {lineno}: bad edge {tok[1]} {tok[2]}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise InputError(f"line {lineno}: duplicate edge {tok[1]} {tok[2]}")
            seen.add(key)
            edges.append(key)
        else:
            raise InputError(f"line {lineno}: unknown line type {tok[0]!r}")
    if n is None:
        raise InputError("missing problem line")
    if declared_m != len(edges):
        raise InputError(f"header declares {declared_m} edges, found {len(edges)}")
    return Graph.from_edges(n, edges, name=name)


def format_dimacs(g: Graph, comments: Sequence[str] = ()) -> str:
    lines = [f"c {c}" for c in comments]
    edges = g.edges()
    lines.append(f"p edge {g.n} {len(edges)}")
    lines.extend(f"e {u + 1} {v + 1}" for u, v in sorted(edges))
    return "\n".join(lines) + "\n"


def read_dimacs(path) -> Graph:
    p = Path(path)
    return parse_dimacs(p.read_text(), name=p.stem)


def write_dimacs(g: Graph, path, comments: Sequence[str] = ()) -> None:
    Path(path).write_text(format_dimacs(g, comments))


# -- small named graphs used across tests and fixtures ---------------------------

def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)], name=f"P{n}")


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)], name=f"C{n}")


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)], name=f"K{n}")


def empty_graph(n: int) -> Graph:
    return Graph(n, (0,) * n, name=f"E{n}")


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph.from_edges(a + b, [(i, a + j) for i in range(a) for j in range(b)], name=f"K{a},{b}")


def disjoint_union(g1: Graph, g2: Graph) -> Graph:
    edges = g1.edges() + [(u + g1.n, v + g1.n) for u, v in g2.edges()]
    return Graph.from_edges(g1.n + g2.n, edges)


def join(g1: Graph, g2: Graph) -> Graph:
    edges = g1.edges() + [(u + g1.n, v + g1.n) for u, v in g2.edges()]
    edges += [(u, g1.n + v) for u in range(g1.n) for v in range(g2.n)]
    return Graph.from_edges(g1.n + g2.n, edges)


def line_graph(g: Graph) -> Graph:
    """Line graph; vertex ``i`` is the ``i``-th edge of ``g.edges()``."""
    es = g.edges()
    out = []
    for i in range(len(es)):
        a, b = es[i]
        for j in range(i + 1, len(es)):
            c, d = es[j]
            if a == c or a == d or b == c or b == d:
                out.append((i, j))
    return Graph.from_edges(len(es), out, name=f"L({g.name or 'G'})")


def relabel(g: Graph, perm: Sequence[int]) -> Graph:
    """Graph where old vertex ``v`` becomes ``perm[v]``."""
    return Graph.from_edges(g.n, [(perm[u], perm[v]) for u, v in g.edges()], name=g.name)
