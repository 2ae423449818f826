"""Search for the decompositions the separator combiners consume.

Every finder works on a plain ``Graph``; ``decompose_step`` accepts a host
graph plus a vertex mask and returns a ``Decomposition`` in host ids, which
is what the recursive pipelines need. All scans go by increasing vertex id
and the first hit wins, so results are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .errors import InputError
from .graph import (Graph, InducedView, anticomponent_masks, bits, component_masks,
                    lowest, members)

# rule names, also used as tree labels
COMPONENT = "component"
ANTICOMPONENT = "anticomponent"
CUTSET = "cutset"
CLIQUE_CUTSET = "clique-cutset"
MODULE = "module"
NEIGHBORHOOD = "neighborhood"
ANTINEIGHBORHOOD = "antineighborhood"
AMALGAM = "amalgam"
KINDS = (COMPONENT, ANTICOMPONENT, CUTSET, CLIQUE_CUTSET, MODULE, NEIGHBORHOOD,
         ANTINEIGHBORHOOD, AMALGAM)

NEARLY = (COMPONENT, ANTICOMPONENT, MODULE, CLIQUE_CUTSET, ANTINEIGHBORHOOD)
CAPFREE = (COMPONENT, ANTICOMPONENT, AMALGAM)


def _lift(view: InducedView | None, mask: int) -> int:
    return mask if view is None else view.lift_mask(mask)


def _complete(g: Graph, a: int, b: int) -> bool:
    return all(g.adj[v] & b == b & ~(1 << v) for v in bits(a))


def _anticomplete(g: Graph, a: int, b: int) -> bool:
    return all(not g.adj[v] & b for v in bits(a))


@dataclass(frozen=True)
class AmalgamSplit:
    b1: int
    a1: int
    c: int
    a2: int
    b2: int

    @property
    def ground(self) -> int:
        return self.b1 | self.a1 | self.c | self.a2 | self.b2

    def parts(self) -> dict:
        return {k: members(getattr(self, k)) for k in ("b1", "a1", "c", "a2", "b2")}

    def violations(self, g: Graph, ground: int | None = None) -> list[str]:
        """Every broken amalgam condition, by re-checking adjacency directly."""
        out = []
        sets = [self.b1, self.a1, self.c, self.a2, self.b2]
        union = 0
        for s in sets:
            if union & s:
                out.append("parts overlap")
            union |= s
        if ground is not None and union != ground:
            out.append("parts do not cover the vertex set")
        if not self.a1 or not self.a2:
            out.append("A1 and A2 must be non-empty")
        if (self.a1 | self.b1).bit_count() < 2 or (self.a2 | self.b2).bit_count() < 2:
            out.append("each side needs at least two vertices")
        if not g.is_clique_mask(self.c):
            out.append("C is not a clique")
        if not _complete(g, self.c, self.a1 | self.a2):
            out.append("C is not complete to A1 and A2")
        if not _complete(g, self.a1, self.a2):
            out.append("A1 is not complete to A2")
        if not _anticomplete(g, self.b1, self.a2 | self.b2):
            out.append("B1 is not anticomplete to A2 and B2")
        if not _anticomplete(g, self.b2, self.a1 | self.b1):
            out.append("B2 is not anticomplete to A1 and B1")
        return out

    def check(self, g: Graph, ground: int | None = None) -> bool:
        return not self.violations(g, g.full if ground is None else ground)

    def lift(self, view: InducedView) -> "AmalgamSplit":
        return AmalgamSplit(*(view.lift_mask(s) for s in (self.b1, self.a1, self.c, self.a2, self.b2)))

    def swapped(self) -> "AmalgamSplit":
        return AmalgamSplit(self.b2, self.a2, self.c, self.a1, self.b1)


@dataclass(frozen=True)
class Decomposition:
    """A decomposition of ``g[ground]`` into the blocks ``g1`` and ``g2`` (masks).

    ``parts`` holds the kind-specific payload, all as masks or vertex ids:
    component/cutset ``(A, C, B)``, anticomponent ``(A, B)``, module
    ``(M, m)``, (anti)neighborhood ``(v,)``, amalgam ``(split, a1, a2)``.
    """

    kind: str
    parts: tuple
    ground: int
    g1: int
    g2: int
    notes: dict = field(default_factory=dict, compare=False)

    @property
    def g1_vertices(self) -> tuple:
        return members(self.g1)

    @property
    def g2_vertices(self) -> tuple:
        return members(self.g2)

    def violations(self, g: Graph) -> list[str]:
        out = []
        p, k = self.parts, self.kind
        covered = self.g1 | self.g2
        if k in (NEIGHBORHOOD, ANTINEIGHBORHOOD):
            covered |= 1 << p[0]
        if covered != self.ground:
            out.append("blocks do not cover the ground set")
        if self.g1 == self.ground or self.g2 == self.ground:
            out.append("a block is not proper")
        if k in (COMPONENT, CUTSET, CLIQUE_CUTSET):
            a, c, b = p
            if not a or not b or a & b or c & (a | b) or a | b | c != self.ground:
                out.append("bad (A, C, B) partition")
            if not _anticomplete(g, a, b):
                out.append("A is not anticomplete to B")
            if k == COMPONENT and c:
                out.append("component split with non-empty C")
            if k == CLIQUE_CUTSET and not g.is_clique_mask(c):
                out.append("cutset is not a clique")
            if (self.g1, self.g2) != (a | c, b | c):
                out.append("blocks do not match A+C, B+C")
        elif k == ANTICOMPONENT:
            a, b = p
            if not a or not b or a & b or a | b != self.ground:
                out.append("bad (A, B) partition")
            if not _complete(g, a, b):
                out.append("A is not complete to B")
            if (self.g1, self.g2) != (a, b):
                out.append("blocks do not match A, B")
        elif k == MODULE:
            mm, m = p
            size = mm.bit_count()
            if not mm >> m & 1 or mm & ~self.ground or not 2 <= size < self.ground.bit_count():
                out.append("module is trivial or misplaced")
            for x in bits(self.ground & ~mm):
                hit = g.adj[x] & mm
                if hit and hit != mm:
                    out.append(f"vertex {x} splits the module")
                    break
            if (self.g1, self.g2) != (mm, (self.ground & ~mm) | 1 << m):
                out.append("blocks do not match M, m + rest")
        elif k in (NEIGHBORHOOD, ANTINEIGHBORHOOD):
            (v,) = p
            nv = g.adj[v] & self.ground
            second = nv if k == NEIGHBORHOOD else self.ground & ~nv & ~(1 << v)
            if (self.g1, self.g2) != (self.ground & ~(1 << v), second):
                out.append("blocks do not match the vertex rule")
        elif k == AMALGAM:
            split, a1, a2 = p
            out += split.violations(g, self.ground)
            if not split.a1 >> a1 & 1 or not split.a2 >> a2 & 1:
                out.append("a1/a2 outside A1/A2")
            if (self.g1, self.g2) != (split.b1 | split.a1 | split.c | 1 << a2,
                                      1 << a1 | split.c | split.a2 | split.b2):
                out.append("blocks do not match the amalgam split")
        else:
            out.append(f"unknown kind {k!r}")
        return out

    def check(self, g: Graph) -> bool:
        return not self.violations(g)


# -- modules -----------------------------------------------------------------------

def module_closure(g: Graph, seed: int, within: int | None = None) -> int:
    """Smallest module of ``g[within]`` containing ``seed``."""
    s = g.full if within is None else within
    mm = seed
    while True:
        any_adj = 0
        all_adj = s
        for v in bits(mm):
            any_adj |= g.adj[v]
            all_adj &= g.adj[v]
        splitters = any_adj & ~all_adj & s & ~mm
        if not splitters:
            return mm
        mm |= splitters


def find_nontrivial_module(g: Graph) -> int | None:
    """A module with ``2 <= |M| < n`` as a mask, or ``None`` when ``g`` is prime."""
    for u in range(g.n):
        for v in range(u + 1, g.n):
            mm = module_closure(g, 1 << u | 1 << v)
            if mm != g.full:
                return mm
    return None


def is_module(g: Graph, mm: int) -> bool:
    for x in bits(g.full & ~mm):
        hit = g.adj[x] & mm
        if hit and hit != mm:
            return False
    return True


# -- clique cutsets ------------------------------------------------------------------

def mcs_m(g: Graph):
    """Minimal elimination ordering by MCS-M.

    Returns ``(order, madj)``: ``order`` lists vertices in elimination order
    and ``madj[v]`` is the mask of neighbours of ``v`` in the minimal
    triangulation that come later in that order.
    """
    weight = [0] * g.n
    unnumbered = g.full
    picked = []
    madj = [0] * g.n
    while unnumbered:
        v = max(bits(unnumbered), key=lambda u: (weight[u], -u))
        picked.append(v)
        unnumbered &= ~(1 << v)
        raise_mask = 0
        for t in sorted({weight[u] for u in bits(unnumbered)}):
            # vertices reachable from v through unnumbered vertices of weight < t
            inner = 0
            for u in bits(unnumbered):
                if weight[u] < t:
                    inner |= 1 << u
            reach = 1 << v
            frontier = 1 << v
            while frontier:
                nxt = 0
                for x in bits(frontier):
                    nxt |= g.adj[x]
                frontier = nxt & inner & ~reach
                reach |= frontier
            touch = 0
            for x in bits(reach):
                touch |= g.adj[x]
            for u in bits(touch & unnumbered):
                if weight[u] == t:
                    raise_mask |= 1 << u
        for u in bits(raise_mask):
            weight[u] += 1
            madj[u] |= 1 << v
    return picked[::-1], madj


def find_clique_cutset(g: Graph):
    """``(A, C, B)`` masks with ``C`` a clique cutset, or ``None`` for an atom.

    Every clique minimal separator is a minimal separator of the minimal
    triangulation, and those are among the ``madj`` sets, so testing the
    ``madj`` sets in elimination order is complete.
    """
    if g.n and len(component_masks(g)) != 1:
        raise InputError("find_clique_cutset needs a connected graph")
    order, madj = mcs_m(g)
    seen = set()
    for x in order:
        c = madj[x]
        if c in seen:
            continue
        seen.add(c)
        if not g.is_clique_mask(c):
            continue
        comps = component_masks(g, g.full & ~c)
        if len(comps) < 2:
            continue
        a = min(comps, key=lambda m: (m.bit_count(), lowest(m)))
        return a, c, g.full & ~c & ~a
    return None


# -- amalgams ---------------------------------------------------------------------

B1, A1, C, A2, B2 = range(5)
LABELS = (B1, A1, C, A2, B2)
# label pairs that may not sit on an edge / on a non-edge
_BAD_ADJ = {(B1, A2), (B1, B2), (A1, B2)}
_BAD_NON = {(C, C), (C, A1), (C, A2), (A1, A2)}
_BAD_ADJ |= {(y, x) for x, y in _BAD_ADJ}
_BAD_NON |= {(y, x) for x, y in _BAD_NON}
_KILL_ADJ = [[y for y in LABELS if (x, y) in _BAD_ADJ] for x in LABELS]
_KILL_NON = [[y for y in LABELS if (x, y) in _BAD_NON] for x in LABELS]


class _Labeller:
    """Forward-checking search for a 5-labelling meeting the amalgam rules."""

    def __init__(self, g: Graph):
        self.g = g

    def solve(self, fixed: dict, use_b: bool = True) -> list | None:
        g = self.g
        # allowed[L]: vertices that may still take label L
        allowed = [g.full] * 5
        if not use_b:
            allowed[B1] = allowed[B2] = 0
        label = [None] * g.n
        state = self._assign_many(allowed, label, list(fixed.items()))
        if state is None:
            return None
        return self._search(*state)

    def _assign_many(self, allowed, label, todo):
        g = self.g
        allowed = list(allowed)
        label = list(label)
        while todo:
            v, lab = todo.pop()
            if label[v] is not None:
                if label[v] != lab:
                    return None
                continue
            if not allowed[lab] >> v & 1:
                return None
            label[v] = lab
            bit = 1 << v
            for other in LABELS:
                if other != lab:
                    allowed[other] &= ~bit
            nonadj = g.full & ~g.adj[v] & ~bit
            for y in _KILL_ADJ[lab]:
                allowed[y] &= ~g.adj[v]
            for y in _KILL_NON[lab]:
                allowed[y] &= ~nonadj
            # unit propagation on the unassigned vertices
            free = g.full & ~mask_assigned(label)
            seen_once = 0
            seen_twice = 0
            for lab2 in LABELS:
                seen_twice |= seen_once & allowed[lab2]
                seen_once |= allowed[lab2]
            if free & ~seen_once:
                return None
            for u in bits(free & ~seen_twice):
                if any(t[0] == u for t in todo):
                    continue
                todo.append((u, next(y for y in LABELS if allowed[y] >> u & 1)))
        return allowed, label

    def _search(self, allowed, label):
        g = self.g
        free = [v for v in range(g.n) if label[v] is None]
        if not free:
            return label if self._sizes_ok(label) else None
        if not self._sizes_possible(allowed, label):
            return None
        v = min(free, key=lambda u: (sum(allowed[y] >> u & 1 for y in LABELS), u))
        for lab in (B1, B2, A1, A2, C):
            if allowed[lab] >> v & 1:
                state = self._assign_many(allowed, label, [(v, lab)])
                if state is not None:
                    out = self._search(*state)
                    if out is not None:
                        return out
        return None

    @staticmethod
    def _sizes_ok(label) -> bool:
        side1 = sum(1 for x in label if x in (A1, B1))
        side2 = sum(1 for x in label if x in (A2, B2))
        return side1 >= 2 and side2 >= 2 and A1 in label and A2 in label

    @staticmethod
    def _sizes_possible(allowed, label) -> bool:
        side1 = allowed[A1] | allowed[B1]
        side2 = allowed[A2] | allowed[B2]
        for v, x in enumerate(label):
            if x in (A1, B1):
                side1 |= 1 << v
            elif x in (A2, B2):
                side2 |= 1 << v
        return side1.bit_count() >= 2 and side2.bit_count() >= 2


def mask_assigned(label) -> int:
    m = 0
    for v, x in enumerate(label):
        if x is not None:
            m |= 1 << v
    return m


def _split_from_labels(label) -> AmalgamSplit:
    parts = [0] * 5
    for v, x in enumerate(label):
        parts[x] |= 1 << v
    return AmalgamSplit(*parts)


def find_amalgam(g: Graph) -> AmalgamSplit | None:
    """First amalgam split found by seed enumeration, or ``None``.

    Seeds are an edge ``a1 a2`` (ordered) plus either a vertex ``b1`` of B1
    (necessarily a non-neighbour of ``a2``) or the case with both B sides
    empty. B1 may be taken non-empty up to swapping the two sides.
    """
    solver = _Labeller(g)
    for a1 in range(g.n):
        for a2 in bits(g.adj[a1]):
            for b1 in bits(g.full & ~g.adj[a2] & ~(1 << a2) & ~(1 << a1)):
                label = solver.solve({a1: A1, a2: A2, b1: B1})
                if label is not None:
                    return _split_from_labels(label)
    # both B sides empty: only possible when g is not anticonnected
    for a1 in range(g.n):
        for a2 in bits(g.adj[a1]):
            label = solver.solve({a1: A1, a2: A2}, use_b=False)
            if label is not None:
                return _split_from_labels(label)
    return None


# -- antineighbourhoods ----------------------------------------------------------------

def find_antineighborhood_vertex(g: Graph, leaf_test: Callable[[Graph], bool]) -> int | None:
    """Smallest ``v`` with ``leaf_test(g - N[v])``."""
    for v in range(g.n):
        rest = g.full & ~g.adj[v] & ~(1 << v)
        if leaf_test(g.induced(rest).graph):
            return v
    return None


# -- one step ------------------------------------------------------------------------

def _two_way(masks: list[int], ground: int) -> tuple[int, int]:
    a = masks[0]
    return a, ground & ~a


def decompose_step(g: Graph, policy=NEARLY, leaf_test: Callable[[Graph], bool] | None = None,
                   within: int | None = None) -> Decomposition | None:
    """First applicable rule of ``policy`` on ``g[within]``, in host ids.

    Complete graphs are leaves and get ``None``. ``leaf_test`` is needed only
    when the policy contains the antineighbourhood rule.
    """
    ground = g.full if within is None else within
    if g.is_clique_mask(ground):
        return None
    view = g.induced(ground) if ground != g.full else None
    h = g if view is None else view.graph
    for rule in policy:
        if rule == COMPONENT:
            comps = component_masks(g, ground)
            if len(comps) > 1:
                a, b = _two_way(comps, ground)
                return Decomposition(COMPONENT, (a, 0, b), ground, a, b)
        elif rule == ANTICOMPONENT:
            anti = anticomponent_masks(g, ground)
            if len(anti) > 1:
                a, b = _two_way(anti, ground)
                return Decomposition(ANTICOMPONENT, (a, b), ground, a, b)
        elif rule == MODULE:
            local = find_nontrivial_module(h)
            if local is not None:
                mm = _lift(view, local)
                m = lowest(mm)
                return Decomposition(MODULE, (mm, m), ground, mm, (ground & ~mm) | 1 << m)
        elif rule == CLIQUE_CUTSET:
            if len(component_masks(h)) != 1:
                continue
            found = find_clique_cutset(h)
            if found is not None:
                a, c, b = (_lift(view, x) for x in found)
                return Decomposition(CLIQUE_CUTSET, (a, c, b), ground, a | c, b | c)
        elif rule == ANTINEIGHBORHOOD:
            if leaf_test is None:
                raise InputError("antineighborhood rule needs a leaf test")
            local_v = find_antineighborhood_vertex(h, leaf_test)
            if local_v is not None:
                v = local_v if view is None else view.to_host(local_v)
                nv = g.adj[v] & ground
                return Decomposition(ANTINEIGHBORHOOD, (v,), ground, ground & ~(1 << v),
                                     ground & ~nv & ~(1 << v))
        elif rule == AMALGAM:
            split = find_amalgam(h)
            if split is not None:
                if view is not None:
                    split = split.lift(view)
                if not split.b1:
                    split = split.swapped()
                a1, a2 = lowest(split.a1), lowest(split.a2)
                g1 = split.b1 | split.a1 | split.c | 1 << a2
                g2 = 1 << a1 | split.c | split.a2 | split.b2
                return Decomposition(AMALGAM, (split, a1, a2), ground, g1, g2)
        else:
            raise InputError(f"unknown rule {rule!r}")
    return None
