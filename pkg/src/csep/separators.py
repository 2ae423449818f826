"""Cut families, base separators and the combiners for valid decompositions.

A cut is stored by its clique side ``W`` as a bitmask; the stable side is
``ground - W`` where ``ground`` is the vertex set the family lives on. Child
families are lifted into host ids before combining, so every combiner works
on the host graph with the blocks given as masks.

Each combiner emits one cut per input cut, so ``len(result) <= len(f1) +
len(f2)`` always holds; duplicates are merged.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

from .decompose import AmalgamSplit
from .errors import ClassAssumptionError, InputError
from .graph import Graph, InducedView, bits, complement, members
from .oracle import maximal_clique_masks

ALL_CUTS_MAX_N = 20
DISTANCE_MAX_D = 30


@dataclass(frozen=True)
class Cut:
    clique_side: tuple
    stable_side: tuple


@dataclass(frozen=True)
class CutFamily:
    """Set of cuts of ``ground`` (a subset of ``0..host_n-1``).

    ``raw_count`` counts cuts emitted before duplicates were merged;
    ``leaf_total`` is the sum of the base-family sizes this family was built
    from (the budget a decomposition tree is allowed).
    """

    host_n: int
    ground: int
    masks: frozenset
    provenance: str = ""
    raw_count: int = 0
    leaf_total: int = 0

    @classmethod
    def build(cls, host_n: int, ground: int, masks: Iterable[int], provenance: str = "",
              leaf_total: int | None = None) -> "CutFamily":
        emitted = list(masks)
        for w in emitted:
            if w & ~ground:
                raise InputError(f"cut {members(w)} leaves the ground set {members(ground)}")
        fs = frozenset(emitted)
        return cls(host_n, ground, fs, provenance, len(emitted),
                   len(fs) if leaf_total is None else leaf_total)

    def __len__(self) -> int:
        return len(self.masks)

    def sorted_masks(self) -> list[int]:
        return sorted(self.masks, key=members)

    def cuts(self) -> list[Cut]:
        return [Cut(members(w), members(self.ground & ~w)) for w in self.sorted_masks()]

    def __iter__(self):
        return iter(self.cuts())

    @property
    def dedup_savings(self) -> int:
        return self.raw_count - len(self.masks)

    def has_trivial_cuts(self) -> bool:
        return 0 in self.masks and self.ground in self.masks

    def with_trivial(self) -> "CutFamily":
        return CutFamily.build(self.host_n, self.ground, list(self.masks) + [0, self.ground],
                               self.provenance, self.leaf_total)

    def lift(self, view: InducedView) -> "CutFamily":
        """Re-express a family over ``view.graph`` in host ids."""
        if self.host_n != view.graph.n or self.ground != view.graph.full:
            raise InputError("family does not match the view it is lifted through")
        out = CutFamily.build(view.host.n, view.host_mask, (view.lift_mask(w) for w in self.masks),
                              self.provenance, self.leaf_total)
        return out

    def same_cuts(self, other: "CutFamily") -> bool:
        return self.ground == other.ground and self.masks == other.masks


def _mask(x) -> int:
    if isinstance(x, int):
        return x
    m = 0
    for v in x:
        m |= 1 << v
    return m


def _expect(g: Graph, f: CutFamily, ground: int, what: str) -> None:
    if f.host_n != g.n:
        raise InputError(f"{what}: family host has {f.host_n} vertices, graph has {g.n}")
    if f.ground != ground:
        raise InputError(f"{what}: family covers {members(f.ground)}, expected {members(ground)}")


def _anticomplete(g: Graph, a: int, b: int) -> bool:
    return all(not g.adj[v] & b for v in bits(a))


def _complete(g: Graph, a: int, b: int) -> bool:
    return all(g.adj[v] & b == b for v in bits(a))


# -- base separators ---------------------------------------------------------------

def all_cuts_fallback(g: Graph) -> CutFamily:
    """Every bipartition; a separator for any graph, refused above 20 vertices."""
    if g.n > ALL_CUTS_MAX_N:
        raise InputError(f"all-cuts fallback refused for n={g.n} > {ALL_CUTS_MAX_N}")
    return CutFamily.build(g.n, g.full, range(1 << g.n), "all-cuts")


def maxclique_separator(g: Graph) -> CutFamily:
    """Cuts ``K`` and ``K - v`` for every maximal clique ``K`` and ``v`` in ``K``.

    A disjoint pair (K0, S) extends to a maximal clique K meeting S in at
    most one vertex v; then (K, rest) or (K - v, rest) separates it.
    """
    masks = [0, g.full]
    for k in maximal_clique_masks(g):
        masks.append(k)
        masks.extend(k & ~(1 << v) for v in bits(k))
    return CutFamily.build(g.n, g.full, masks, "maxclique")


def _stable_subsets(g: Graph, within: int, size: int):
    """Stable subsets of ``within`` with at most ``size`` vertices (empty included)."""
    out = [0]

    def grow(s: int, cand: int, left: int) -> None:
        if not left:
            return
        for v in bits(cand):
            t = s | 1 << v
            out.append(t)
            grow(t, cand & ~g.adj[v] & ~((1 << (v + 1)) - 1), left - 1)

    grow(0, within, size)
    return out


def neighborhood_alpha_witness(g: Graph, k: int):
    """``(v, T)`` with ``T`` a stable set of size ``k + 1`` inside ``N(v)``, or ``None``."""
    for v in range(g.n):
        for t in _stable_subsets(g, g.adj[v], k + 1):
            if t.bit_count() == k + 1:
                return v, members(t)
    return None


def bounded_alpha_neighborhood_separator(g: Graph, k: int = 2) -> CutFamily:
    """Separator for graphs whose neighbourhoods have no stable set of size ``k + 1``.

    For a pair (K, S) with v in K, T = S & N(v) is stable with |T| <= k, and
    the cut N[v] - T separates them. Claw-free graphs are the case k = 2.
    """
    bad = neighborhood_alpha_witness(g, k)
    if bad is not None:
        v, t = bad
        raise ClassAssumptionError(
            f"vertex {v} has a stable set of size {k + 1} in its neighbourhood", witness=(v, t))
    masks = [0, g.full]
    for v in range(g.n):
        closed = g.adj[v] | 1 << v
        masks.extend(closed & ~t for t in _stable_subsets(g, g.adj[v], k))
    return CutFamily.build(g.n, g.full, masks, f"bounded-alpha(k={k})")


def bounded_alpha_size_bound(n: int, k: int) -> int:
    return n * sum(n ** j for j in range(k + 1)) + 2


def complement_separator(f: CutFamily) -> CutFamily:
    """Swap both sides of every cut: a separator of the complement graph."""
    return CutFamily.build(f.host_n, f.ground, (f.ground & ~w for w in f.masks),
                           f"complement({f.provenance})", f.leaf_total)


# -- combiners ---------------------------------------------------------------------

def _combined(g: Graph, ground: int, masks, provenance: str, f1: CutFamily, f2: CutFamily) -> CutFamily:
    return CutFamily.build(g.n, ground, masks, provenance, f1.leaf_total + f2.leaf_total)


def combine_cutset(g: Graph, f1: CutFamily, f2: CutFamily, a, c, b, kind: str = "cutset") -> CutFamily:
    """(W, W') from f1 becomes (W, W' + B); from f2, (W, W' + A)."""
    a, c, b = _mask(a), _mask(c), _mask(b)
    if not a or not b or a & b or a & c or b & c:
        raise InputError("cutset parts must be disjoint with A and B non-empty")
    if not _anticomplete(g, a, b):
        raise InputError("A is not anticomplete to B")
    _expect(g, f1, a | c, kind)
    _expect(g, f2, b | c, kind)
    return _combined(g, a | b | c, [*f1.masks, *f2.masks], kind, f1, f2)


def combine_component(g: Graph, f1: CutFamily, f2: CutFamily, a, b) -> CutFamily:
    return combine_cutset(g, f1, f2, a, 0, b, kind="component")


def combine_anticomponent(g: Graph, f1: CutFamily, f2: CutFamily, a, b) -> CutFamily:
    """(W, W') from f1 becomes (W + B, W'); from f2, (W + A, W')."""
    a, b = _mask(a), _mask(b)
    if not a or not b or a & b:
        raise InputError("anticomponent parts must be disjoint and non-empty")
    if not _complete(g, a, b):
        raise InputError("A is not complete to B")
    _expect(g, f1, a, "anticomponent")
    _expect(g, f2, b, "anticomponent")
    masks = [w | b for w in f1.masks] + [w | a for w in f2.masks]
    return _combined(g, a | b, masks, "anticomponent", f1, f2)


def combine_anticomponent_via_complement(g: Graph, f1: CutFamily, f2: CutFamily, a, b) -> CutFamily:
    """Same family, built by passing to the complement and back."""
    a, b = _mask(a), _mask(b)
    if not _complete(g, a, b):
        raise InputError("A is not complete to B")
    gc = complement(g)
    joined = combine_component(gc, complement_separator(f1), complement_separator(f2), a, b)
    out = complement_separator(joined)
    return CutFamily.build(g.n, out.ground, out.masks, "anticomponent", f1.leaf_total + f2.leaf_total)


def combine_module(g: Graph, f1: CutFamily, f2: CutFamily, module, m: int, a, b) -> CutFamily:
    """f1 lives on M; f2 on {m} + A + B (A complete, B anticomplete to M)."""
    mm, a, b = _mask(module), _mask(a), _mask(b)
    if not mm >> m & 1:
        raise InputError(f"representative {m} is not in the module")
    if mm & (a | b) or a & b:
        raise InputError("module parts overlap")
    if not _complete(g, a, mm) or not _anticomplete(g, b, mm):
        raise InputError("module property violated")
    _expect(g, f1, mm, "module")
    _expect(g, f2, a | b | 1 << m, "module")
    masks = [w | a for w in f1.masks]
    masks += [w | mm if w >> m & 1 else w for w in f2.masks]
    return _combined(g, mm | a | b, masks, "module", f1, f2)


def combine_neighborhood(g: Graph, f1: CutFamily, f2: CutFamily, v: int) -> CutFamily:
    """f1 on G - v, f2 on G[N(v)]: (W, W' + v) and (W + v, W' + B)."""
    ground = f1.ground | 1 << v
    if f1.ground >> v & 1:
        raise InputError(f"f1 must not contain {v}")
    nv = g.adj[v] & ground
    _expect(g, f1, ground & ~(1 << v), "neighborhood")
    _expect(g, f2, nv, "neighborhood")
    masks = list(f1.masks) + [w | 1 << v for w in f2.masks]
    return _combined(g, ground, masks, "neighborhood", f1, f2)


def combine_antineighborhood(g: Graph, f1: CutFamily, f2: CutFamily, v: int) -> CutFamily:
    """f1 on G - v, f2 on G - N[v]: (W + v, W') and (W + N(v), W' + v)."""
    ground = f1.ground | 1 << v
    if f1.ground >> v & 1:
        raise InputError(f"f1 must not contain {v}")
    nv = g.adj[v] & ground
    _expect(g, f1, ground & ~(1 << v), "antineighborhood")
    _expect(g, f2, ground & ~nv & ~(1 << v), "antineighborhood")
    masks = [w | 1 << v for w in f1.masks] + [w | nv for w in f2.masks]
    return _combined(g, ground, masks, "antineighborhood", f1, f2)


def combine_antineighborhood_via_complement(g: Graph, f1: CutFamily, f2: CutFamily, v: int) -> CutFamily:
    """The neighbourhood construction applied in the complement, then swapped back."""
    gc = complement(g)
    joined = combine_neighborhood(gc, complement_separator(f1), complement_separator(f2), v)
    out = complement_separator(joined)
    return CutFamily.build(g.n, out.ground, out.masks, "antineighborhood", f1.leaf_total + f2.leaf_total)


def combine_amalgam(g: Graph, f1: CutFamily, f2: CutFamily, split: AmalgamSplit, a1: int, a2: int) -> CutFamily:
    """f1 on B1+A1+C+a2, f2 on a1+C+A2+B2.

    A cut of f1 with a2 on the clique side gains A2 there and B2 on the
    stable side; otherwise A2 + B2 go to the stable side. Symmetric for f2.
    """
    problems = split.violations(g)
    if problems:
        raise InputError("invalid amalgam split: " + "; ".join(problems))
    if not split.a1 >> a1 & 1 or not split.a2 >> a2 & 1:
        raise InputError("a1/a2 must be taken from A1/A2")
    side1 = split.b1 | split.a1 | split.c
    side2 = split.b2 | split.a2 | split.c
    _expect(g, f1, side1 | 1 << a2, "amalgam")
    _expect(g, f2, side2 | 1 << a1, "amalgam")
    masks = [w | split.a2 if w >> a2 & 1 else w for w in f1.masks]
    masks += [w | split.a1 if w >> a1 & 1 else w for w in f2.masks]
    return _combined(g, split.ground, masks, "amalgam", f1, f2)


# -- constructions built on the combiners ---------------------------------------------

LeafSolver = Callable[[Graph], CutFamily]


def degeneracy_separator(g: Graph, ordering, leaf_solver: LeafSolver) -> CutFamily:
    """Fold neighbourhood decompositions along ``ordering``.

    At step i the graph on v_i..v_n splits into the suffix v_{i+1}..v_n and
    the forward neighbourhood of v_i; the latter is handed to ``leaf_solver``.
    """
    order = list(ordering)
    if sorted(order) != list(range(g.n)):
        raise InputError("ordering must be a permutation of the vertices")
    if g.n == 0:
        return leaf_solver(g)
    suffix = 1 << order[-1]
    view = g.induced(suffix)
    family = leaf_solver(view.graph).lift(view)
    for v in reversed(order[:-1]):
        view = g.induced(g.adj[v] & suffix)
        right = leaf_solver(view.graph).lift(view)
        family = combine_neighborhood(g, family, right, v)
        suffix |= 1 << v
    return CutFamily.build(g.n, g.full, family.masks, "degeneracy", family.leaf_total)


def distance_expansion(g: Graph, f_prime: CutFamily, d) -> CutFamily:
    """Extend a separator of G - D by every split of D: (W + X, W' + D - X)."""
    dm = _mask(d)
    if dm.bit_count() > DISTANCE_MAX_D:
        raise InputError(f"|D| = {dm.bit_count()} exceeds {DISTANCE_MAX_D}")
    if f_prime.ground & dm:
        raise InputError("D must be disjoint from the family's ground set")
    if f_prime.host_n != g.n:
        raise InputError("family host mismatch")
    ds = members(dm)
    subsets = [0]
    for v in ds:
        subsets += [x | 1 << v for x in subsets]
    masks = [w | x for w in f_prime.masks for x in subsets]
    return CutFamily.build(g.n, f_prime.ground | dm, masks, "distance",
                           f_prime.leaf_total * len(subsets))


# -- cut file format --------------------------------------------------------------------

def format_cut_file(f: CutFamily) -> str:
    if f.ground != (1 << f.host_n) - 1:
        raise InputError("only families on the whole vertex set can be written")
    prov = f.provenance.replace("\n", " ") or "-"
    lines = [f"s {f.host_n} {len(f)} {prov}"]
    for w in f.sorted_masks():
        ids = " ".join(str(v + 1) for v in bits(w))
        lines.append(f"c {ids}".rstrip())
    return "\n".join(lines) + "\n"


def parse_cut_file(text: str) -> CutFamily:
    header = None
    masks = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        tok = line.split()
        if tok[0] == "s":
            if header is not None or len(tok) < 3:
                raise InputError(f"line {lineno}: bad header")
            try:
                n, count = int(tok[1]), int(tok[2])
            except ValueError:
                raise InputError(f"line {lineno}: non-integer header") from None
            header = (n, count, line.split(None, 3)[3] if len(tok) > 3 else "")
        elif tok[0] == "c":
            if header is None:
                raise InputError(f"line {lineno}: cut before header")
            w = 0
            for t in tok[1:]:
                try:
                    v = int(t) - 1
                except ValueError:
                    raise InputError(f"line {lineno}: non-integer id {t!r}") from None
                if not 0 <= v < header[0]:
                    raise InputError(f"line {lineno}: id {t} out of range")
                w |= 1 << v
            masks.append(w)
        else:
            raise InputError(f"line {lineno}: unknown line type {tok[0]!r}")
    if header is None:
        raise InputError("missing 's' header line")
    n, _count, prov = header
    return CutFamily.build(n, (1 << n) - 1, masks, prov)


def read_cut_file(path) -> CutFamily:
    from pathlib import Path
    return parse_cut_file(Path(path).read_text())


def write_cut_file(f: CutFamily, path) -> None:
    from pathlib import Path
    Path(path).write_text(format_cut_file(f))
