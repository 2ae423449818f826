"""Recursive separator pipelines built on decomposition trees.

A tree node owns a vertex mask ``phi`` of the host graph. Internal nodes
carry the decomposition used there and a trio label; leaves carry the
family produced by their solver. ``assemble`` folds leaf families upward
with the matching combiners.
"""

from __future__ import annotations

import json
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable

from . import decompose as dec
from .decompose import Decomposition, decompose_step
from .errors import ClassAssumptionError, InputError
from .graph import Graph, bits, lowest, members
from .recognition import (contains_fixed_induced, find_apple, find_cap, has_long_hole,
                          is_basic_cap_free, is_chordal, is_claw_free)
from .separators import (CutFamily, bounded_alpha_neighborhood_separator, combine_amalgam,
                         combine_anticomponent, combine_cutset, combine_module,
                         combine_neighborhood, combine_antineighborhood, maxclique_separator)

# long-hole spot checks get expensive on big dense graphs
SPOT_CHECK_MAX_N = 40


@dataclass
class Node:
    id: int
    phi: int
    rule: str
    label: tuple | None = None
    children: tuple = ()
    decomposition: Decomposition | None = None
    subtree: "DecompositionTree | None" = None

    @property
    def is_leaf(self) -> bool:
        return not self.children


@dataclass
class DecompositionTree:
    host: Graph
    nodes: list = field(default_factory=list)
    root: int = 0

    def leaves(self) -> list[Node]:
        return [t for t in self.nodes if t.is_leaf]

    def internal(self) -> list[Node]:
        return [t for t in self.nodes if not t.is_leaf]

    @property
    def leaf_count(self) -> int:
        return len(self.leaves())

    @property
    def internal_count(self) -> int:
        return len(self.internal())

    def rule_counts(self) -> dict:
        c = Counter(t.rule for t in self.nodes)
        for t in self.nodes:
            if t.subtree is not None:
                c.update(t.subtree.rule_counts())
        return dict(sorted(c.items()))

    def to_records(self) -> list[dict]:
        out = []
        for t in self.nodes:
            rec = {
                "id": t.id,
                "rule": t.rule,
                "phi": [v + 1 for v in bits(t.phi)],
                "label": None if t.label is None else [v + 1 for v in t.label],
                "children": list(t.children),
            }
            if t.subtree is not None:
                rec["subtree"] = t.subtree.to_records()
            out.append(rec)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_records(), indent=1) + "\n"

    def violations(self, leaf_tests: dict | None = None) -> list[str]:
        """Structural checks: root covers V, blocks match, leaves pass their tests."""
        g = self.host
        out = []
        if not self.nodes or self.nodes[self.root].phi != g.full:
            out.append("root does not cover the vertex set")
        for t in self.nodes:
            if t.is_leaf:
                test = (leaf_tests or {}).get(t.rule)
                if test is not None and not test(g.induced(t.phi).graph):
                    out.append(f"leaf {t.id} fails its {t.rule} test")
                continue
            if len(t.children) != 2 or t.decomposition is None:
                out.append(f"node {t.id} is not binary")
                continue
            d = t.decomposition
            s1, s2 = (self.nodes[c] for c in t.children)
            if d.ground != t.phi or (s1.phi, s2.phi) != (d.g1, d.g2):
                out.append(f"node {t.id}: children do not match the decomposition")
            out += [f"node {t.id}: {p}" for p in d.violations(g)]
        return out


# -- combining ---------------------------------------------------------------------

def combine(g: Graph, d: Decomposition, f1: CutFamily, f2: CutFamily) -> CutFamily:
    k, p = d.kind, d.parts
    if k in (dec.COMPONENT, dec.CUTSET, dec.CLIQUE_CUTSET):
        return combine_cutset(g, f1, f2, *p, kind=k)
    if k == dec.ANTICOMPONENT:
        return combine_anticomponent(g, f1, f2, *p)
    if k == dec.MODULE:
        mm, m = p
        rest = d.ground & ~mm
        a = 0
        for x in bits(rest):
            if g.adj[x] >> m & 1:
                a |= 1 << x
        return combine_module(g, f1, f2, mm, m, a, rest & ~a)
    if k == dec.NEIGHBORHOOD:
        return combine_neighborhood(g, f1, f2, p[0])
    if k == dec.ANTINEIGHBORHOOD:
        return combine_antineighborhood(g, f1, f2, p[0])
    if k == dec.AMALGAM:
        return combine_amalgam(g, f1, f2, *p)
    raise InputError(f"no combiner for {k!r}")


def assemble(tree: DecompositionTree, leaf_families: dict) -> CutFamily:
    """Fold leaf families (keyed by node id, in host ids) up to the root."""
    g = tree.host

    def fold(i: int) -> CutFamily:
        t = tree.nodes[i]
        if t.is_leaf:
            try:
                f = leaf_families[i]
            except KeyError:
                raise InputError(f"no family for leaf {i}") from None
            if f.ground != t.phi:
                raise InputError(f"family for leaf {i} is not on its vertex set")
            return f
        return combine(g, t.decomposition, fold(t.children[0]), fold(t.children[1]))

    return fold(tree.root)


# -- labels ------------------------------------------------------------------------

def _first_nonedge(g: Graph, within: int):
    for u in bits(within):
        rest = within & ~g.adj[u] & ~((1 << (u + 1)) - 1)
        if rest:
            return u, lowest(rest)
    return None


def trio_label(g: Graph, d: Decomposition) -> tuple:
    """Label of an internal node, chosen as in the injectivity argument."""
    k, p = d.kind, d.parts
    if k in (dec.COMPONENT, dec.CUTSET, dec.CLIQUE_CUTSET):
        a, _c, b = p
        return tuple(sorted((lowest(a), lowest(b))))
    if k == dec.ANTICOMPONENT:
        a, b = p
        pair = _first_nonedge(g, a)
        other = b
        if pair is None:
            pair, other = _first_nonedge(g, b), a
        if pair is None:
            raise InputError("anticomponent split of a clique")
        return tuple(sorted((*pair, lowest(other))))
    if k == dec.MODULE:
        mm, _m = p
        u = lowest(mm)
        v = lowest(mm & ~(1 << u))
        x = lowest(d.ground & ~mm & ~g.adj[u])
        return tuple(sorted((u, v, x)))
    if k == dec.ANTINEIGHBORHOOD:
        x = p[0]
        v = lowest(d.ground & ~g.adj[x] & ~(1 << x))
        return tuple(sorted((x, v)))
    if k == dec.AMALGAM:
        split = p[0]
        if split.b1:
            b, far = split.b1, split.a2 | split.b2
        else:
            b, far = split.b2, split.a1 | split.b1
        u = lowest(far)
        v = lowest(far & ~(1 << u))
        return tuple(sorted((lowest(b), u, v)))
    raise InputError(f"no label rule for {k!r}")


def is_trio(g: Graph, label) -> bool:
    m = 0
    for v in label:
        m |= 1 << v
    return len(label) <= 3 and not g.is_clique_mask(m)


def label_audit(tree: DecompositionTree, g: Graph | None = None) -> dict:
    """Check the two sufficient conditions for injective labels, node by node."""
    g = tree.host if g is None else g
    broken_label = []   # label missing, not a trio, or not inside phi
    not_split = []      # label survives inside a child
    shared_trio = []    # both children non-leaf and sharing a non-edge
    for t in tree.internal():
        lab = t.label
        lm = sum(1 << v for v in lab) if lab else 0
        if not lab or not is_trio(g, lab) or lm & ~t.phi:
            broken_label.append(t.id)
            continue
        s1, s2 = (tree.nodes[c] for c in t.children)
        if lm & ~s1.phi == 0 or lm & ~s2.phi == 0:
            not_split.append(t.id)
        if not s1.is_leaf and not s2.is_leaf and not g.is_clique_mask(s1.phi & s2.phi):
            shared_trio.append(t.id)
    labels = [t.label for t in tree.internal()]
    injective = len(set(labels)) == len(labels)
    n = g.n
    return {
        "conditions_hold": not (broken_label or not_split or shared_trio),
        "injective": injective,
        "broken_labels": broken_label,
        "labels_not_split": not_split,
        "shared_trios": shared_trio,
        "internal": len(labels),
        "within_cube_bound": len(labels) <= n ** 3,
    }


# -- leaf solving --------------------------------------------------------------------

@dataclass
class LeafResult:
    family: CutFamily
    tag: str
    subtree: DecompositionTree | None = None


LeafSolver = Callable[[Graph], LeafResult]


def _maxclique_leaf(tag: str) -> LeafSolver:
    return lambda h: LeafResult(maxclique_separator(h), tag)


def _bounded_alpha_leaf(h: Graph) -> LeafResult:
    return LeafResult(bounded_alpha_neighborhood_separator(h, 2), "claw-free")


def _build(g: Graph, grow) -> tuple[DecompositionTree, dict]:
    """Preorder tree construction; ``grow(phi)`` returns a Decomposition or a LeafResult."""
    tree = DecompositionTree(g)
    leaf_families = {}

    def visit(phi: int) -> int:
        node = Node(len(tree.nodes), phi, "")
        tree.nodes.append(node)
        step = grow(phi)
        if isinstance(step, LeafResult):
            view = g.induced(phi)
            node.rule = step.tag
            node.subtree = step.subtree
            leaf_families[node.id] = step.family.lift(view)
            return node.id
        node.rule = step.kind
        node.decomposition = step
        node.label = trio_label(g, step)
        left = visit(step.g1)
        right = visit(step.g2)
        node.children = (left, right)
        return node.id

    visit(g.full)
    return tree, leaf_families


def engine_nearly(g: Graph, leaf_test: Callable[[Graph], bool], leaf_solver: LeafSolver,
                  leaf_tag: str = "leaf") -> tuple[DecompositionTree, CutFamily]:
    """Decompose until every piece is in the leaf class or a clique.

    Rule order: component, anticomponent, module, clique cutset,
    antineighbourhood into the leaf class.
    """
    def grow(phi: int):
        h = g.induced(phi).graph
        if leaf_test(h):
            res = leaf_solver(h)
            if isinstance(res, CutFamily):
                res = LeafResult(res, leaf_tag)
            return LeafResult(res.family, res.tag or leaf_tag, res.subtree)
        if h.is_complete():
            return LeafResult(maxclique_separator(h), "clique")
        d = decompose_step(g, dec.NEARLY, leaf_test, within=phi)
        if d is None:
            raise ClassAssumptionError(
                "prime atom is not nearly in the leaf class", witness=members(phi))
        return d

    tree, leaves = _build(g, grow)
    return tree, assemble(tree, leaves)


# -- reports -----------------------------------------------------------------------

@dataclass
class PipelineReport:
    pipeline: str
    n: int
    m: int
    sep_size: int
    tree_internal: int
    tree_leaves: int
    rule_counts: dict
    injective: bool
    dedup_savings: int
    leaf_total: int
    build_ms: float = 0.0

    def as_dict(self, timing: bool = True) -> dict:
        d = dict(self.__dict__)
        d["build_ms"] = round(self.build_ms, 3) if timing else 0
        return d

    def json_line(self, timing: bool = True) -> str:
        return json.dumps(self.as_dict(timing), sort_keys=True)


def _all_audits_injective(tree: DecompositionTree) -> bool:
    a = label_audit(tree)
    ok = a["injective"] and a["conditions_hold"] and a["within_cube_bound"]
    for t in tree.leaves():
        if t.subtree is not None:
            ok = ok and _all_audits_injective(t.subtree)
    return ok


def make_report(name: str, g: Graph, tree: DecompositionTree, family: CutFamily, started: float) -> PipelineReport:
    return PipelineReport(
        pipeline=name, n=g.n, m=g.m, sep_size=len(family),
        tree_internal=tree.internal_count, tree_leaves=tree.leaf_count,
        rule_counts=tree.rule_counts(), injective=_all_audits_injective(tree),
        dedup_savings=family.raw_count - len(family), leaf_total=family.leaf_total,
        build_ms=(time.perf_counter() - started) * 1000.0,
    )


@dataclass
class PipelineResult:
    report: PipelineReport
    family: CutFamily
    tree: DecompositionTree

    def __iter__(self):
        # allows ``report, family = pipeline(g)``
        return iter((self.report, self.family))


def single_leaf(g: Graph, res: LeafResult) -> tuple[DecompositionTree, CutFamily]:
    tree = DecompositionTree(g, [Node(0, g.full, res.tag, subtree=res.subtree)])
    return tree, res.family


# -- apple-free ----------------------------------------------------------------------

def _free_of(name: str) -> Callable[[Graph], bool]:
    return lambda h: contains_fixed_induced(h, name) is None


def _d6_e6_free(h: Graph) -> bool:
    return contains_fixed_induced(h, "D6") is None and contains_fixed_induced(h, "E6") is None


def _spot_check_holes(h: Graph, k: int, where: str, verify: bool) -> None:
    if verify and h.n <= SPOT_CHECK_MAX_N:
        hole = has_long_hole(h, k)
        if hole is not None:
            raise ClassAssumptionError(f"{where}: hole of length {len(hole)} >= {k}", witness=hole)


def _layer_chordal(h: Graph) -> LeafResult:
    # graphs here avoid long holes of length >= 5
    tree, fam = engine_nearly(h, is_chordal, _maxclique_leaf("chordal"), "chordal")
    return LeafResult(fam, "nearly-chordal", tree)


def _make_layers(verify: bool):
    def l1(h: Graph) -> LeafResult:
        _spot_check_holes(h, 5, "C5-free layer", verify)
        return _layer_chordal(h)

    def l2(h: Graph) -> LeafResult:
        _spot_check_holes(h, 6, "C6-free layer", verify)
        tree, fam = engine_nearly(h, _free_of("C5"), l1, "C5-free")
        return LeafResult(fam, "nearly-C5-free", tree)

    def l3(h: Graph) -> LeafResult:
        if is_claw_free(h):
            return _bounded_alpha_leaf(h)
        if verify:
            c6 = contains_fixed_induced(h, "C6")
            if c6 is not None:
                raise ClassAssumptionError("piece is neither claw-free nor C6-free", witness=c6)
        return l2(h)

    return l1, l2, l3


def applefree_separator(g: Graph, verify_assumptions: bool = True) -> PipelineResult:
    """Layered separator for apple-free graphs.

    Claw-free inputs use the bounded neighbourhood independence separator.
    Otherwise the engine peels D6/E6-free pieces, each solved by the claw-free
    separator or by the C5-free engine, whose pieces go to the chordal engine.
    """
    started = time.perf_counter()
    if verify_assumptions:
        apple = find_apple(g)
        if apple is not None:
            raise ClassAssumptionError("graph contains an apple", witness=apple)
    if is_claw_free(g):
        tree, fam = single_leaf(g, _bounded_alpha_leaf(g))
    else:
        _spot_check_holes(g, 7, "non-claw-free apple-free graph", verify_assumptions)
        _l1, _l2, l3 = _make_layers(verify_assumptions)
        tree, fam = engine_nearly(g, _d6_e6_free, l3, "D6E6-free")
    fam = CutFamily.build(g.n, g.full, fam.masks, "apple-free", fam.leaf_total)
    return PipelineResult(make_report("apple-free", g, tree, fam, started), fam, tree)


# -- cap-free ------------------------------------------------------------------------

def capfree_separator(g: Graph, verify_assumptions: bool = True) -> PipelineResult:
    """Component, anticomponent and amalgam splits down to basic cap-free leaves."""
    started = time.perf_counter()
    if verify_assumptions:
        cap = find_cap(g)
        if cap is not None:
            raise ClassAssumptionError("graph contains a cap", witness=cap)

    def grow(phi: int):
        view = g.induced(phi)
        h = view.graph
        kind = is_basic_cap_free(h)
        if kind is not None:
            return LeafResult(maxclique_separator(h), kind)
        d = decompose_step(g, dec.CAPFREE, within=phi)
        if d is None:
            cap = find_cap(h)
            if cap is not None:
                cap = type(cap)(cap.kind, view.to_host(cap.stem),
                                type(cap.hole)(tuple(view.to_host(v) for v in cap.hole.cycle)))
            raise ClassAssumptionError(
                "connected, anticonnected piece with no amalgam is not basic", witness=cap or members(phi))
        return d

    tree, leaves = _build(g, grow)
    fam = assemble(tree, leaves)
    fam = CutFamily.build(g.n, g.full, fam.masks, "cap-free", fam.leaf_total)
    return PipelineResult(make_report("cap-free", g, tree, fam, started), fam, tree)


def capfree_leaf_tests() -> dict:
    return {"chordal": is_chordal,
            "almost-triangle-free": lambda h: is_basic_cap_free(h) == "almost-triangle-free"}


def nearly_leaf_tests(leaf_test: Callable[[Graph], bool], leaf_tag: str = "leaf") -> dict:
    return {leaf_tag: leaf_test, "clique": Graph.is_complete}
