"""Ground-truth checks that a cut family is a clique/stable-set separator.

Three verifiers share one result type:

* ``verify_separator`` checks pairs of maximal cliques and maximal stable
  sets; when they share a vertex ``v`` it checks ``(K - v, S)`` and
  ``(K, S - v)`` instead. Any disjoint clique/stable pair extends to such a
  maximal pair, so this is exact.
* ``verify_separator_exhaustive`` transcribes the definition directly,
  empty sets included (small graphs only).
* ``verify_separator_sampled`` draws maximal pairs at random.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .errors import EnumerationOverflow, InputError
from .graph import Graph, bits, complement, members

DEFAULT_CAP = 10**6
EXHAUSTIVE_MAX_N = 16


@dataclass(frozen=True)
class SeparationWitness:
    clique: tuple
    stable: tuple

    def format(self) -> str:
        k = " ".join(str(v + 1) for v in self.clique)
        s = " ".join(str(v + 1) for v in self.stable)
        return f"K {k}".rstrip() + "\n" + f"S {s}".rstrip() + "\n"


@dataclass(frozen=True)
class Verdict:
    ok: bool
    mode: str
    checked: int
    witness: SeparationWitness | None = None
    exact: bool = True

    def __bool__(self) -> bool:
        return self.ok


# -- enumeration -----------------------------------------------------------------

def _sort_key(mask: int):
    return members(mask)


def maximal_clique_masks(g: Graph, cap: int = DEFAULT_CAP) -> list[int]:
    """Bron-Kerbosch with Tomita pivoting on bitmasks."""
    out: list[int] = []
    adj = g.adj
    if g.n == 0:
        return [0]

    def expand(r: int, p: int, x: int) -> None:
        if not p:
            if not x:
                out.append(r)
                if len(out) > cap:
                    raise EnumerationOverflow(f"more than {cap} maximal cliques")
            return
        px = p | x
        pivot = max(bits(px), key=lambda u: (p & adj[u]).bit_count())
        for v in bits(p & ~adj[pivot]):
            b = 1 << v
            expand(r | b, p & adj[v], x & adj[v])
            p &= ~b
            x |= b

    expand(0, g.full, 0)
    out.sort(key=_sort_key)
    return out


def maximal_stable_masks(g: Graph, cap: int = DEFAULT_CAP) -> list[int]:
    return maximal_clique_masks(complement(g), cap)


def maximal_cliques(g: Graph, cap: int = DEFAULT_CAP) -> list[tuple]:
    return [members(m) for m in maximal_clique_masks(g, cap)]


def maximal_stable_sets(g: Graph, cap: int = DEFAULT_CAP) -> list[tuple]:
    return [members(m) for m in maximal_stable_masks(g, cap)]


def all_clique_masks(g: Graph, cap: int = DEFAULT_CAP) -> list[int]:
    """Every clique, the empty one included, in canonical order."""
    out = [0]

    def grow(r: int, cand: int) -> None:
        for v in bits(cand):
            nr = r | 1 << v
            out.append(nr)
            if len(out) > cap:
                raise EnumerationOverflow(f"more than {cap} cliques")
            grow(nr, cand & g.adj[v] & ~((1 << (v + 1)) - 1))

    grow(0, g.full)
    out.sort(key=_sort_key)
    return out


def all_stable_masks(g: Graph, cap: int = DEFAULT_CAP) -> list[int]:
    return all_clique_masks(complement(g), cap)


# -- verification ----------------------------------------------------------------

def _check_family(g: Graph, family) -> list[int]:
    if family.host_n != g.n or family.ground != g.full:
        raise InputError(
            f"family is over {family.host_n} vertices (ground {family.ground:#x}), graph has {g.n}"
        )
    return list(family.masks)


def _as_array(masks: list[int], n: int):
    if n <= 64:
        return np.array(masks, dtype=np.uint64)
    return None


def _first_uncovered(k: int, stables: list[int], stable_arr, cuts: list[int], cut_arr) -> int | None:
    """Index of the first stable side not avoided by any cut containing ``k``."""
    if not stables:
        return None
    if cut_arr is not None:
        sel = cut_arr[(cut_arr & np.uint64(k)) == np.uint64(k)]
        if sel.size == 0:
            return 0
        covered = np.zeros(len(stables), dtype=bool)
        chunk = max(1, 4_000_000 // max(1, len(stables)))
        for start in range(0, sel.size, chunk):
            block = sel[start:start + chunk]
            hit = (stable_arr[:, None] & block[None, :]) == 0
            covered |= hit.any(axis=1)
            if covered.all():
                return None
        idx = np.flatnonzero(~covered)
        return int(idx[0]) if idx.size else None
    sel = [w for w in cuts if w & k == k]
    for i, s in enumerate(stables):
        if not any(w & s == 0 for w in sel):
            return i
    return None


def verify_separator(g: Graph, family, cap: int = DEFAULT_CAP) -> Verdict:
    """Exact check over maximal clique / maximal stable set pairs."""
    cuts = _check_family(g, family)
    cut_arr = _as_array(cuts, g.n)
    cliques = maximal_clique_masks(g, cap)
    stables = maximal_stable_masks(g, cap)
    checked = 0
    for k in cliques:
        # clique side K: stable side S - K (S meets K in at most one vertex)
        trimmed = [s & ~k for s in stables]
        arr = _as_array(trimmed, g.n)
        i = _first_uncovered(k, trimmed, arr, cuts, cut_arr)
        checked += len(trimmed)
        bad_full = None if i is None else (k, trimmed[i], i)
        # clique side K - v for stable sets through v
        bad_minus = None
        for v in bits(k):
            through = [(j, s) for j, s in enumerate(stables) if s >> v & 1]
            if not through:
                continue
            sides = [s for _, s in through]
            arr = _as_array(sides, g.n)
            kv = k & ~(1 << v)
            i2 = _first_uncovered(kv, sides, arr, cuts, cut_arr)
            checked += len(sides)
            if i2 is not None:
                j = through[i2][0]
                if bad_minus is None or j < bad_minus[2]:
                    bad_minus = (kv, sides[i2], j)
        bad = [b for b in (bad_full, bad_minus) if b is not None]
        if bad:
            kk, ss, _ = min(bad, key=lambda b: (b[2], b is not bad_minus))
            return Verdict(False, "reduced", checked, SeparationWitness(members(kk), members(ss)))
    return Verdict(True, "reduced", checked)


def verify_separator_exhaustive(g: Graph, family) -> Verdict:
    """Direct transcription of the definition, empty sets included."""
    if g.n > EXHAUSTIVE_MAX_N:
        raise InputError(f"exhaustive verification refused for n={g.n} > {EXHAUSTIVE_MAX_N}")
    cuts = _check_family(g, family)
    cut_arr = _as_array(cuts, g.n)
    cliques = all_clique_masks(g)
    stables = all_stable_masks(g)
    st_arr = np.array(stables, dtype=np.uint64)
    checked = 0
    for k in cliques:
        keep = np.flatnonzero((st_arr & np.uint64(k)) == 0)
        disjoint = [stables[i] for i in keep]
        checked += len(disjoint)
        i = _first_uncovered(k, disjoint, st_arr[keep], cuts, cut_arr)
        if i is not None:
            return Verdict(False, "exhaustive", checked, SeparationWitness(members(k), members(disjoint[i])))
    return Verdict(True, "exhaustive", checked)


def random_maximal_mask(g: Graph, rng: random.Random, clique: bool) -> int:
    """Greedy maximal clique (or stable set) along a random vertex order."""
    order = list(range(g.n))
    rng.shuffle(order)
    out = 0
    for v in order:
        hit = g.adj[v] & out
        if (clique and hit == out) or (not clique and not hit):
            out |= 1 << v
    return out


def verify_separator_sampled(g: Graph, family, samples: int = 10**4, seed: int = 0,
                             cap: int = DEFAULT_CAP) -> Verdict:
    """Check ``samples`` uniformly drawn maximal pairs (all pairs if fewer).

    The two lists are enumerated while they hold at most ``cap`` pairs in
    total; past that, maximal sets are drawn by randomised greedy extension
    instead (no longer uniform, reported as mode ``sampled-greedy``).
    """
    cuts = _check_family(g, family)
    rng = random.Random(seed)
    mode = "sampled"
    try:
        cliques = maximal_clique_masks(g, cap)
        stables = maximal_stable_masks(g, max(1, cap // max(1, len(cliques))))
    except EnumerationOverflow:
        cliques = stables = None
        mode = "sampled-greedy"
    if cliques is not None and len(cliques) * len(stables) <= samples:
        pairs = [(k, s) for k in cliques for s in stables]
        exact = True
    elif cliques is not None:
        pairs = [(cliques[rng.randrange(len(cliques))], stables[rng.randrange(len(stables))])
                 for _ in range(samples)]
        exact = False
    else:
        pairs = [(random_maximal_mask(g, rng, True), random_maximal_mask(g, rng, False))
                 for _ in range(samples)]
        exact = False
    reqs = []
    for k, s in pairs:
        common = k & s
        reqs += [(k, s)] if not common else [(k & ~common, s), (k, s & ~common)]
    bad = _first_unseparated(reqs, cuts, g.n)
    if bad is not None:
        kk, ss = reqs[bad]
        return Verdict(False, mode, bad + 1, SeparationWitness(members(kk), members(ss)), exact)
    return Verdict(True, mode, len(reqs), None, exact)


def _first_unseparated(reqs: list, cuts: list[int], n: int) -> int | None:
    """Index of the first (clique, stable) request no cut separates."""
    if n > 64:
        for i, (kk, ss) in enumerate(reqs):
            if not any(w & kk == kk and not w & ss for w in cuts):
                return i
        return None
    cut_arr = np.array(cuts, dtype=np.uint64)
    chunk = max(1, 4_000_000 // max(1, len(cuts)))
    for start in range(0, len(reqs), chunk):
        part = reqs[start:start + chunk]
        ks = np.array([k for k, _ in part], dtype=np.uint64)[:, None]
        ss = np.array([s for _, s in part], dtype=np.uint64)[:, None]
        hit = ((cut_arr[None, :] & ks) == ks) & ((cut_arr[None, :] & ss) == 0)
        ok = hit.any(axis=1)
        if not ok.all():
            return start + int(np.flatnonzero(~ok)[0])
    return None


def is_separated(family, clique, stable) -> bool:
    k = sum(1 << v for v in clique)
    s = sum(1 << v for v in stable)
    return any(w & k == k and not w & s for w in family.masks)


def witness_is_valid(g: Graph, family, w: SeparationWitness) -> bool:
    """A witness must be a disjoint clique/stable pair that no cut separates."""
    k = sum(1 << v for v in w.clique)
    s = sum(1 << v for v in w.stable)
    return (not k & s and g.is_clique_mask(k) and g.is_stable_mask(s)
            and not is_separated(family, w.clique, w.stable))
