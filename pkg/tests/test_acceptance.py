"""Acceptance suite: one pass/fail line per criterion.

Run with ``pytest tests/test_acceptance.py -s`` or ``python tests/test_acceptance.py``.
Every tolerance used below is pinned in the constants at the top.
"""

import io
import os
import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from builders import COMBINERS, block_family, planted  # noqa: E402
from conftest import brute_apple, brute_cap, brute_long_hole, random_graph  # noqa: E402

from csep.cli import main as cli_main  # noqa: E402
from csep.errors import ClassAssumptionError  # noqa: E402
from csep.graph import Graph, disjoint_union, line_graph, relabel, write_dimacs  # noqa: E402
from csep.instances import (gen_applefree_composed, gen_capfree_composed, gen_chordal,  # noqa: E402
                            gen_line_graph, gen_nearly_chordal_composed)
from csep.oracle import (EXHAUSTIVE_MAX_N, maximal_cliques, verify_separator,  # noqa: E402
                         verify_separator_exhaustive, verify_separator_sampled, witness_is_valid)
from csep.pipelines import (applefree_separator, capfree_leaf_tests, capfree_separator,  # noqa: E402
                            engine_nearly, label_audit, nearly_leaf_tests)
from csep.recognition import (check_stem_witness, find_apple, find_cap, has_long_hole,  # noqa: E402
                              is_chordal, is_claw_free, pattern, pattern_table)
from csep.separators import (CutFamily, bounded_alpha_neighborhood_separator,  # noqa: E402
                             degeneracy_separator, distance_expansion, maxclique_separator)

SEED = 20240611

C1_PAIRS, C1_MAX_N, C1_SECONDS = 500, 10, 60.0
C2_PER_COMBINER, C2_MAX_N, C2_SECONDS = 500, 14, 300.0
C3_GRAPHS, C3_MAX_N, C3_LINE_GRAPHS, C3_LINE_MAX_N = 500, 12, 200, 14
C4_INSTANCES, C4_MAX_N = 200, 16
C5_INSTANCES, C5_MAX_N, C5_MAX_D = 200, 12, 3
C6_INSTANCES, C6_MAX_N = 200, 24
C7_INSTANCES, C7_MIN_N, C7_MAX_N, C7_SAMPLES, C7_MAX_C, C7_N64_SECONDS = 200, 8, 64, 10**4, 1.0, 10.0
C8_PER_FAMILY, C8_MAX_N, C8_SAMPLES = 30, 40, 10**4
C9_GRAPHS, C9_MAX_N = 500, 11

# reconstruction of the two forbidden patterns used by the apple-free engine
D6_E6_FIXTURE = {
    "D6": (7, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5),
               (0, 6), (1, 6), (2, 6), (3, 6), (4, 6), (5, 6)]),
    "E6": (8, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5),
               (0, 6), (1, 6), (0, 7), (1, 7)]),
}


def _verify(g: Graph, fam: CutFamily, samples: int = 10**4, seed: int = 0):
    if g.n <= EXHAUSTIVE_MAX_N:
        return verify_separator_exhaustive(g, fam)
    return verify_separator_sampled(g, fam, samples=samples, seed=seed)


# -- criteria ------------------------------------------------------------------------

def criterion_1():
    rng = random.Random(SEED + 1)
    started = time.perf_counter()
    disagree = fails = 0
    for _ in range(C1_PAIRS):
        g = random_graph(rng, rng.randint(1, C1_MAX_N))
        style = rng.random()
        base = list(maxclique_separator(g).masks)
        if style < 0.35:
            # a real separator padded with random cuts
            masks = base + [rng.randrange(1 << g.n) for _ in range(rng.randint(0, g.n))]
        elif style < 0.7:
            # a real separator missing one cut
            masks = base
            if len(base) > 1:
                masks = [w for w in base if w != rng.choice(base)]
        else:
            masks = [rng.randrange(1 << g.n) for _ in range(rng.randint(0, 3 * g.n))]
            masks += [0, g.full] if rng.random() < 0.7 else []
        fam = CutFamily.build(g.n, g.full, masks)
        a = verify_separator(g, fam)
        b = verify_separator_exhaustive(g, fam)
        if a.ok != b.ok or (not a.ok and not witness_is_valid(g, fam, a.witness)):
            disagree += 1
        fails += not b.ok
    secs = time.perf_counter() - started
    ok = disagree == 0 and secs < C1_SECONDS
    return ok, f"{C1_PAIRS} pairs, {disagree} disagreements, {fails} non-separators, {secs:.1f}s < {C1_SECONDS:.0f}s"


def criterion_2():
    rng = random.Random(SEED + 2)
    started = time.perf_counter()
    bad = []
    for kind in COMBINERS:
        for _ in range(C2_PER_COMBINER):
            g, (x1, x2), comb = planted(kind, rng.randint(4, C2_MAX_N), rng)
            f1, f2 = block_family(g, x1, rng), block_family(g, x2, rng)
            children_ok = all(verify_separator(g.induced(x).graph, _local(g, f, x)).ok
                              for f, x in ((f1, x1), (f2, x2)))
            f = comb(f1, f2)
            if not (children_ok and verify_separator_exhaustive(g, f).ok
                    and f.raw_count == len(f1) + len(f2) and len(f) <= len(f1) + len(f2)):
                bad.append(kind)
    secs = time.perf_counter() - started
    ok = not bad and secs < C2_SECONDS
    return ok, (f"{len(COMBINERS)} combiners x {C2_PER_COMBINER}, {len(bad)} failures, "
                f"|combined| <= |f1|+|f2| checked, {secs:.1f}s < {C2_SECONDS:.0f}s")


def _local(g: Graph, f: CutFamily, ground: int) -> CutFamily:
    view = g.induced(ground)
    return CutFamily.build(view.graph.n, view.graph.full, (view.local_mask(w) for w in f.masks))


def criterion_3():
    rng = random.Random(SEED + 3)
    bad_mc = 0
    for _ in range(C3_GRAPHS):
        g = random_graph(rng, rng.randint(1, C3_MAX_N))
        f = maxclique_separator(g)
        q = len(maximal_cliques(g))
        if len(f) > (g.n + 1) * q + 2 or not verify_separator_exhaustive(g, f).ok:
            bad_mc += 1
    bad_ba = done = 0
    while done < C3_LINE_GRAPHS:
        base = random_graph(rng, rng.randint(2, 8), rng.uniform(0.2, 0.6))
        if not 1 <= base.m <= C3_LINE_MAX_N:
            continue
        done += 1
        lg = line_graph(base)
        n = lg.n
        f = bounded_alpha_neighborhood_separator(lg, 2)
        if len(f) > n * (1 + n + n * (n - 1) // 2) + 2 or not verify_separator_exhaustive(lg, f).ok:
            bad_ba += 1
    ok = bad_mc == 0 and bad_ba == 0
    return ok, (f"maxclique {C3_GRAPHS} graphs {bad_mc} failures; "
                f"bounded-alpha {C3_LINE_GRAPHS} line graphs {bad_ba} failures")


def _forward_bounded(rng: random.Random, n: int, d: int) -> Graph:
    edges = set()
    for v in range(n):
        later = list(range(v + 1, n))
        for u in rng.sample(later, min(d, len(later), rng.randint(0, d))):
            edges.add((v, u))
    return Graph.from_edges(n, sorted(edges))


def criterion_4():
    rng = random.Random(SEED + 4)
    bad = 0
    for i in range(C4_INSTANCES):
        n = rng.randint(1, C4_MAX_N)
        kind = i % 3
        if kind == 0:      # tree: parent has the smaller id, children come first in the order
            g = Graph.from_edges(n, [(v, rng.randrange(v)) for v in range(1, n)])
            order = list(range(n))[::-1]
        elif kind == 1:    # path in shuffled ids, ordered along the path
            perm = list(range(n))
            rng.shuffle(perm)
            g = relabel(Graph.from_edges(n, [(j, j + 1) for j in range(n - 1)]), perm)
            order = perm
        else:
            g = _forward_bounded(rng, n, rng.randint(1, 3))
            order = list(range(n))
        sizes = []

        def solver(h, sizes=sizes):
            f = maxclique_separator(h)
            sizes.append(len(f))
            return f

        f = degeneracy_separator(g, order, solver)
        if len(f) > sum(sizes) or not verify_separator_exhaustive(g, f).ok:
            bad += 1
    return bad == 0, f"{C4_INSTANCES} trees/paths/forward-degree graphs, {bad} failures, size <= sum of leaf sizes"


def criterion_5():
    rng = random.Random(SEED + 5)
    bad = 0
    for _ in range(C5_INSTANCES):
        g = random_graph(rng, rng.randint(1, C5_MAX_N))
        d = rng.sample(range(g.n), rng.randint(0, min(C5_MAX_D, g.n - 1)))
        dm = sum(1 << v for v in d)
        base = block_family(g, g.full & ~dm, rng)
        f = distance_expansion(g, base, d)
        if f.raw_count != len(base) * 2 ** len(d) or not verify_separator_exhaustive(g, f).ok:
            bad += 1
    return bad == 0, f"{C5_INSTANCES} instances |D| <= {C5_MAX_D}, {bad} failures, raw = |f'|*2^|D| checked"


def criterion_6():
    bad = exhaustive = 0
    max_ratio = 0.0
    for i in range(C6_INSTANCES):
        n = 4 + i % (C6_MAX_N - 3)
        g = gen_nearly_chordal_composed(n, SEED + i)
        tree, fam = engine_nearly(g, is_chordal, maxclique_separator, "chordal")
        audit = label_audit(tree)
        exhaustive += g.n <= EXHAUSTIVE_MAX_N
        max_ratio = max(max_ratio, tree.internal_count / g.n ** 3)
        if (tree.violations(nearly_leaf_tests(is_chordal, "chordal")) or not audit["injective"]
                or not audit["conditions_hold"] or tree.internal_count > g.n ** 3
                or not _verify(g, fam).ok):
            bad += 1
    return bad == 0, (f"{C6_INSTANCES} instances ({exhaustive} exhaustive), {bad} failures, "
                      f"max internal/n^3 = {max_ratio:.3f}, labels injective")


def criterion_7():
    bad = exhaustive = 0
    worst_c = 0.0
    n64_secs = None
    for i in range(C7_INSTANCES):
        n = C7_MIN_N + i * (C7_MAX_N - C7_MIN_N) // (C7_INSTANCES - 1)
        g = gen_capfree_composed(n, SEED + i)
        t0 = time.perf_counter()
        res = capfree_separator(g)
        secs = time.perf_counter() - t0
        if g.n == C7_MAX_N:
            n64_secs = max(secs, n64_secs or 0.0)
        exhaustive += g.n <= EXHAUSTIVE_MAX_N
        worst_c = max(worst_c, len(res.family) / g.n ** 5)
        if res.tree.violations(capfree_leaf_tests()) or not _verify(g, res.family, C7_SAMPLES, i).ok:
            bad += 1
    ok = bad == 0 and worst_c <= C7_MAX_C and n64_secs is not None and n64_secs < C7_N64_SECONDS
    return ok, (f"{C7_INSTANCES} instances n={C7_MIN_N}..{C7_MAX_N} ({exhaustive} exhaustive), {bad} failures, "
                f"c = max sep/n^5 = {worst_c:.2e} <= {C7_MAX_C}, n=64 in {n64_secs or float('nan'):.2f}s")


def criterion_8():
    rng = random.Random(SEED + 8)
    graphs = []
    for i in range(C8_PER_FAMILY):
        graphs.append(gen_chordal(rng.randint(4, C8_MAX_N), rng.uniform(0.1, 0.7), SEED + i))
        g = gen_line_graph(rng.randint(3, 10), rng.uniform(0.2, 0.6), SEED + i)
        graphs.append(g if g.n <= C8_MAX_N else gen_line_graph(6, 0.5, i))
        graphs.append(gen_applefree_composed(rng.randint(6, C8_MAX_N), SEED + i))
    bad_dispatch = bad_verify = 0
    for i, g in enumerate(graphs):
        res = applefree_separator(g)
        if (res.tree.nodes[0].rule == "claw-free") != is_claw_free(g):
            bad_dispatch += 1
        if not _verify(g, res.family, C8_SAMPLES, i).ok:
            bad_verify += 1
    rejected = 0
    fixtures = [pattern("A4"), pattern("A5")]
    for i in range(10):
        big = disjoint_union(gen_chordal(10, 0.4, i), pattern("A4" if i % 2 else "A5"))
        perm = list(range(big.n))
        random.Random(i).shuffle(perm)
        fixtures.append(relabel(big, perm))
    for g in fixtures:
        try:
            applefree_separator(g)
        except ClassAssumptionError as e:
            w = e.witness
            if w is not None and w.kind == "apple" and check_stem_witness(g, w):
                rejected += 1
    ok = bad_dispatch == 0 and bad_verify == 0 and rejected == len(fixtures)
    return ok, (f"{len(graphs)} fixtures n <= {C8_MAX_N}: dispatch mismatches {bad_dispatch}, "
                f"verify failures {bad_verify}; apple fixtures rejected {rejected}/{len(fixtures)} with valid witness")


def criterion_9():
    rng = random.Random(SEED + 9)
    mismatch = {"apple": 0, "cap": 0, "long-hole": 0}
    positives = {"apple": 0, "cap": 0, "long-hole": 0}
    for _ in range(C9_GRAPHS):
        g = random_graph(rng, rng.randint(4, C9_MAX_N), rng.uniform(0.15, 0.6))
        k = rng.randint(4, 7)
        for name, ours, ref, check in (
            ("apple", find_apple(g), brute_apple(g), lambda w: check_stem_witness(g, w)),
            ("cap", find_cap(g), brute_cap(g), lambda w: check_stem_witness(g, w)),
            ("long-hole", has_long_hole(g, k), brute_long_hole(g, k), lambda w: len(w) >= k),
        ):
            positives[name] += ref
            if (ours is not None) != ref or (ours is not None and not check(ours)):
                mismatch[name] += 1
    table = pattern_table()
    diff = [name for name, (n, edges) in D6_E6_FIXTURE.items()
            if table[name].n != n or sorted(table[name].edges()) != sorted(edges)]
    ok = not any(mismatch.values()) and not diff
    return ok, (f"{C9_GRAPHS} graphs per detector, mismatches {mismatch}, positives {positives}; "
                f"D6/E6 fixture diff {diff or 'empty'}")


def criterion_10(tmp: Path | None = None):
    import tempfile
    tmp = Path(tempfile.mkdtemp()) if tmp is None else tmp
    graph = tmp / "in.dimacs"
    write_dimacs(gen_capfree_composed(24, 7), graph)

    def run_once(tag: str, threads: str):
        os.environ["CSEP_THREADS"] = threads
        out = io.StringIO()
        codes = [cli_main(["separate", "--in", str(graph), "--out", str(tmp / f"{tag}.sep"),
                           "--tree", str(tmp / f"{tag}.json"), "--verify", "auto", "--no-timing"], out=out)]
        codes.append(cli_main(["bench", "--family", "cap-free-amalgam", "--n-range", "8..20", "--n-step", "4",
                               "--reps", "2", "--seed", "3", "--no-timing"], out=out))
        files = (tmp / f"{tag}.sep").read_bytes() + (tmp / f"{tag}.json").read_bytes()
        return codes, out.getvalue().encode() + files

    saved = os.environ.get("CSEP_THREADS")
    try:
        a = run_once("a", "1")
        b = run_once("b", "1")
        c = run_once("c", "2")
    finally:
        if saved is None:
            os.environ.pop("CSEP_THREADS", None)
        else:
            os.environ["CSEP_THREADS"] = saved
    ok = a == b == c and a[0] == [0, 0]
    return ok, f"separate + bench twice (and with 2 workers): byte-identical={a[1] == b[1] == c[1]}, exit codes {a[0]}"


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


def _line(number: int, ok: bool, detail: str) -> str:
    return f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}"


@pytest.mark.parametrize("number", range(1, len(CRITERIA) + 1))
def test_criterion(number, capsys):
    ok, detail = CRITERIA[number - 1]()
    with capsys.disabled():
        print("\n" + _line(number, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    results = []
    for i, fn in enumerate(CRITERIA, 1):
        ok, detail = fn()
        results.append(ok)
        print(_line(i, ok, detail), flush=True)
    sys.exit(0 if all(results) else 1)
