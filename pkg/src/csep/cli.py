"""Command-line entry point: ``csep separate | verify | gen | bench``.

Exit codes: 0 ok, 2 bad input, 3 graph outside the requested class,
4 verification failed, 5 generator gave up.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .errors import ClassAssumptionError, EnumerationOverflow, GenerationError, InputError
from .graph import Graph, read_dimacs
from .instances import FAMILIES, GateStats, generate, write_instance
from .oracle import (EXHAUSTIVE_MAX_N, verify_separator, verify_separator_exhaustive,
                     verify_separator_sampled)
from .pipelines import (LeafResult, applefree_separator, capfree_separator,
                        engine_nearly, make_report, single_leaf)
from .recognition import (HoleWitness, PatternWitness, StemWitness, chordal_certificate,
                          contains_fixed_induced, find_apple, find_cap, is_chordal)
from .separators import (ALL_CUTS_MAX_N, CutFamily, all_cuts_fallback,
                         bounded_alpha_neighborhood_separator, maxclique_separator,
                         read_cut_file, write_cut_file)

EXIT_OK, EXIT_INPUT, EXIT_CLASS, EXIT_VERIFY, EXIT_GEN = 0, 2, 3, 4, 5
CLASSES = ("auto", "apple-free", "cap-free", "chordal", "claw-free", "nearly-chordal", "generic")
BENCH_COLUMNS = ("family", "n", "m", "class", "sep_size", "tree_internal", "tree_leaves",
                 "dedup_savings", "build_ms", "verify_mode", "verify_ok")


def _ids(vs) -> str:
    return " ".join(str(v + 1) for v in vs)


def describe_witness(w) -> str:
    """One line per witness, ids 1-based."""
    if isinstance(w, StemWitness):
        return f"witness {w.kind} stem {w.stem + 1} hole {_ids(w.hole.cycle)}"
    if isinstance(w, HoleWitness):
        return f"witness hole {_ids(w.cycle)}"
    if isinstance(w, PatternWitness):
        return f"witness {w.pattern_name} {_ids(w.embedding)}"
    if isinstance(w, tuple) and len(w) == 2 and isinstance(w[0], int) and isinstance(w[1], tuple):
        return f"witness vertex {w[0] + 1} stable {_ids(w[1])}"
    if isinstance(w, tuple):
        return f"witness vertices {_ids(w)}"
    return f"witness {w}"


# -- separate -------------------------------------------------------------------------

def _generic(g: Graph):
    fam = all_cuts_fallback(g) if g.n <= ALL_CUTS_MAX_N else maxclique_separator(g)
    return single_leaf(g, LeafResult(fam, "generic"))


def _chordal_leaf(h: Graph) -> LeafResult:
    return LeafResult(maxclique_separator(h), "chordal")


def run_class(g: Graph, klass: str, assume: bool):
    """``(class_used, tree, family, started)``; raises ClassAssumptionError."""
    started = time.perf_counter()
    if klass == "auto":
        if find_cap(g) is None:
            return run_class(g, "cap-free", True)
        if find_apple(g) is None:
            return run_class(g, "apple-free", True)
        return run_class(g, "generic", True)
    if klass == "cap-free":
        res = capfree_separator(g, verify_assumptions=not assume)
        return klass, res.tree, res.family, started
    if klass == "apple-free":
        res = applefree_separator(g, verify_assumptions=not assume)
        return klass, res.tree, res.family, started
    if klass == "chordal":
        if not assume:
            ok, cert = chordal_certificate(g)
            if not ok:
                raise ClassAssumptionError("graph is not chordal", witness=cert)
        tree, fam = single_leaf(g, _chordal_leaf(g))
        return klass, tree, fam, started
    if klass == "claw-free":
        if not assume:
            claw = contains_fixed_induced(g, "claw")
            if claw is not None:
                raise ClassAssumptionError("graph contains a claw", witness=claw)
        tree, fam = single_leaf(g, LeafResult(bounded_alpha_neighborhood_separator(g, 2), "claw-free"))
        return klass, tree, fam, started
    if klass == "nearly-chordal":
        tree, fam = engine_nearly(g, is_chordal, _chordal_leaf, "chordal")
        return klass, tree, fam, started
    if klass == "generic":
        tree, fam = _generic(g)
        return klass, tree, fam, started
    raise InputError(f"unknown class {klass!r}")


def run_verify(g: Graph, fam: CutFamily, mode: str, samples: int = 10**4, seed: int = 0):
    """Returns a Verdict, or ``None`` for mode ``none``; ``auto`` picks by size."""
    if mode == "auto":
        mode = "exhaustive" if g.n <= EXHAUSTIVE_MAX_N else "sampled"
    if mode == "none":
        return None
    if mode == "exhaustive":
        return verify_separator_exhaustive(g, fam)
    if mode == "reduced":
        return verify_separator(g, fam)
    if mode == "sampled":
        return verify_separator_sampled(g, fam, samples=samples, seed=seed)
    raise InputError(f"unknown verification mode {mode!r}")


def _human(report: dict) -> str:
    width = max(len(k) for k in report)
    return "\n".join(f"{k:<{width}}  {v}" for k, v in report.items()) + "\n"


def cmd_separate(args, out) -> int:
    g = read_dimacs(args.inp)
    klass, tree, fam, started = run_class(g, args.klass, args.assume_class)
    fam = CutFamily.build(g.n, g.full, fam.masks, klass, fam.leaf_total)
    report = make_report(klass, g, tree, fam, started)
    if args.out:
        write_cut_file(fam, args.out)
    if args.tree:
        Path(args.tree).write_text(tree.to_json())
    verdict = run_verify(g, fam, args.verify, args.samples, args.seed)
    d = report.as_dict(timing=not args.no_timing)
    d["verify_mode"] = args.verify if verdict is None else verdict.mode
    d["verify_ok"] = None if verdict is None else verdict.ok
    out.write(_human(d) if args.human else json.dumps(d, sort_keys=True) + "\n")
    if verdict is not None and not verdict.ok:
        out.write(verdict.witness.format())
        return EXIT_VERIFY
    return EXIT_OK


# -- verify ---------------------------------------------------------------------------

def cmd_verify(args, out) -> int:
    g = read_dimacs(args.inp)
    fam = read_cut_file(args.sep)
    if fam.host_n != g.n:
        raise InputError(f"cut file is over {fam.host_n} vertices, graph has {g.n}")
    verdict = run_verify(g, fam, args.mode, args.samples, args.seed)
    if verdict.ok:
        out.write("ok\n" if verdict.exact else "ok-sampled\n")
        return EXIT_OK
    out.write(verdict.witness.format())
    return EXIT_VERIFY


# -- gen ------------------------------------------------------------------------------

def cmd_gen(args, out) -> int:
    stats = GateStats()
    g = generate(args.family, args.n, args.seed, args.p, stats=stats)
    params = {"n": args.n, "p": args.p}
    planted = {"gate_tried": stats.tried, "gate_accepted": stats.accepted} if stats.tried else None
    side = write_instance(g, args.out, args.family, params, args.seed, planted)
    out.write(json.dumps({"out": str(args.out), "sidecar": str(side), "n": g.n, "m": g.m}, sort_keys=True) + "\n")
    return EXIT_OK


# -- bench ----------------------------------------------------------------------------

DEFAULT_CLASS = {"cap-free-amalgam": "cap-free", "apple-free-composed": "apple-free",
                 "chordal": "apple-free", "line": "apple-free", "nearly-chordal": "nearly-chordal"}


def parse_range(text: str) -> range:
    try:
        a, b = text.split("..")
        return range(int(a), int(b) + 1)
    except ValueError:
        raise InputError(f"--n-range must look like a..b, got {text!r}") from None


def instance_seed(seed: int, n: int, rep: int) -> int:
    return seed * 1_000_003 + n * 1009 + rep


def bench_row(job) -> dict:
    family, n, seed, klass, verify, samples, p, timing = job
    g = generate(family, n, seed, p)
    used, tree, fam, started = run_class(g, klass or DEFAULT_CLASS.get(family, "auto"), False)
    report = make_report(used, g, tree, fam, started)
    verdict = run_verify(g, fam, verify, samples, seed)
    return {
        "family": family, "n": g.n, "m": g.m, "class": used,
        "sep_size": len(fam), "tree_internal": report.tree_internal,
        "tree_leaves": report.tree_leaves, "dedup_savings": report.dedup_savings,
        "build_ms": f"{report.build_ms:.3f}" if timing else "0",
        "verify_mode": "none" if verdict is None else verdict.mode,
        "verify_ok": "" if verdict is None else str(verdict.ok).lower(),
        "_seed": seed,
    }


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("CSEP_THREADS", "1")))
    except ValueError:
        raise InputError("CSEP_THREADS must be an integer") from None


def bench_rows(family: str, ns, reps: int, seed: int, klass: str | None, verify: str,
               samples: int = 10**4, p: float = 0.3, timing: bool = True, step: int = 1) -> list[dict]:
    jobs = [(family, n, instance_seed(seed, n, r), klass, verify, samples, p, timing)
            for n in list(ns)[::step] for r in range(reps)]
    workers = _workers()
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(bench_row, jobs))
    else:
        rows = [bench_row(j) for j in jobs]
    rows.sort(key=lambda r: (r["family"], r["n"], r["_seed"]))
    return rows


def format_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=BENCH_COLUMNS, extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def cmd_bench(args, out) -> int:
    ns = parse_range(args.n_range)
    rows = bench_rows(args.family, ns, args.reps, args.seed, args.klass, args.verify,
                      args.samples, args.p, timing=not args.no_timing, step=args.n_step)
    text = format_csv(rows)
    if args.out:
        Path(args.out).write_text(text)
    else:
        out.write(text)
    bad = [r for r in rows if r["verify_ok"] == "false"]
    return EXIT_VERIFY if bad else EXIT_OK


# -- wiring ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="csep", description="Clique/stable-set separators from graph decompositions.")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("separate", help="build a separator for a DIMACS graph")
    sp.add_argument("--in", dest="inp", required=True)
    sp.add_argument("--class", dest="klass", choices=CLASSES, default="auto")
    sp.add_argument("--out")
    sp.add_argument("--tree")
    sp.add_argument("--verify", choices=("exhaustive", "reduced", "sampled", "none", "auto"), default="reduced")
    sp.add_argument("--assume-class", action="store_true", help="skip class validation")
    sp.add_argument("--samples", type=int, default=10**4)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--no-timing", action="store_true", help="report build_ms as 0 (byte-stable output)")
    sp.add_argument("--human", action="store_true", help="print a table instead of a JSON line")
    sp.set_defaults(func=cmd_separate)

    vp = sub.add_parser("verify", help="check a cut file against a graph")
    vp.add_argument("--in", dest="inp", required=True)
    vp.add_argument("--sep", required=True)
    vp.add_argument("--mode", choices=("exhaustive", "reduced", "sampled", "auto"), default="reduced")
    vp.add_argument("--samples", type=int, default=10**4)
    vp.add_argument("--seed", type=int, default=0)
    vp.set_defaults(func=cmd_verify)

    gp = sub.add_parser("gen", help="generate an instance (DIMACS plus JSON sidecar)")
    gp.add_argument("--family", choices=FAMILIES, required=True)
    gp.add_argument("--n", type=int, required=True)
    gp.add_argument("--seed", type=int, default=0)
    gp.add_argument("--p", type=float, default=0.3, help="edge probability or density")
    gp.add_argument("--out", required=True)
    gp.set_defaults(func=cmd_gen)

    bp = sub.add_parser("bench", help="sweep a family and write CSV")
    bp.add_argument("--family", choices=FAMILIES, required=True)
    bp.add_argument("--n-range", required=True, help="inclusive, e.g. 8..64")
    bp.add_argument("--n-step", type=int, default=1)
    bp.add_argument("--reps", type=int, default=1)
    bp.add_argument("--seed", type=int, default=0)
    bp.add_argument("--class", dest="klass", choices=CLASSES, default=None)
    bp.add_argument("--verify", choices=("exhaustive", "reduced", "sampled", "none", "auto"), default="auto")
    bp.add_argument("--samples", type=int, default=10**4)
    bp.add_argument("--p", type=float, default=0.3)
    bp.add_argument("--no-timing", action="store_true")
    bp.add_argument("--out")
    bp.set_defaults(func=cmd_bench)
    return ap


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    try:
        return args.func(args, out)
    except ClassAssumptionError as e:
        print(f"error: {e}", file=sys.stderr)
        if e.witness is not None:
            out.write(describe_witness(e.witness) + "\n")
        return EXIT_CLASS
    except GenerationError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_GEN
    except (InputError, EnumerationOverflow, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
