"""Command-line entry point: ``selfadj {gen,replay,verify,bench,dijkstra}``.

Exit status is 0 on success, 1 when a verification or cross-check fails and
2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import List, Optional

from .bench import attribution_csv, costs_csv, fits_csv, powers_of_two, run_bench
from .dijkstra import (DimacsError, format_distances, parse_dimacs, reference_dijkstra,
                       run_dijkstra)
from .metrics import amortized_summary, summary_csv
from .trace import (MixConfig, TraceError, gen_random_trace, gen_sorting_trace, parse_trace,
                    replay, serialize_trace)
from .variants import VARIANTS, Variant
from .verify import check_lemmas, check_heap_order, check_structure, oracle_replay, outputs_match

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
MODES = ("eager", "lazy")


class UsageError(Exception):
    pass


def _u64(s: str) -> int:
    v = int(s)
    if not 0 <= v < 1 << 64:
        raise argparse.ArgumentTypeError(f"seed {s} is not an unsigned 64-bit integer")
    return v


def _pos_int(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError(f"{s} is not a positive integer")
    return v


def _variants(arg) -> List[str]:
    return [v.value for v in VARIANTS] if arg is None else [arg]


def _modes(arg) -> List[str]:
    return list(MODES) if arg is None else [arg]


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)


def cmd_gen(args) -> int:
    if args.sorting:
        trace = gen_sorting_trace(args.n, args.seed)
    else:
        try:
            cfg = MixConfig.from_mix(args.mix, n_ops=args.n, n_heaps=args.heaps,
                                     prefill=args.prefill)
        except ValueError as e:
            raise UsageError(str(e)) from None
        trace = gen_random_trace(cfg, args.seed)
    _emit(serialize_trace(trace), args.out)
    return EXIT_OK


def _load_trace(path):
    return parse_trace(_read(path))


def cmd_replay(args) -> int:
    trace = _load_trace(args.trace)
    r = replay(trace, args.variant, args.mode, record=False)
    sys.stdout.write(r.to_text())
    if args.out is not None:
        _emit(summary_csv(amortized_summary(r.metrics)), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    trace = _load_trace(args.trace)
    want = oracle_replay(trace)
    ok = True
    for v in _variants(args.variant):
        for m in _modes(args.mode):
            r = replay(trace, v, m)
            same = outputs_match(trace, r.outputs, want)
            shape = all(not check_heap_order(h) and not check_structure(h)
                        for h in r.heaps if h is not None)
            print(f"ORACLE {v} {m} {'PASS' if same else 'FAIL'}")
            print(f"STRUCTURE {v} {m} {'PASS' if shape else 'FAIL'}")
            report = check_lemmas(trace, r)
            for line in report.lines():
                print(line)
            ok = ok and same and shape and report.passed
    return EXIT_OK if ok else EXIT_FAIL


def cmd_bench(args) -> int:
    if args.n_min > args.n:
        raise UsageError(f"--n-min {args.n_min} exceeds --n {args.n}")
    if args.n_min < 8:
        raise UsageError("growth fits need n >= 8")
    ns = powers_of_two(args.n_min, args.n)
    if len(ns) < 2:
        raise UsageError("need at least two powers of two between --n-min and --n")
    if args.mix is not None:
        try:
            MixConfig.from_mix(args.mix)
        except ValueError as e:
            raise UsageError(str(e)) from None
    rep = run_bench(_variants(args.variant), ns, args.seed, args.repeats, args.mode, args.mix)
    costs, fits = costs_csv(rep.costs), fits_csv(rep.fits)
    if args.out is None:
        sys.stdout.write(costs + "\n" + fits)
    else:
        out = Path(args.out)
        _emit(costs, str(out))
        _emit(fits, str(out.with_name(out.stem + "_fits.csv")))
        if rep.attribution:
            _emit(attribution_csv(args.mode, rep.attribution),
                  str(out.with_name(out.stem + "_decrease_key.csv")))
        for f in rep.fits:
            print(f"{f.workload} {f.variant} {f.quantity} {f.fit}")
    return EXIT_OK


def cmd_dijkstra(args) -> int:
    try:
        g = parse_dimacs(_read(args.graph))
    except DimacsError as e:
        raise UsageError(f"{args.graph}: {e}") from None
    if not 1 <= args.source <= g.n_vertices:
        raise UsageError(f"source {args.source} out of range 1..{g.n_vertices}")
    res = run_dijkstra(g, args.source, args.variant, args.mode)
    sys.stdout.write(format_distances(res.dist))
    if args.out is not None:
        _emit(summary_csv(amortized_summary(res.metrics)), args.out)
    if args.check:
        ref = reference_dijkstra(g, args.source)
        bad = [v for v, (a, b) in enumerate(zip(res.dist, ref), 1) if a != b]
        if bad:
            print(f"CHECK FAIL {len(bad)} vertices differ, first {bad[0]}", file=sys.stderr)
            return EXIT_FAIL
        print("CHECK PASS", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="selfadj", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="cmd", required=True)

    def heap_opts(sp, all_default: bool):
        sp.add_argument("--variant", choices=[v.value for v in VARIANTS],
                        default=None if all_default else Variant.PAIRING.value)
        sp.add_argument("--mode", choices=MODES, default=None if all_default else "eager")

    g = sub.add_parser("gen", help="write a trace")
    g.add_argument("--n", type=int, default=1000, help="operations after prefill (or sort size)")
    g.add_argument("--mix", default="5:3:2", help="insert:delete-min:decrease-key weights")
    g.add_argument("--seed", type=_u64, default=0)
    g.add_argument("--heaps", type=_pos_int, default=1)
    g.add_argument("--prefill", type=int, default=0)
    g.add_argument("--sorting", action="store_true", help="n inserts then n delete-mins")
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    r = sub.add_parser("replay", help="replay a trace, print outputs")
    r.add_argument("trace")
    heap_opts(r, False)
    r.add_argument("--out", help="amortized cost CSV")
    r.set_defaults(func=cmd_replay)

    v = sub.add_parser("verify", help="oracle and lemma checks (all variants and modes by default)")
    v.add_argument("trace")
    heap_opts(v, True)
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", help="growth sweeps over powers of two")
    heap_opts(b, True)
    b.set_defaults(mode="eager")
    b.add_argument("--n", type=_pos_int, default=1 << 14, help="largest n")
    b.add_argument("--n-min", type=_pos_int, default=1 << 10)
    b.add_argument("--seed", type=_u64, default=0)
    b.add_argument("--repeats", type=_pos_int, default=5)
    b.add_argument("--mix", help="also sweep this insert:delete-min:decrease-key mix")
    b.add_argument("--out", help="costs CSV; fits go next to it")
    b.set_defaults(func=cmd_bench)

    d = sub.add_parser("dijkstra", help="shortest paths on a DIMACS .gr file")
    d.add_argument("graph")
    heap_opts(d, False)
    d.add_argument("--source", type=int, default=1)
    d.add_argument("--check", action="store_true", help="compare with a binary-heap reference")
    d.add_argument("--out", help="amortized cost CSV")
    d.set_defaults(func=cmd_dijkstra)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, TraceError) as e:
        print(f"selfadj: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
