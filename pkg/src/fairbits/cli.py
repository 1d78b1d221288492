"""Command-line front end: ``fairbits <subcommand> [options]``.

All randomness flows from one root stream built from ``--seed``; each
subcommand works on its own child stream and item ``i`` of a ``--count``
batch on that stream's child ``i``, so output bytes depend only on argv
(and not on ``--threads``).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path
from typing import Callable, List, Optional, Sequence

from . import __version__
from .bitsource import BitStream, EntropyError
from .cantor_realizer import StallError, load_weights_json, push_bits
from .dyadic import Dyadic, DyadicInterval, UndecidedComparison
from .measures import (
    PrecisionExhausted,
    ValidationError,
    load_table_csv,
    make_cantor,
    make_dirac,
    make_gaussian,
    make_uniform,
    parse_exact,
    sample_real,
)
from .oracle import donsker, estimate_c_distribution, karhunen_loeve, levy_ciesielski
from .suites import SUITES
from .wiener import default_cdist, family, sample_c, sample_path

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_SUITE_FAILED = 2

# child index of the root stream used by each subcommand
_STREAM_IDS = {
    "sample-real": 1,
    "push": 2,
    "sample-path": 3,
    "oracle": 4,
    "estimate-cdist": 5,
    "validate": 6,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _distribution(choice: str):
    if choice == "uniform":
        return make_uniform()
    if choice == "gaussian":
        return make_gaussian()
    if choice == "cantor":
        return make_cantor()
    if choice.startswith("dirac:"):
        return make_dirac(parse_exact(choice[len("dirac:"):]))
    if choice.startswith("table:"):
        return load_table_csv(choice[len("table:"):])
    raise ValidationError(
        f"unknown distribution {choice!r}; use uniform, gaussian, cantor, dirac:<r> or table:<file>")


def _times(text: str) -> List[Dyadic]:
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        q = parse_exact(part)
        if q.denominator & (q.denominator - 1):
            raise ValidationError(f"time {part} is not dyadic")
        out.append(Dyadic.from_fraction(q))
    if not out:
        raise ValidationError("empty time list")
    return out


def _iv(v: DyadicInterval) -> dict:
    return {"lo": str(v.lo), "hi": str(v.hi)}


def _run_batch(fn: Callable, streams: Sequence[BitStream], threads: int) -> list:
    if threads <= 1 or len(streams) <= 1:
        return [fn(s) for s in streams]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, streams, chunksize=max(1, len(streams) // (4 * threads))))


def _emit(obj, fmt: str, rows: Optional[List[list]] = None, header: Optional[List[str]] = None,
          out=None) -> None:
    out = out or sys.stdout
    if fmt == "csv" and rows is not None:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    else:
        out.write(json.dumps(obj, sort_keys=True) + "\n")


def _report_bits(args, total: Optional[int]) -> None:
    if not args.report_bits:
        return
    sys.stdout.flush()
    if total is None:
        print(f"fairbits: {args.command}: bit count not tracked", file=sys.stderr)
    else:
        print(f"fairbits: {args.command}: consumed {total} random bits", file=sys.stderr)


# ---------------------------------------------------------------------------
# subcommands (module-level workers so they pickle for --threads)


class _SampleReal:
    def __init__(self, dist: str, n: int, cap: int):
        self.dist, self.n, self.cap = dist, n, cap

    def __call__(self, s: BitStream):
        r = sample_real(_distribution(self.dist), s, self.n, self.cap)
        return r.value, r.bits_used


def cmd_sample_real(args, root: BitStream) -> int:
    mu = _distribution(args.dist)
    if args.precision > args.precision_cap:
        raise ValidationError("precision exceeds --precision-cap")
    streams = [root.child(i) for i in range(args.count)]
    res = _run_batch(_SampleReal(args.dist, args.precision, args.precision_cap), streams, args.threads)
    samples = [{"index": i, **_iv(v), "decimal": v.to_decimal()} for i, (v, _) in enumerate(res)]
    rows = [[i, str(v.lo), str(v.hi), v.to_decimal()] for i, (v, _) in enumerate(res)]
    _emit({"dist": mu.name, "precision": args.precision, "samples": samples}, args.format, rows,
          ["index", "lo", "hi", "decimal"])
    _report_bits(args, sum(b for _, b in res))
    return EXIT_OK


class _Push:
    def __init__(self, weights, depth: int, cap: int):
        self.weights, self.depth, self.cap = weights, depth, cap

    def __call__(self, s: BitStream):
        out = push_bits(self.weights, s, self.depth, self.cap)
        return "".join(map(str, out)), s.consumed_count


def cmd_push(args, root: BitStream) -> int:
    g = load_weights_json(args.weights)
    g.check(max(args.depth, g.depth or 0))
    streams = [root.child(i) for i in range(args.count)]
    res = _run_batch(_Push(g, args.depth, args.precision_cap), streams, args.threads)
    items = [{"index": i, "output": w} for i, (w, _) in enumerate(res)]
    rows = [[i, w] for i, (w, _) in enumerate(res)]
    _emit({"weights": g.name, "depth": args.depth, "runs": items}, args.format, rows,
          ["index", "output"])
    _report_bits(args, sum(b for _, b in res))
    return EXIT_OK


def _cdist(choice: str):
    if choice == "default":
        return default_cdist()
    if choice.startswith("dirac:"):
        return parse_exact(choice[len("dirac:"):])
    if choice == "none":
        return None
    return load_table_csv(choice)


class _Path:
    def __init__(self, fam: str, cdist: str, depth: int, n: int, cap: int):
        self.fam, self.cdist, self.depth, self.n, self.cap = fam, cdist, depth, n, cap

    def __call__(self, s: BitStream):
        cd = _cdist(self.cdist)
        cs = s.child(0)
        if cd is None or isinstance(cd, Fraction):
            C = cd
        else:
            C = sample_c(cd, cs, self.n, self.cap)
        p = sample_path(self.fam, C, s.child(1), self.depth, self.n, self.cap)
        return p.to_json(), cs.consumed_count + p.diagnostics["bits_used"]


def cmd_sample_path(args, root: BitStream) -> int:
    family(args.family)
    cd = _cdist(args.c_dist)
    if isinstance(cd, Fraction) and cd < 1:
        raise ValidationError("C must be >= 1")
    streams = [root.child(i) for i in range(args.count)]
    res = _run_batch(_Path(args.family, args.c_dist, args.depth, args.precision, args.precision_cap),
                     streams, args.threads)
    paths = [p for p, _ in res]
    fmt = args.emit or args.format
    if fmt == "csv":
        header = ["path", "t", "lo", "hi"]
        rows = [[i, v["t"], v["lo"], v["hi"]] for i, p in enumerate(paths) for v in p["values"]]
        _emit(None, "csv", rows, header)
    else:
        _emit(paths[0] if args.count == 1 else {"paths": paths}, "json")
    _report_bits(args, sum(b for _, b in res))
    return EXIT_OK


class _Oracle:
    def __init__(self, kind: str, N: int, ts: List[Dyadic], n: int):
        self.kind, self.N, self.ts, self.n = kind, N, ts, n

    def __call__(self, s: BitStream):
        if self.kind == "schauder":
            return levy_ciesielski(self.N, s, self.ts, self.n), None
        if self.kind == "kl":
            return karhunen_loeve(self.N, s, self.ts, self.n), None
        vals = donsker(self.N, s, self.ts, max(self.n, 32))
        return vals, s.consumed_count


def cmd_oracle(args, root: BitStream) -> int:
    ts = _times(args.t)
    streams = [root.child(i) for i in range(args.count)]
    out = _run_batch(_Oracle(args.kind, args.n, ts, args.precision), streams, args.threads)
    res = [v for v, _ in out]
    items = [{"index": i, "values": [{"t": str(t), **_iv(v)} for t, v in zip(ts, vals)]}
             for i, vals in enumerate(res)]
    rows = [[i, str(t), str(v.lo), str(v.hi)] for i, vals in enumerate(res) for t, v in zip(ts, vals)]
    _emit({"construction": args.kind, "N": args.n, "runs": items}, args.format, rows,
          ["index", "t", "lo", "hi"])
    bits = [b for _, b in out]
    _report_bits(args, None if None in bits else sum(bits))
    return EXIT_OK


def cmd_estimate_cdist(args, root: BitStream) -> int:
    res = estimate_c_distribution(args.paths, args.depth, args.family, root, args.precision,
                                  seed_label=args.seed if args.seed is not None else "entropy")
    text = res.to_csv()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    _report_bits(args, None)
    return EXIT_OK


def cmd_validate(args, root: BitStream) -> int:
    fn = SUITES[args.suite]
    kw = {}
    if args.size is not None:
        kw["size"] = args.size
    report = fn(root, **kw)
    report["seed"] = args.seed
    _emit(report, "json")
    _report_bits(args, None)
    return EXIT_OK if report["passed"] else EXIT_SUITE_FAILED


# ---------------------------------------------------------------------------


def _common(suppress: bool) -> argparse.ArgumentParser:
    def d(value):
        return argparse.SUPPRESS if suppress else value

    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=d(None),
                        help="64-bit seed; omit to read OS entropy")
    common.add_argument("--precision-cap", type=int, default=d(256), metavar="BITS")
    common.add_argument("--format", choices=("json", "csv"), default=d("json"))
    common.add_argument("--threads", type=int, default=d(1))
    common.add_argument("--report-bits", action="store_true", default=d(False),
                        help="print the number of random bits consumed to stderr")
    return common


def build_parser() -> argparse.ArgumentParser:
    # global flags are accepted before or after the subcommand
    common = _common(suppress=True)
    p = _Parser(prog="fairbits", description="Exact sampling from fair coin flips.",
                parents=[_common(suppress=False)])
    p.add_argument("--version", action="version", version=f"fairbits {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    q = sub.add_parser("sample-real", parents=[common], help="inverse-transform samples")
    q.add_argument("--dist", required=True)
    q.add_argument("--precision", type=int, default=16)
    q.add_argument("--count", type=int, default=1)
    q.set_defaults(func=cmd_sample_real)

    q = sub.add_parser("push", parents=[common], help="push fair bits onto a cylinder measure")
    q.add_argument("--weights", required=True, help="JSON file or text mapping words to rationals")
    q.add_argument("--depth", type=int, required=True)
    q.add_argument("--count", type=int, default=1)
    q.set_defaults(func=cmd_push)

    q = sub.add_parser("sample-path", parents=[common], help="Brownian path with a modulus certificate")
    q.add_argument("--depth", type=int, default=6)
    q.add_argument("--precision", type=int, default=16)
    q.add_argument("--c-dist", default="default", help="'default', a table CSV, dirac:<C> or none")
    q.add_argument("--family", default="levy")
    q.add_argument("--count", type=int, default=1)
    q.add_argument("--emit", choices=("json", "csv"))
    q.set_defaults(func=cmd_sample_path)

    q = sub.add_parser("oracle", parents=[common], help="reference Brownian constructions")
    q.add_argument("kind", choices=("schauder", "kl", "donsker"))
    q.add_argument("--n", type=int, required=True, help="truncation level or walk length")
    q.add_argument("--t", required=True, help="comma-separated dyadic times, e.g. 1/4,1/2,1")
    q.add_argument("--count", type=int, default=1)
    q.add_argument("--precision", type=int, default=16)
    q.set_defaults(func=cmd_oracle)

    q = sub.add_parser("estimate-cdist", parents=[common], help="tabulate the distribution of c")
    q.add_argument("--paths", type=int, required=True)
    q.add_argument("--depth", type=int, required=True)
    q.add_argument("--family", default="levy")
    q.add_argument("--precision", type=int, default=16)
    q.add_argument("--out")
    q.set_defaults(func=cmd_estimate_cdist)

    q = sub.add_parser("validate", parents=[common], help="run a statistical self-check suite")
    q.add_argument("--suite", required=True, choices=sorted(SUITES))
    q.add_argument("--size", type=int)
    q.set_defaults(func=cmd_validate)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        for name in ("count", "threads"):
            if getattr(args, name, 1) < 1:
                raise ValidationError(f"--{name} must be positive")
        root = BitStream(args.seed).child(_STREAM_IDS[args.command])
        return args.func(args, root)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INVALID
    except (ValidationError, ValueError, StallError, PrecisionExhausted, UndecidedComparison,
            EntropyError, OSError) as exc:
        print(f"fairbits: error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
