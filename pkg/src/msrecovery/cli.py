"""msrecovery command line.

Exit codes: 0 success, 1 negative verdict (not equivalent, not certified,
verification failure), 2 usage or parse error, 3 search stopped early with
a checkpoint written.
"""

from __future__ import annotations

import argparse
import json
import logging
import re
import sys
from math import gcd
from typing import Optional, Sequence

from . import __version__
from .conjugation import build_chain
from .moser import (
    DEFAULT_BOUND,
    DEFAULT_PRIMES,
    auto_k_limit,
    format_table,
    integer_roots,
    k_max,
    modp_no_root_certificate,
    moser_polynomial,
    scan_table,
    strip_roots,
)
from .multiset import (
    IntMultiset,
    MultisetParseError,
    equivalence_trace,
    format_multiset,
    is_equivalent,
    mirror,
    parse_multiset,
    power_sum,
    ssum_genpoly,
)
from .registry import load_corpus, thue_morse_split, verify_all, write_corpus
from .search import SearchError, run_search

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INTERRUPTED = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _int_range(text: str) -> tuple[int, int]:
    m = re.fullmatch(r"\s*(\d+)\s*(?:\.\.\s*(\d+)\s*)?", text)
    if not m:
        raise argparse.ArgumentTypeError(f"expected N or LO..HI, got {text!r}")
    lo = int(m.group(1))
    hi = int(m.group(2)) if m.group(2) else lo
    if hi < lo:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return lo, hi


def _k_limit(text: str):
    if text == "auto":
        return None
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("k-limit must be an integer or 'auto'") from None
    if value < 1:
        raise argparse.ArgumentTypeError("k-limit must be positive")
    return value


def _bytes(text: str) -> int:
    m = re.fullmatch(r"\s*(\d+)\s*([kKmMgG]?)[bB]?\s*", text)
    if not m:
        raise argparse.ArgumentTypeError(f"bad byte size {text!r}")
    scale = {"": 1, "k": 2**10, "m": 2**20, "g": 2**30}[m.group(2).lower()]
    return int(m.group(1)) * scale


def _primes(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError("primes must be a comma-separated list of integers") from None


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return value


def _emit(args, payload, text: str) -> None:
    if args.output == "json":
        print(json.dumps(payload, indent=2))
    else:
        print(text)


def _multiset_arg(text: str) -> IntMultiset:
    return parse_multiset(text)  # MultisetParseError is mapped to exit 2 in main()


def sum_multiset(A: IntMultiset, s: int) -> IntMultiset:
    """The s-sum multiset, read off the generating polynomial after a shift to nonnegative values."""
    t = -A.min
    poly = ssum_genpoly(A.translate(t), s)
    return IntMultiset.from_counts({e - s * t: c for e, c in poly.terms()})


# commands


def cmd_sums(args) -> int:
    A = _multiset_arg(args.multiset)
    sums = sum_multiset(A, args.s)
    _emit(args, {"multiset": format_multiset(A), "s": args.s, "sums": format_multiset(sums)}, format_multiset(sums))
    return EXIT_OK


def cmd_equiv(args) -> int:
    A, B = _multiset_arg(args.a), _multiset_arg(args.b)
    verdict, trace = equivalence_trace(A, B, args.s)
    lines = [f"{name}: {'ok' if ok else 'differs'}" for name, ok in trace]
    lines.append(f"equivalent: {str(verdict).lower()}")
    _emit(
        args,
        {"s": args.s, "equivalent": verdict, "trace": [{"check": name, "passed": ok} for name, ok in trace]},
        "\n".join(lines),
    )
    return EXIT_OK if verdict else EXIT_FAIL


def cmd_mirror(args) -> int:
    A = _multiset_arg(args.multiset)
    scaled, mirrored = mirror(A)
    c = A.n // gcd(A.n, 2 * power_sum(A, 1))
    payload = {
        "multiset": format_multiset(A),
        "scale": c,
        "scaled": format_multiset(scaled),
        "mirror": format_multiset(mirrored),
        "equivalent_at_half": A.n % 2 == 0 and scaled != mirrored and is_equivalent(scaled, mirrored, A.n // 2),
    }
    _emit(args, payload, f"{payload['scaled']}\n{payload['mirror']}")
    return EXIT_OK


def _check_bound(bound: int, s: int) -> None:
    if bound < s:
        raise UsageError(f"bound {bound} is smaller than s={s}")


def cmd_roots(args) -> int:
    _check_bound(args.bound, args.s)
    P = moser_polynomial(args.s, args.k)
    roots = integer_roots(P, args.bound, args.primes)
    payload = {
        "s": args.s,
        "k": args.k,
        "scale": P.scale,
        "polynomial": P.G.format("n"),
        "bound": args.bound,
        "roots": [r.to_json() for r in roots],
    }
    text = [str(P)] + [f"{r.n}\t{r.classification}" for r in roots]
    _emit(args, payload, "\n".join(text))
    return EXIT_OK


def cmd_table(args) -> int:
    lo, hi = args.s
    if lo < 3:
        raise UsageError("table needs s >= 3")
    _check_bound(args.bound, hi)
    rows = scan_table(lo, hi, args.k_limit, args.bound, args.primes, workers=args.jobs)
    payload = {
        "s_range": [lo, hi],
        "k_limit": "auto" if args.k_limit is None else args.k_limit,
        "bound": args.bound,
        "roots": [r.to_json() for r in rows],
    }
    _emit(args, payload, format_table(rows))
    return EXIT_OK


def cmd_kmax(args) -> int:
    lo, hi = args.s
    if lo < 3:
        raise UsageError("kmax needs s >= 3")
    _check_bound(args.bound, hi)
    out = []
    for s in range(lo, hi + 1):
        limit = auto_k_limit(s) if args.k_limit is None else args.k_limit
        out.append({"s": s, "k_limit": limit, "k_max": k_max(s, limit, args.bound, args.primes)})
    _emit(args, {"bound": args.bound, "rows": out}, "\n".join(f"{r['s']}\t{r['k_max']}" for r in out))
    return EXIT_OK


def cmd_cert(args) -> int:
    poly = moser_polynomial(args.s, args.k).G
    try:
        poly = strip_roots(poly, args.strip)
    except ArithmeticError as exc:
        raise UsageError(f"cannot strip roots {list(args.strip)}: {exc}") from None
    certified, roots = modp_no_root_certificate(poly, args.p)
    payload = {
        "s": args.s,
        "k": args.k,
        "p": args.p,
        "stripped": list(args.strip),
        "polynomial": poly.format("n"),
        "certified": certified,
        "residue_roots": roots,
    }
    text = "certified" if certified else f"not certified: roots mod {args.p}: {', '.join(map(str, roots))}"
    _emit(args, payload, text)
    return EXIT_OK if certified else EXIT_FAIL


def cmd_chain(args) -> int:
    chain = build_chain(args.k, args.length)
    _emit(args, {"k": args.k, "pairs": chain.to_json()}, chain.to_text())
    return EXIT_OK


def cmd_verify(args) -> int:
    records = load_corpus(args.corpus)
    report = verify_all(records, families=not args.no_families, direct=args.direct)
    lines = [f"{'PASS' if r.ok else 'FAIL'} {r.id} (n={r.n}, s={r.s})" for r in report.results]
    _emit(args, report.to_json(), "\n".join(lines))
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_search(args) -> int:
    def show_progress(done, total, elapsed):
        rate = done / elapsed if elapsed > 0 else 0.0
        print(f"\r{done}/{total} compositions, {rate:,.0f}/s", end="", file=sys.stderr, flush=True)

    progress = show_progress if args.progress else None

    try:
        result = run_search(
            args.n,
            args.s,
            args.m,
            workers=args.jobs,
            memory_budget=args.memory_budget,
            offset=args.offset,
            checkpoint=args.checkpoint,
            resume=args.resume,
            progress=progress,
        )
    except SearchError as exc:
        raise UsageError(str(exc)) from None
    if progress:
        print(file=sys.stderr)
    lines = [" ~ ".join(format_multiset(M) for M in c.members) for c in result.classes]
    stats = result.statistics
    lines.append(f"{stats['confirmed_classes']} classes, {stats['visited']}/{stats['compositions']} compositions")
    if result.partial:
        lines.append(f"partial result; resume with --resume {result.checkpoint}")
    _emit(args, result.to_json(), "\n".join(lines))
    return EXIT_INTERRUPTED if result.partial else EXIT_OK


def cmd_thue_morse(args) -> int:
    even, odd = thue_morse_split(args.p)
    agree = 0
    while agree < args.p and power_sum(even, agree + 1) == power_sum(odd, agree + 1):
        agree += 1
    ok = is_equivalent(even, odd, 2)
    payload = {
        "p": args.p,
        "even": format_multiset(even),
        "odd": format_multiset(odd),
        "power_sums_agree_upto": agree,
        "two_equivalent": ok,
    }
    _emit(args, payload, f"{payload['even']}\n{payload['odd']}\n2-equivalent: {str(ok).lower()}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_corpus(args) -> int:
    write_corpus(args.path)
    return EXIT_OK


# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", choices=("json", "text"), default="text")
    common.add_argument("--jobs", type=_positive, default=1, help="worker processes")
    common.add_argument("--memory-budget", type=_bytes, default=None, help="index byte budget, e.g. 512M")
    common.add_argument("--checkpoint", default=None, help="checkpoint path for long searches")
    common.add_argument("-v", "--verbose", action="store_true")

    scan = argparse.ArgumentParser(add_help=False)
    scan.add_argument("--bound", type=_positive, default=DEFAULT_BOUND)
    scan.add_argument("--primes", type=_primes, default=DEFAULT_PRIMES, help="residue filter primes")

    parser = argparse.ArgumentParser(prog="msrecovery", description="Multiset recovery from s-sums.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sums", parents=[common], help="s-sum multiset")
    p.add_argument("multiset")
    p.add_argument("--s", type=_positive, required=True)
    p.set_defaults(func=cmd_sums)

    p = sub.add_parser("equiv", parents=[common], help="test s-equivalence")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--s", type=_positive, required=True)
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("mirror", parents=[common], help="scaled mirror pair")
    p.add_argument("multiset")
    p.set_defaults(func=cmd_mirror)

    p = sub.add_parser("roots", parents=[common, scan], help="integer roots of F_{s,k}")
    p.add_argument("--s", type=_positive, required=True)
    p.add_argument("--k", type=_positive, required=True)
    p.set_defaults(func=cmd_roots)

    p = sub.add_parser("table", parents=[common, scan], help="nontrivial roots over a range of s")
    p.add_argument("--s", type=_int_range, required=True, help="LO..HI")
    p.add_argument("--k-limit", type=_k_limit, default=None, help="integer or 'auto' (2s+5)")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("kmax", parents=[common, scan], help="largest k with a nontrivial root")
    p.add_argument("--s", type=_int_range, required=True, help="S or LO..HI")
    p.add_argument("--k-limit", type=_k_limit, default=None)
    p.set_defaults(func=cmd_kmax)

    p = sub.add_parser("cert", parents=[common], help="mod-p certificate that F_{s,k} has no integer root")
    p.add_argument("--s", type=_positive, required=True)
    p.add_argument("--k", type=_positive, required=True)
    p.add_argument("--p", type=_positive, required=True)
    p.add_argument("--strip", type=_primes, default=(), help="known roots to divide out first, e.g. 10")
    p.set_defaults(func=cmd_cert)

    p = sub.add_parser("chain", parents=[common], help="conjugation chain for k = 4 or 5")
    p.add_argument("--k", type=int, choices=(4, 5), required=True)
    p.add_argument("--length", type=_positive, required=True)
    p.set_defaults(func=cmd_chain)

    p = sub.add_parser("verify", parents=[common], help="re-verify the example corpus")
    p.add_argument("--direct", action="store_true", help="also compare s-sums by direct enumeration (slow)")
    p.add_argument("--corpus", default=None, help="corpus file (default: bundled)")
    p.add_argument("--no-families", action="store_true", help="skip generated family instances")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("search", parents=[common], help="exhaustive search over weak compositions")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--s", type=_positive, required=True)
    p.add_argument("--m", type=_positive, required=True)
    p.add_argument("--offset", type=int, default=1, help="smallest value (default 1)")
    p.add_argument("--resume", default=None, help="checkpoint file to resume from")
    p.add_argument("--progress", action="store_true")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("thue-morse", parents=[common], help="Thue-Morse split of {0..2^p-1}")
    p.add_argument("--p", type=_positive, required=True)
    p.set_defaults(func=cmd_thue_morse)

    p = sub.add_parser("corpus", parents=[common], help="write the built-in corpus file")
    p.add_argument("path")
    p.set_defaults(func=cmd_corpus)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except MultisetParseError as exc:
        print(f"msrecovery: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, ValueError) as exc:
        print(f"msrecovery: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except KeyboardInterrupt:
        print("msrecovery: interrupted", file=sys.stderr)
        return EXIT_INTERRUPTED


if __name__ == "__main__":
    sys.exit(main())
