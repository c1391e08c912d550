"""Known singular examples, parametric constructions, and a verifier that
re-checks every claimed equivalence from scratch."""

from __future__ import annotations

import re
import time
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from itertools import combinations
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .multiset import (
    IntMultiset,
    format_multiset,
    genpoly,
    is_equivalent,
    make_multiset,
    mirror,
    parse_multiset,
    s_sums,
)

KINDS = ("pair", "triple", "quadruple", "mirror-pair", "split")
_KIND_TAG = re.compile(r"\[(%s)\]\s*$" % "|".join(KINDS))


@dataclass(frozen=True)
class ExampleRecord:
    id: str
    n: int
    s: int
    multisets: tuple[IntMultiset, ...]
    source: str
    kind: str

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}")
        if len(self.multisets) < 2:
            raise ValueError("a record needs at least two multisets")

    def to_line(self) -> str:
        members = ";".join(format_multiset(m) for m in self.multisets)
        return f"{self.id}|{self.n}|{self.s}|{members}|{self.source} [{self.kind}]"


def _mirror_record(id_: str, literal: str, source: str) -> ExampleRecord:
    A = parse_multiset(literal)
    scaled, mirrored = mirror(A)
    return ExampleRecord(id_, A.n, 3, (scaled, mirrored), source, "mirror-pair")


@lru_cache(maxsize=1)
def known_examples() -> tuple[ExampleRecord, ...]:
    """The embedded corpus."""
    ms = parse_multiset
    return (
        ExampleRecord(
            "ss-6-3", 6, 3, (ms("1^5,-5"), ms("-1^5,5")), "Selfridge-Straus 1958", "mirror-pair"
        ),
        ExampleRecord(
            "gfs-triple",
            8,
            2,
            (
                ms("0,5,6,7,9,10,11,16"),
                ms("1,4,5,6,10,11,12,15"),
                ms("2,3,4,7,9,12,13,14"),
            ),
            "Gordon-Fraenkel-Straus 1962",
            "triple",
        ),
        ExampleRecord(
            "ewell-quadruple",
            6,
            3,
            (
                ms("0,5,9,10,11,13"),
                ms("1,5,8,9,10,15"),
                ms("1,6,7,8,11,15"),
                ms("3,5,6,7,11,16"),
            ),
            "Ewell 1968",
            "quadruple",
        ),
        _mirror_record("a27-1", "0,1^16,2^10", "Fomin-Izhboldin 1992"),
        _mirror_record("a27-2", "0^5,1^10,2^10,3^2", "Fomin-Izhboldin 1992"),
        _mirror_record("a27-3", "0,1^5,2^10,3^6,4^5", "Fomin-Izhboldin 1992"),
        _mirror_record("a486", "0^22,1^176,2^231,3^56,4", "Fomin-Izhboldin 1992"),
        ExampleRecord(
            "ik-12-4",
            12,
            4,
            (ms("1^2,4,6,7,8^2,9,10,12,15^2"), ms("0,3,4,5,6,7,9,10,11,12,13,16")),
            "Isomurodov-Kokhas 2016",
            "pair",
        ),
        ExampleRecord("doubling-seed", 2, 2, (ms("1,1"), ms("0,2")), "doubling construction seed", "pair"),
        ExampleRecord("doubling-4", 4, 2, (ms("1^3,3"), ms("0,2^3")), "doubling construction, d=1", "pair"),
        ExampleRecord(
            "thue-morse-8", 4, 2, (ms("0,3,5,6"), ms("1,2,4,7")), "Lambek-Moser 1959, Z_8 split", "split"
        ),
    )


def get_example(id_: str) -> ExampleRecord:
    for rec in known_examples():
        if rec.id == id_:
            return rec
    raise KeyError(id_)


# constructions


def doubling(A: IntMultiset, B: IntMultiset, d: int) -> tuple[IntMultiset, IntMultiset]:
    """A u (B+d) and B u (A+d), which are 2-equivalent whenever A and B are."""
    if not is_equivalent(A, B, 2):
        raise ValueError("inputs are not 2-equivalent")
    left, right = A.union(B.translate(d)), B.union(A.translate(d))
    if left == right:
        warnings.warn("doubling produced identical multisets (degenerate)", RuntimeWarning, stacklevel=2)
    return left, right


def power2_family(p: int) -> tuple[IntMultiset, IntMultiset]:
    if p < 1:
        raise ValueError("p must be at least 1")
    A, B = make_multiset([1, 1]), make_multiset([0, 2])
    for _ in range(p - 1):
        A, B = doubling(A, B, 1)
    return A, B


def mirror_pair(s: int) -> tuple[IntMultiset, IntMultiset]:
    if s < 2:
        raise ValueError("s must be at least 2")
    return (
        IntMultiset.from_counts({1: 2 * s - 1, 1 - 2 * s: 1}),
        IntMultiset.from_counts({-1: 2 * s - 1, 2 * s - 1: 1}),
    )


def thue_morse_split(p: int) -> tuple[IntMultiset, IntMultiset]:
    """Split of {0..2**p - 1} by parity of binary weight."""
    if p < 2:
        raise ValueError("p must be at least 2")
    even = [k for k in range(2**p) if bin(k).count("1") % 2 == 0]
    odd = [k for k in range(2**p) if bin(k).count("1") % 2 == 1]
    return make_multiset(even), make_multiset(odd)


def witness(n: int, s: int) -> Optional[tuple[IntMultiset, IntMultiset]]:
    """Two distinct s-equivalent n-multisets if the registry can produce them.

    Uses the corpus, the power-of-two and n = 2s families, and the duality
    (n, s) <-> (n, n - s).
    """
    for nn, ss in ((n, s), (n, n - s)):
        if ss < 1 or nn <= ss:
            continue
        for rec in known_examples():
            if rec.n == nn and rec.s == ss:
                return rec.multisets[0], rec.multisets[1]
        if ss == 2 and nn >= 4 and nn & (nn - 1) == 0:
            return power2_family(nn.bit_length() - 1)
        if nn == 2 * ss and ss >= 2:
            return mirror_pair(ss)
    return None


def has_witness(n: int, s: int) -> bool:
    return witness(n, s) is not None


# verification


@dataclass
class RecordResult:
    id: str
    n: int
    s: int
    checks: list[tuple[str, bool]] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return all(ok for _, ok in self.checks)

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "n": self.n,
            "s": self.s,
            "status": "pass" if self.ok else "fail",
            "checks": {name: ok for name, ok in self.checks},
            "seconds": round(self.seconds, 6),
        }


@dataclass
class VerificationReport:
    results: list[RecordResult]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    @property
    def failures(self) -> list[str]:
        return [r.id for r in self.results if not r.ok]

    def __getitem__(self, id_: str) -> RecordResult:
        for r in self.results:
            if r.id == id_:
                return r
        raise KeyError(id_)

    def to_json(self) -> dict:
        return {
            "status": "pass" if self.ok else "fail",
            "failures": self.failures,
            "records": [r.to_json() for r in self.results],
        }


def _two_sum_identity(A: IntMultiset, B: IntMultiset) -> bool:
    """f_A(x)^2 - f_A(x^2) == f_B(x)^2 - f_B(x^2), after a common shift to nonnegative values."""
    t = -min(A.min, B.min)
    fa, fb = genpoly(A.translate(t)), genpoly(B.translate(t))
    return fa * fa - fa.compose_power(2) == fb * fb - fb.compose_power(2)


def verify_record(rec: ExampleRecord, direct: bool = False) -> RecordResult:
    res = RecordResult(rec.id, rec.n, rec.s)
    t0 = time.perf_counter()
    members = rec.multisets
    pairs = list(combinations(members, 2))
    res.checks.append(("sizes", all(m.n == rec.n for m in members)))
    res.checks.append(("distinct", all(a != b for a, b in pairs)))
    if res.ok:
        res.checks.append(("equivalent", all(is_equivalent(a, b, rec.s) for a, b in pairs)))
        if rec.n > rec.s:
            res.checks.append(("dual-equivalent", all(is_equivalent(a, b, rec.n - rec.s) for a, b in pairs)))
        if rec.s == 2:
            res.checks.append(("two-sum-identity", all(_two_sum_identity(a, b) for a, b in pairs)))
        if direct:
            sums = [s_sums(m, rec.s) for m in members]
            res.checks.append(("direct-enumeration", all(x == sums[0] for x in sums[1:])))
    res.seconds = time.perf_counter() - t0
    return res


def family_records(
    mirror_s: Iterable[int] = range(2, 9),
    thue_morse_p: Iterable[int] = range(2, 7),
    power2_p: Iterable[int] = range(1, 6),
) -> list[ExampleRecord]:
    out = []
    for s in mirror_s:
        out.append(ExampleRecord(f"mirror-s{s}", 2 * s, s, mirror_pair(s), "n = 2s mirror construction", "mirror-pair"))
    for p in thue_morse_p:
        out.append(ExampleRecord(f"thue-morse-p{p}", 2 ** (p - 1), 2, thue_morse_split(p), "Thue-Morse split", "split"))
    for p in power2_p:
        out.append(ExampleRecord(f"power2-p{p}", 2**p, 2, power2_family(p), "iterated doubling", "pair"))
    return out


def verify_all(
    records: Optional[Sequence[ExampleRecord]] = None,
    families: bool = True,
    direct: bool = False,
) -> VerificationReport:
    """Re-verify every record (and family instance); results ordered by record id."""
    todo = list(known_examples() if records is None else records)
    if families:
        todo += family_records()
    results = [verify_record(rec, direct=direct) for rec in todo]
    results.sort(key=lambda r: r.id)
    return VerificationReport(results)


# corpus file: id|n|s|multiset;multiset;...|source
# the record kind rides along as a trailing "[kind]" tag inside source


def write_corpus(path, records: Optional[Sequence[ExampleRecord]] = None) -> None:
    records = known_examples() if records is None else records
    Path(path).write_text("".join(rec.to_line() + "\n" for rec in records))


def parse_corpus(text: str) -> list[ExampleRecord]:
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split("|")
        if len(fields) != 5:
            raise ValueError(f"line {lineno}: expected 5 '|'-separated fields")
        id_, n, s, members, source = fields
        kind = {3: "triple", 4: "quadruple"}.get(members.count(";") + 1, "pair")
        tag = _KIND_TAG.search(source)
        if tag:
            kind, source = tag.group(1), source[: tag.start()].rstrip()
        ms = tuple(parse_multiset(m) for m in members.split(";"))
        out.append(ExampleRecord(id_, int(n), int(s), ms, source, kind))
    return out


def load_corpus(path=None) -> list[ExampleRecord]:
    """Read a corpus file; defaults to the copy shipped with the package."""
    if path is None:
        text = resources.files("msrecovery").joinpath("data/corpus.txt").read_text()
    else:
        text = Path(path).read_text()
    return parse_corpus(text)


def perturb(rec: ExampleRecord, member: int = 0) -> ExampleRecord:
    """Copy of ``rec`` with one element of one member shifted up by 1."""
    M = rec.multisets[member]
    v = M.max
    counts = M.counts()
    counts[v] -= 1
    counts[v + 1] = counts.get(v + 1, 0) + 1
    changed = IntMultiset.from_counts(counts)
    members = rec.multisets[:member] + (changed,) + rec.multisets[member + 1 :]
    return ExampleRecord(rec.id, rec.n, rec.s, members, rec.source + " (perturbed)", rec.kind)

