"""Exhaustive search for s-equivalent multisets over weak compositions.

A weak composition (k_1, ..., k_m) of n encodes the multiset
{1^k_1, 2^k_2, ..., m^k_m}. Every composition gets a 128-bit digest of the
exact generating polynomial of its s-sums; compositions sharing a digest are
then compared exactly. The index keeps only digests and composition
ordinals (24 bytes per composition); multisets are re-derived on demand.
"""

from __future__ import annotations

import json
import logging
import time
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from hashlib import blake2b
from math import comb, gcd
from pathlib import Path
from typing import Callable, Optional, Sequence

import numpy as np

from .moser import moser_value
from .polynomial import IntPolynomial
from .multiset import (
    IntMultiset,
    format_multiset,
    packed_esym,
    packing_width,
    power_sum,
    ssum_genpoly,
)

log = logging.getLogger(__name__)

SIGNATURE_KEY = b"msrecovery/ssum-signature/v1"
ENTRY_BYTES = 24  # two uint64 digest halves + one uint64 ordinal
DEFAULT_CHUNK = 20_000


class SearchError(RuntimeError):
    pass


# compositions


@dataclass(frozen=True)
class CompositionCursor:
    n: int
    m: int
    parts: tuple[int, ...]
    exhausted: bool = False

    def __post_init__(self):
        if len(self.parts) != self.m or sum(self.parts) != self.n or min(self.parts) < 0:
            raise ValueError("parts must be m nonnegative integers summing to n")

    @property
    def ordinal(self) -> int:
        return rank_composition(self.parts)


def composition_count(n: int, m: int) -> int:
    return comb(n + m - 1, m - 1)


def first_composition(n: int, m: int) -> CompositionCursor:
    """Enumeration starts with all mass in the last part."""
    if n < 1 or m < 1:
        raise ValueError("n and m must be positive")
    return CompositionCursor(n, m, (0,) * (m - 1) + (n,))


def _advance(parts: list[int], n: int) -> bool:
    """In-place successor: bump the part before the last nonzero one, put the rest in the last part."""
    m = len(parts)
    i = m - 1
    while parts[i] == 0:
        i -= 1
    if i == 0:
        return False
    parts[i - 1] += 1
    for j in range(i, m):
        parts[j] = 0
    parts[m - 1] = n - sum(parts[:i])
    return True


def next_composition(c: CompositionCursor) -> CompositionCursor:
    if c.exhausted:
        raise StopIteration("composition cursor is exhausted")
    parts = list(c.parts)
    if not _advance(parts, c.n):
        return CompositionCursor(c.n, c.m, c.parts, exhausted=True)
    return CompositionCursor(c.n, c.m, tuple(parts))


def iter_compositions(n: int, m: int):
    c = first_composition(n, m)
    while not c.exhausted:
        yield c.parts
        c = next_composition(c)


def rank_composition(parts: Sequence[int]) -> int:
    """Position of ``parts`` in the enumeration order (lexicographic)."""
    m = len(parts)
    left = sum(parts)
    r = 0
    for i in range(m - 1):
        rest = m - i - 1  # parts after position i
        v = parts[i]
        # compositions with a smaller value u < v here: sum_u C(left-u+rest-1, rest-1)
        r += comb(left + rest, rest) - comb(left - v + rest, rest)
        left -= v
    return r


def unrank_composition(ordinal: int, n: int, m: int) -> tuple[int, ...]:
    if not 0 <= ordinal < composition_count(n, m):
        raise ValueError("ordinal out of range")
    parts = []
    left = n
    for i in range(m - 1):
        rest = m - i - 1
        v = 0
        while True:
            block = comb(left - v + rest - 1, rest - 1)
            if ordinal < block:
                break
            ordinal -= block
            v += 1
        parts.append(v)
        left -= v
    parts.append(left)
    return tuple(parts)


def multiset_of(c, offset: int = 1) -> IntMultiset:
    """Value i + offset carries multiplicity parts[i]; offset 1 gives {1^k1, ..., m^km}."""
    parts = c.parts if isinstance(c, CompositionCursor) else c
    return IntMultiset(tuple((i + offset, k) for i, k in enumerate(parts) if k))


# signatures


def _digest_packed(packed: int, key: bytes) -> bytes:
    return blake2b(packed.to_bytes((packed.bit_length() + 7) // 8, "little"), digest_size=16, key=key).digest()


def polynomial_signature(poly: IntPolynomial, key: bytes = SIGNATURE_KEY) -> bytes:
    """128-bit keyed BLAKE2b digest of a polynomial with nonnegative coefficients.

    Coefficients are laid out little-endian in fixed-width slots, the slot
    being the byte length of the coefficient sum, with trailing zero bytes
    dropped. For an s-sum polynomial the sum is C(n, s), so the layout is
    the same integer the search packs directly.
    """
    if any(c < 0 for c in poly.coeffs):
        raise ValueError("negative coefficient")
    width = 8 * max(1, (sum(poly.coeffs).bit_length() + 7) // 8)
    packed = 0
    for c in reversed(poly.coeffs):
        packed = (packed << width) | c
    return _digest_packed(packed, key)


def signature(A: IntMultiset, s: int, key: bytes = SIGNATURE_KEY) -> bytes:
    """Digest of the generating polynomial of the s-sums of A (values must be nonnegative)."""
    if A.min < 0:
        raise ValueError("translate to nonnegative first")
    return polynomial_signature(ssum_genpoly(A, s), key)


def _digest_chunk(args) -> tuple[int, np.ndarray]:
    n, s, m, offset, start, count, key = args
    parts = list(unrank_composition(start, n, m))
    width = packing_width(n, s)
    buf = bytearray(16 * count)
    span = range(m)
    for idx in range(count):
        entries = [(i + offset, parts[i]) for i in span if parts[i]]
        buf[16 * idx : 16 * idx + 16] = _digest_packed(packed_esym(entries, s, width), key)
        if idx + 1 < count:
            _advance(parts, n)
    return start, np.frombuffer(bytes(buf), dtype=np.uint64).reshape(count, 2)


# index


class SignatureIndex:
    """Digest -> composition ordinals, stored as flat numpy blocks."""

    def __init__(self, memory_budget: Optional[int] = None):
        self.memory_budget = memory_budget
        self._digests: list[np.ndarray] = []
        self._ordinals: list[np.ndarray] = []
        self.count = 0
        self._sorted = None

    @property
    def nbytes(self) -> int:
        return self.count * ENTRY_BYTES

    def fits(self, extra_entries: int) -> bool:
        return self.memory_budget is None or self.nbytes + extra_entries * ENTRY_BYTES <= self.memory_budget

    def add_block(self, start_ordinal: int, digests: np.ndarray) -> None:
        k = len(digests)
        self._digests.append(np.ascontiguousarray(digests, dtype=np.uint64))
        self._ordinals.append(np.arange(start_ordinal, start_ordinal + k, dtype=np.uint64))
        self.count += k
        self._sorted = None

    def add(self, digest: bytes, ordinal: int) -> None:
        self.add_block(ordinal, np.frombuffer(digest, dtype=np.uint64).reshape(1, 2))

    def _consolidate(self):
        if self._sorted is None:
            if self.count:
                d = np.concatenate(self._digests)
                o = np.concatenate(self._ordinals)
                order = np.lexsort((o, d[:, 1], d[:, 0]))
                self._sorted = (d[order], o[order])
            else:
                self._sorted = (np.empty((0, 2), np.uint64), np.empty(0, np.uint64))
        return self._sorted

    def bucket(self, digest: bytes) -> list[int]:
        d, o = self._consolidate()
        key = np.frombuffer(digest, dtype=np.uint64)
        hit = (d[:, 0] == key[0]) & (d[:, 1] == key[1])
        return [int(x) for x in o[hit]]

    def collision_groups(self) -> list[list[int]]:
        """Ordinal lists of every digest shared by two or more compositions."""
        d, o = self._consolidate()
        if len(d) < 2:
            return []
        same = (d[1:, 0] == d[:-1, 0]) & (d[1:, 1] == d[:-1, 1])
        starts = np.flatnonzero(np.concatenate(([True], ~same)))
        ends = np.append(starts[1:], len(d))
        groups = [[int(x) for x in o[a:b]] for a, b in zip(starts, ends) if b - a > 1]
        groups.sort(key=lambda g: g[0])
        return groups

    def bucket_count(self) -> int:
        d, _ = self._consolidate()
        if not len(d):
            return 0
        same = (d[1:, 0] == d[:-1, 0]) & (d[1:, 1] == d[:-1, 1])
        return int(len(d) - same.sum())

    def save(self, path) -> None:
        d, o = self._consolidate()
        with open(path, "wb") as fh:
            np.savez(fh, digests=d, ordinals=o)

    @classmethod
    def load(cls, path, memory_budget: Optional[int] = None) -> SignatureIndex:
        with np.load(path) as data:
            d, o = data["digests"], data["ordinals"]
        idx = cls(memory_budget)
        if len(o):
            idx._digests.append(d)
            idx._ordinals.append(o)
            idx.count = len(o)
        return idx


# results


@dataclass
class EquivalenceClass:
    members: list[IntMultiset]  # raw multisets over offset..offset+m-1
    ordinals: list[int]

    def normalized(self) -> list[IntMultiset]:
        """Members under the class's own affine normalization (min 0, gcd 1, smaller orientation)."""
        lo = min(M.min for M in self.members)
        hi = max(M.max for M in self.members)
        g = 0
        for M in self.members:
            for v, _ in M.entries:
                g = gcd(g, v - lo)
        g = g or 1

        def norm(sign: int) -> list[IntMultiset]:
            base = lo if sign > 0 else hi
            out = [IntMultiset.from_counts({sign * (v - base) // g: c for v, c in M.entries}) for M in self.members]
            return sorted(out, key=IntMultiset.elements)

        return min(norm(1), norm(-1), key=lambda ms: [M.elements() for M in ms])

    def affine_key(self) -> tuple:
        """Invariant of the class under a common map x -> p x + q."""
        n = self.members[0].n
        S = power_sum(self.members[0], 1)
        g = 0
        for M in self.members:
            for v, _ in M.entries:
                g = gcd(g, n * v - S)
        g = g or 1
        keys = []
        for sign in (1, -1):
            ms = sorted(tuple(sorted(sign * (n * v - S) // g for v in M)) for M in self.members)
            keys.append(tuple(ms))
        return min(keys)

    def to_json(self) -> dict:
        return {
            "members": [format_multiset(M) for M in self.members],
            "normalized": [format_multiset(M) for M in self.normalized()],
            "ordinals": self.ordinals,
        }


@dataclass
class SearchResult:
    n: int
    s: int
    m: int
    offset: int
    classes: list[EquivalenceClass]
    statistics: dict = field(default_factory=dict)
    partial: bool = False
    checkpoint: Optional[str] = None

    def to_json(self, timing: bool = True) -> dict:
        stats = dict(self.statistics)
        if not timing:
            stats.pop("seconds", None)
            stats.pop("rate", None)
        return {
            "parameters": {"n": self.n, "s": self.s, "m": self.m, "offset": self.offset},
            "classes": [c.to_json() for c in self.classes],
            "statistics": stats,
            "partial": self.partial,
            "checkpoint": self.checkpoint,
        }


def _confirm(groups: list[list[int]], n: int, s: int, m: int, offset: int):
    """Split digest groups by exact polynomial equality; returns classes and false-collision count."""
    classes, false_hits = [], 0
    for ordinals in groups:
        by_poly: dict = {}
        for o in ordinals:
            M = multiset_of(unrank_composition(o, n, m), offset)
            by_poly.setdefault(ssum_genpoly(M, s), []).append((o, M))
        if len(by_poly) > 1:
            false_hits += 1
        for members in by_poly.values():
            if len(members) > 1:
                classes.append(EquivalenceClass([M for _, M in members], [o for o, _ in members]))
    classes.sort(key=lambda c: c.ordinals[0])
    return classes, false_hits


def dedupe_classes(classes: list[EquivalenceClass]) -> list[EquivalenceClass]:
    """Keep the first class of each affine orbit."""
    seen, out = set(), []
    for c in classes:
        key = c.affine_key()
        if key not in seen:
            seen.add(key)
            out.append(c)
    return out


def _write_checkpoint(path: Path, n, s, m, offset, frontier_chunk, chunks, workers, index, key) -> str:
    path = Path(path)
    snapshot = path.with_suffix(".index.npz")
    index.save(snapshot)
    cursors = []
    for w in range(workers):
        nxt = next((i for i in range(frontier_chunk, len(chunks)) if i % workers == w), None)
        if nxt is not None:
            cursors.append({"worker": w, "parts": list(unrank_composition(chunks[nxt][0], n, m))})
    payload = {
        "version": 1,
        "parameters": {"n": n, "s": s, "m": m, "offset": offset},
        "signature_key": key.hex(),
        "indexed": index.count,
        "cursors": cursors,
        "index_snapshot": snapshot.name,
    }
    path.write_text(json.dumps(payload, indent=2) + "\n")
    return str(path)


def read_checkpoint(path) -> dict:
    data = json.loads(Path(path).read_text())
    if data.get("version") != 1:
        raise SearchError("unsupported checkpoint version")
    return data


def run_search(
    n: int,
    s: int,
    m: int,
    workers: int = 1,
    memory_budget: Optional[int] = None,
    *,
    offset: int = 1,
    dedupe: bool = True,
    checkpoint: Optional[str] = None,
    resume: Optional[str] = None,
    chunk_size: int = DEFAULT_CHUNK,
    key: bytes = SIGNATURE_KEY,
    progress: Optional[Callable[[int, int, int], None]] = None,
) -> SearchResult:
    """Enumerate all C(n+m-1, m-1) compositions, index digests, confirm and dedupe classes.

    If the index would outgrow ``memory_budget`` bytes (or the run is
    interrupted), the index and per-worker cursors are written to
    ``checkpoint`` and a partial result is returned.
    """
    if not 1 <= s < n:
        raise ValueError("need 1 <= s < n")
    if m < 2:
        raise ValueError("m must be at least 2")
    if offset < 0:
        raise ValueError("offset must be nonnegative")
    t0 = time.perf_counter()
    total = composition_count(n, m)
    if total >= 2**64:
        raise SearchError("composition space too large for 64-bit ordinals")
    chunks = [(a, min(chunk_size, total - a)) for a in range(0, total, chunk_size)]
    index = SignatureIndex(memory_budget)
    done_chunk = 0
    if resume is not None:
        state = read_checkpoint(resume)
        params = state["parameters"]
        if (params["n"], params["s"], params["m"], params["offset"]) != (n, s, m, offset):
            raise SearchError("checkpoint parameters do not match this search")
        key = bytes.fromhex(state["signature_key"])
        index = SignatureIndex.load(Path(resume).parent / state["index_snapshot"], memory_budget)
        starts = [rank_composition(c["parts"]) for c in state["cursors"]]
        frontier = min(starts) if starts else total
        done_chunk = next((i for i, (a, _) in enumerate(chunks) if a >= frontier), len(chunks))
        if frontier != (chunks[done_chunk][0] if done_chunk < len(chunks) else total):
            raise SearchError("checkpoint frontier does not fall on a chunk boundary; reuse the original chunk size")

    jobs = [(n, s, m, offset, a, cnt, key) for a, cnt in chunks[done_chunk:]]
    partial = False
    written = None
    pool = ProcessPoolExecutor(workers) if workers > 1 else None
    try:
        pending: deque = deque()
        feed = iter(jobs)

        def submit():
            job = next(feed, None)
            if job is None:
                return False
            pending.append(pool.submit(_digest_chunk, job) if pool else job)
            return True

        for _ in range(max(1, 2 * workers)):
            if not submit():
                break
        chunk_no = done_chunk
        while pending:
            item = pending.popleft()
            start, digests = item.result() if pool else _digest_chunk(item)
            if not index.fits(len(digests)):
                partial = True
                break
            index.add_block(start, digests)
            chunk_no += 1
            if progress:
                progress(index.count, total, time.perf_counter() - t0)
            submit()
    except KeyboardInterrupt:
        partial = True
        log.warning("search interrupted")
    finally:
        if pool:
            pool.shutdown(wait=True, cancel_futures=True)

    if partial:
        if checkpoint is None:
            checkpoint = f"search-n{n}-s{s}-m{m}.checkpoint.json"
        written = _write_checkpoint(Path(checkpoint), n, s, m, offset, chunk_no, chunks, workers, index, key)
        log.warning("search stopped after %d of %d compositions; checkpoint %s", index.count, total, written)

    groups = index.collision_groups()
    raw, false_hits = _confirm(groups, n, s, m, offset)
    classes = dedupe_classes(raw) if dedupe else raw
    elapsed = time.perf_counter() - t0
    stats = {
        "compositions": total,
        "visited": index.count,
        "buckets": index.bucket_count(),
        "digest_groups": len(groups),
        "false_collisions": false_hits,
        "raw_classes": len(raw),
        "confirmed_classes": len(classes),
        "index_bytes": index.nbytes,
        "seconds": round(elapsed, 3),
        "rate": round(index.count / elapsed, 1) if elapsed > 0 else None,
    }
    return SearchResult(n, s, m, offset, classes, stats, partial, written)


def confinement_audit(result: SearchResult) -> bool:
    """For each class, the first power sum where two members differ must be a root k of F_{s,k}(n)."""
    n, s = result.n, result.s
    for c in result.classes:
        for i, A in enumerate(c.members):
            for B in c.members[i + 1 :]:
                k = next(k for k in range(1, n + 1) if power_sum(A, k) != power_sum(B, k))
                if moser_value(s, k, n) != 0:
                    return False
    return True
