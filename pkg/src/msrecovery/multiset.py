"""Integer multisets and their s-sums.

Multisets are stored run-length encoded as ``(value, multiplicity)`` pairs,
strictly increasing by value. All arithmetic is exact.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from math import comb, gcd
from typing import Iterable, Iterator, Mapping

from .polynomial import IntPolynomial

Entries = tuple[tuple[int, int], ...]


class MultisetParseError(ValueError):
    """Malformed multiset literal; ``position`` is the 0-based character offset."""

    def __init__(self, message: str, text: str, position: int):
        super().__init__(f"{message} at position {position}: {text!r}")
        self.text = text
        self.position = position


@dataclass(frozen=True)
class IntMultiset:
    entries: Entries

    def __post_init__(self):
        prev = None
        for v, m in self.entries:
            if m < 1:
                raise ValueError(f"multiplicity of {v} must be positive")
            if prev is not None and v <= prev:
                raise ValueError("entry values must be strictly increasing")
            prev = v
        if not self.entries:
            raise ValueError("empty multiset")

    @classmethod
    def from_counts(cls, counts: Mapping[int, int]) -> IntMultiset:
        return cls(tuple((int(v), int(m)) for v, m in sorted(counts.items()) if m))

    @property
    def n(self) -> int:
        return sum(m for _, m in self.entries)

    def __len__(self) -> int:
        return self.n

    def __iter__(self) -> Iterator[int]:
        for v, m in self.entries:
            for _ in range(m):
                yield v

    def elements(self) -> list[int]:
        return list(self)

    def counts(self) -> dict[int, int]:
        return dict(self.entries)

    @property
    def min(self) -> int:
        return self.entries[0][0]

    @property
    def max(self) -> int:
        return self.entries[-1][0]

    def translate(self, t: int) -> IntMultiset:
        return IntMultiset(tuple((v + t, m) for v, m in self.entries))

    def union(self, other: IntMultiset) -> IntMultiset:
        c = Counter(self.counts())
        c.update(other.counts())
        return IntMultiset.from_counts(c)

    def is_constant(self) -> bool:
        return len(self.entries) == 1

    def is_symmetric(self) -> bool:
        lo, hi = self.min, self.max
        return all(self.counts().get(lo + hi - v) == m for v, m in self.entries)

    def __str__(self) -> str:
        return format_multiset(self)


def make_multiset(values: Iterable[int]) -> IntMultiset:
    values = list(values)
    if not values:
        raise ValueError("empty multiset")
    return IntMultiset.from_counts(Counter(int(v) for v in values))


_TOKEN = re.compile(r"\s*(-?\d+)(?:\s*\^\s*(\d+))?\s*")


def parse_multiset(text: str) -> IntMultiset:
    """Parse ``value`` / ``value^mult`` tokens separated by commas, e.g. ``0,1^16,2^10``.

    Surrounding braces are tolerated. Errors carry the character offset.
    """
    body, offset = text, 0
    stripped = text.strip()
    if stripped.startswith("{") and stripped.endswith("}"):
        offset = text.index("{") + 1
        body = text[offset : text.rindex("}")]
    if not body.strip():
        raise MultisetParseError("empty multiset", text, offset)
    counts: Counter[int] = Counter()
    pos = 0
    for token in body.split(","):
        m = _TOKEN.fullmatch(token)
        if m is None:
            bad = len(token) - len(token.lstrip())
            raise MultisetParseError("expected 'value' or 'value^multiplicity'", text, offset + pos + bad)
        mult = int(m.group(2)) if m.group(2) is not None else 1
        if mult < 1:
            raise MultisetParseError("multiplicity must be positive", text, offset + pos + m.start(2))
        counts[int(m.group(1))] += mult
        pos += len(token) + 1
    return IntMultiset.from_counts(counts)


def format_multiset(A: IntMultiset) -> str:
    return ",".join(str(v) if m == 1 else f"{v}^{m}" for v, m in A.entries)


def s_sums(A: IntMultiset, s: int) -> IntMultiset:
    """All sums over s-subsets of positions, by direct enumeration."""
    if not 1 <= s <= A.n:
        raise ValueError(f"s={s} out of range 1..{A.n}")
    return IntMultiset.from_counts(Counter(map(sum, combinations(A.elements(), s))))


def power_sum(A: IntMultiset, k: int) -> int:
    if k < 1:
        raise ValueError("k must be positive")
    return sum(m * v**k for v, m in A.entries)


def genpoly(A: IntMultiset) -> IntPolynomial:
    """f_A(x) = sum of mult * x**value; values must be nonnegative."""
    if A.min < 0:
        raise ValueError("translate to nonnegative first")
    return IntPolynomial.from_counts(A.entries)


def packing_width(n: int, s: int) -> int:
    """Bits per coefficient slot, a whole number of bytes, enough for C(n, s)."""
    return 8 * max(1, (comb(n, s).bit_length() + 7) // 8)


def packed_esym(entries: Entries, s: int, width: int) -> int:
    """e_s of the monomials x**v, evaluated at x = 2**width.

    Runs Newton's identities e_j = (1/j) sum_{i<=j} (-1)**(i-1) e_{j-i} p_i with
    p_i = f_A(x**i), all as exact integers. Division by j is exact because
    e_j has integer coefficients; a nonzero remainder is a bug.
    """
    power = [0]
    for i in range(1, s + 1):
        step = width * i
        power.append(sum(m << (step * v) for v, m in entries))
    e = [1]
    for j in range(1, s + 1):
        acc = 0
        for i in range(1, j + 1):
            term = e[j - i] * power[i]
            acc = acc + term if i & 1 else acc - term
        q, r = divmod(acc, j)
        if r:
            raise ArithmeticError(f"Newton identity division by {j} is inexact")
        e.append(q)
    return e[s]


def unpack(value: int, width: int) -> IntPolynomial:
    if value < 0:
        raise ArithmeticError("packed polynomial has a negative coefficient")
    step = width // 8
    raw = value.to_bytes((value.bit_length() + 7) // 8, "little")
    return IntPolynomial(int.from_bytes(raw[i : i + step], "little") for i in range(0, len(raw), step))


def ssum_genpoly(A: IntMultiset, s: int) -> IntPolynomial:
    """Generating polynomial of the s-sums of A, without enumerating subsets.

    For s > n/2 the complementary order n - s is computed and reflected:
    every s-sum equals sigma_1(A) minus the sum of the complementary positions.
    """
    n = A.n
    if not 1 <= s <= n:
        raise ValueError(f"s={s} out of range 1..{n}")
    if A.min < 0:
        raise ValueError("translate to nonnegative first")
    if s == n:
        return IntPolynomial.monomial(power_sum(A, 1))
    if 2 * s > n:
        return ssum_genpoly(A, n - s).reversed_at(power_sum(A, 1))
    width = packing_width(n, s)
    return unpack(packed_esym(A.entries, s, width), width)


def _sum_smallest(A: IntMultiset, s: int) -> int:
    total, left = 0, s
    for v, m in A.entries:
        take = min(m, left)
        total += take * v
        left -= take
        if not left:
            break
    return total


def _sum_largest(A: IntMultiset, s: int) -> int:
    total, left = 0, s
    for v, m in reversed(A.entries):
        take = min(m, left)
        total += take * v
        left -= take
        if not left:
            break
    return total


def equivalence_trace(A: IntMultiset, B: IntMultiset, s: int) -> tuple[bool, list[tuple[str, bool]]]:
    """s-equivalence verdict plus the list of (check, passed) steps that ran."""
    trace: list[tuple[str, bool]] = []

    def check(name: str, ok: bool) -> bool:
        trace.append((name, ok))
        return ok

    if not check("size", A.n == B.n):
        return False, trace
    if not 1 <= s <= A.n:
        raise ValueError(f"s={s} out of range 1..{A.n}")
    if not check("sigma1", power_sum(A, 1) == power_sum(B, 1)):
        return False, trace
    if not check("smallest-s-sum", _sum_smallest(A, s) == _sum_smallest(B, s)):
        return False, trace
    if not check("largest-s-sum", _sum_largest(A, s) == _sum_largest(B, s)):
        return False, trace
    t = -min(A.min, B.min)
    same = ssum_genpoly(A.translate(t), s) == ssum_genpoly(B.translate(t), s)
    check("generating-polynomial", same)
    return same, trace


def is_equivalent(A: IntMultiset, B: IntMultiset, s: int) -> bool:
    return equivalence_trace(A, B, s)[0]


def mirror(A: IntMultiset) -> tuple[IntMultiset, IntMultiset]:
    """Return (c*A, 2cS/n - c*A) with c the least positive integer making 2cS/n integral."""
    n, S = A.n, power_sum(A, 1)
    c = n // gcd(n, 2 * S)
    center = 2 * c * S // n
    scaled = affine(A, c, 0)
    return scaled, affine(A, -c, center)


def affine(A: IntMultiset, p: int, q: int) -> IntMultiset:
    if p == 0:
        raise ValueError("degenerate map")
    return IntMultiset.from_counts({p * v + q: m for v, m in A.entries})


def canonical_form(A: IntMultiset) -> IntMultiset:
    """Unique representative of the orbit of A under x -> p*x + q (p != 0)."""
    if A.is_constant():
        return IntMultiset(((0, A.n),))
    R = A.translate(-A.min)
    g = 0
    for v, _ in R.entries:
        g = gcd(g, v)
    R = IntMultiset(tuple((v // g, m) for v, m in R.entries))
    flipped = affine(R, -1, R.max)
    return min(R, flipped, key=IntMultiset.elements)


def sigma_divergence(A: IntMultiset, B: IntMultiset, k_limit: int) -> set[int]:
    if A.n != B.n:
        raise ValueError("multisets differ in size")
    return {k for k in range(1, k_limit + 1) if power_sum(A, k) != power_sum(B, k)}
