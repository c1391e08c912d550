"""Moser polynomials F_{s,k}(n) = sum_{p=1..s} (-1)**(p-1) p**(k-1) C(n, s-p).

Polynomials are held in the integer-scaled form G = (s-1)! * F, which is
monic of degree s - 1. Root search is a bounded scan over [1, bound] with
residue filters; it never factors over the integers.
"""

from __future__ import annotations

import logging
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import factorial, isqrt
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .polynomial import IntPolynomial

log = logging.getLogger(__name__)

TRIVIAL = "trivial"
COLLAPSE = "collapse"
SUSPECT = "suspect"
CONFIRMED = "confirmed-singular"

DEFAULT_BOUND = 10**6


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    return all(p % d for d in range(3, isqrt(p) + 1, 2))


def primes_above(start: int, count: int) -> tuple[int, ...]:
    out, p = [], start + 1
    while len(out) < count:
        if _is_prime(p):
            out.append(p)
        p += 1
    return tuple(out)


DEFAULT_PRIMES = primes_above(1000, 5)


@dataclass(frozen=True)
class MoserPolynomial:
    s: int
    k: int
    G: IntPolynomial

    @property
    def scale(self) -> int:
        return factorial(self.s - 1)

    def value(self, n) -> Fraction:
        return Fraction(self.G(n)) / self.scale

    def __str__(self) -> str:
        return f"{self.scale}*F[{self.s},{self.k}](n) = {self.G.format('n')}"


@dataclass(frozen=True)
class RootRecord:
    s: int
    k: int
    n: int
    classification: str

    def to_json(self) -> dict:
        return {"s": self.s, "k_first": self.k, "n": self.n, "classification": self.classification}


def _binomial_poly_value(n, j: int):
    """C(n, j) as the polynomial n(n-1)...(n-j+1)/j!, valid for any rational n."""
    if j < 0:
        return 0
    num = 1
    for i in range(j):
        num *= n - i
    return Fraction(num, factorial(j))


def moser_value(s: int, k: int, n) -> Fraction:
    """Exact F_{s,k}(n) from the defining sum; zero when s < 1."""
    if k < 1:
        raise ValueError("k must be positive")
    if s < 1:
        return Fraction(0)
    total = Fraction(0)
    for p in range(1, s + 1):
        term = pow(p, k - 1) * _binomial_poly_value(n, s - p)
        total += term if p % 2 else -term
    return total


def moser_polynomial(s: int, k: int) -> MoserPolynomial:
    """G = (s-1)! F_{s,k} expanded as sum (-1)**(p-1) p**(k-1) n^(s-p falling) (s-1)!/(s-p)!."""
    if s < 1 or k < 1:
        raise ValueError("s and k must be positive")
    G = IntPolynomial()
    falling = IntPolynomial([1])  # n(n-1)...(n-j+1) for j = s - p
    by_j = [falling]
    for j in range(1, s):
        falling = falling * IntPolynomial([-(j - 1), 1])
        by_j.append(falling)
    for p in range(1, s + 1):
        j = s - p
        coef = pow(p, k - 1) * (factorial(s - 1) // factorial(j))
        G = G + by_j[j] * (coef if p % 2 else -coef)
    return MoserPolynomial(s, k, G)


def _scaled(s: int, k: int) -> IntPolynomial:
    """(s-1)! F_{s,k}; the zero polynomial for s < 1."""
    return moser_polynomial(s, k).G if s >= 1 else IntPolynomial()


def check_recurrences(s: int, k: int) -> bool:
    """Both recurrences as exact polynomial identities, after scaling by (s-1)!.

    F_{s,k}(x) = F_{s,k}(x-1) + F_{s-1,k}(x-1)
    F_{s,k}(x) = s F_{s,k-1}(x) - x F_{s-1,k-1}(x-1)
    """
    if s < 2 or k < 2:
        raise ValueError("need s >= 2 and k >= 2")
    G = _scaled(s, k)
    first = _scaled(s, k).shift(-1) + _scaled(s - 1, k).shift(-1) * (s - 1)
    second = _scaled(s, k - 1) * s - _scaled(s - 1, k - 1).shift(-1).times_x() * (s - 1)
    return G == first and G == second


def _as_poly(P: Union[MoserPolynomial, IntPolynomial]) -> IntPolynomial:
    return P.G if isinstance(P, MoserPolynomial) else P


def residue_roots(poly: IntPolynomial, p: int) -> list[int]:
    """All r in [0, p) with poly(r) = 0 mod p."""
    if p >= 1 << 31:  # int64 products would overflow
        return [r for r in range(p) if poly.eval_mod(r, p) == 0]
    r = np.arange(p, dtype=np.int64)
    acc = np.zeros(p, dtype=np.int64)
    for c in reversed(poly.coeffs):
        acc = (acc * r + (c % p)) % p
    return [int(x) for x in np.flatnonzero(acc == 0)]


def classify_root(s: int, n: int) -> str:
    from .registry import has_witness

    if n <= s:
        return TRIVIAL
    if n == 2 * s:
        return COLLAPSE
    return CONFIRMED if has_witness(n, s) else SUSPECT


def find_integer_roots(poly: IntPolynomial, bound: int, primes: Sequence[int] = DEFAULT_PRIMES) -> list[int]:
    """Integers n in [1, bound] with poly(n) == 0.

    Candidates are the residue classes that vanish modulo every filter prime;
    only those are evaluated exactly.
    """
    if poly.is_zero():
        raise ValueError("zero polynomial has every integer as a root")
    if not primes:
        warnings.warn("no filter primes given; falling back to a full exact scan", RuntimeWarning, stacklevel=2)
        return [n for n in range(1, bound + 1) if poly(n) == 0]
    filters = []
    for p in primes:
        if poly.leading % p == 0:
            raise ValueError(f"filter prime {p} divides the leading coefficient")
        roots = residue_roots(poly, p)
        if not roots:
            return []
        filters.append((len(roots), p, frozenset(roots)))
    filters.sort()
    _, p0, roots0 = filters[0]
    rest = [(p, rs) for _, p, rs in filters[1:]]
    found = []
    for r in sorted(roots0):
        start = r if r >= 1 else r + p0
        for n in range(start, bound + 1, p0):
            if all(n % p in rs for p, rs in rest) and poly(n) == 0:
                found.append(n)
    found.sort()
    return found


def integer_roots(
    P: Union[MoserPolynomial, IntPolynomial],
    bound: int = DEFAULT_BOUND,
    filter_primes: Sequence[int] = DEFAULT_PRIMES,
) -> list[RootRecord]:
    """Classified integer roots of G in [1, bound]."""
    if not isinstance(P, MoserPolynomial):
        raise TypeError("integer_roots needs a MoserPolynomial; use find_integer_roots for bare polynomials")
    if bound < P.s:
        raise ValueError(f"bound {bound} is smaller than s={P.s}")
    return [RootRecord(P.s, P.k, n, classify_root(P.s, n)) for n in find_integer_roots(P.G, bound, filter_primes)]


def auto_k_limit(s: int) -> int:
    return 2 * s + 5


def _scan_one(args) -> list[RootRecord]:
    s, k_limit, bound, primes = args
    first_k: dict[int, int] = {}
    for k in range(1, k_limit + 1):
        for n in find_integer_roots(moser_polynomial(s, k).G, bound, primes):
            if n > s and n != 2 * s and n not in first_k:
                first_k[n] = k
    return [RootRecord(s, k, n, classify_root(s, n)) for n, k in sorted(first_k.items())]


def scan_table(
    s_lo: int,
    s_hi: int,
    k_limit: Optional[int] = None,
    bound: int = DEFAULT_BOUND,
    primes: Sequence[int] = DEFAULT_PRIMES,
    workers: int = 1,
) -> list[RootRecord]:
    """Nontrivial roots n > s, n != 2s, each tagged with the smallest k that hits it.

    ``k_limit=None`` scans k up to 2s + 5 for each s.
    """
    if not 3 <= s_lo <= s_hi:
        raise ValueError("need 3 <= s_lo <= s_hi")
    if k_limit is not None and k_limit < 3:
        raise ValueError("k_limit must be at least 3")
    jobs = [(s, auto_k_limit(s) if k_limit is None else k_limit, bound, tuple(primes)) for s in range(s_lo, s_hi + 1)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            rows = list(pool.map(_scan_one, jobs))
    else:
        rows = [_scan_one(j) for j in jobs]
    return [rec for row in rows for rec in row]


def k_max(s: int, k_limit: int, bound: int = DEFAULT_BOUND, primes: Sequence[int] = DEFAULT_PRIMES):
    """Largest k <= k_limit for which G_{s,k} has a root in (s, bound], else None.

    Root-based, unlike a factorization-based definition.
    """
    if s < 3:
        raise ValueError("s must be at least 3")
    for k in range(k_limit, 0, -1):
        if any(n > s for n in find_integer_roots(moser_polynomial(s, k).G, bound, primes)):
            return k
    return None


def odd_k_collapse_check(s: int) -> bool:
    if s < 3:
        raise ValueError("s must be at least 3")
    return all(moser_value(s, k, 2 * s) == 0 for k in range(3, 2 * s, 2))


def modp_no_root_certificate(P: Union[MoserPolynomial, IntPolynomial], p: int) -> tuple[bool, list[int]]:
    """Certified iff G has no root mod p, which rules out integer roots entirely."""
    poly = _as_poly(P)
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    if poly.leading % p == 0:
        raise ValueError(f"{p} divides the leading coefficient")
    roots = [r for r in range(p) if poly.eval_mod(r, p) == 0]
    return not roots, roots


def strip_roots(poly: IntPolynomial, roots: Iterable[int]) -> IntPolynomial:
    """Divide out (n - r) for each given root; raises if one is not a root."""
    for r in roots:
        poly = poly // IntPolynomial([-r, 1])
    return poly


def format_table(records: Sequence[RootRecord]) -> str:
    """One row per s: ``n[k]`` for each root with its first k, suspects starred."""
    rows: dict[int, list[str]] = {}
    for r in records:
        mark = "*" if r.classification == SUSPECT else ""
        rows.setdefault(r.s, []).append(f"{mark}{r.n}[{r.k}]")
    width = max((len(str(s)) for s in rows), default=1)
    return "\n".join(f"{s:>{width}} | {', '.join(cells)}" for s, cells in sorted(rows.items()))
