"""Conjugation chains on the quadratics that govern roots of F_{s,4} and F_{s,5}.

k = 4:  n^2 - (6s - 1) n + 6 s^2 = 0
k = 5:  n^2 - (12s - 5) n + 12 s^2 = 0

Both are symmetric in (s, n - s), giving the n-move (n, s) -> (n, n - s);
Vieta on n gives the s-move (n, s) -> (6s - 1 - n, s), resp. (12s - 5 - n, s).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt
from typing import Optional

from .moser import moser_value

_LINEAR = {4: (6, 1), 5: (12, 5)}  # n-coefficient a*s - b and constant a*s^2


def _check_k(k: int) -> tuple[int, int]:
    if k not in _LINEAR:
        raise ValueError("k must be 4 or 5")
    return _LINEAR[k]


def quadratic(n: int, s: int, k: int) -> int:
    a, b = _check_k(k)
    return n * n - (a * s - b) * n + a * s * s


def is_compliant(n: int, s: int, k: int) -> bool:
    """Whether (n, s) is an actual root of F_{s,k}: the factored forms need s >= k - 1, and n > s."""
    return s >= k - 1 and n > s


def n_conjugate(n: int, s: int) -> tuple[int, int]:
    if not 0 < s < n:
        raise ValueError("need 0 < s < n")
    return n, n - s


def s_conjugate(n: int, s: int, k: int) -> tuple[int, int]:
    a, b = _check_k(k)
    if quadratic(n, s, k) != 0:
        raise ValueError("not a root of the conjugation quadratic")
    return a * s - b - n, s


@dataclass(frozen=True)
class ConjugationChain:
    k: int
    pairs: tuple[tuple[int, int], ...]
    move_labels: tuple[str, ...]  # label i joins pairs[i] and pairs[i+1]
    compliant: tuple[bool, ...]

    def to_json(self) -> list[dict]:
        out = []
        for i, ((n, s), ok) in enumerate(zip(self.pairs, self.compliant)):
            out.append({"n": n, "s": s, "move": self.move_labels[i - 1] if i else None, "compliant": ok})
        return out

    def to_text(self) -> str:
        """Arrow notation; non-compliant pairs carry a ``!`` prefix."""
        parts = []
        for i, ((n, s), ok) in enumerate(zip(self.pairs, self.compliant)):
            if i:
                parts.append(f"-{self.move_labels[i - 1]}->")
            parts.append(f"{'' if ok else '!'}({n},{s})")
        return " ".join(parts)


def _move_label(p: tuple[int, int], q: tuple[int, int]) -> str:
    return "n" if p[0] == q[0] else "s"


def _walk(start: tuple[int, int], k: int, first_move: str, count: int) -> list[tuple[int, int]]:
    out = [start]
    move = first_move
    while len(out) < count:
        n, s = out[-1]
        out.append(s_conjugate(n, s, k) if move == "s" else n_conjugate(n, s))
        move = "n" if move == "s" else "s"
    return out


def build_chain(k: int, length: int) -> ConjugationChain:
    """Chain of positive solutions, starting from the minimal root.

    For k = 4 the minimal root (2, 1) is self n-conjugate, so the chain runs one
    way. For k = 5 the seed (3, 1) / (3, 2) extends in both directions; the
    result is the window of ``length`` pairs around the seed in merged order,
    with the extra pair (for odd length) on the (3, 1) side.
    """
    _check_k(k)
    if length < 1:
        raise ValueError("length must be positive")
    if k == 4:
        pairs = _walk((2, 1), 4, "s", length)
    else:
        forward = (length + 1) // 2
        backward = length - forward
        pairs = list(reversed(_walk((3, 2), 5, "s", backward))) if backward else []
        pairs += _walk((3, 1), 5, "s", forward)
    labels = tuple(_move_label(p, q) for p, q in zip(pairs, pairs[1:]))
    return ConjugationChain(k, tuple(pairs), labels, tuple(is_compliant(n, s, k) for n, s in pairs))


def solutions_upto(k: int, n_max: int) -> list[tuple[int, int]]:
    """All positive (n, s) with n <= n_max solving the quadratic, by solving for s."""
    a, b = _check_k(k)
    out = []
    for n in range(1, n_max + 1):
        # s^2 - n s + n (n + b) / a = 0
        if (n * (n + b)) % a:
            continue
        disc = n * n - 4 * n * (n + b) // a
        if disc < 0:
            continue
        r = isqrt(disc)
        if r * r != disc or (n + r) % 2:
            continue
        for s in sorted({(n - r) // 2, (n + r) // 2}):
            if s > 0:
                out.append((n, s))
    return out


def chain_covers(k: int, n_max: int) -> tuple[bool, Optional[tuple[int, int]]]:
    """Check every solution with n <= n_max appears in the chain; returns a missing pair if not."""
    sols = solutions_upto(k, n_max)
    length = 2
    while True:
        chain = build_chain(k, length)
        ends = chain.pairs[-1:] if k == 4 else chain.pairs[:1] + chain.pairs[-1:]
        if all(n > n_max for n, _ in ends):
            break
        length += 2
    members = set(chain.pairs)
    for pair in sols:
        if pair not in members:
            return False, pair
    return True, None


def chain_roots_vanish(chain: ConjugationChain) -> bool:
    """Every compliant pair is a root of the corresponding Moser polynomial."""
    return all(moser_value(s, chain.k, n) == 0 for (n, s), ok in zip(chain.pairs, chain.compliant) if ok)
