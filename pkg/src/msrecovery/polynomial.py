"""Dense univariate polynomials with exact integer coefficients."""

from __future__ import annotations

from itertools import zip_longest
from typing import Iterable, Sequence


class IntPolynomial:
    """Immutable polynomial; ``coeffs[i]`` is the coefficient of ``x**i``.

    Trailing zeros are stripped on construction, so the zero polynomial has
    an empty coefficient tuple and degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        c = [int(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    def __setattr__(self, name, value):
        raise AttributeError("IntPolynomial is immutable")

    @classmethod
    def monomial(cls, degree: int, coeff: int = 1) -> IntPolynomial:
        return cls([0] * degree + [coeff])

    @classmethod
    def from_roots(cls, roots: Iterable[int]) -> IntPolynomial:
        """Monic polynomial prod(x - r)."""
        p = cls([1])
        for r in roots:
            p = p * cls([-r, 1])
        return p

    @classmethod
    def from_counts(cls, counts: Iterable[tuple[int, int]]) -> IntPolynomial:
        """Generating polynomial sum(mult * x**exponent)."""
        c: list[int] = []
        for e, m in counts:
            if e < 0:
                raise ValueError("negative exponent")
            if e >= len(c):
                c.extend([0] * (e + 1 - len(c)))
            c[e] += m
        return cls(c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return self.leading == 1

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __eq__(self, other) -> bool:
        if isinstance(other, IntPolynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs == IntPolynomial([other]).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"IntPolynomial({list(self.coeffs)})"

    def format(self, var: str = "x") -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for e in range(self.degree, -1, -1):
            c = self.coeffs[e]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if e == 0:
                body = str(a)
            else:
                mono = var if e == 1 else f"{var}^{e}"
                body = mono if a == 1 else f"{a}*{mono}"
            terms.append((sign, body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    __str__ = format

    # arithmetic

    def __neg__(self) -> IntPolynomial:
        return IntPolynomial(-c for c in self.coeffs)

    def __add__(self, other) -> IntPolynomial:
        other = _coerce(other)
        return IntPolynomial(a + b for a, b in zip_longest(self.coeffs, other.coeffs, fillvalue=0))

    __radd__ = __add__

    def __sub__(self, other) -> IntPolynomial:
        other = _coerce(other)
        return IntPolynomial(a - b for a, b in zip_longest(self.coeffs, other.coeffs, fillvalue=0))

    def __rsub__(self, other) -> IntPolynomial:
        return _coerce(other) - self

    def __mul__(self, other) -> IntPolynomial:
        if isinstance(other, int):
            return IntPolynomial(c * other for c in self.coeffs)
        other = _coerce(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return IntPolynomial()
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return IntPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> IntPolynomial:
        if k < 0:
            raise ValueError("negative power")
        result, base = IntPolynomial([1]), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def exact_div(self, d: int) -> IntPolynomial:
        """Divide every coefficient by ``d``; raises if any division is inexact."""
        out = []
        for c in self.coeffs:
            q, r = divmod(c, d)
            if r:
                raise ArithmeticError(f"coefficient {c} not divisible by {d}")
            out.append(q)
        return IntPolynomial(out)

    def divmod(self, divisor: IntPolynomial) -> tuple[IntPolynomial, IntPolynomial]:
        """Long division by a monic (or unit-leading) divisor over the integers."""
        divisor = _coerce(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        lead = divisor.leading
        if lead not in (1, -1):
            raise ValueError("divisor must have leading coefficient +-1")
        rem = list(self.coeffs)
        dd = divisor.degree
        if len(rem) - 1 < dd:
            return IntPolynomial(), IntPolynomial(rem)
        quot = [0] * (len(rem) - dd)
        for i in range(len(rem) - 1, dd - 1, -1):
            q = rem[i] * lead
            quot[i - dd] = q
            if q:
                for j, c in enumerate(divisor.coeffs):
                    rem[i - dd + j] -= q * c
        return IntPolynomial(quot), IntPolynomial(rem[:dd])

    def __floordiv__(self, divisor) -> IntPolynomial:
        q, r = self.divmod(divisor)
        if not r.is_zero():
            raise ArithmeticError("polynomial division is not exact")
        return q

    def divides(self, other: IntPolynomial) -> bool:
        """True if ``self`` divides ``other`` (self monic)."""
        return other.divmod(self)[1].is_zero()

    # evaluation and substitution

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_mod(self, x: int, p: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % p
        return acc

    def reduce_mod(self, p: int) -> list[int]:
        return [c % p for c in self.coeffs]

    def compose_power(self, j: int) -> IntPolynomial:
        """f(x**j)."""
        if j < 1:
            raise ValueError("j must be positive")
        out = [0] * (j * self.degree + 1) if self.coeffs else []
        for e, c in enumerate(self.coeffs):
            out[j * e] = c
        return IntPolynomial(out)

    def shift(self, c: int) -> IntPolynomial:
        """f(x + c), via Horner's scheme on polynomials."""
        lin = IntPolynomial([c, 1])
        acc = IntPolynomial()
        for a in reversed(self.coeffs):
            acc = acc * lin + a
        return acc

    def times_x(self) -> IntPolynomial:
        return IntPolynomial((0,) + self.coeffs) if self.coeffs else IntPolynomial()

    def reversed_at(self, top: int) -> IntPolynomial:
        """x**top * f(1/x); requires top >= degree."""
        if self.degree > top:
            raise ValueError("top below degree")
        out = [0] * (top + 1)
        for e, c in enumerate(self.coeffs):
            out[top - e] = c
        return IntPolynomial(out)

    def terms(self) -> Sequence[tuple[int, int]]:
        """Nonzero (exponent, coefficient) pairs in increasing exponent order."""
        return [(e, c) for e, c in enumerate(self.coeffs) if c]


def _coerce(x) -> IntPolynomial:
    if isinstance(x, IntPolynomial):
        return x
    if isinstance(x, int):
        return IntPolynomial([x])
    raise TypeError(f"cannot use {type(x).__name__} as IntPolynomial")
