"""Arithmetic in the prime field F_p and combinatorial coefficients mod p.

Polynomial kernels keep coefficients as plain ints reduced mod p for speed;
`FieldElement` is the value type used on API boundaries so a result carries
its modulus.  Factorial tables are grown lazily per prime and cached, since
the closed-form coefficient polynomials need O(p) factorials exactly once.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

MAX_PRIME = 2**31  # products of two reduced values then fit in 64 bits


def is_prime(n: int) -> bool:
    """Deterministic primality by trial division (adequate at 32-bit scale)."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class FieldElement:
    """An element of F_p, stored as its canonical representative in [0, p)."""

    value: int
    p: int

    def __post_init__(self):
        if not 0 <= self.value < self.p:
            object.__setattr__(self, "value", self.value % self.p)

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.p != self.p:
                raise ValueError(f"mixed moduli {self.p} and {other.p}")
            return other
        if isinstance(other, int):
            return FieldElement(other, self.p)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FieldElement((self.value + other.value) % self.p, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FieldElement((self.value - other.value) % self.p, self.p)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FieldElement(self.value * other.value % self.p, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(-self.value % self.p, self.p)

    def __pow__(self, k: int):
        return FieldElement(pow(self.value, k, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"FieldElement({self.value}, p={self.p})"


def inv(a: FieldElement) -> FieldElement:
    """Multiplicative inverse in F_p.  Zero has none."""
    if a.value == 0:
        raise ZeroDivisionError(f"0 has no inverse in F_{a.p}")
    return FieldElement(pow(a.value, -1, a.p), a.p)


# per-prime factorial tables, grown on demand
_FACTORIALS: dict[int, list[int]] = {}


def factorial_mod_p(n: int, p: int) -> int:
    """n! mod p for 0 <= n < p, from the lazily grown table for p."""
    if not 0 <= n < p:
        raise ValueError(f"factorial table only covers 0 <= n < p, got n={n}, p={p}")
    table = _FACTORIALS.setdefault(p, [1])
    while len(table) <= n:
        table.append(table[-1] * len(table) % p)
    return table[n]


def _multinomial_small(n: int, parts: Sequence[int], p: int) -> int:
    # n < p: every factorial involved is a unit mod p
    num = factorial_mod_p(n, p)
    den = 1
    for k in parts:
        den = den * factorial_mod_p(k, p) % p
    return num * pow(den, -1, p) % p


def multinomial_mod_p(n: int, parts: Sequence[int], p: int) -> FieldElement:
    """n! / (parts_0! parts_1! ...) mod p.

    Requires sum(parts) == n.  For n < p this is a plain factorial-table
    computation with no p-divisibility hazard; for n >= p it is evaluated
    digit by digit in base p, so a zero result correctly signals that p
    divides the multinomial (equivalently, adding the parts in base p
    carries).
    """
    if n < 0 or any(k < 0 for k in parts):
        raise ValueError("multinomial arguments must be nonnegative")
    if sum(parts) != n:
        raise ValueError(f"parts {list(parts)} do not sum to n={n}")
    if n < p:
        return FieldElement(_multinomial_small(n, parts, p), p)
    result = 1
    rest = list(parts)
    m = n
    while m > 0:
        nd = m % p
        digits = []
        for i, k in enumerate(rest):
            digits.append(k % p)
            rest[i] = k // p
        if sum(digits) != nd:
            return FieldElement(0, p)
        result = result * _multinomial_small(nd, digits, p) % p
        m //= p
    return FieldElement(result, p)


def binomial_mod_p(n: int, k: int, p: int) -> FieldElement:
    """Binomial coefficient mod p (Lucas-aware); 0 when k is out of range."""
    if k < 0 or k > n:
        return FieldElement(0, p)
    return multinomial_mod_p(n, (k, n - k), p)
