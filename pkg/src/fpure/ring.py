"""Weighted-graded sparse polynomials over F_p and Frobenius-power truncation.

A polynomial is a dict from exponent tuples to nonzero coefficients in
[1, p).  The grading is fixed by the ambient `GradedRing`.  The key kernel is
multiplication reduced modulo the Frobenius power m^[q] = (x_0^q, ..., x_n^q)
of the irrelevant maximal ideal: since m^[q] is a monomial ideal, reduction
is plain exponent truncation, and dropping a term early is sound because no
later product can bring its exponents back down.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

from .errors import NotQuasiHomogeneousError, PreconditionError, ResourceLimitError
from .gfp import MAX_PRIME, FieldElement, is_prime

Monomial = tuple[int, ...]

DEFAULT_TERM_CAP = 10_000_000
TERM_CAP_ENV = "FPURE_TERM_CAP"

MAX_EXPONENT = 2**31  # exponents are kept in 32-bit range


def term_cap() -> int:
    """Resource guard: maximum number of stored terms per polynomial."""
    raw = os.environ.get(TERM_CAP_ENV)
    if raw is None:
        return DEFAULT_TERM_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise PreconditionError(f"{TERM_CAP_ENV} must be an integer, got {raw!r}")
    if cap < 1:
        raise PreconditionError(f"{TERM_CAP_ENV} must be positive, got {cap}")
    return cap


@dataclass(frozen=True)
class GradedRing:
    """Ambient data: prime p, variable names, and positive integer weights.

    The total weight `w` (the weighted degree of the product of all
    variables) is derived; primality is verified here once so everything
    downstream may assume it.
    """

    prime: int
    variables: tuple[str, ...]
    weights: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "weights", tuple(int(a) for a in self.weights))
        if not self.variables:
            raise PreconditionError("a ring needs at least one variable")
        if len(set(self.variables)) != len(self.variables):
            raise PreconditionError(f"variable names must be distinct: {self.variables}")
        if len(self.weights) != len(self.variables):
            raise PreconditionError(
                f"{len(self.weights)} weights for {len(self.variables)} variables"
            )
        if any(a < 1 for a in self.weights):
            raise PreconditionError(f"weights must be positive: {self.weights}")
        if not 2 <= self.prime < MAX_PRIME:
            raise PreconditionError(f"prime must be in [2, 2^31), got {self.prime}")
        if not is_prime(self.prime):
            raise PreconditionError(f"{self.prime} is not prime")

    @property
    def nvars(self) -> int:
        return len(self.variables)

    @property
    def w(self) -> int:
        """Weighted degree of the product of all variables."""
        return sum(self.weights)

    def degree(self, exponents: Monomial) -> int:
        return sum(a * e for a, e in zip(self.weights, exponents))

    def monomials_of_degree(self, d: int) -> list[Monomial]:
        """All exponent tuples of weighted degree d, in lexicographic order."""
        if d < 0:
            return []
        weights = self.weights
        last = len(weights) - 1
        out: list[Monomial] = []

        def rec(i: int, remaining: int, prefix: tuple[int, ...]) -> None:
            if i == last:
                if remaining % weights[i] == 0:
                    out.append(prefix + (remaining // weights[i],))
                return
            a = weights[i]
            for e in range(remaining // a + 1):
                rec(i + 1, remaining - e * a, prefix + (e,))

        rec(0, d, ())
        return out

    # -- convenience constructors ------------------------------------------

    def poly(self, terms: Mapping[Monomial, int] | Iterable[tuple[Monomial, int]]) -> "Poly":
        return Poly(self, terms)

    def zero(self) -> "Poly":
        return Poly(self, {}, _canonical=True)

    def one(self) -> "Poly":
        return self.monomial((0,) * self.nvars)

    def monomial(self, exponents: Monomial, coefficient: int = 1) -> "Poly":
        return Poly(self, {tuple(exponents): coefficient})

    def variable(self, name: str) -> "Poly":
        i = self.variables.index(name)
        exps = tuple(1 if j == i else 0 for j in range(self.nvars))
        return self.monomial(exps)


class Poly:
    """Canonical sparse polynomial: no stored zero coefficients.

    Instances are immutable by convention; every operation returns a new
    polynomial, so values are safe to share across parallel workers.
    """

    __slots__ = ("ring", "_terms")

    def __init__(self, ring: GradedRing, terms, *, _canonical: bool = False):
        self.ring = ring
        if _canonical:
            self._terms: dict[Monomial, int] = terms
            return
        p = ring.prime
        n = ring.nvars
        acc: dict[Monomial, int] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for exps, c in items:
            exps = tuple(exps)
            if len(exps) != n:
                raise PreconditionError(
                    f"exponent tuple {exps} has {len(exps)} entries, ring has {n} variables"
                )
            if any(e < 0 or e >= MAX_EXPONENT for e in exps):
                raise PreconditionError(f"exponents must be in [0, 2^31): {exps}")
            c = (acc.get(exps, 0) + c) % p
            if c:
                acc[exps] = c
            else:
                acc.pop(exps, None)
        self._terms = acc

    # -- inspection ---------------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ring == other.ring and self._terms == other._terms

    __hash__ = None  # mutable-dict backed

    def terms(self) -> Iterator[tuple[Monomial, int]]:
        """Terms in the canonical order: by (weighted degree, exponents)."""
        degree = self.ring.degree
        for exps in sorted(self._terms, key=lambda m: (degree(m), m)):
            yield exps, self._terms[exps]

    def coefficient(self, exponents: Monomial) -> int:
        return self._terms.get(tuple(exponents), 0)

    def evaluate(self, values: Iterable[int]) -> int:
        """Value at a point of F_p^n (full substitution)."""
        p = self.ring.prime
        vals = [v % p for v in values]
        if len(vals) != self.ring.nvars:
            raise PreconditionError("one value per variable required")
        total = 0
        for exps, c in self._terms.items():
            t = c
            for v, e in zip(vals, exps):
                if e:
                    t = t * pow(v, e, p) % p
            total = (total + t) % p
        return total

    def constant_term(self) -> int:
        return self._terms.get((0,) * self.ring.nvars, 0)

    # -- arithmetic ---------------------------------------------------------

    def _check_same_ring(self, other: "Poly") -> None:
        if self.ring != other.ring:
            raise PreconditionError("operands live in different rings")

    def __add__(self, other: "Poly") -> "Poly":
        self._check_same_ring(other)
        p = self.ring.prime
        acc = dict(self._terms)
        for exps, c in other._terms.items():
            s = (acc.get(exps, 0) + c) % p
            if s:
                acc[exps] = s
            else:
                acc.pop(exps, None)
        return Poly(self.ring, acc, _canonical=True)

    def __neg__(self) -> "Poly":
        p = self.ring.prime
        return Poly(self.ring, {e: p - c for e, c in self._terms.items()}, _canonical=True)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def scaled(self, c: int) -> "Poly":
        p = self.ring.prime
        c %= p
        if c == 0:
            return self.ring.zero()
        return Poly(self.ring, {e: a * c % p for e, a in self._terms.items()}, _canonical=True)

    def __rmul__(self, c):
        if isinstance(c, int):
            return self.scaled(c)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scaled(other)
        self._check_same_ring(other)
        cap = term_cap()
        if len(self._terms) * len(other._terms) > 16 * cap:
            raise ResourceLimitError(
                f"product of {len(self._terms)} x {len(other._terms)} terms exceeds the guard"
            )
        p = self.ring.prime
        acc: dict[Monomial, int] = {}
        bitems = list(other._terms.items())
        for ea, ca in self._terms.items():
            for eb, cb in bitems:
                exps = tuple(x + y for x, y in zip(ea, eb))
                s = (acc.get(exps, 0) + ca * cb) % p
                if s:
                    acc[exps] = s
                else:
                    del acc[exps]
        if len(acc) > cap:
            raise ResourceLimitError(f"product has {len(acc)} terms, cap is {cap}")
        return Poly(self.ring, acc, _canonical=True)

    # -- formatting ---------------------------------------------------------

    def _format_term(self, exps: Monomial, c: int) -> str:
        factors = []
        for name, e in zip(self.ring.variables, exps):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        if not factors:
            return str(c)
        if c == 1:
            return "*".join(factors)
        return "*".join([str(c)] + factors)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        return " + ".join(self._format_term(e, c) for e, c in self.terms())

    def __repr__(self) -> str:
        return f"Poly({self!s})"


# -- operations ---------------------------------------------------------------


def try_quasi_degree(f: Poly) -> int | None:
    """Common weighted degree of all terms, or None if mixed / zero."""
    degree = f.ring.degree
    d = None
    for exps in f._terms:
        dj = degree(exps)
        if d is None:
            d = dj
        elif dj != d:
            return None
    return d


def quasi_degree(f: Poly) -> int:
    """Weighted degree of a quasi-homogeneous polynomial.

    Raises NotQuasiHomogeneousError naming two offending terms when the terms
    have mixed degrees, or for the zero polynomial.
    """
    if not f:
        raise NotQuasiHomogeneousError("the zero polynomial has no quasi-homogeneous degree")
    degree = f.ring.degree
    d = None
    witness: Monomial | None = None
    for exps in f._terms:
        dj = degree(exps)
        if d is None:
            d, witness = dj, exps
        elif dj != d:
            a = f._format_term(witness, f._terms[witness])
            b = f._format_term(exps, f._terms[exps])
            raise NotQuasiHomogeneousError(
                f"not quasi-homogeneous: term {a} has degree {d}, term {b} has degree {dj}",
                offending=(a, b),
            )
    return d


def truncate(f: Poly, q: int) -> Poly:
    """Canonical representative of f modulo the Frobenius power m^[q]."""
    kept = {e: c for e, c in f._terms.items() if all(x < q for x in e)}
    if len(kept) == len(f._terms):
        return f
    return Poly(f.ring, kept, _canonical=True)


def truncated_mul(a: Poly, b: Poly, q: int) -> Poly:
    """Product reduced modulo m^[q]: terms with any exponent >= q are dropped."""
    a._check_same_ring(b)
    p = a.ring.prime
    cap = term_cap()
    aterms = truncate(a, q)._terms
    bitems = list(truncate(b, q)._terms.items())
    if len(aterms) * len(bitems) > 16 * cap:
        raise ResourceLimitError(
            f"truncated product of {len(aterms)} x {len(bitems)} terms exceeds the guard"
        )
    acc: dict[Monomial, int] = {}
    for ea, ca in aterms.items():
        for eb, cb in bitems:
            exps = tuple(x + y for x, y in zip(ea, eb))
            if any(x >= q for x in exps):
                continue
            s = (acc.get(exps, 0) + ca * cb) % p
            if s:
                acc[exps] = s
            else:
                del acc[exps]
    if len(acc) > cap:
        raise ResourceLimitError(f"truncated product has {len(acc)} terms, cap is {cap}")
    return Poly(a.ring, acc, _canonical=True)


def _estimate_power_terms(f: Poly, k: int) -> int:
    # upper estimate: lattice points of weighted degree k*D with the last
    # exponent determined by the others (D = largest term degree)
    if not f or k == 0:
        return 1
    degree = f.ring.degree
    top = max(degree(e) for e in f._terms)
    est = 1
    for a in f.ring.weights[:-1]:
        est *= (k * top) // a + 1
    return est


def pow_exact(f: Poly, k: int) -> Poly:
    """Full untruncated k-th power (k >= 0), guarded by the term-count cap."""
    if k < 0:
        raise PreconditionError(f"exponent must be nonnegative, got {k}")
    cap = term_cap()
    if _estimate_power_terms(f, k) > 64 * cap:
        raise ResourceLimitError(
            f"estimated term count for the {k}-th power exceeds the guard (cap {cap})"
        )
    result = f.ring.one()
    base = f
    e = k
    while e:
        if e & 1:
            result = result * base
        e >>= 1
        if e:
            base = base * base
    return result


def in_frobenius_power(f: Poly, q: int) -> bool:
    """Membership in m^[q]: every term needs some exponent >= q."""
    return all(any(x >= q for x in exps) for exps in f._terms)


def coefficient_at(f: Poly, exponents: Monomial) -> FieldElement:
    """Stored coefficient at the given monomial, as a field element (0 if absent)."""
    return FieldElement(f.coefficient(exponents), f.ring.prime)
