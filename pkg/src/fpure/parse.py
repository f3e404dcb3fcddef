"""Text grammar for polynomials and one-parameter families.

Grammar (whitespace insensitive)::

    poly   := ['-'] term (('+' | '-') term)*
    term   := coefficient ['*' powers] | powers
    powers := power ('*' power)*
    power  := variable ['^' exponent]

Coefficients are integers, reduced mod p; exponents are nonnegative
integers.  An explicit '*' is required between factors so multi-character
variable names stay unambiguous.  `Poly.__str__` emits the same syntax, so
format -> parse round-trips.  Variables and weights are declared up front
(the grading is input data, not derivable from an expression).
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError, PreconditionError, UnsupportedFamilyError
from .ring import GradedRing, Poly

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|([-+*^]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            at = pos
            while at < n and text[at].isspace():
                at += 1
            if at == n:
                break  # trailing whitespace
            raise ParseError(f"unexpected character {text[at]!r}", at)
        if m.group(1) is not None:
            tokens.append(("int", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), m.start(2)))
        else:
            tokens.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str, variables: tuple[str, ...]):
        self.text = text
        self.variables = variables
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def parse(self) -> list[tuple[int, tuple[int, ...], int, int]]:
        """Returns (signed coefficient, exponents, start, end) per term."""
        kind, val, pos = self.peek()
        if kind == "end":
            raise ParseError("empty input", 0)
        terms = []
        sign = 1
        if kind == "op" and val in "+-":
            self.advance()
            sign = -1 if val == "-" else 1
        while True:
            terms.append(self._term(sign))
            kind, val, pos = self.advance()
            if kind == "end":
                return terms
            if kind == "op" and val in "+-":
                sign = -1 if val == "-" else 1
                continue
            raise ParseError(f"expected '+' or '-', got {val!r}", pos)

    def _term(self, sign: int):
        start = self.peek()[2]
        coeff = 1
        exponents = [0] * len(self.variables)
        kind, val, pos = self.peek()
        if kind == "int":
            self.advance()
            coeff = int(val)
            if not (self.peek()[0] == "op" and self.peek()[1] == "*"):
                end = self.peek()[2]
                return sign * coeff, tuple(exponents), start, end
            self.advance()
        self._power(exponents)
        while self.peek()[0] == "op" and self.peek()[1] == "*":
            self.advance()
            self._power(exponents)
        end = self.peek()[2]
        return sign * coeff, tuple(exponents), start, end

    def _power(self, exponents: list[int]) -> None:
        kind, val, pos = self.advance()
        if kind != "name":
            raise ParseError(f"expected a variable name, got {val!r}", pos)
        try:
            idx = self.variables.index(val)
        except ValueError:
            raise ParseError(f"unknown variable {val!r}", pos)
        e = 1
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.advance()
            kind, val, pos = self.advance()
            if kind != "int":
                raise ParseError(f"expected a nonnegative exponent, got {val!r}", pos)
            e = int(val)
        exponents[idx] += e


def parse_poly(text: str, ring: GradedRing, warnings: list[str] | None = None) -> Poly:
    """Parse an expression into a canonical polynomial over the ring.

    Coefficients are reduced mod p; a term that vanishes after reduction is
    reported on the warning channel (a caller-supplied list) rather than
    silently dropped.
    """
    raw_terms = _Parser(text, ring.variables).parse()
    p = ring.prime
    acc: dict[tuple[int, ...], int] = {}
    contributed: dict[tuple[int, ...], bool] = {}
    for coeff, exps, start, end in raw_terms:
        c = coeff % p
        if c == 0:
            if warnings is not None:
                raw = text[start:end].strip().rstrip("+-").strip()
                warnings.append(f"term {raw} ≡ 0 mod {p}")
            continue
        contributed[exps] = True
        acc[exps] = (acc.get(exps, 0) + c) % p
    if warnings is not None:
        for exps, total in acc.items():
            if total == 0 and contributed.get(exps):
                mono = Poly(ring, {exps: 1})
                warnings.append(f"terms for monomial {mono} cancel to 0 mod {p}")
    return Poly(ring, acc)


@dataclass(frozen=True)
class FamilyExpr:
    """A pencil f_lambda = base + lambda * parameter_term.

    The parameter occurs only linearly; `parameter_term` is the polynomial
    multiplying it.
    """

    base: Poly
    parameter_term: Poly
    parameter: str

    @property
    def ring(self) -> GradedRing:
        return self.base.ring

    def specialize(self, lam: int) -> Poly:
        return self.base + self.parameter_term.scaled(lam)

    def __str__(self) -> str:
        if not self.parameter_term:
            return str(self.base)
        pt = str(self.parameter_term)
        tail = f"{self.parameter}*{pt}" if pt != "1" else self.parameter
        if not self.base:
            return tail
        return f"{self.base} + {tail}"


def parse_family(
    text: str, ring: GradedRing, parameter: str, warnings: list[str] | None = None
) -> FamilyExpr:
    """Parse a one-parameter family, splitting off the linear parameter part."""
    if parameter in ring.variables:
        raise PreconditionError(
            f"parameter {parameter!r} clashes with a ring variable"
        )
    names = ring.variables + (parameter,)
    raw_terms = _Parser(text, names).parse()
    p = ring.prime
    nv = ring.nvars
    base_acc: dict[tuple[int, ...], int] = {}
    param_acc: dict[tuple[int, ...], int] = {}
    for coeff, exps, start, end in raw_terms:
        lam_power = exps[nv]
        if lam_power >= 2:
            raise UnsupportedFamilyError(
                f"parameter {parameter!r} appears with power {lam_power}", start
            )
        c = coeff % p
        if c == 0:
            if warnings is not None:
                raw = text[start:end].strip().rstrip("+-").strip()
                warnings.append(f"term {raw} ≡ 0 mod {p}")
            continue
        target = param_acc if lam_power == 1 else base_acc
        mono = exps[:nv]
        target[mono] = (target.get(mono, 0) + c) % p
    return FamilyExpr(Poly(ring, base_acc), Poly(ring, param_acc), parameter)
