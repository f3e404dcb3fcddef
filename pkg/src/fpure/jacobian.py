"""Jacobian ideals: isolated-singularity certification, Milnor numbers, and
the graded-series divisibility check.

Certification is degree-by-degree linear algebra instead of a standard-basis
computation.  With d = deg f, w = sum of weights and n+1 variables, put
N = (n+1)d - 2w.  If the singularity is isolated, every graded piece of the
quotient by the Jacobian ideal vanishes above N, so the full graded pieces
R_j must be hit for all j > N.  Conversely it suffices to check the window
j in [N+1, N+max(weights)]: any monomial of higher degree is a variable
times a monomial of degree still above N, so window success propagates
upward by induction.  Each window piece is checked by dense Gaussian
elimination over F_p with first-nonzero pivoting, which keeps certificates
deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import PreconditionError
from .ring import GradedRing, Poly, quasi_degree


def partials(f: Poly) -> list[Poly]:
    """Formal partial derivatives, coefficients reduced mod p.

    Each nonzero partial of a quasi-homogeneous f of degree d is again
    quasi-homogeneous, of degree d minus the variable's weight.
    """
    ring = f.ring
    p = ring.prime
    out = []
    for i in range(ring.nvars):
        acc: dict[tuple[int, ...], int] = {}
        for exps, c in f._terms.items():
            e = exps[i]
            if e == 0:
                continue
            ce = c * e % p
            if ce == 0:
                continue
            key = exps[:i] + (e - 1,) + exps[i + 1 :]
            acc[key] = ce
        out.append(Poly(ring, acc, _canonical=True))
    return out


def _rank_mod_p(rows: list[list[int]], p: int) -> int:
    """Rank of an integer matrix over F_p (first-nonzero pivoting)."""
    if not rows or not rows[0]:
        return 0
    a = np.array(rows, dtype=np.int64) % p
    nrows, ncols = a.shape
    rank = 0
    for col in range(ncols):
        if rank == nrows:
            break
        nz = np.nonzero(a[rank:, col])[0]
        if nz.size == 0:
            continue
        pivot = rank + int(nz[0])
        if pivot != rank:
            a[[rank, pivot]] = a[[pivot, rank]]
        inv = pow(int(a[rank, col]), -1, p)
        a[rank] = a[rank] * inv % p
        factors = a[rank + 1 :, col]
        mask = factors != 0
        if mask.any():
            a[rank + 1 :][mask] = (a[rank + 1 :][mask] - np.outer(factors[mask], a[rank])) % p
        rank += 1
    return rank


def _graded_piece(ring: GradedRing, gens: list[tuple[Poly, int]], j: int) -> tuple[int, int]:
    """(rank of the ideal's degree-j piece, dim of R_j).

    gens are (quasi-homogeneous generator, its degree); rows are the monomial
    multiples of the generators, expressed in the monomial basis of R_j.
    """
    basis = ring.monomials_of_degree(j)
    if not basis:
        return 0, 0
    index = {m: i for i, m in enumerate(basis)}
    rows = []
    for g, dg in gens:
        for m in ring.monomials_of_degree(j - dg):
            row = [0] * len(basis)
            for exps, c in g._terms.items():
                shifted = tuple(x + y for x, y in zip(m, exps))
                row[index[shifted]] = c
            rows.append(row)
    return _rank_mod_p(rows, ring.prime), len(basis)


@dataclass
class IsolatedCertificate:
    """Outcome of the window check, with the per-degree rank evidence.

    verdict is 'isolated', 'not-isolated', or 'degenerate-smooth' (some
    partial is a nonzero constant, so the Jacobian ideal is the whole ring).
    For an isolated verdict, milnor_dim is the quotient dimension summed over
    degrees 0..N and must equal the formula value.
    """

    verdict: str
    degree: int
    milnor_formula_value: Fraction
    window: tuple[int, int] | None = None
    per_degree_rank: dict[int, tuple[int, int]] = field(default_factory=dict)
    milnor_dim: int | None = None
    reason: str | None = None

    @property
    def is_isolated(self) -> bool:
        return self.verdict == "isolated"

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "degree": self.degree,
            "window": list(self.window) if self.window else None,
            "per_degree_rank": {
                str(j): {"rank": r, "dim": d} for j, (r, d) in sorted(self.per_degree_rank.items())
            },
            "milnor_dim": self.milnor_dim,
            "milnor_formula": _fraction_str(self.milnor_formula_value),
            "reason": self.reason,
        }


def _fraction_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def milnor_formula_value(ring: GradedRing, d: int) -> Fraction:
    """Product of (d - weight)/weight over the variables, as an exact rational."""
    value = Fraction(1)
    for a in ring.weights:
        value *= Fraction(d - a, a)
    return value


def is_isolated(f: Poly) -> IsolatedCertificate:
    """Certify whether a quasi-homogeneous polynomial has an isolated singularity.

    The verdict is 'isolated' iff R_j is contained in the Jacobian ideal for
    every window degree.  All partials vanishing (possible in small
    characteristic, e.g. p-th power terms) yields 'not-isolated' with an
    explanatory reason rather than an exception.
    """
    d = quasi_degree(f)
    ring = f.ring
    formula = milnor_formula_value(ring, d)
    parts = partials(f)
    if all(not g for g in parts):
        return IsolatedCertificate(
            verdict="not-isolated",
            degree=d,
            milnor_formula_value=formula,
            reason="vanishing Jacobian in characteristic p (all partial derivatives are 0)",
        )
    for name, a, g in zip(ring.variables, ring.weights, parts):
        if g and d == a:
            return IsolatedCertificate(
                verdict="degenerate-smooth",
                degree=d,
                milnor_formula_value=formula,
                reason=f"partial with respect to {name} is a nonzero constant, "
                "so the Jacobian ideal is the whole ring",
            )
    n_plus_1 = ring.nvars
    w = ring.w
    big_n = n_plus_1 * d - 2 * w
    if big_n < 0:
        return IsolatedCertificate(
            verdict="not-isolated",
            degree=d,
            milnor_formula_value=formula,
            reason=f"no quotient in nonnegative degrees: (n+1)d - 2w = {big_n} < 0",
        )
    gens = [(g, d - a) for g, a in zip(parts, ring.weights) if g]
    window = (big_n + 1, big_n + max(ring.weights))
    ranks: dict[int, tuple[int, int]] = {}
    for j in range(0, window[1] + 1):
        ranks[j] = _graded_piece(ring, gens, j)
    for j in range(window[0], window[1] + 1):
        rank, dim = ranks[j]
        if rank != dim:
            return IsolatedCertificate(
                verdict="not-isolated",
                degree=d,
                milnor_formula_value=formula,
                window=window,
                per_degree_rank=ranks,
                reason=f"graded piece of degree {j} not covered: rank {rank} < dim {dim}",
            )
    milnor_dim = sum(dim - rank for j, (rank, dim) in ranks.items() if j <= big_n)
    return IsolatedCertificate(
        verdict="isolated",
        degree=d,
        milnor_formula_value=formula,
        window=window,
        per_degree_rank=ranks,
        milnor_dim=milnor_dim,
    )


@dataclass
class MilnorResult:
    """Milnor number both ways: closed formula and quotient dimension.

    The formula value is exact and never rounded; a non-integer value is
    itself evidence that the partials cannot form a regular sequence.  The
    linear-algebra dimension is only available when the isolated-singularity
    certificate succeeds.
    """

    formula_value: Fraction
    is_integer: bool
    dimension: int | None
    agrees: bool | None
    verdict: str

    def to_json(self) -> dict:
        return {
            "formula": _fraction_str(self.formula_value),
            "is_integer": self.is_integer,
            "dimension": self.dimension,
            "agrees": self.agrees,
            "verdict": self.verdict,
        }


def milnor_number(f: Poly) -> MilnorResult:
    """Milnor number of a quasi-homogeneous polynomial."""
    cert = is_isolated(f)
    formula = cert.milnor_formula_value
    is_int = formula.denominator == 1
    if cert.is_isolated:
        dim = cert.milnor_dim
        return MilnorResult(formula, is_int, dim, is_int and dim == formula, cert.verdict)
    return MilnorResult(formula, is_int, None, None, cert.verdict)


@dataclass
class HilbertCheck:
    """Divisibility test for the graded series of the Jacobian quotient.

    divisible=False proves that NO quasi-homogeneous polynomial of this
    degree and type has an isolated singularity.  When divisible, the
    quotient polynomial has degree (n+1)d - 2w and its value at 1 is the
    Milnor formula value.
    """

    divisible: bool
    quotient: tuple[int, ...] | None
    quotient_degree: int | None
    value_at_one: int | None

    def to_json(self) -> dict:
        return {
            "divisible": self.divisible,
            "quotient": list(self.quotient) if self.quotient is not None else None,
            "quotient_degree": self.quotient_degree,
            "value_at_one": self.value_at_one,
        }


def _mul_dense(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _div_one_minus_power(coeffs: list[int], a: int) -> list[int] | None:
    """Exact division by (1 - T^a) in Z[T]; None when the remainder is nonzero."""
    if not any(coeffs):
        return [0]
    q = [0] * len(coeffs)
    for i, c in enumerate(coeffs):
        q[i] = c + (q[i - a] if i >= a else 0)
    top = len(coeffs) - 1 - a
    if any(q[i] for i in range(top + 1, len(q))):
        return None
    out = q[: top + 1]
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def hilbert_numerator_check(d: int, weights: tuple[int, ...]) -> HilbertCheck:
    """Exact integer division of prod(1 - T^(d-a_j)) by prod(1 - T^(a_i)).

    A negative d - a_j means no polynomial of degree d involves that
    variable, so its partial vanishes identically and no isolated
    singularity exists; this is reported as not divisible.
    """
    if d <= 0 or any(a < 1 for a in weights):
        raise PreconditionError("need d > 0 and positive weights")
    if any(d - a < 0 for a in weights):
        return HilbertCheck(False, None, None, None)
    numerator = [1]
    for a in weights:
        e = d - a
        factor = [0] if e == 0 else [1] + [0] * (e - 1) + [-1]  # 1 - T^e
        numerator = _mul_dense(numerator, factor)
    current = numerator
    for a in weights:
        current = _div_one_minus_power(current, a)
        if current is None:
            return HilbertCheck(False, None, None, None)
    quotient = tuple(current)
    if quotient == (0,):
        return HilbertCheck(True, quotient, None, 0)
    return HilbertCheck(True, quotient, len(quotient) - 1, sum(quotient))
