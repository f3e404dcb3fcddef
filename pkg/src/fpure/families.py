"""Socle-coefficient tests, closed-form coefficient polynomials, and family
sweeps for supersingularity.

For quasi-homogeneous f of degree equal to the total weight w, the
coefficient of (x_0...x_n)^(p-1) in f^(p-1) decides the threshold: nonzero
means fpt = 1; for curves (three variables) zero means exactly fpt = 1-1/p.
For the pencils x^a + y^b + z^c + lambda*xyz with 1/a+1/b+1/c = 1 this
coefficient is a polynomial phi(lambda) with a closed form, which can also
be obtained as the truncated period expansion of the same pencil; the two
routes are computed independently here and compared in the tests.

When 1/a+1/b+1/c < 1 the pencil is not quasi-homogeneous, but for
lambda != 0 the coefficient of (xyz)^(q-1) in f^(q-1) is lambda^(q-1) != 0
for every q (the only product hitting the target uses the xyz term alone),
so every such member has threshold exactly 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

from .errors import PreconditionError
from .gfp import FieldElement, binomial_mod_p, multinomial_mod_p
from .jacobian import is_isolated
from .parse import FamilyExpr
from .ring import GradedRing, Poly, truncated_mul, try_quasi_degree
from .threshold import CERT_COEFF, mu_ladder

ELLIPTIC_KINDS: dict[str, tuple[int, int, int]] = {
    "E6": (3, 3, 3),  # x^3+y^3+z^3, weights (1,1,1)
    "E7": (2, 4, 4),  # x^2+y^4+z^4, weights (2,1,1)
    "E8": (2, 3, 6),  # x^2+y^3+z^6, weights (3,2,1)
}

_ELLIPTIC_WEIGHTS = {"E6": (1, 1, 1), "E7": (2, 1, 1), "E8": (3, 2, 1)}


def _truncated_power(f: Poly, k: int, q: int) -> Poly:
    g = f.ring.one()
    for _ in range(k):
        g = truncated_mul(g, f, q)
    return g


def _socle_value(f: Poly, e: int) -> int:
    q = f.ring.prime**e
    g = _truncated_power(f, q - 1, q)
    return g.coefficient((q - 1,) * f.ring.nvars)


def socle_coefficient(f: Poly, e: int = 1) -> FieldElement:
    """Coefficient of (x_0...x_n)^(q-1) in f^(q-1), q = p^e.

    Computed by truncated powering mod m^[q].  A quasi-homogeneous input of
    degree != w is rejected: the target monomial has degree w(q-1), so the
    coefficient would be 0 for trivial reasons.  Non-quasi-homogeneous
    inputs (the 1/a+1/b+1/c < 1 pencils) are allowed.
    """
    if e < 1:
        raise PreconditionError(f"e must be >= 1, got {e}")
    ring = f.ring
    d = try_quasi_degree(f)
    if d is not None and d != ring.w:
        raise PreconditionError(
            f"target monomial unreachable: f is quasi-homogeneous of degree {d}, "
            f"but the product of the variables has degree {ring.w}"
        )
    return FieldElement(_socle_value(f, e), ring.prime)


def _univariate_ring(p: int, parameter: str) -> GradedRing:
    return GradedRing(p, (parameter,), (1,))


def _coefficient_triple(kind: str) -> tuple[int, int, int]:
    try:
        return ELLIPTIC_KINDS[kind]
    except KeyError:
        raise PreconditionError(
            f"unknown kind {kind!r}; expected one of {sorted(ELLIPTIC_KINDS)}"
        )


def phi_from_triple(triple: tuple[int, ...], p: int, parameter: str = "L") -> Poly:
    """Coefficient of (xyz)^(p-1) in (x^a+y^b+z^c+L*xyz)^(p-1), as a polynomial in L.

    Direct expansion: choosing n factors of x^a+y^b+z^c and p-1-n of L*xyz
    contributes binom(p-1, n) * multinomial(n; n/a, n/b, n/c) at L^(p-1-n),
    and only n divisible by each exponent survives.
    """
    if sum(Fraction(1, a) for a in triple) != 1:
        raise PreconditionError(f"reciprocal exponents of {triple} must sum to 1")
    ring = _univariate_ring(p, parameter)
    step = lcm(*triple)
    terms: dict[tuple[int], int] = {}
    for n in range(0, p, step):
        c = binomial_mod_p(p - 1, n, p) * multinomial_mod_p(n, [n // a for a in triple], p)
        if c:
            terms[(p - 1 - n,)] = c.value
    return Poly(ring, terms)


def phi_closed(kind: str, p: int, parameter: str = "L") -> Poly:
    """Closed form of the socle-coefficient polynomial for an elliptic kind."""
    if p == 2:
        raise PreconditionError("phi is defined for odd primes")
    return phi_from_triple(_coefficient_triple(kind), p, parameter)


def period_polynomial(kind: str, p: int, parameter: str = "L") -> Poly:
    """Truncated period expansion of the pencil, normalized by L^(p-1).

    The degree-zero part of ((x^a+y^b+z^c)/(xyz))^n is the multinomial
    n!/((n/a)!(n/b)!(n/c)!) when a, b and c all divide n, else 0; the term
    enters with sign (-1)^n from the expansion of the pencil's reciprocal.
    """
    triple = _coefficient_triple(kind)
    if sum(Fraction(1, a) for a in triple) != 1:
        raise PreconditionError(f"reciprocal exponents of {triple} must sum to 1")
    ring = _univariate_ring(p, parameter)
    step = lcm(*triple)
    terms: dict[tuple[int], int] = {}
    for n in range(0, p, step):
        c = multinomial_mod_p(n, [n // a for a in triple], p)
        value = (-1) ** n * c.value % p
        if value:
            terms[(p - 1 - n,)] = value
    return Poly(ring, terms)


def elliptic_family(kind: str, p: int, parameter: str = "L") -> FamilyExpr:
    """The pencil x^a + y^b + z^c + L*xyz over F_p with its natural grading."""
    triple = _coefficient_triple(kind)
    ring = GradedRing(p, ("x", "y", "z"), _ELLIPTIC_WEIGHTS[kind])
    base = ring.zero()
    for i, a in enumerate(triple):
        exps = tuple(a if j == i else 0 for j in range(3))
        base = base + ring.monomial(exps)
    return FamilyExpr(base, ring.monomial((1, 1, 1)), parameter)


def _pure_power_shape(fam: FamilyExpr) -> tuple[int, ...] | None:
    """Exponents (a_0, ..., a_n) when the family is sum-of-pure-powers plus
    the parameter times the product of all variables, all coefficients 1."""
    ring = fam.ring
    nv = ring.nvars
    if fam.parameter_term.coefficient((1,) * nv) != 1 or len(fam.parameter_term) != 1:
        return None
    if len(fam.base) != nv:
        return None
    exps = [0] * nv
    for mono, c in fam.base.terms():
        if c != 1:
            return None
        nonzero = [i for i, x in enumerate(mono) if x]
        if len(nonzero) != 1:
            return None
        i = nonzero[0]
        if exps[i]:
            return None
        exps[i] = mono[i]
    if any(a == 0 for a in exps):
        return None
    return tuple(exps)


@dataclass
class FamilyEntry:
    """One pencil member: its status, certified threshold (when any), and
    the socle-coefficient value at that member."""

    lam: int
    status: str  # 'ordinary' | 'supersingular' | 'singular-member' | 'unclassified'
    fpt: Fraction | None
    interval: tuple[Fraction, Fraction] | None
    phi_value: int
    certificate: str | None = None
    note: str | None = None

    def to_json(self) -> dict:
        out: dict = {
            "lambda": self.lam,
            "status": self.status,
            "fpt": _fraction_str(self.fpt) if self.fpt is not None else None,
            "phi_value": self.phi_value,
        }
        if self.interval is not None:
            out["interval"] = [_fraction_str(self.interval[0]), _fraction_str(self.interval[1])]
        if self.certificate is not None:
            out["certificate"] = self.certificate
        if self.note is not None:
            out["note"] = self.note
        return out


def _fraction_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass
class FamilyReport:
    """Per-member classification of a pencil over F_p, sorted by lambda."""

    prime: int
    family: FamilyExpr
    entries: list[FamilyEntry] = field(default_factory=list)
    phi_polynomial: Poly | None = None

    def by_status(self, status: str) -> list[int]:
        return [a.lam for a in self.entries if a.status == status]

    def to_json(self) -> dict:
        return {
            "prime": self.prime,
            "family": str(self.family),
            "parameter": self.family.parameter,
            "phi_polynomial": str(self.phi_polynomial) if self.phi_polynomial else None,
            "members": [a.to_json() for a in self.entries],
        }

    def csv_rows(self) -> list[list[str]]:
        rows = [["lambda", "status", "fpt_num", "fpt_den", "phi_value"]]
        for a in self.entries:
            num = str(a.fpt.numerator) if a.fpt is not None else ""
            den = str(a.fpt.denominator) if a.fpt is not None else ""
            rows.append([str(a.lam), a.status, num, den, str(a.phi_value)])
        return rows


def _classify_member(fam: FamilyExpr, lam: int, shape: tuple[int, ...] | None, e_max: int) -> FamilyEntry:
    ring = fam.ring
    p = ring.prime
    f = fam.specialize(lam)
    n = ring.nvars - 1
    d = try_quasi_degree(f) if f else None
    if f and d == ring.w:
        cert = is_isolated(f)
        phi_value = socle_coefficient(f).value
        if cert.is_isolated:
            if p >= ring.w * (n - 2) + 1:
                if phi_value:
                    return FamilyEntry(lam, "ordinary", Fraction(1), None, phi_value,
                                       certificate=CERT_COEFF)
                if n == 2:
                    return FamilyEntry(lam, "supersingular", Fraction(p - 1, p), None,
                                       phi_value, certificate=CERT_COEFF)
                from .threshold import fpt as _fpt

                res = _fpt(f, e_max=max(e_max, 1))
                return FamilyEntry(lam, "supersingular", res.value, None, phi_value,
                                   certificate=res.certificate)
            ladder = mu_ladder(f, e_max, isolated=cert.is_isolated)
            last = ladder.last()
            return FamilyEntry(
                lam, "unclassified", None,
                (Fraction(last.mu - 1, last.q), Fraction(last.mu, last.q)),
                phi_value,
                note=f"coefficient dichotomy needs p >= w(n-2)+1 = {ring.w * (n - 2) + 1}",
            )
        ladder = mu_ladder(f, e_max)
        last = ladder.last()
        return FamilyEntry(
            lam, "singular-member", None,
            (Fraction(last.mu - 1, last.q), Fraction(last.mu, last.q)),
            socle_coefficient(f).value,
            note=cert.reason or "not an isolated singularity",
        )
    if shape is not None and lam % p != 0:
        # sum of pure powers with reciprocal-exponent sum < 1, lambda != 0:
        # the only product hitting (x_0...x_n)^(q-1) uses the product term
        # alone, so the coefficient is lambda^(q-1) != 0 for every q
        phi_value = socle_coefficient(f).value
        return FamilyEntry(lam, "ordinary", Fraction(1), None, phi_value,
                           certificate=CERT_COEFF)
    # no certified route: report the raw ladder interval
    phi_value = socle_coefficient(f).value if f else 0
    if f and f.constant_term() == 0:
        ladder = mu_ladder(f, e_max)
        last = ladder.last()
        interval = (Fraction(last.mu - 1, last.q), Fraction(last.mu, last.q))
    else:
        interval = None
    note = (
        "not quasi-homogeneous of degree w; no classification rule applies"
        if shape is None
        else "lambda = 0 member of a reciprocal-sum < 1 pencil; coefficient test says nothing"
    )
    return FamilyEntry(lam, "unclassified", None, interval, phi_value, note=note)


def sweep_family(fam: FamilyExpr, *, e_max: int = 1) -> FamilyReport:
    """Classify every member f_lambda, lambda in F_p.

    Quasi-homogeneous members of degree w are certified through the
    isolated-singularity check and the socle coefficient; members proved
    non-isolated get the sound ladder interval instead of a threshold.
    Members outside every certified path are reported as unclassified,
    never silently classified.
    """
    ring = fam.ring
    p = ring.prime
    shape = _pure_power_shape(fam)
    reciprocal_sum = sum(Fraction(1, a) for a in shape) if shape else None
    if shape is not None and reciprocal_sum >= 1:
        shape = None if reciprocal_sum > 1 else shape
    t_shape = shape if (shape is not None and reciprocal_sum is not None and reciprocal_sum < 1) else None
    entries = [_classify_member(fam, lam, t_shape, e_max) for lam in range(p)]
    phi_poly = None
    if shape is not None and reciprocal_sum == 1 and p != 2:
        phi_poly = phi_from_triple(shape, p, fam.parameter)
    elif t_shape is not None:
        # coefficient polynomial is exactly L^(p-1)
        phi_poly = Poly(_univariate_ring(p, fam.parameter), {(p - 1,): 1})
    return FamilyReport(prime=p, family=fam, entries=entries, phi_polynomial=phi_poly)
