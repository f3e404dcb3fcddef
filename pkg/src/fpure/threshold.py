"""The mu ladder and the F-pure-threshold decision procedure.

mu(q) is the least k with f^k in m^[q].  It is computed by incremental
truncated powering: since m^[q] is an ideal, a term dropped by truncation can
never contribute a surviving term later, so multiplying the truncated running
power by f (truncated) is sound.

For quasi-homogeneous f of degree d with an isolated singularity, exact
values of the threshold follow from two lifting rules on a single ladder
entry (m = mu(q), w = total weight, n+1 variables):

  (1) if (m-1)*d == w*(q-1), the same ratio persists for all higher q and
      the threshold is exactly w/d;
  (2) if m*d < w*q and p >= nd-d-w+1, the ratio m/q stays constant from q
      on, so the threshold is exactly m/q.

When d == w (the unit-ratio case) and p >= n-1, the threshold is always
exact already at e=1: it equals 1 - h/p with h = p - mu(p) in [0, n-1].
h is also the vanishing order of the Hasse invariant on the family of
degree-w hypersurfaces through f, which `hasse_order` exposes under the
stated bound p >= w(n-2)+1.

If no rule fires by e_max, the sound interval [(m-1)/q, m/q] is returned:
the upper end since mu(p^e)/p^e is non-increasing, the lower end since
(mu(p^e)-1)/p^e is non-decreasing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import PreconditionError, ResourceLimitError
from .jacobian import IsolatedCertificate, is_isolated
from .ring import Poly, quasi_degree, truncate, truncated_mul, try_quasi_degree

CERT_CY = "CY-Theorem-3.8"
CERT_LIFT1 = "Lifting-3.7(1)"
CERT_LIFT2 = "Lifting-3.7(2)"
CERT_COEFF = "Coefficient-4.1"
CERT_TRUNCATED = "Truncated-at-e_max"


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


@dataclass(frozen=True)
class MuEntry:
    """One ladder rung: q = p^e and mu = min{k : f^k in m^[q]}.

    upper_bound is the a-priori cap ceil((wq-w+1)/d) (quasi-homogeneous f
    only); lower_bound is ceil((w(q+1)-nd)/d), recorded when its hypotheses
    hold (p does not divide mu, isolated singularity certified).
    """

    e: int
    q: int
    mu: int
    upper_bound: int | None = None
    lower_bound: int | None = None

    def as_list(self) -> list[int]:
        return [self.e, self.q, self.mu]


@dataclass
class MuLadder:
    prime: int
    entries: list[MuEntry] = field(default_factory=list)

    def verify(self) -> None:
        """Internal consistency: 1 <= mu <= q, bounds, and the ceiling law
        mu(q) == ceil(mu(pq)/p) between consecutive entries."""
        p = self.prime
        for a in self.entries:
            if not 1 <= a.mu <= a.q:
                raise RuntimeError(f"mu out of range at e={a.e}: {a.mu} not in [1, {a.q}]")
            if a.upper_bound is not None and a.mu > a.upper_bound:
                raise RuntimeError(
                    f"upper bound violated at e={a.e}: mu={a.mu} > {a.upper_bound}"
                )
            if a.lower_bound is not None and a.mu < a.lower_bound:
                raise RuntimeError(
                    f"lower bound violated at e={a.e}: mu={a.mu} < {a.lower_bound}"
                )
        for a, b in zip(self.entries, self.entries[1:]):
            if b.e == a.e + 1 and a.mu != _ceil_div(b.mu, p):
                raise RuntimeError(
                    f"ceiling law violated: mu({a.q})={a.mu} != ceil({b.mu}/{p})"
                )

    def last(self) -> MuEntry:
        return self.entries[-1]

    def to_json(self) -> list[list[int]]:
        return [a.as_list() for a in self.entries]


def _mu_single(f: Poly, q: int, stop: int) -> int:
    fq = truncate(f, q)
    g = f.ring.one()
    for k in range(1, stop + 1):
        g = truncated_mul(g, fq, q)
        if not g:
            return k
    raise RuntimeError(f"f^k not in m^[{q}] for any k <= {stop}; upper bound violated")


def _entry(f: Poly, e: int, d: int | None, isolated: bool | None) -> MuEntry:
    ring = f.ring
    p = ring.prime
    q = p**e
    w = ring.w
    n = ring.nvars - 1
    upper = None
    stop = q  # f in m implies f^q in m^[q]
    if d is not None and d > 0:
        upper = _ceil_div(w * q - w + 1, d)
        stop = min(stop, upper)
    m = _mu_single(f, q, stop)
    lower = None
    if d is not None and d > 0 and isolated and m % p != 0:
        lower = _ceil_div(w * (q + 1) - n * d, d)
    return MuEntry(e=e, q=q, mu=m, upper_bound=upper, lower_bound=lower)


def mu_ladder(f: Poly, e_max: int, *, isolated: bool | None = None) -> MuLadder:
    """Ladder entries for e = 1..e_max, with bound checks and the ceiling law.

    Works for any f in m (no constant term); the quasi-homogeneous upper
    bound and the isolated-singularity lower bound are recorded when they
    apply.  A resource abort carries the entries computed so far.
    """
    if e_max < 1:
        raise PreconditionError(f"e_max must be >= 1, got {e_max}")
    if not f:
        raise PreconditionError("mu is undefined for the zero polynomial")
    if f.constant_term() != 0:
        raise PreconditionError("f has a nonzero constant term, so no power lies in m^[q]")
    d = try_quasi_degree(f)
    ladder = MuLadder(prime=f.ring.prime)
    for e in range(1, e_max + 1):
        try:
            ladder.entries.append(_entry(f, e, d, isolated))
        except ResourceLimitError as exc:
            raise ResourceLimitError(str(exc), partial=ladder) from exc
    ladder.verify()
    return ladder


def mu(f: Poly, e: int, *, isolated: bool | None = None) -> int:
    """Least k with f^k in m^[p^e]."""
    if e < 1:
        raise PreconditionError(f"e must be >= 1, got {e}")
    if not f:
        raise PreconditionError("mu is undefined for the zero polynomial")
    if f.constant_term() != 0:
        raise PreconditionError("f has a nonzero constant term, so no power lies in m^[q]")
    entry = _entry(f, e, try_quasi_degree(f), isolated)
    MuLadder(prime=f.ring.prime, entries=[entry]).verify()
    return entry.mu


def _fraction_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass
class FptResult:
    """Exact threshold with the rule that certified it, or a sound interval.

    assumptions records whether the isolated-singularity hypothesis was
    verified or merely assumed; for the unit-ratio certificate, h is the
    Hasse vanishing order p*(1 - fpt).
    """

    kind: str  # 'exact' | 'interval'
    value: Fraction | None
    interval: tuple[Fraction, Fraction] | None
    certificate: str
    e_used: int
    ladder: MuLadder | None
    assumptions: dict[str, str]
    h: int | None = None
    blocked: str | None = None

    def to_json(self) -> dict:
        out: dict = {
            "fpt": _fraction_str(self.value) if self.value is not None else None,
            "kind": self.kind,
            "certificate": self.certificate,
            "e_used": self.e_used,
            "mu_ladder": self.ladder.to_json() if self.ladder is not None else [],
            "assumptions": dict(self.assumptions),
        }
        if self.interval is not None:
            out["interval"] = [_fraction_str(self.interval[0]), _fraction_str(self.interval[1])]
        if self.h is not None:
            out["h"] = self.h
        if self.blocked is not None:
            out["blocked"] = self.blocked
        return out


def _require_isolated(f: Poly, assume_isolated: bool) -> tuple[dict[str, str], IsolatedCertificate | None]:
    if assume_isolated:
        return {"isolated": "assumed"}, None
    cert = is_isolated(f)
    if not cert.is_isolated:
        raise PreconditionError(
            f"isolated-singularity hypothesis fails (verdict {cert.verdict}): {cert.reason}"
        )
    return {"isolated": "verified"}, cert


def fpt(f: Poly, *, e_max: int = 2, assume_isolated: bool = False) -> FptResult:
    """Decision procedure for the F-pure threshold of quasi-homogeneous f.

    Runs the ladder for e = 1..e_max and returns as soon as a rule certifies
    an exact value; otherwise returns the interval [(m-1)/q, m/q] for the
    last entry, reporting which hypothesis blocked an exact answer.
    """
    if e_max < 1:
        raise PreconditionError(f"e_max must be >= 1, got {e_max}")
    d = quasi_degree(f)
    assumptions, _cert = _require_isolated(f, assume_isolated)
    ring = f.ring
    p = ring.prime
    w = ring.w
    n = ring.nvars - 1
    lift2_p_bound = n * d - d - w + 1
    ladder = MuLadder(prime=p)
    blocked_small_p = False
    for e in range(1, e_max + 1):
        try:
            entry = _entry(f, e, d, isolated=True)
        except ResourceLimitError as exc:
            raise ResourceLimitError(str(exc), partial=ladder) from exc
        ladder.entries.append(entry)
        ladder.verify()
        q, m = entry.q, entry.mu
        if e == 1 and d == w and p >= n - 1:
            h = p - m
            if 0 <= h <= n - 1:
                return FptResult(
                    kind="exact",
                    value=Fraction(m, q),
                    interval=None,
                    certificate=CERT_CY,
                    e_used=e,
                    ladder=ladder,
                    assumptions=assumptions,
                    h=h,
                )
            if assumptions["isolated"] == "verified":
                raise RuntimeError(
                    f"h = p - mu(p) = {h} outside [0, {n - 1}] despite verified "
                    "isolated singularity"
                )
            # assumed isolatedness is contradicted; fall through to the
            # remaining rules / interval, still flagged as assumed
        if (m - 1) * d == w * (q - 1):
            return FptResult(
                kind="exact",
                value=Fraction(w, d),
                interval=None,
                certificate=CERT_LIFT1,
                e_used=e,
                ladder=ladder,
                assumptions=assumptions,
            )
        if m * d < w * q:
            if p >= lift2_p_bound:
                return FptResult(
                    kind="exact",
                    value=Fraction(m, q),
                    interval=None,
                    certificate=CERT_LIFT2,
                    e_used=e,
                    ladder=ladder,
                    assumptions=assumptions,
                )
            blocked_small_p = True
    last = ladder.last()
    if blocked_small_p:
        blocked = (
            f"constant-ratio lifting needs p >= nd-d-w+1 = {lift2_p_bound}, "
            f"but p = {p}"
        )
    else:
        blocked = f"no lifting rule matched for e <= {e_max}"
    return FptResult(
        kind="interval",
        value=None,
        interval=(Fraction(last.mu - 1, last.q), Fraction(last.mu, last.q)),
        certificate=CERT_TRUNCATED,
        e_used=e_max,
        ladder=ladder,
        assumptions=assumptions,
        blocked=blocked,
    )


def hasse_order(f: Poly) -> int:
    """Vanishing order of the Hasse invariant at the hypersurface cut out by f.

    Requires the unit-ratio case deg f == w, the bound p >= w(n-2)+1, and a
    certified isolated singularity; the value is h = p - mu(p).
    """
    d = quasi_degree(f)
    ring = f.ring
    p = ring.prime
    w = ring.w
    n = ring.nvars - 1
    if d != w:
        raise PreconditionError(
            f"Hasse order needs deg f == w (got degree {d}, total weight {w})"
        )
    bound = w * (n - 2) + 1
    if p < bound:
        raise PreconditionError(f"Hasse order needs p >= w(n-2)+1 = {bound}, got p = {p}")
    _require_isolated(f, assume_isolated=False)
    return p - mu(f, 1, isolated=True)
