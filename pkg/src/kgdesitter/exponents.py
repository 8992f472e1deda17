"""Admissible Strichartz exponents and dual pairs.

A triple ``(p, q, s)`` in dimension ``n`` is admissible when

    1/p + n/q  = n/2 - s          (scaling)
    2/p + (n-1)/q <= (n-1)/2      (Knapp)

with ``2 <= p <= inf`` and ``2 <= q < inf``.  Rational inputs (ints, Fractions,
integral floats, strings such as ``"5/2"``) are handled exactly; other floats
use an absolute tolerance of 1e-12.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

logger = logging.getLogger(__name__)

FLOAT_TOL = 1e-12
LATTICE_DENOMINATOR = 12
INF = math.inf

Number = Union[int, float, Fraction]


def as_exact(value):
    """Return a Fraction for rational-looking input, ``inf`` for infinity, else the float."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("boolean is not an exponent")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip().lower()
        if text in ("inf", "infinity", "oo", "∞"):
            return INF
        try:
            return Fraction(text)
        except ValueError:
            return float(text)
    value = float(value)
    if math.isinf(value):
        return INF
    if value.is_integer():
        return Fraction(int(value))
    return value


def reciprocal(value):
    if value == INF:
        return Fraction(0)
    if isinstance(value, Fraction):
        return 1 / value
    return 1.0 / value


def _is_exact(*values):
    return all(isinstance(v, Fraction) or v == INF for v in values)


@dataclass(frozen=True)
class Verdict:
    """Result of :func:`validate`.  ``relation`` names the first violated condition."""

    admissible: bool
    relation: Optional[str] = None
    residual: Number = 0
    degenerate: bool = False

    def __bool__(self):
        return self.admissible

    def describe(self):
        if self.admissible:
            return "admissible (degenerate, n=1)" if self.degenerate else "admissible"
        return f"violation({self.relation}, residual={fmt(self.residual)})"


def fmt(value):
    if value == INF:
        return "inf"
    if isinstance(value, Fraction):
        return str(value)
    return repr(float(value))


def validate(p, q, s, n):
    """Check both admissibility relations; total, never raises for numeric input."""
    p, q, s = as_exact(p), as_exact(q), as_exact(s)
    n = int(n)
    if n < 1:
        return Verdict(False, "dimension", n)
    if q == INF:
        return Verdict(False, "q finite", INF)
    if p < 2:
        return Verdict(False, "p >= 2", p - 2)
    if q < 2:
        return Verdict(False, "q >= 2", q - 2)
    exact = _is_exact(p, q, s)
    ip, iq = reciprocal(p), reciprocal(q)
    scaling = ip + n * iq - (Fraction(n, 2) - s)
    knapp = 2 * ip + (n - 1) * iq - Fraction(n - 1, 2)
    if exact:
        if scaling != 0:
            return Verdict(False, "scaling", scaling)
        if knapp > 0:
            return Verdict(False, "knapp", knapp)
    else:
        if abs(scaling) > FLOAT_TOL:
            return Verdict(False, "scaling", float(scaling))
        if knapp > FLOAT_TOL:
            return Verdict(False, "knapp", float(knapp))
    if n == 1:
        logger.warning("n=1: admissibility degenerates to p = inf")
    return Verdict(True, degenerate=(n == 1))


@dataclass(frozen=True)
class AdmissibleTriple:
    p: Number
    q: Number
    s: Number
    n: int

    def __post_init__(self):
        for name in ("p", "q", "s"):
            object.__setattr__(self, name, as_exact(getattr(self, name)))
        verdict = validate(self.p, self.q, self.s, self.n)
        if not verdict:
            raise ValueError(f"({fmt(self.p)}, {fmt(self.q)}, {fmt(self.s)}) in n={self.n}: {verdict.describe()}")

    def label(self):
        return f"{fmt(self.p)},{fmt(self.q)},{fmt(self.s)}"


def conjugate(r):
    """Hölder conjugate exponent ``r / (r - 1)``."""
    r = as_exact(r)
    if r == 1:
        return INF
    if r == INF:
        return Fraction(1)
    return r / (r - 1)


@dataclass(frozen=True)
class DualPair:
    """Exponents ``(p', q')`` of the forcing norm with ``1/p' + n/q' - 2 = n/2 - s``."""

    p_prime: Number
    q_prime: Number
    s: Number
    n: int

    def __post_init__(self):
        for name in ("p_prime", "q_prime", "s"):
            object.__setattr__(self, name, as_exact(getattr(self, name)))
        if not (1 <= self.p_prime <= 2 and 1 < self.q_prime <= 2):
            raise ValueError(f"dual pair out of range: ({fmt(self.p_prime)}, {fmt(self.q_prime)})")
        res = self.residual()
        if (res != 0) if _is_exact(self.p_prime, self.q_prime, self.s) else abs(res) > FLOAT_TOL:
            raise ValueError(f"dual relation fails, residual {fmt(res)}")

    def residual(self):
        return reciprocal(self.p_prime) + self.n * reciprocal(self.q_prime) - 2 - (Fraction(self.n, 2) - self.s)

    def conjugates(self):
        return conjugate(self.p_prime), conjugate(self.q_prime)

    def s_tilde(self):
        """Order of the admissible triple formed by the conjugates; equals ``1 - s``."""
        pt, qt = self.conjugates()
        return Fraction(self.n, 2) - reciprocal(pt) - self.n * reciprocal(qt)

    def label(self):
        return f"{fmt(self.p_prime)},{fmt(self.q_prime)}"


def dual_for(s, n, max_denominator=LATTICE_DENOMINATOR):
    """All dual pairs with ``p'`` in [1, 2], ``q'`` in (1, 2] on a rational lattice."""
    s = as_exact(s)
    if not isinstance(s, Fraction):
        s = Fraction(s).limit_denominator(10**6)
    n = int(n)
    found = set()
    target = Fraction(n, 2) - s + 2
    for b in range(1, max_denominator + 1):
        for a in range(b, 2 * b + 1):
            pp = Fraction(a, b)
            rest = target - 1 / pp
            if rest <= 0:
                continue
            qp = n / rest
            if not (1 < qp <= 2) or qp.denominator > max_denominator:
                continue
            pt, qt = conjugate(pp), conjugate(qp)
            if qt == INF or not validate(pt, qt, Fraction(n, 2) - reciprocal(pt) - n * reciprocal(qt), n):
                continue
            found.add((pp, qp))
    return [DualPair(pp, qp, s, n) for pp, qp in sorted(found)]


@dataclass(frozen=True)
class WeightExponents:
    """``e^{t_weight t} dt`` in time, ``x^{x_weight} dx`` in the chart, ``dh / x^measure_power``."""

    t_weight: Optional[Number]
    x_weight: Optional[Number]
    measure_power: int


def weight_exponents(triple):
    p, s = triple.p, triple.s
    if p == INF:
        return WeightExponents(None, None, triple.n)
    half = Fraction(1, 2) if isinstance(s, Fraction) else 0.5
    return WeightExponents(p * (s - half), p * (half - s) - 1, triple.n)


def dual_weight_exponents(dual):
    half = Fraction(1, 2) if isinstance(dual.s, Fraction) else 0.5
    return WeightExponents(dual.p_prime * (dual.s - half), dual.p_prime * (half - dual.s) - 1, dual.n)


def parse_triple(text):
    """Parse ``"5,10,1"`` into three exact exponents."""
    parts = [t for t in text.replace(" ", "").split(",") if t]
    if len(parts) != 3:
        raise ValueError(f"expected p,q,s, got {text!r}")
    return tuple(as_exact(t) for t in parts)


def parse_pair(text):
    parts = [t for t in text.replace(" ", "").split(",") if t]
    if len(parts) != 2:
        raise ValueError(f"expected p',q', got {text!r}")
    return tuple(as_exact(t) for t in parts)
