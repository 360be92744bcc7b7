"""Exact scalars in Q or in a single real quadratic field Q(sqrt(d)).

Every interval endpoint, length and orbit point in this package is an
ExactScalar, so each boundary decision reduces to integer sign tests;
no floating point enters any decision path.  Values are immutable and
hashable (pure value semantics).
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering

__all__ = [
    "ExactScalar",
    "Interval",
    "MixedRadicalError",
    "ScalarParseError",
    "ZERO",
    "ONE",
    "as_scalar",
    "approximate",
    "compare",
    "format_scalar",
    "make_quadratic",
    "parse_scalar",
    "rational",
]


class MixedRadicalError(ValueError):
    """Two scalars live in different quadratic fields and cannot be combined."""


class ScalarParseError(ValueError):
    """Text does not match the scalar literal grammar."""


def _square_free_split(n: int) -> tuple[int, int]:
    # n = m*m * n0 with n0 square-free
    m, n0, f = 1, n, 2
    while f * f <= n0:
        ff = f * f
        while n0 % ff == 0:
            n0 //= ff
            m *= f
        f += 1
    return m, n0


@total_ordering
@dataclass(frozen=True, eq=False)
class ExactScalar:
    """rat + coef * sqrt(d), exactly.

    Canonical form: d is square-free and >= 2, and d == 0 iff coef == 0
    (pure rationals always carry d == 0).  Construction normalizes, so
    equal values have equal field tuples.
    """

    rat: Fraction = Fraction(0)
    coef: Fraction = Fraction(0)
    d: int = 0

    def __post_init__(self) -> None:
        rat = self.rat if isinstance(self.rat, Fraction) else Fraction(self.rat)
        coef = self.coef if isinstance(self.coef, Fraction) else Fraction(self.coef)
        d = self.d
        if not isinstance(d, int) or d < 0:
            raise ValueError(f"radicand must be a non-negative integer, got {d!r}")
        if d == 0:
            coef = Fraction(0)
        elif coef == 0:
            d = 0
        else:
            m, d = _square_free_split(d)
            if m != 1:
                coef *= m
            if d == 1:
                rat += coef
                coef = Fraction(0)
                d = 0
        object.__setattr__(self, "rat", rat)
        object.__setattr__(self, "coef", coef)
        object.__setattr__(self, "d", d)

    # numerator/denominator views of the two components
    @property
    def p(self) -> int:
        return self.rat.numerator

    @property
    def q(self) -> int:
        return self.rat.denominator

    @property
    def r(self) -> int:
        return self.coef.numerator

    @property
    def s(self) -> int:
        return self.coef.denominator

    @property
    def is_rational(self) -> bool:
        return self.d == 0

    def _join_d(self, other: "ExactScalar") -> int:
        if self.d == 0:
            return other.d
        if other.d == 0 or other.d == self.d:
            return self.d
        raise MixedRadicalError(
            f"cannot combine sqrt({self.d}) with sqrt({other.d})"
        )

    def sign(self) -> int:
        """Exact sign in {-1, 0, 1} via integer comparisons only."""
        u, v = self.rat, self.coef
        if v == 0:
            return (u > 0) - (u < 0)
        if u == 0:
            return 1 if v > 0 else -1
        if u > 0 and v > 0:
            return 1
        if u < 0 and v < 0:
            return -1
        # opposite signs: |u| vs |v| sqrt(d) decided by u^2 vs v^2 d
        lhs = u * u
        rhs = v * v * self.d
        if lhs == rhs:
            return 0
        if lhs > rhs:
            return 1 if u > 0 else -1
        return 1 if v > 0 else -1

    def __bool__(self) -> bool:
        return self.rat != 0 or self.coef != 0

    def __neg__(self) -> "ExactScalar":
        return ExactScalar(-self.rat, -self.coef, self.d)

    def __add__(self, other: object) -> "ExactScalar":
        o = as_scalar(other)
        if o is None:
            return NotImplemented
        d = self._join_d(o)
        return ExactScalar(self.rat + o.rat, self.coef + o.coef, d)

    __radd__ = __add__

    def __sub__(self, other: object) -> "ExactScalar":
        o = as_scalar(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: object) -> "ExactScalar":
        o = as_scalar(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other: object) -> "ExactScalar":
        o = as_scalar(other)
        if o is None:
            return NotImplemented
        d = self._join_d(o)
        return ExactScalar(
            self.rat * o.rat + self.coef * o.coef * d,
            self.rat * o.coef + self.coef * o.rat,
            d,
        )

    __rmul__ = __mul__

    def _invert(self) -> "ExactScalar":
        if not self:
            raise ZeroDivisionError("division by zero scalar")
        # 1/(u + v sqrt d) = (u - v sqrt d)/(u^2 - v^2 d); the norm is a
        # non-zero rational because sqrt(d) is irrational in canonical form.
        norm = self.rat * self.rat - self.coef * self.coef * self.d
        return ExactScalar(self.rat / norm, -self.coef / norm, self.d)

    def __truediv__(self, other: object) -> "ExactScalar":
        o = as_scalar(other)
        if o is None:
            return NotImplemented
        self._join_d(o)
        return self * o._invert()

    def __rtruediv__(self, other: object) -> "ExactScalar":
        o = as_scalar(other)
        if o is None:
            return NotImplemented
        return o * self._invert()

    def __abs__(self) -> "ExactScalar":
        return -self if self.sign() < 0 else self

    def __eq__(self, other: object) -> bool:
        o = as_scalar(other)
        if o is None:
            return NotImplemented
        return self.rat == o.rat and self.coef == o.coef and self.d == o.d

    def __lt__(self, other: object) -> bool:
        o = as_scalar(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() < 0

    def __hash__(self) -> int:
        if self.d == 0:
            return hash(self.rat)
        return hash((self.rat, self.coef, self.d))

    def __floor__(self) -> int:
        u, v = self.rat, self.coef
        base = math.floor(u)
        if v == 0:
            return base
        # floor(|v| sqrt d) = isqrt(num*den) // den for v^2 d = num/den;
        # the value is irrational, so the negative case is -fl - 1.
        num = v.numerator * v.numerator * self.d
        den = v.denominator * v.denominator
        fl = math.isqrt(num * den) // den
        base += fl if v > 0 else -fl - 1
        if (self - (base + 1)).sign() >= 0:
            base += 1
        return base

    def __str__(self) -> str:
        return format_scalar(self)

    def __repr__(self) -> str:
        return f"ExactScalar({format_scalar(self)!r})"


ZERO = ExactScalar(Fraction(0))
ONE = ExactScalar(Fraction(1))


def as_scalar(x: object) -> ExactScalar | None:
    """Coerce ints and Fractions; return None for foreign types."""
    if isinstance(x, ExactScalar):
        return x
    if isinstance(x, (int, Fraction)):
        return ExactScalar(Fraction(x))
    return None


def rational(p: int, q: int = 1) -> ExactScalar:
    return ExactScalar(Fraction(p, q))


def make_quadratic(p: int, q: int, r: int, s: int, d: int) -> ExactScalar:
    """Build p/q + (r/s) sqrt(d) in canonical form."""
    if q == 0 or s == 0:
        raise ValueError("zero denominator")
    if d < 0:
        raise ValueError("negative radicand")
    return ExactScalar(Fraction(p, q), Fraction(r, s), d)


def compare(a: ExactScalar, b: ExactScalar) -> int:
    """-1, 0 or 1; raises MixedRadicalError across distinct quadratic fields."""
    return (a - b).sign()


def approximate(a: ExactScalar, digits: int) -> str:
    """Decimal expansion with `digits` fractional digits, rounded half-up.

    Computed from integer square roots; never touches floating point.
    """
    if digits < 1:
        raise ValueError("digits must be >= 1")
    if a.sign() < 0:
        return "-" + approximate(-a, digits)
    scale = 10 ** digits
    m = math.floor(a * scale + Fraction(1, 2))
    return f"{m // scale}.{m % scale:0{digits}d}"


_WS = re.compile(r"\s+")
_INT = re.compile(r"^[+-]?\d+$")
_FRAC = re.compile(r"^([+-]?\d+)/([+-]?\d+)$")
_QUAD = re.compile(r"^\(([+-]?\d+)([+-])(\d+)\*sqrt\((\d+)\)\)/([+-]?\d+)$")


def parse_scalar(text: str) -> ExactScalar:
    """Parse `INT`, `INT/INT` or `(INT+-INT*sqrt(INT))/INT` (whitespace ignored)."""
    s = _WS.sub("", text)
    if _INT.match(s):
        return ExactScalar(Fraction(int(s)))
    m = _FRAC.match(s)
    if m:
        den = int(m.group(2))
        if den == 0:
            raise ScalarParseError(f"zero denominator in {text!r}")
        return ExactScalar(Fraction(int(m.group(1)), den))
    m = _QUAD.match(s)
    if m:
        p, sgn, r, d, q = m.groups()
        den = int(q)
        if den == 0:
            raise ScalarParseError(f"zero denominator in {text!r}")
        r_signed = int(r) if sgn == "+" else -int(r)
        return make_quadratic(int(p), den, r_signed, den, int(d))
    raise ScalarParseError(f"not a scalar literal: {text!r}")


def format_scalar(a: ExactScalar) -> str:
    """Emit the literal grammar; parse_scalar(format_scalar(a)) == a."""
    if a.coef == 0:
        if a.rat.denominator == 1:
            return str(a.rat.numerator)
        return f"{a.rat.numerator}/{a.rat.denominator}"
    den = math.lcm(a.rat.denominator, a.coef.denominator)
    p = a.rat.numerator * (den // a.rat.denominator)
    r = a.coef.numerator * (den // a.coef.denominator)
    sgn = "+" if r >= 0 else "-"
    return f"({p}{sgn}{abs(r)}*sqrt({a.d}))/{den}"


@dataclass(frozen=True)
class Interval:
    """Subinterval of the line with explicit endpoint ownership."""

    lo: ExactScalar
    hi: ExactScalar
    lo_closed: bool = True
    hi_closed: bool = False

    def __post_init__(self) -> None:
        if (self.hi - self.lo).sign() < 0:
            raise ValueError(f"interval endpoints out of order: {self}")

    @classmethod
    def singleton(cls, x: ExactScalar) -> "Interval":
        return cls(x, x, True, True)

    @property
    def is_empty(self) -> bool:
        return self.lo == self.hi and not (self.lo_closed and self.hi_closed)

    @property
    def length(self) -> ExactScalar:
        return self.hi - self.lo

    def contains(self, x: ExactScalar) -> bool:
        c = compare(x, self.lo)
        if c < 0 or (c == 0 and not self.lo_closed):
            return False
        c = compare(x, self.hi)
        if c > 0 or (c == 0 and not self.hi_closed):
            return False
        return True

    def contains_limit(self, x: ExactScalar, side: int) -> bool:
        """Membership of the one-sided limit x + side*epsilon.

        Independent of endpoint ownership: x+eps lies in the interval iff
        lo <= x < hi, and x-eps iff lo < x <= hi.
        """
        if side > 0:
            return compare(x, self.lo) >= 0 and compare(x, self.hi) < 0
        return compare(x, self.lo) > 0 and compare(x, self.hi) <= 0

    def intersect(self, other: "Interval") -> "Interval | None":
        c = compare(self.lo, other.lo)
        if c > 0:
            lo, lo_closed = self.lo, self.lo_closed
        elif c < 0:
            lo, lo_closed = other.lo, other.lo_closed
        else:
            lo, lo_closed = self.lo, self.lo_closed and other.lo_closed
        c = compare(self.hi, other.hi)
        if c < 0:
            hi, hi_closed = self.hi, self.hi_closed
        elif c > 0:
            hi, hi_closed = other.hi, other.hi_closed
        else:
            hi, hi_closed = self.hi, self.hi_closed and other.hi_closed
        if compare(lo, hi) > 0:
            return None
        out = Interval(lo, hi, lo_closed, hi_closed)
        return None if out.is_empty else out

    def __str__(self) -> str:
        lb = "[" if self.lo_closed else "("
        rb = "]" if self.hi_closed else ")"
        return f"{lb}{self.lo},{self.hi}{rb}"
