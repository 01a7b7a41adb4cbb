"""Dyadic rationals and outward-rounded intervals with dyadic endpoints.

Addition, subtraction and multiplication of dyadics are exact, so interval
``+``, ``-`` and ``*`` are exact too; precision enters only through
``DyadicInterval.round`` and the operations that cannot stay dyadic
(division, square root, the exponential). All rounding is to the grid
``2**-p`` with lower endpoints rounded down and upper endpoints rounded up.
"""

from __future__ import annotations

from fractions import Fraction
from functools import total_ordering

from .errors import NegativeInput


def _normalize(mantissa: int, exponent: int) -> tuple[int, int]:
    if mantissa == 0:
        return 0, 0
    tz = (mantissa & -mantissa).bit_length() - 1
    return mantissa >> tz, exponent + tz


@total_ordering
class DyadicRational:
    """The number ``mantissa * 2**exponent``, kept with an odd mantissa."""

    __slots__ = ("mantissa", "exponent")

    def __init__(self, mantissa: int, exponent: int = 0):
        m, e = _normalize(int(mantissa), int(exponent))
        object.__setattr__(self, "mantissa", m)
        object.__setattr__(self, "exponent", e)

    def __setattr__(self, name, value):
        raise AttributeError("DyadicRational is immutable")

    @classmethod
    def coerce(cls, value) -> "DyadicRational":
        if isinstance(value, DyadicRational):
            return value
        if isinstance(value, int):
            return cls(value)
        if isinstance(value, Fraction):
            den = value.denominator
            if den & (den - 1):
                raise ValueError(f"{value} is not dyadic")
            return cls(value.numerator, -(den.bit_length() - 1))
        if isinstance(value, float):
            return cls.coerce(Fraction(value))
        raise TypeError(f"cannot convert {type(value).__name__} to a dyadic")

    @classmethod
    def floor(cls, value, p: int) -> "DyadicRational":
        """Largest multiple of ``2**-p`` not above ``value``."""
        if isinstance(value, DyadicRational):
            if value.exponent >= -p:
                return value
            return cls(value.mantissa >> (-p - value.exponent), -p)
        fr = Fraction(value)
        return cls((fr.numerator << p) // fr.denominator, -p)

    @classmethod
    def ceil(cls, value, p: int) -> "DyadicRational":
        """Smallest multiple of ``2**-p`` not below ``value``."""
        if isinstance(value, DyadicRational):
            if value.exponent >= -p:
                return value
            return cls(-((-value.mantissa) >> (-p - value.exponent)), -p)
        fr = Fraction(value)
        return cls(-((-fr.numerator << p) // fr.denominator), -p)

    def as_fraction(self) -> Fraction:
        if self.exponent >= 0:
            return Fraction(self.mantissa << self.exponent)
        return Fraction(self.mantissa, 1 << -self.exponent)

    def scaled(self, p: int) -> int:
        """``self * 2**p`` as an integer; requires it to be one."""
        e = self.exponent + p
        if e < 0:
            raise ValueError(f"{self} is not a multiple of 2^-{p}")
        return self.mantissa << e

    def __float__(self) -> float:
        return float(self.as_fraction())

    def __repr__(self) -> str:
        return f"DyadicRational({self.mantissa}, {self.exponent})"

    def __str__(self) -> str:
        return self.decimal()

    def decimal(self) -> str:
        """Exact decimal expansion (dyadics always have a finite one)."""
        m, e = self.mantissa, self.exponent
        if e >= 0:
            return str(m << e)
        sign = "-" if m < 0 else ""
        digits = str(abs(m) * 5 ** (-e)).rjust(-e + 1, "0")
        whole, frac = digits[:e], digits[e:]
        return f"{sign}{whole}.{frac}"

    def __hash__(self):
        return hash(self.as_fraction())

    def _key(self, other):
        if isinstance(other, DyadicRational):
            return other.as_fraction()
        if isinstance(other, (int, Fraction)):
            return other
        return NotImplemented

    def __eq__(self, other):
        k = self._key(other)
        if k is NotImplemented:
            return NotImplemented
        return self.as_fraction() == k

    def __lt__(self, other):
        k = self._key(other)
        if k is NotImplemented:
            return NotImplemented
        return self.as_fraction() < k

    def __neg__(self):
        return DyadicRational(-self.mantissa, self.exponent)

    def __add__(self, other):
        try:
            other = DyadicRational.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        e = min(self.exponent, other.exponent)
        return DyadicRational((self.mantissa << (self.exponent - e))
                              + (other.mantissa << (other.exponent - e)), e)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            other = DyadicRational.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            other = DyadicRational.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return DyadicRational(self.mantissa * other.mantissa,
                              self.exponent + other.exponent)

    __rmul__ = __mul__

    def __bool__(self):
        return self.mantissa != 0


ZERO = DyadicRational(0)
ONE = DyadicRational(1)


def isqrt_newton(n: int) -> int:
    """Floor of the square root of ``n`` by integer Newton iteration."""
    if n < 0:
        raise NegativeInput(f"isqrt of negative integer {n}")
    if n < 2:
        return n
    x = 1 << ((n.bit_length() + 1) // 2)  # x >= sqrt(n)
    while True:
        y = (x + n // x) // 2
        if y >= x:
            return x
        x = y


class DyadicInterval:
    """Closed interval ``[lo, hi]`` with dyadic endpoints."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        lo = DyadicRational.coerce(lo)
        hi = lo if hi is None else DyadicRational.coerce(hi)
        if hi < lo:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def __setattr__(self, name, value):
        raise AttributeError("DyadicInterval is immutable")

    @classmethod
    def enclose(cls, value, p: int) -> "DyadicInterval":
        """Tightest ``2**-p`` grid interval containing a rational."""
        return cls(DyadicRational.floor(value, p), DyadicRational.ceil(value, p))

    @classmethod
    def coerce(cls, value) -> "DyadicInterval":
        if isinstance(value, DyadicInterval):
            return value
        return cls(value)

    def __repr__(self):
        return f"DyadicInterval({float(self.lo)!r}, {float(self.hi)!r})"

    def __eq__(self, other):
        if not isinstance(other, DyadicInterval):
            return NotImplemented
        return self.lo == other.lo and self.hi == other.hi

    def __hash__(self):
        return hash((self.lo, self.hi))

    @property
    def width(self) -> DyadicRational:
        return self.hi - self.lo

    def width_log2(self) -> float:
        w = self.width
        if not w:
            return float("-inf")
        return w.mantissa.bit_length() - 1 + w.exponent

    def contains(self, value) -> bool:
        if isinstance(value, DyadicInterval):
            return self.lo <= value.lo and value.hi <= self.hi
        if isinstance(value, float):
            value = Fraction(value)
        return self.lo <= value <= self.hi

    __contains__ = contains

    def overlaps(self, other: "DyadicInterval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def round(self, p: int) -> "DyadicInterval":
        return DyadicInterval(DyadicRational.floor(self.lo, p),
                              DyadicRational.ceil(self.hi, p))

    def __neg__(self):
        return DyadicInterval(-self.hi, -self.lo)

    def __add__(self, other):
        other = DyadicInterval.coerce(other)
        return DyadicInterval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __sub__(self, other):
        other = DyadicInterval.coerce(other)
        return DyadicInterval(self.lo - other.hi, self.hi - other.lo)

    def __rsub__(self, other):
        return DyadicInterval.coerce(other) - self

    def __mul__(self, other):
        other = DyadicInterval.coerce(other)
        products = [self.lo * other.lo, self.lo * other.hi,
                    self.hi * other.lo, self.hi * other.hi]
        return DyadicInterval(min(products), max(products))

    __rmul__ = __mul__

    def divide(self, other, p: int) -> "DyadicInterval":
        other = DyadicInterval.coerce(other)
        if other.lo <= 0 <= other.hi:
            raise ZeroDivisionError("divisor interval contains zero")
        quotients = [a.as_fraction() / b.as_fraction()
                     for a in (self.lo, self.hi) for b in (other.lo, other.hi)]
        return DyadicInterval(DyadicRational.floor(min(quotients), p),
                              DyadicRational.ceil(max(quotients), p))

    def pow(self, k: int, p: int) -> "DyadicInterval":
        """``self**k`` for a non-negative interval, by squaring."""
        if self.lo < 0:
            raise ValueError("pow is implemented for non-negative intervals")
        result = DyadicInterval(ONE)
        base = self
        while k:
            if k & 1:
                result = (result * base).round(p)
            k >>= 1
            if k:
                base = (base * base).round(p)
        return result


def iv_sqrt(x: DyadicInterval, p: int) -> DyadicInterval:
    """Enclosure of ``sqrt(t)`` for every ``t`` in ``x`` on the ``2**-p`` grid."""
    x = DyadicInterval.coerce(x)
    if x.lo < 0:
        raise NegativeInput(f"square root of interval with lower end {x.lo}")
    # floor(sqrt(floor(lo * 4^p))) <= sqrt(lo) * 2^p
    n_lo = DyadicRational.floor(x.lo, 2 * p).scaled(2 * p)
    s_lo = isqrt_newton(n_lo)
    n_hi = DyadicRational.ceil(x.hi, 2 * p).scaled(2 * p)
    s_hi = isqrt_newton(n_hi)
    if s_hi * s_hi < n_hi:
        s_hi += 1
    return DyadicInterval(DyadicRational(s_lo, -p), DyadicRational(s_hi, -p))


def exp_enclosure(x: Fraction, p: int) -> DyadicInterval:
    """Enclosure of ``e**x`` for ``|x| <= 1``.

    Taylor polynomial plus the Lagrange remainder bound
    ``e**|x| * |x|**(K+1) / (K+1)! <= 3 |x|**(K+1) / (K+1)!``.
    """
    x = Fraction(x)
    if abs(x) > 1:
        raise ValueError("exp_enclosure expects |x| <= 1")
    tol = Fraction(1, 1 << (p + 2))
    total = Fraction(0)
    term = Fraction(1)
    k = 0
    while True:
        total += term
        k += 1
        term = term * x / k
        remainder = 3 * abs(term)
        if remainder < tol:
            break
    return DyadicInterval(DyadicRational.floor(total - remainder, p),
                          DyadicRational.ceil(total + remainder, p))
