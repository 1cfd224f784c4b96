"""Outward-rounded interval arithmetic on binary floats.

Every operation computes the round-to-nearest result and then steps one ulp
away from it with :func:`math.nextafter`.  Since IEEE add/mul/div/sqrt are
correctly rounded, the nearest result is within half an ulp of the true value
and the stepped bounds always enclose it.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

_INF = math.inf

Number = Union[int, float, Fraction, "Interval"]


def _down(x: float) -> float:
    return math.nextafter(x, -_INF)


def _up(x: float) -> float:
    return math.nextafter(x, _INF)


def _float_enclosure(q: Fraction) -> tuple[float, float]:
    f = float(q)
    if Fraction(f) == q:
        return f, f
    return (f, _up(f)) if Fraction(f) < q else (_down(f), f)


class Interval:
    """Closed interval ``[lo, hi]`` with float endpoints."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo: float, hi: float | None = None):
        if hi is None:
            hi = lo
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        self.lo = float(lo)
        self.hi = float(hi)

    @classmethod
    def exact(cls, value: int | float | Fraction) -> "Interval":
        """Smallest float interval containing an exact rational."""
        if isinstance(value, float):
            return cls(value, value)
        return cls(*_float_enclosure(Fraction(value)))

    @staticmethod
    def coerce(value: Number) -> "Interval":
        if isinstance(value, Interval):
            return value
        return Interval.exact(value)

    def __repr__(self) -> str:
        return f"Interval({self.lo!r}, {self.hi!r})"

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains(self, x: float | Fraction) -> bool:
        return Fraction(self.lo) <= Fraction(x) <= Fraction(self.hi)

    def __add__(self, other: Number) -> "Interval":
        o = Interval.coerce(other)
        return Interval(_down(self.lo + o.lo), _up(self.hi + o.hi))

    __radd__ = __add__

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other: Number) -> "Interval":
        o = Interval.coerce(other)
        return Interval(_down(self.lo - o.hi), _up(self.hi - o.lo))

    def __rsub__(self, other: Number) -> "Interval":
        return Interval.coerce(other) - self

    def __mul__(self, other: Number) -> "Interval":
        o = Interval.coerce(other)
        products = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Interval(_down(min(products)), _up(max(products)))

    __rmul__ = __mul__

    def __truediv__(self, other: Number) -> "Interval":
        o = Interval.coerce(other)
        if o.lo <= 0.0 <= o.hi:
            raise ZeroDivisionError("divisor interval contains zero")
        quotients = (self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi)
        return Interval(_down(min(quotients)), _up(max(quotients)))

    def __rtruediv__(self, other: Number) -> "Interval":
        return Interval.coerce(other) / self

    def square(self) -> "Interval":
        if self.lo >= 0.0:
            return Interval(max(0.0, _down(self.lo * self.lo)), _up(self.hi * self.hi))
        if self.hi <= 0.0:
            return Interval(max(0.0, _down(self.hi * self.hi)), _up(self.lo * self.lo))
        m = max(-self.lo, self.hi)
        return Interval(0.0, _up(m * m))

    def sqrt(self) -> "Interval":
        if self.lo < 0.0:
            raise ValueError("sqrt of an interval with negative part")
        lo = _down(math.sqrt(self.lo)) if self.lo > 0.0 else 0.0
        return Interval(max(lo, 0.0), _up(math.sqrt(self.hi)))

    # Certified comparisons: true only when every point of self satisfies it.
    def certainly_gt(self, other: Number) -> bool:
        return self.lo > Interval.coerce(other).hi

    def certainly_lt(self, other: Number) -> bool:
        return self.hi < Interval.coerce(other).lo

    def to_json(self) -> dict:
        return {"lo": self.lo, "hi": self.hi, "lo_hex": self.lo.hex(), "hi_hex": self.hi.hex()}
