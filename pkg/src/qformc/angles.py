"""Exact angles: rational multiples of pi, normalized into (-pi, pi]."""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational


def _normalize(c: Fraction) -> Fraction:
    c = c % 2
    if c > 1:
        c -= 2
    return c


class Angle:
    """The angle ``coeff * pi`` with ``-1 < coeff <= 1``.

    >>> Angle(3, 2)
    Angle(-1/2)
    >>> Angle(1, 4) + Angle(7, 4)
    Angle(0)
    """

    __slots__ = ("coeff",)

    def __init__(self, num: int | Fraction | Angle = 0, den: int = 1):
        if isinstance(num, Angle):
            self.coeff = num.coeff
            return
        if den <= 0:
            raise ValueError("denominator must be positive")
        if not isinstance(num, Rational):
            raise TypeError(f"angle coefficient must be rational, got {type(num).__name__}")
        self.coeff = _normalize(Fraction(num) / den)

    @classmethod
    def pi(cls) -> Angle:
        return cls(1)

    @property
    def num(self) -> int:
        return self.coeff.numerator

    @property
    def den(self) -> int:
        return self.coeff.denominator

    @property
    def radians(self) -> float:
        return float(self.coeff) * math.pi

    def is_zero(self) -> bool:
        return self.coeff == 0

    def is_multiple_of(self, step: Fraction | int) -> bool:
        """True if the angle is an integer multiple of ``step * pi``."""
        return (self.coeff / Fraction(step)).denominator == 1

    def __add__(self, other: Angle) -> Angle:
        if not isinstance(other, Angle):
            return NotImplemented
        return Angle(self.coeff + other.coeff)

    def __sub__(self, other: Angle) -> Angle:
        if not isinstance(other, Angle):
            return NotImplemented
        return Angle(self.coeff - other.coeff)

    def __neg__(self) -> Angle:
        return Angle(-self.coeff)

    def __mul__(self, k: int) -> Angle:
        if not isinstance(k, int):
            return NotImplemented
        return Angle(self.coeff * k)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Angle):
            return self.coeff == other.coeff
        return NotImplemented

    def __hash__(self) -> int:
        return hash(("Angle", self.coeff))

    def __bool__(self) -> bool:
        return self.coeff != 0

    def __repr__(self) -> str:
        return f"Angle({self.coeff})"
