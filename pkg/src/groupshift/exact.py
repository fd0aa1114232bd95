"""Exact arithmetic over Q(sqrt(2)).

Event weights of the form 2**(-k/2) with odd k are irrational, so margin
computations cannot stay inside the rationals.  All of them live in the
quadratic field Q(sqrt(2)); this module provides the small amount of exact
arithmetic needed there (sign determination works by comparing squares, so
no floating point is ever consulted for a verdict).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class Quad:
    """A number a + b*sqrt(2) with exact rational coefficients."""

    a: Fraction
    b: Fraction = Fraction(0)

    @classmethod
    def of(cls, value) -> "Quad":
        if isinstance(value, Quad):
            return value
        return cls(Fraction(value))

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def as_fraction(self) -> Fraction:
        if self.b != 0:
            raise ValueError(f"{self} is irrational")
        return self.a

    def __add__(self, other: "Quad") -> "Quad":
        other = Quad.of(other)
        return Quad(self.a + other.a, self.b + other.b)

    def __sub__(self, other: "Quad") -> "Quad":
        other = Quad.of(other)
        return Quad(self.a - other.a, self.b - other.b)

    def __neg__(self) -> "Quad":
        return Quad(-self.a, -self.b)

    def __mul__(self, other: "Quad") -> "Quad":
        other = Quad.of(other)
        return Quad(
            self.a * other.a + 2 * self.b * other.b,
            self.a * other.b + self.b * other.a,
        )

    __radd__ = __add__
    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Quad":
        if n < 0:
            raise ValueError("negative powers not supported")
        result = Quad(Fraction(1))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def sign(self) -> int:
        a, b = self.a, self.b
        if a == 0 and b == 0:
            return 0
        if a >= 0 and b >= 0:
            return 1
        if a <= 0 and b <= 0:
            return -1
        # Mixed signs: compare a**2 with 2*b**2.
        diff = a * a - 2 * b * b
        if a > 0:  # b < 0
            return 1 if diff > 0 else (-1 if diff < 0 else 0)
        return -1 if diff > 0 else (1 if diff < 0 else 0)

    def __lt__(self, other) -> bool:
        return (self - Quad.of(other)).sign() < 0

    def __le__(self, other) -> bool:
        return (self - Quad.of(other)).sign() <= 0

    def __gt__(self, other) -> bool:
        return (self - Quad.of(other)).sign() > 0

    def __ge__(self, other) -> bool:
        return (self - Quad.of(other)).sign() >= 0

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * 2 ** 0.5

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}*sqrt2"
        return f"{self.a} + {self.b}*sqrt2"


QUAD_ZERO = Quad(Fraction(0))
QUAD_ONE = Quad(Fraction(1))


def half_power_of_two(k: int) -> Quad:
    """Exact 2**(-k/2) for a non-negative integer k."""
    if k < 0:
        raise ValueError("exponent must be non-negative")
    if k % 2 == 0:
        return Quad(Fraction(1, 2 ** (k // 2)))
    # 2**(-k/2) = sqrt(2) / 2**((k+1)/2)
    return Quad(Fraction(0), Fraction(1, 2 ** ((k + 1) // 2)))


def sqrt2_power(k: int) -> Quad:
    """Exact 2**(k/2) for a non-negative integer k."""
    if k < 0:
        raise ValueError("exponent must be non-negative")
    if k % 2 == 0:
        return Quad(Fraction(2 ** (k // 2)))
    return Quad(Fraction(0), Fraction(2 ** ((k - 1) // 2)))
