"""Exact scalars: reduced fractions and rational multiples of square roots."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Rational = Union[int, Fraction]


def squarefree_split(n: int) -> tuple[int, int]:
    """Return ``(s, r)`` with ``n == s*s*r`` and ``r`` square-free."""
    if n <= 0:
        raise ValueError(f"expected a positive integer, got {n}")
    s, r = 1, 1
    p = 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        s *= p ** (e // 2)
        if e % 2:
            r *= p
        p += 1 if p == 2 else 2
    return s, r * n


def is_perfect_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def rational_sqrt(q: Rational) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None if it is irrational."""
    q = Fraction(q)
    if q < 0:
        raise ValueError("square root of a negative rational")
    num, den = q.numerator, q.denominator
    if is_perfect_square(num) and is_perfect_square(den):
        return Fraction(math.isqrt(num), math.isqrt(den))
    return None


@dataclass(frozen=True)
class RadicalScalar:
    """The real number ``coeff * sqrt(radicand)``.

    Always normalized: the radicand is square-free, and zero is stored as
    ``0 * sqrt(1)``. Equality is therefore structural.
    """

    coeff: Fraction
    radicand: int = 1

    def __post_init__(self) -> None:
        coeff = Fraction(self.coeff)
        radicand = int(self.radicand)
        if radicand <= 0:
            raise ValueError("radicand must be a positive integer")
        s, r = squarefree_split(radicand)
        coeff *= s
        if coeff == 0:
            r = 1
        object.__setattr__(self, "coeff", coeff)
        object.__setattr__(self, "radicand", r)

    @classmethod
    def sqrt_of(cls, q: Rational) -> "RadicalScalar":
        """``sqrt(q)`` for a nonnegative rational ``q``."""
        q = Fraction(q)
        if q < 0:
            raise ValueError("square root of a negative rational")
        # sqrt(p/d) = sqrt(p*d)/d
        return cls(Fraction(1, q.denominator), q.numerator * q.denominator) if q else cls(Fraction(0))

    @property
    def is_rational(self) -> bool:
        return self.radicand == 1

    def square(self) -> Fraction:
        return self.coeff * self.coeff * self.radicand

    def to_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ValueError(f"{self} is irrational")
        return self.coeff

    def __float__(self) -> float:
        return float(self.coeff) * math.sqrt(self.radicand)

    def __mul__(self, other: object) -> "RadicalScalar":
        if isinstance(other, (int, Fraction)):
            return RadicalScalar(self.coeff * other, self.radicand)
        if isinstance(other, RadicalScalar):
            g = math.gcd(self.radicand, other.radicand)
            # sqrt(r1*r2) = g*sqrt(r1/g * r2/g) for square-free r1, r2
            return RadicalScalar(
                self.coeff * other.coeff * g,
                (self.radicand // g) * (other.radicand // g),
            )
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> "RadicalScalar":
        if isinstance(other, (int, Fraction)):
            return RadicalScalar(self.coeff / other, self.radicand)
        if isinstance(other, RadicalScalar):
            if other.coeff == 0:
                raise ZeroDivisionError("division by a zero RadicalScalar")
            # 1/(c*sqrt(r)) = sqrt(r)/(c*r)
            return self * RadicalScalar(1 / (other.coeff * other.radicand), other.radicand)
        return NotImplemented

    def __neg__(self) -> "RadicalScalar":
        return RadicalScalar(-self.coeff, self.radicand)

    def __add__(self, other: object) -> "RadicalScalar":
        if isinstance(other, (int, Fraction)):
            other = RadicalScalar(Fraction(other))
        if not isinstance(other, RadicalScalar):
            return NotImplemented
        if other.coeff == 0:
            return self
        if self.coeff == 0:
            return other
        if self.radicand != other.radicand:
            raise ValueError(f"cannot add {self} and {other} in closed form")
        return RadicalScalar(self.coeff + other.coeff, self.radicand)

    __radd__ = __add__

    def __sub__(self, other: object) -> "RadicalScalar":
        if isinstance(other, (int, Fraction)):
            other = RadicalScalar(Fraction(other))
        if not isinstance(other, RadicalScalar):
            return NotImplemented
        return self + (-other)

    def __abs__(self) -> "RadicalScalar":
        return RadicalScalar(abs(self.coeff), self.radicand)

    def sign(self) -> int:
        return (self.coeff > 0) - (self.coeff < 0)

    def __str__(self) -> str:
        if self.radicand == 1:
            return str(self.coeff)
        return f"{self.coeff}*sqrt({self.radicand})"

    def to_json(self) -> dict:
        return {"coeff": str(self.coeff), "radicand": self.radicand, "text": str(self), "float": float(self)}


def fraction_str(q: Rational) -> str:
    return str(Fraction(q))
