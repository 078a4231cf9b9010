"""Places of Q, exact normalized absolute values, and height kernels.

All norms are exact positive rationals (``Fraction``) and heights are kept
multiplicatively as kernels H with h = log H, so the product formula and
height identities are exactly testable.  Logarithms appear only in the
reporting layer, at a configurable binary precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath
from sympy import factorint, isprime

Rational = int | Fraction


@dataclass(frozen=True)
class Place:
    """A place of Q: archimedean (``p is None``) or the p-adic place above p."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None and not isprime(self.p):
            raise ValueError(f"finite place requires a prime, got {self.p}")

    @classmethod
    def archimedean(cls) -> "Place":
        return cls(None)

    @classmethod
    def finite(cls, p: int) -> "Place":
        return cls(int(p))

    @property
    def is_archimedean(self) -> bool:
        return self.p is None

    def sort_key(self) -> tuple[int, int]:
        return (0, 0) if self.p is None else (1, self.p)

    def __str__(self) -> str:
        return "inf" if self.p is None else str(self.p)


def sorted_places(places) -> list[Place]:
    """Deterministic order: archimedean first, then finite places by prime."""
    return sorted(places, key=Place.sort_key)


def padic_valuation(q: Rational, p: int) -> int:
    """ord_p of a nonzero rational."""
    q = Fraction(q)
    if q == 0:
        raise ValueError("valuation of zero is undefined")
    val = 0
    num, den = abs(q.numerator), q.denominator
    while num % p == 0:
        num //= p
        val += 1
    while den % p == 0:
        den //= p
        val -= 1
    return val


def local_norm(v: Place, q: Rational) -> Fraction:
    """The normalized absolute value ||q||_v, exactly."""
    q = Fraction(q)
    if q == 0:
        raise ValueError("norm of zero is excluded")
    if v.is_archimedean:
        return abs(q)
    return Fraction(v.p) ** (-padic_valuation(q, v.p))


def support(q: Rational) -> set[Place]:
    """The finite set of places where ||q||_v differs from 1."""
    q = Fraction(q)
    if q == 0:
        raise ValueError("support of zero is undefined")
    places: set[Place] = set()
    if abs(q) != 1:
        places.add(Place.archimedean())
    for part in (abs(q.numerator), q.denominator):
        for p in factorint(part):
            places.add(Place.finite(p))
    return places


def product_formula_check(q: Rational) -> Fraction:
    """Product of ||q||_v over the support; equals 1 for every nonzero q."""
    result = Fraction(1)
    for v in support(q):
        result *= local_norm(v, q)
    return result


@dataclass(frozen=True)
class HeightKernel:
    """The exact positive rational H with h = log H.

    Kernels compose multiplicatively: the kernel of independent contributions
    is the product of the kernels.
    """

    H: Fraction

    def __post_init__(self):
        object.__setattr__(self, "H", Fraction(self.H))
        if self.H <= 0:
            raise ValueError("height kernel must be positive")

    def __mul__(self, other: "HeightKernel") -> "HeightKernel":
        return HeightKernel(self.H * other.H)

    def __pow__(self, k: int) -> "HeightKernel":
        return HeightKernel(self.H ** k)

    def log(self, bits: int = 128) -> mpmath.mpf:
        return log_exact(self.H, bits)


def log_exact(x: Rational, bits: int = 128) -> mpmath.mpf:
    """log of a positive rational at the given binary precision (round to nearest)."""
    x = Fraction(x)
    if x <= 0:
        raise ValueError("log of a nonpositive rational")
    with mpmath.workprec(bits):
        return mpmath.log(mpmath.mpf(x.numerator)) - mpmath.log(mpmath.mpf(x.denominator))


def height_kernel_scalar(q: Rational) -> HeightKernel:
    """Kernel of the absolute logarithmic height of a nonzero rational.

    For q = a/b in lowest terms this is max(|a|, |b|), which agrees with the
    sum of log+ ||q||_v over all places.
    """
    q = Fraction(q)
    if q == 0:
        raise ValueError("height of zero is undefined")
    return HeightKernel(Fraction(max(abs(q.numerator), q.denominator)))
