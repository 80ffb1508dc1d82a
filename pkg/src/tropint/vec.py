"""Exact vector helpers shared across the package.

Vectors are plain tuples: ``int`` tuples for lattice data, ``Fraction``
tuples for affine data.  Nothing in this package ever touches floating
point; every helper here is exact.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence


def vdot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v, strict=True))


def vadd(u: Sequence, v: Sequence) -> tuple:
    return tuple(a + b for a, b in zip(u, v, strict=True))


def vsub(u: Sequence, v: Sequence) -> tuple:
    return tuple(a - b for a, b in zip(u, v, strict=True))


def vscale(c, u: Sequence) -> tuple:
    return tuple(c * a for a in u)


def vneg(u: Sequence) -> tuple:
    return tuple(-a for a in u)


def is_zero(u: Sequence) -> bool:
    return all(a == 0 for a in u)


def zero(n: int) -> tuple:
    return (0,) * n


def content(u: Sequence[int]) -> int:
    """gcd of the entries; 0 for the zero vector."""
    g = 0
    for a in u:
        g = gcd(g, a)
        if g == 1:
            return 1
    return g


def primitive(u: Sequence[int]) -> tuple[int, ...]:
    """Divide an integer vector by its content.  Direction is preserved.

    The zero vector is returned unchanged.
    """
    g = content(u)
    if g <= 1:
        return tuple(u)
    return tuple(a // g for a in u)


def as_fractions(u: Iterable) -> tuple[Fraction, ...]:
    return tuple(Fraction(a) for a in u)


def clear_denominators(u: Sequence) -> tuple[int, ...]:
    """Scale a rational vector by the positive lcm of denominators."""
    mult = 1
    for a in u:
        mult = lcm(mult, Fraction(a).denominator)
    return tuple(int(a * mult) for a in u)


def scaled_primitive(u: Sequence) -> tuple[int, ...]:
    """Primitive integer vector spanning the same ray as a rational vector."""
    return primitive(clear_denominators(u))


def sign_normalized(u: Sequence[int]) -> tuple[int, ...]:
    """Flip sign so the first nonzero entry is positive (lines, not rays)."""
    for a in u:
        if a > 0:
            return tuple(u)
        if a < 0:
            return vneg(u)
    return tuple(u)
