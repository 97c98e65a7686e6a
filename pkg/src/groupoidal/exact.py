"""Exact Gaussian-rational scalars (thin wrapper over sympy's QQ_I)."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

from sympy.polys.domains import QQ, QQ_I

ZERO = QQ_I.zero
ONE = QQ_I.one
I = QQ_I(0, 1)


def _rational(v):
    if isinstance(v, bool):
        return QQ(int(v))
    if isinstance(v, int):
        return QQ(v)
    if isinstance(v, Fraction):
        return QQ(v.numerator, v.denominator)
    if isinstance(v, float):
        f = Fraction(v)
        return QQ(f.numerator, f.denominator)
    if isinstance(v, Rational):
        return QQ(int(v.numerator), int(v.denominator))
    return QQ.convert(v)


def scalar(value):
    """Convert ints, Fractions, floats, complex numbers or (re, im) pairs."""
    if isinstance(value, type(ZERO)):
        return value
    if isinstance(value, complex):
        return QQ_I(_rational(value.real), _rational(value.imag))
    if isinstance(value, (tuple, list)):
        re, im = value
        return QQ_I(_rational(re), _rational(im))
    return QQ_I(_rational(value), QQ(0))


def conj(z):
    return QQ_I(z.x, -z.y)


def to_complex(z) -> complex:
    return complex(float(z.x), float(z.y))


def parts(z) -> tuple[str, str]:
    """Real and imaginary parts as exact strings (for JSON)."""
    return str(z.x), str(z.y)
