"""Exact Gaussian-rational scalars.

Every coefficient that flows through the Pauli algebra, the Lie-relation
generator and the moment-problem presolve is an :class:`ExactComplex`.
Floats appear only when an SDP is handed to the numerical solver.
"""

from __future__ import annotations

from fractions import Fraction

from gmpy2 import mpq

__all__ = ["ExactComplex", "as_exact", "ZERO", "ONE", "I"]


def _q(value) -> mpq:
    if isinstance(value, mpq):
        return value
    if isinstance(value, float):
        # decimal reading, so 0.1 means 1/10 rather than the binary double
        return mpq(Fraction(repr(value)))
    if isinstance(value, str):
        return mpq(Fraction(value.strip()))
    return mpq(value)


class ExactComplex:
    """Complex number with exact rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _q(re)
        self.im = _q(im)

    @staticmethod
    def _raw(re: mpq, im: mpq) -> "ExactComplex":
        z = ExactComplex.__new__(ExactComplex)
        z.re = re
        z.im = im
        return z

    def __add__(self, other):
        if not isinstance(other, ExactComplex):
            other = as_exact(other)
        return ExactComplex._raw(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, ExactComplex):
            other = as_exact(other)
        return ExactComplex._raw(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return as_exact(other) - self

    def __neg__(self):
        return ExactComplex._raw(-self.re, -self.im)

    def __mul__(self, other):
        if not isinstance(other, ExactComplex):
            other = as_exact(other)
        a, b, c, d = self.re, self.im, other.re, other.im
        if not b and not d:
            return ExactComplex._raw(a * c, b)
        return ExactComplex._raw(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, ExactComplex):
            other = as_exact(other)
        c, d = other.re, other.im
        den = c * c + d * d
        if not den:
            raise ZeroDivisionError("division by exact zero")
        a, b = self.re, self.im
        return ExactComplex._raw((a * c + b * d) / den, (b * c - a * d) / den)

    def __rtruediv__(self, other):
        return as_exact(other) / self

    def conjugate(self) -> "ExactComplex":
        return ExactComplex._raw(self.re, -self.im)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, ExactComplex):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction, mpq)):
            return not self.im and self.re == other
        if isinstance(other, complex):
            return complex(self) == other
        return NotImplemented

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    @property
    def is_real(self) -> bool:
        return not self.im

    def to_json(self):
        """``[re, im]`` as exact rational strings."""
        return [str(self.re), str(self.im)]

    def __repr__(self):
        if not self.im:
            return f"ExactComplex({self.re})"
        return f"ExactComplex({self.re}, {self.im})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"({self.re}{sign}{abs(self.im)}i)"


def as_exact(value) -> ExactComplex:
    """Coerce ints, fractions, decimal floats, strings or ``[re, im]`` pairs."""
    if isinstance(value, ExactComplex):
        return value
    if isinstance(value, complex):
        return ExactComplex(value.real, value.imag)
    if isinstance(value, (list, tuple)):
        re, im = value
        return ExactComplex(re, im)
    return ExactComplex(value)


ZERO = ExactComplex(0)
ONE = ExactComplex(1)
I = ExactComplex(0, 1)
