"""Exact Gaussian rationals ``a + b*i`` with ``a, b`` in Q.

Arc coefficients may live in Q(i): many singular families only reveal
their bad limits along arcs with non-real coefficients (for example
``v = i*y`` on ``y^2*v + v^3 = w^2``).  Values with zero imaginary part are
normalized back to ``Fraction`` by :func:`gaussian`.
"""

from __future__ import annotations

from fractions import Fraction

from .polynomial import _as_fraction


class GaussianRational:
    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def _lift(x):
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, (int, Fraction)):
            return GaussianRational(x, 0)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return gaussian(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return gaussian(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return gaussian(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return gaussian(self.re * other, self.im * other)
        if not isinstance(other, GaussianRational):
            return NotImplemented
        return gaussian(self.re * other.re - self.im * other.im, self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def inverse(self):
        n = self.re * self.re + self.im * self.im
        if not n:
            raise ZeroDivisionError("Gaussian rational division by zero")
        return gaussian(self.re / n, -self.im / n)

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result, base = GaussianRational(1), self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __eq__(self, other) -> bool:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self) -> int:
        return hash(self.re) if not self.im else hash((self.re, self.im))

    def __str__(self) -> str:
        if not self.im:
            return str(self.re)
        im = "i" if abs(self.im) == 1 else f"{abs(self.im)}*i"
        if not self.re:
            return im if self.im > 0 else f"-{im}"
        return f"({self.re} {'+' if self.im > 0 else '-'} {im})"

    def __repr__(self) -> str:
        return f"GaussianRational({self.re}, {self.im})"


I = GaussianRational(0, 1)


def gaussian(re, im=0):
    """``re + im*i``, as a plain ``Fraction`` when the imaginary part is zero."""
    im = Fraction(im)
    if not im:
        return Fraction(re)
    return GaussianRational(re, im)


def as_exact(c):
    """Coerce to ``Fraction`` or a genuinely non-real ``GaussianRational``."""
    if isinstance(c, Fraction):
        return c
    if isinstance(c, GaussianRational):
        return c if c.im else c.re
    return _as_fraction(c)
