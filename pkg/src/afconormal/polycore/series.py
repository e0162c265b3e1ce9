"""Truncated univariate power series in ``t`` with exact coefficients.

A series knows its coefficients for powers ``t^0 .. t^(precision-1)``;
nothing is claimed at or beyond ``precision``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .gaussian import GaussianRational, as_exact
from .polynomial import Polynomial

DEFAULT_PRECISION = 64
_ZERO = Fraction(0)


class PrecisionError(ValueError):
    pass


class TruncatedSeries:
    __slots__ = ("coeffs", "precision")

    def __init__(self, coeffs: Iterable = (), precision: int = DEFAULT_PRECISION):
        if precision < 0:
            raise ValueError("precision must be non-negative")
        cs = [as_exact(c) for c in coeffs][:precision]
        cs.extend([Fraction(0)] * (precision - len(cs)))
        self.coeffs = tuple(cs)
        self.precision = precision

    @classmethod
    def _raw(cls, coeffs, precision: int) -> TruncatedSeries:
        # internal: coefficients already exact, exactly ``precision`` of them
        s = object.__new__(cls)
        s.coeffs = tuple(coeffs)
        s.precision = precision
        return s

    @classmethod
    def monomial(cls, c, k: int, precision: int = DEFAULT_PRECISION) -> TruncatedSeries:
        cs = [_ZERO] * precision
        if k < precision:
            cs[k] = as_exact(c)
        return cls._raw(cs, precision)

    @classmethod
    def from_polynomial(cls, p: Polynomial, precision: int = DEFAULT_PRECISION) -> TruncatedSeries:
        """Series from a univariate polynomial (its single variable plays ``t``)."""
        if p.nvars != 1:
            if p.is_constant():
                return cls([p.constant_term()], precision)
            raise ValueError("expected a univariate polynomial in t")
        cs = [0] * precision
        for (k,), c in p.terms.items():
            if k < precision:
                cs[k] = c
        return cls(cs, precision)

    def order(self) -> int | None:
        """Exact order of vanishing, or ``None`` when zero to precision."""
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        return None

    def order_bound(self) -> int:
        """Exact order if known, otherwise the precision (a lower bound)."""
        o = self.order()
        return self.precision if o is None else o

    def is_zero_to_precision(self) -> bool:
        return self.order() is None

    def leading_coefficient(self) -> Fraction:
        o = self.order()
        return Fraction(0) if o is None else self.coeffs[o]

    def truncate(self, precision: int) -> TruncatedSeries:
        if precision > self.precision:
            raise PrecisionError("cannot raise precision by truncation")
        return TruncatedSeries(self.coeffs[:precision], precision)

    def __add__(self, other) -> TruncatedSeries:
        if not isinstance(other, TruncatedSeries):
            other = TruncatedSeries([other], self.precision)
        n = min(self.precision, other.precision)
        return TruncatedSeries._raw([a + b for a, b in zip(self.coeffs[:n], other.coeffs[:n])], n)

    __radd__ = __add__

    def __neg__(self) -> TruncatedSeries:
        return TruncatedSeries._raw([-a for a in self.coeffs], self.precision)

    def __sub__(self, other) -> TruncatedSeries:
        if not isinstance(other, TruncatedSeries):
            other = TruncatedSeries([other], self.precision)
        return self + (-other)

    def __rsub__(self, other) -> TruncatedSeries:
        return (-self) + other

    def __mul__(self, other) -> TruncatedSeries:
        if not isinstance(other, TruncatedSeries):
            c = as_exact(other)
            return TruncatedSeries._raw([a * c for a in self.coeffs], self.precision)
        o1, o2 = self.order_bound(), other.order_bound()
        n = min(self.precision + o2, other.precision + o1)
        out = [Fraction(0)] * n
        a, b = self.coeffs, other.coeffs
        for i in range(o1, min(n, self.precision)):
            ai = a[i]
            if not ai:
                continue
            for j in range(o2, min(n - i, other.precision)):
                bj = b[j]
                if bj:
                    out[i + j] += ai * bj
        return TruncatedSeries._raw(out, n)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> TruncatedSeries:
        if k < 0:
            raise ValueError("negative power")
        result = TruncatedSeries([1], self.precision)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def shift_down(self, k: int) -> TruncatedSeries:
        """Divide by ``t^k``; the first ``k`` coefficients must vanish."""
        if any(self.coeffs[:k]):
            raise ValueError("series is not divisible by t^%d" % k)
        return TruncatedSeries._raw(self.coeffs[k:], max(self.precision - k, 0))

    def inverse(self) -> TruncatedSeries:
        """Inverse of a unit (nonzero constant term)."""
        a = self.coeffs
        if not self.precision or not a[0]:
            raise ZeroDivisionError("series is not a unit")
        inv0 = 1 / a[0]
        out = [inv0]
        for n in range(1, self.precision):
            s = Fraction(0)
            for k in range(1, n + 1):
                if a[k]:
                    s += a[k] * out[n - k]
            out.append(-s * inv0)
        return TruncatedSeries._raw(out, self.precision)

    def divide(self, other: TruncatedSeries) -> TruncatedSeries:
        """Quotient ``self / other`` when ``ord(self) >= ord(other)``.

        Precision drops by the order of the divisor.
        """
        k = other.order()
        if k is None:
            raise ZeroDivisionError("divisor is zero to precision")
        if self.order_bound() < k:
            raise ValueError("quotient is not a power series")
        num = TruncatedSeries._raw(self.coeffs[k:], max(self.precision - k, 0))
        den = TruncatedSeries._raw(other.coeffs[k:], other.precision - k)
        if not num.precision:
            return num
        return num * den.inverse()

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.precision == other.precision and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.coeffs, self.precision))

    def __str__(self) -> str:
        head = format_terms(self.coeffs)
        return f"{head} + O(t^{self.precision})"

    def __repr__(self) -> str:
        return f"TruncatedSeries({str(self)!r})"


def format_terms(coeffs: Sequence, var: str = "t") -> str:
    """``c0 + c1*t + ...`` for the nonzero coefficients (``0`` if there are none)."""
    parts = []
    for k, c in enumerate(coeffs):
        if not c:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if isinstance(c, GaussianRational):
            neg = not c.re and c.im < 0
            mag = -c if neg else c
            body = str(mag) if not mono else (mono if mag == 1 else f"{mag}*{mono}")
        else:
            neg = c < 0
            mag = abs(c)
            body = str(mag) if not mono else (mono if mag == 1 else f"{mag}*{mono}")
        if not parts:
            parts.append(f"-{body}" if neg else body)
        else:
            parts.append(("- " if neg else "+ ") + body)
    return " ".join(parts) if parts else "0"


def substitute_arc(p: Polynomial, arc: Sequence[TruncatedSeries]) -> TruncatedSeries:
    """Compose ``p`` with an arc (one series per variable), truncated at the arc precision."""
    if len(arc) != p.nvars:
        raise ValueError(f"arc has {len(arc)} components for {p.nvars} variables")
    precs = {s.precision for s in arc}
    if len(precs) > 1:
        raise PrecisionError(f"arc components have different precisions {sorted(precs)}")
    n = precs.pop() if precs else DEFAULT_PRECISION
    powers: list[dict[int, TruncatedSeries]] = [{} for _ in arc]

    def power(i: int, k: int) -> TruncatedSeries:
        cache = powers[i]
        if k not in cache:
            cache[k] = arc[i] if k == 1 else power(i, k - 1) * arc[i]
        return cache[k]

    acc = [Fraction(0)] * n
    for exp, c in p.terms.items():
        term = None
        for i, e in enumerate(exp):
            if e:
                s = power(i, e)
                term = s if term is None else term * s
        if term is None:
            acc[0] += c
            continue
        for k in range(min(n, term.precision)):
            if term.coeffs[k]:
                acc[k] += c * term.coeffs[k]
        if term.precision < n:
            # lost precision below n: only possible when an arc component has a constant term
            raise PrecisionError("precision loss in arc substitution")
    return TruncatedSeries._raw(acc, n)
