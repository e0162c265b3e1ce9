"""Exact multivariate polynomials over the rationals."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Sequence, Union

Exponent = tuple
Coefficient = Union[int, Fraction]


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, Rational):
        return Fraction(int(c.numerator), int(c.denominator))
    # gmpy2.mpq and friends expose numerator/denominator
    num = getattr(c, "numerator", None)
    den = getattr(c, "denominator", None)
    if num is not None and den is not None:
        return Fraction(int(num), int(den))
    raise TypeError(f"not an exact rational: {c!r}")


def _display_key(exp: Exponent):
    # degrevlex, used only for canonical printing
    return (sum(exp), tuple(-e for e in reversed(exp)))


class Polynomial:
    """A polynomial with rational coefficients in an ordered list of variables.

    Terms are stored as a mapping from exponent tuples to nonzero
    ``Fraction`` coefficients.  Instances are immutable and hashable.
    Arithmetic between polynomials requires identical variable lists; use
    :meth:`change_ring` to move between rings.
    """

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, vars: Sequence[str], terms: Mapping[Exponent, Coefficient] | None = None):
        vars = tuple(vars)
        if len(set(vars)) != len(vars):
            raise ValueError(f"duplicate variable names in {vars}")
        clean = {}
        if terms:
            n = len(vars)
            for exp, c in terms.items():
                exp = tuple(int(e) for e in exp)
                if len(exp) != n:
                    raise ValueError(f"exponent {exp} does not match {n} variables")
                if any(e < 0 for e in exp):
                    raise ValueError(f"negative exponent {exp}")
                c = _as_fraction(c)
                if c:
                    clean[exp] = clean.get(exp, 0) + c
                    if not clean[exp]:
                        del clean[exp]
        self.vars = vars
        self.terms = clean
        self._hash = None

    # construction helpers

    @classmethod
    def zero(cls, vars: Sequence[str]) -> Polynomial:
        return cls(vars)

    @classmethod
    def constant(cls, c: Coefficient, vars: Sequence[str]) -> Polynomial:
        return cls(vars, {(0,) * len(tuple(vars)): c})

    @classmethod
    def variable(cls, name: str, vars: Sequence[str]) -> Polynomial:
        vars = tuple(vars)
        try:
            i = vars.index(name)
        except ValueError:
            raise ValueError(f"{name!r} is not one of {vars}") from None
        exp = [0] * len(vars)
        exp[i] = 1
        return cls(vars, {tuple(exp): 1})

    @classmethod
    def monomial(cls, exp: Exponent, vars: Sequence[str], c: Coefficient = 1) -> Polynomial:
        return cls(vars, {tuple(exp): c})

    @classmethod
    def _raw(cls, vars: tuple, terms: dict) -> Polynomial:
        # trusted constructor: terms already clean
        obj = cls.__new__(cls)
        obj.vars = vars
        obj.terms = terms
        obj._hash = None
        return obj

    # basic queries

    @property
    def nvars(self) -> int:
        return len(self.vars)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.vars), Fraction(0))

    def total_degree(self) -> int:
        """Maximum total degree of a term; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, name: str) -> int:
        i = self.vars.index(name)
        return max((e[i] for e in self.terms), default=-1)

    def support(self) -> set[str]:
        """Names of the variables that actually occur."""
        used = set()
        for exp in self.terms:
            for v, e in zip(self.vars, exp):
                if e:
                    used.add(v)
        return used

    def is_homogeneous_in(self, names: Iterable[str]) -> bool:
        idx = [self.vars.index(v) for v in names]
        degs = {sum(exp[i] for i in idx) for exp in self.terms}
        return len(degs) <= 1

    def degree_in_block(self, names: Iterable[str]) -> int:
        idx = [self.vars.index(v) for v in names]
        return max((sum(exp[i] for i in idx) for exp in self.terms), default=-1)

    # arithmetic

    def _check(self, other: Polynomial) -> None:
        if self.vars != other.vars:
            raise ValueError(f"ring mismatch: {self.vars} vs {other.vars}")

    def _coerce(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return Polynomial.constant(_as_fraction(other), self.vars)

    def __add__(self, other) -> Polynomial:
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self.terms)
        for exp, c in other.terms.items():
            v = out.get(exp, 0) + c
            if v:
                out[exp] = v
            else:
                out.pop(exp, None)
        return Polynomial._raw(self.vars, out)

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial._raw(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> Polynomial:
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> Polynomial:
        return (-self) + other

    def __mul__(self, other) -> Polynomial:
        if not isinstance(other, Polynomial):
            try:
                c = _as_fraction(other)
            except TypeError:
                return NotImplemented
            if not c:
                return Polynomial._raw(self.vars, {})
            return Polynomial._raw(self.vars, {e: v * c for e, v in self.terms.items()})
        self._check(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e, 0) + c1 * c2
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return Polynomial._raw(self.vars, out)

    __rmul__ = __mul__

    def __truediv__(self, other) -> Polynomial:
        c = _as_fraction(other)
        if not c:
            raise ZeroDivisionError("division of a polynomial by zero")
        return self * (1 / c)

    def __pow__(self, n: int) -> Polynomial:
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers need a non-negative integer exponent")
        result = Polynomial.constant(1, self.vars)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.vars == other.vars and self.terms == other.terms
        try:
            c = _as_fraction(other)
        except TypeError:
            return NotImplemented
        return self.terms == ({(0,) * len(self.vars): c} if c else {})

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    # calculus and substitution

    def diff(self, name: str) -> Polynomial:
        i = self.vars.index(name)
        out = {}
        for exp, c in self.terms.items():
            k = exp[i]
            if k:
                e = exp[:i] + (k - 1,) + exp[i + 1:]
                out[e] = c * k
        return Polynomial._raw(self.vars, out)

    def evaluate(self, point: Mapping[str, Coefficient]) -> Fraction:
        """Value at a point given for every variable."""
        vals = [_as_fraction(point[v]) for v in self.vars]
        total = Fraction(0)
        for exp, c in self.terms.items():
            t = c
            for x, e in zip(vals, exp):
                if e:
                    t *= x ** e
            total += t
        return total

    def substitute(self, values: Mapping[str, Union[Coefficient, "Polynomial"]]) -> Polynomial:
        """Replace some variables by constants or polynomials in the same ring.

        The result lives in the same ring; substituted variables simply no
        longer occur (unless they appear in a replacement).
        """
        idx = {}
        for name, val in values.items():
            i = self.vars.index(name)
            if not isinstance(val, Polynomial):
                val = Polynomial.constant(_as_fraction(val), self.vars)
            else:
                self._check(val)
            idx[i] = val
        if not idx:
            return self
        # constant substitutions are handled termwise without polynomial products
        const = {i: v.constant_term() for i, v in idx.items() if v.is_constant()}
        poly = {i: v for i, v in idx.items() if i not in const}
        powers: dict = {}
        out = Polynomial.zero(self.vars)
        acc: dict = {}
        for exp, c in self.terms.items():
            coef = c
            newexp = list(exp)
            for i, val in const.items():
                if exp[i]:
                    coef *= val ** exp[i]
                newexp[i] = 0
            if not coef:
                continue
            if not poly:
                key = tuple(newexp)
                v = acc.get(key, 0) + coef
                if v:
                    acc[key] = v
                else:
                    acc.pop(key, None)
                continue
            factor = Polynomial.constant(coef, self.vars)
            for i, val in poly.items():
                k = exp[i]
                newexp[i] = 0
                if k:
                    if (i, k) not in powers:
                        powers[(i, k)] = val ** k
                    factor = factor * powers[(i, k)]
            out = out + factor * Polynomial.monomial(tuple(newexp), self.vars)
        if not poly:
            return Polynomial._raw(self.vars, acc)
        return out

    def change_ring(self, vars: Sequence[str]) -> Polynomial:
        """Re-express in another ring by variable name.

        Every variable that occurs must exist in the target ring.
        """
        vars = tuple(vars)
        if vars == self.vars:
            return self
        pos = {v: i for i, v in enumerate(vars)}
        mapping = []
        for i, v in enumerate(self.vars):
            if v in pos:
                mapping.append((i, pos[v]))
            elif any(exp[i] for exp in self.terms):
                raise ValueError(f"variable {v!r} occurs but is missing from {vars}")
        n = len(vars)
        out = {}
        for exp, c in self.terms.items():
            e = [0] * n
            for i, j in mapping:
                e[j] = exp[i]
            out[tuple(e)] = c
        return Polynomial._raw(vars, out)

    def rename(self, mapping: Mapping[str, str]) -> Polynomial:
        return Polynomial._raw(tuple(mapping.get(v, v) for v in self.vars), dict(self.terms))

    def content_normalized(self) -> Polynomial:
        """Scale so the leading term (degrevlex) has coefficient 1."""
        if not self.terms:
            return self
        lead = max(self.terms, key=_display_key)
        return self * (1 / self.terms[lead])

    # printing

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda t: _display_key(t[0]), reverse=True)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exp, c in self.sorted_terms():
            mono = "*".join(
                v if e == 1 else f"{v}^{e}" for v, e in zip(self.vars, exp) if e
            )
            a = abs(c)
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(("+ " if c > 0 else "- ") + body)
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"Polynomial({str(self)!r}, vars={self.vars})"


class PolyMap:
    """A polynomial map given by its components, e.g. ``G`` or ``H = (f, G)``."""

    __slots__ = ("source_vars", "components")

    def __init__(self, source_vars: Sequence[str], components: Iterable[Polynomial]):
        self.source_vars = tuple(source_vars)
        comps = []
        for p in components:
            if p.vars != self.source_vars:
                p = p.change_ring(self.source_vars)
            comps.append(p)
        self.components = tuple(comps)

    def __len__(self) -> int:
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, i):
        return self.components[i]

    def __repr__(self) -> str:
        return f"PolyMap({[str(c) for c in self.components]}, vars={self.source_vars})"


def jacobian(G: PolyMap, wrt: Sequence[str] | None = None) -> list[list[Polynomial]]:
    """Matrix of partial derivatives: entry (i, j) is dG_i/d(wrt_j)."""
    wrt = G.source_vars if wrt is None else tuple(wrt)
    for v in wrt:
        if v not in G.source_vars:
            raise ValueError(f"{v!r} is not a source variable of the map")
    return [[g.diff(v) for v in wrt] for g in G.components]


def determinant(rows: Sequence[Sequence[Polynomial]]) -> Polynomial:
    """Determinant by cofactor expansion along the first row (small matrices)."""
    n = len(rows)
    if n == 0:
        raise ValueError("empty matrix")
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = None
    for j, a in enumerate(rows[0]):
        if not a:
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = a * determinant(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    if total is None:
        return Polynomial.zero(rows[0][0].vars)
    return total


def minors(matrix: Sequence[Sequence[Polynomial]], size: int) -> list[Polynomial]:
    """All nonzero ``size`` x ``size`` minors, deduplicated up to sign, in a fixed order."""
    from itertools import combinations

    nrows = len(matrix)
    ncols = len(matrix[0]) if nrows else 0
    if size <= 0 or size > nrows or size > ncols:
        return []
    seen = set()
    out = []
    for rs in combinations(range(nrows), size):
        for cs in combinations(range(ncols), size):
            m = determinant([[matrix[r][c] for c in cs] for r in rs])
            if not m:
                continue
            key = m.content_normalized()
            if key in seen:
                continue
            seen.add(key)
            out.append(m)
    return out
