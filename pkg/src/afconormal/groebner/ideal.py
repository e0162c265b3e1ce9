"""Polynomial ideals and the ideal-theoretic primitives built on Groebner bases."""

from __future__ import annotations

import itertools
import threading
from typing import Iterable, Mapping, Sequence, Union

from ..polycore import Polynomial
from .engine import Basis, Context, groebner
from .orders import MonomialOrder


class Ideal:
    """A finitely generated ideal of a polynomial ring over Q.

    The reduced Groebner basis for ``order`` is computed at most once and
    then shared (``gb_cache``).
    """

    def __init__(self, generators: Iterable[Polynomial], vars: Sequence[str] | None = None,
                 order: MonomialOrder | None = None):
        gens = list(generators)
        if vars is None:
            if not gens:
                raise ValueError("need explicit vars for an ideal without generators")
            vars = gens[0].vars
        self.vars = tuple(vars)
        self.generators = tuple(g if g.vars == self.vars else g.change_ring(self.vars)
                                for g in gens if g)
        self.order = order or MonomialOrder.degrevlex()
        self._basis: Basis | None = None
        self._lock = threading.Lock()

    # Groebner basis

    def _engine_basis(self) -> Basis:
        basis = self._basis
        if basis is None:
            with self._lock:
                if self._basis is None:
                    ctx = Context(self.vars, self.order)
                    self._basis = groebner(ctx, [ctx.to_internal(g) for g in self.generators])
                basis = self._basis
        return basis

    @property
    def gb_cache(self) -> tuple[Polynomial, ...] | None:
        return None if self._basis is None else tuple(self._basis.polynomials())

    def groebner_basis(self) -> tuple[Polynomial, ...]:
        return tuple(self._engine_basis().polynomials())

    def leading_exponents(self) -> list[tuple]:
        return self._engine_basis().leading_exponents()

    def reduce(self, f: Polynomial) -> Polynomial:
        """Normal form of ``f`` with respect to the reduced basis."""
        basis = self._engine_basis()
        ctx = basis.ctx
        return ctx.to_polynomial(basis.normal_form(ctx.to_internal(f)))

    def contains(self, f: Polynomial) -> bool:
        return self.reduce(f).is_zero()

    def __contains__(self, f: Polynomial) -> bool:
        return self.contains(f)

    def is_unit(self) -> bool:
        return self._engine_basis().is_unit()

    def is_zero(self) -> bool:
        return not self.generators

    # constructions

    def with_order(self, order: MonomialOrder) -> Ideal:
        return Ideal(self.generators, self.vars, order)

    def change_ring(self, vars: Sequence[str], order: MonomialOrder | None = None) -> Ideal:
        return Ideal([g.change_ring(vars) for g in self.generators], vars, order)

    def __add__(self, other: Union["Ideal", Iterable[Polynomial]]) -> Ideal:
        more = other.generators if isinstance(other, Ideal) else tuple(other)
        return Ideal(self.generators + tuple(more), self.vars, self.order)

    def __mul__(self, other: "Ideal") -> Ideal:
        return Ideal([a * b for a in self.generators for b in other.generators], self.vars, self.order)

    def substitute(self, values: Mapping[str, object]) -> Ideal:
        return Ideal([g.substitute(values) for g in self.generators], self.vars, self.order)

    def __repr__(self) -> str:
        gens = ", ".join(str(g) for g in self.generators) or "0"
        return f"Ideal({gens}; vars={','.join(self.vars)})"

    def __str__(self) -> str:
        return "(" + (", ".join(str(g) for g in self.generators) or "0") + ")"


def _as_ideal(J, vars) -> Ideal:
    if isinstance(J, Ideal):
        return J if J.vars == tuple(vars) else J.change_ring(vars)
    if isinstance(J, Polynomial):
        J = [J]
    return Ideal([g.change_ring(vars) for g in J], vars)


def fresh_name(taken: Iterable[str], base: str) -> str:
    taken = set(taken)
    if base not in taken:
        return base
    for i in itertools.count(1):
        cand = f"{base}{i}"
        if cand not in taken:
            return cand


def groebner_basis(I: Ideal) -> Ideal:
    """Populate the basis cache of ``I`` and return it."""
    I._engine_basis()
    return I


def eliminate(I: Ideal, block: Sequence[str]) -> Ideal:
    """``I`` intersected with the subring of the variables not in ``block``.

    The result lives in the ring of the remaining variables (original order).
    """
    block = [v for v in I.vars if v in set(block)]
    rest = [v for v in I.vars if v not in set(block)]
    if not block:
        return Ideal(I.generators, I.vars)
    order = MonomialOrder.block(len(block))
    J = I.change_ring(block + rest, order)
    kept = []
    nb = len(block)
    for g in J.groebner_basis():
        if all(not any(e[:nb]) for e in g.terms):
            kept.append(g.change_ring(rest))
    return Ideal(kept, rest)


def _saturate_principal(I: Ideal, h: Polynomial) -> Ideal:
    if h.is_zero():
        return Ideal([Polynomial.constant(1, I.vars)], I.vars)
    if h.is_constant():
        return Ideal(I.generators, I.vars)
    t = fresh_name(I.vars, "_sat")
    ring = (t,) + I.vars
    tt = Polynomial.variable(t, ring)
    gens = [g.change_ring(ring) for g in I.generators]
    gens.append(1 - tt * h.change_ring(ring))
    return eliminate(Ideal(gens, ring), [t])


def intersect(I: Ideal, J: Ideal) -> Ideal:
    """``I`` intersected with ``J`` (same ring) by eliminating a tag variable."""
    J = _as_ideal(J, I.vars)
    if I.is_zero() or J.is_zero():
        return Ideal([], I.vars)
    if _is_trivially_unit(I):
        return Ideal(J.generators, I.vars)
    if _is_trivially_unit(J):
        return Ideal(I.generators, I.vars)
    t = fresh_name(I.vars, "_int")
    ring = (t,) + I.vars
    tt = Polynomial.variable(t, ring)
    gens = [tt * g.change_ring(ring) for g in I.generators]
    gens += [(1 - tt) * g.change_ring(ring) for g in J.generators]
    return eliminate(Ideal(gens, ring), [t])


def _is_trivially_unit(I: Ideal) -> bool:
    if any(g.is_constant() and g for g in I.generators):
        return True
    return I._basis is not None and I.is_unit()


def saturate(I: Ideal, J) -> Ideal:
    """``I : J^oo``.

    For ``J = (h_1, ..., h_r)`` this is the intersection of the principal
    saturations ``I : h_i^oo``, each computed with an auxiliary variable.
    """
    J = _as_ideal(J, I.vars)
    if not J.generators:
        return Ideal([Polynomial.constant(1, I.vars)], I.vars)
    if any(g.is_constant() for g in J.generators):
        return Ideal(I.generators, I.vars)
    result = None
    for h in J.generators:
        S = _saturate_principal(I, h)
        if S.is_unit():
            continue
        result = S if result is None else intersect(result, S)
    if result is None:
        return Ideal([Polynomial.constant(1, I.vars)], I.vars)
    return result


def quotient(I: Ideal, J) -> Ideal:
    """Ideal quotient ``I : J``."""
    J = _as_ideal(J, I.vars)
    result = None
    for h in J.generators:
        inter = intersect(I, Ideal([h], I.vars))
        Q = Ideal([_exact_divide(g, h) for g in inter.groebner_basis()], I.vars)
        result = Q if result is None else intersect(result, Q)
    if result is None:
        return Ideal([Polynomial.constant(1, I.vars)], I.vars)
    return result


def _exact_divide(g: Polynomial, h: Polynomial) -> Polynomial:
    """Exact polynomial division g / h (h must divide g)."""
    ring = g.vars
    order = MonomialOrder.degrevlex()
    ctx = Context(ring, order)
    gi = ctx.to_internal(g)
    hi = ctx.to_internal(h)
    hk = max(hi)
    he = ctx.exp_of(hk)
    q = {}
    lead_inv = 1 / hi[hk]
    while gi:
        k = max(gi)
        if not ctx.packer.divides(he, ctx.exp_of(k)):
            raise ValueError("polynomial does not divide")
        c = gi[k] * lead_inv
        mk = k - hk
        q[mk] = c
        for k2, c2 in hi.items():
            nk = k2 + mk
            v = gi.get(nk, 0) - c * c2
            if v:
                gi[nk] = v
            else:
                del gi[nk]
    return ctx.to_polynomial(q)


def radical_member(f: Polynomial, I: Ideal) -> bool:
    """Whether ``f`` vanishes on V(I): 1 in I + (1 - u f) with a fresh ``u``."""
    f = f.change_ring(I.vars)
    if f.is_zero():
        return True
    if I.contains(f):
        return True
    if I.is_unit():
        return True
    u = fresh_name(I.vars, "_rad")
    ring = I.vars + (u,)
    uu = Polynomial.variable(u, ring)
    gens = [g.change_ring(ring) for g in I.generators]
    gens.append(1 - uu * f.change_ring(ring))
    return Ideal(gens, ring).is_unit()


def radical_contained(I: Ideal, J: Ideal) -> bool:
    """Whether sqrt(I) is contained in sqrt(J), i.e. V(J) lies in V(I)."""
    J = _as_ideal(J, I.vars)
    return all(radical_member(g, J) for g in I.generators)


def radical_equal(I: Ideal, J: Ideal) -> bool:
    """Set-theoretic equality V(I) = V(J) by mutual radical membership of generators."""
    J = _as_ideal(J, I.vars)
    return radical_contained(I, J) and radical_contained(J, I)


def dimension(I: Ideal) -> int:
    """Krull dimension of V(I); -1 for the empty set.

    Uses the size of a maximal set of variables independent modulo the
    leading-term ideal.
    """
    if I.is_unit():
        return -1
    leads = I.leading_exponents()
    n = len(I.vars)
    supports = [frozenset(i for i, e in enumerate(exp) if e) for exp in leads]
    for size in range(n, -1, -1):
        for subset in itertools.combinations(range(n), size):
            s = set(subset)
            if not any(sup <= s for sup in supports):
                return size
    return 0


def projective_fiber_dimension(B: Ideal, at: Mapping[str, object], covector_vars: Sequence[str]) -> int:
    """Dimension of the projective fiber of a covector-homogeneous ideal over a base point.

    The base point is substituted, the result is saturated by the irrelevant
    ideal of the covector block and the projective dimension (affine cone
    dimension minus one) is returned; -1 when the fiber is empty.
    """
    F = fiber_ideal(B, at, covector_vars)
    if F.is_unit():
        return -1
    return dimension(F) - 1


def fiber_ideal(B: Ideal, at: Mapping[str, object], covector_vars: Sequence[str]) -> Ideal:
    """Substitute a base point and saturate by the covector irrelevant ideal.

    The returned ideal lives in the covector ring only.
    """
    cov = tuple(covector_vars)
    base = [v for v in B.vars if v not in cov]
    missing = [v for v in base if v not in at]
    if missing:
        raise ValueError(f"base point does not fix {missing}")
    sub = B.substitute({v: at[v] for v in base})
    F = Ideal([g.change_ring(cov) for g in sub.generators], cov)
    return saturate(F, [Polynomial.variable(v, cov) for v in cov])
