"""Buchberger's algorithm on packed monomials.

Internal polynomials are dicts ``{order_key: mpq}``.  Leading terms are
found with ``max`` over the keys, exponent vectors are recovered from keys
on demand (cached), and divisibility uses the guard-bit trick of
:class:`~afconormal.groebner.orders.Packer`.

Pair handling follows Gebauer and Moeller's installation of Buchberger's
product and chain criteria; pairs are selected by (sugar, lcm) which is the
normal strategy refined by the sugar degree.
"""

from __future__ import annotations

import os
import threading
from fractions import Fraction
from typing import Iterable, Sequence

from gmpy2 import mpq

from ..polycore import Polynomial
from .orders import MonomialOrder, Packer

DEFAULT_MAX_STEPS = 10**6


class BudgetExceeded(RuntimeError):
    """Raised when a Groebner computation needs more reduction steps than allowed."""

    def __init__(self, steps: int, limit: int):
        self.steps = steps
        self.limit = limit
        super().__init__(f"Groebner basis computation exceeded {limit} reduction steps")


class AuditFailure(AssertionError):
    pass


class _Settings(threading.local):
    def __init__(self):
        self.max_steps = int(os.environ.get("AFCONORMAL_MAX_STEPS", DEFAULT_MAX_STEPS))
        self.audit = os.environ.get("AFCONORMAL_AUDIT", "") not in ("", "0")


settings = _Settings()


class Stats(threading.local):
    """Per-thread counters, read by reports."""

    def __init__(self):
        self.reset()

    def reset(self):
        self.bases = 0
        self.steps = 0
        self.audited = 0

    def snapshot(self) -> dict:
        return {"bases": self.bases, "reduction_steps": self.steps, "audited": self.audited}


stats = Stats()


class Context:
    """Ring data shared by all internal polynomials of one computation."""

    def __init__(self, vars: Sequence[str], order: MonomialOrder):
        self.vars = tuple(vars)
        self.order = order
        self.packer = Packer(order, len(self.vars))
        self._exp: dict[int, int] = {}
        self._tuple: dict[int, tuple] = {}

    def exp_of(self, key: int) -> int:
        e = self._exp.get(key)
        if e is None:
            t = self.packer.decode(key)
            e = self.packer.pack(t)
            self._exp[key] = e
            self._tuple[key] = t
        return e

    def tuple_of(self, key: int) -> tuple:
        t = self._tuple.get(key)
        if t is None:
            self.exp_of(key)
            t = self._tuple[key]
        return t

    def to_internal(self, p: Polynomial) -> dict:
        if p.vars != self.vars:
            p = p.change_ring(self.vars)
        key = self.packer.key
        return {key(e): mpq(c.numerator, c.denominator) for e, c in p.terms.items()}

    def to_polynomial(self, d: dict) -> Polynomial:
        terms = {}
        for k, c in d.items():
            terms[self.tuple_of(k)] = Fraction(int(c.numerator), int(c.denominator))
        return Polynomial._raw(self.vars, terms)


def _monic(p: dict) -> dict:
    lc = p[max(p)]
    if lc == 1:
        return p
    inv = 1 / lc
    return {k: c * inv for k, c in p.items()}


class Basis:
    """A Groebner basis held in internal form, ready for normal forms."""

    def __init__(self, ctx: Context, polys: list[dict]):
        self.ctx = ctx
        self.polys = polys
        self.lead_keys = [max(p) for p in polys]
        self.lead_exps = [ctx.exp_of(k) for k in self.lead_keys]

    def is_unit(self) -> bool:
        return len(self.polys) == 1 and self.lead_keys[0] == 0

    def leading_exponents(self) -> list[tuple]:
        return [self.ctx.tuple_of(k) for k in self.lead_keys]

    def normal_form(self, p: dict, counter: list | None = None) -> dict:
        return _reduce(self.ctx, p, self.polys, self.lead_keys, self.lead_exps,
                       range(len(self.polys)), True, counter)

    def polynomials(self) -> list[Polynomial]:
        return [self.ctx.to_polynomial(p) for p in self.polys]


def _reduce(ctx: Context, p: dict, polys, lead_keys, lead_exps, active, full: bool,
            counter: list | None) -> dict:
    """Reduce ``p`` (modified in place) by the monic polynomials ``polys[i], i in active``.

    With ``full`` every term is reduced, otherwise only leading terms.
    ``counter`` is a one-element list [steps, limit] or None.
    """
    guard = ctx.packer.guard
    exp_of = ctx.exp_of
    rem = {} if full else None
    active = list(active)
    while p:
        k = max(p)
        eg = exp_of(k) | guard
        for i in active:
            if ((eg - lead_exps[i]) & guard) == guard:
                break
        else:
            if not full:
                return p
            rem[k] = p.pop(k)
            continue
        c = p[k]
        mk = k - lead_keys[i]
        get = p.get
        for gk, gc in polys[i].items():
            nk = gk + mk
            v = get(nk, 0) - c * gc
            if v:
                p[nk] = v
            else:
                del p[nk]
        if counter is not None:
            counter[0] += 1
            if counter[0] > counter[1]:
                raise BudgetExceeded(counter[0], counter[1])
    return rem if full else p


def _lcm(a: tuple, b: tuple) -> tuple:
    return tuple(x if x > y else y for x, y in zip(a, b))


def _divides_t(a: tuple, b: tuple) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _coprime(a: tuple, b: tuple) -> bool:
    return not any(x and y for x, y in zip(a, b))


class _Buchberger:
    def __init__(self, ctx: Context, max_steps: int):
        self.ctx = ctx
        self.polys: list[dict] = []
        self.lk: list[int] = []
        self.le: list[int] = []
        self.lt: list[tuple] = []
        self.sugar: list[int] = []
        self.G: list[int] = []
        self.B: list[tuple] = []
        self.counter = [0, max_steps]

    def _add(self, p: dict, sugar: int) -> int:
        p = _monic(p)
        k = max(p)
        self.polys.append(p)
        self.lk.append(k)
        self.le.append(self.ctx.exp_of(k))
        self.lt.append(self.ctx.tuple_of(k))
        self.sugar.append(sugar)
        return len(self.polys) - 1

    def _pair(self, i: int, j: int) -> tuple:
        L = _lcm(self.lt[i], self.lt[j])
        dL = sum(L)
        s = max(self.sugar[i] + dL - sum(self.lt[i]), self.sugar[j] + dL - sum(self.lt[j]))
        return (s, self.ctx.packer.key(L), i, j, L)

    def _update(self, h: int) -> None:
        lt = self.lt
        th = lt[h]
        C = list(self.G)
        D: list[int] = []
        lcms = {g: _lcm(th, lt[g]) for g in C}
        while C:
            g1 = C.pop(0)
            L1 = lcms[g1]
            if _coprime(th, lt[g1]) or (
                not any(_divides_t(lcms[g2], L1) for g2 in C)
                and not any(_divides_t(lcms[g2], L1) for g2 in D)
            ):
                D.append(g1)
        E = [g for g in D if not _coprime(th, lt[g])]
        newB = []
        for pair in self.B:
            _, _, g1, g2, L = pair
            if _divides_t(th, L) and _lcm(lt[g1], th) != L and _lcm(th, lt[g2]) != L:
                continue
            newB.append(pair)
        newB.extend(self._pair(g, h) for g in E)
        self.B = newB
        self.G = [g for g in self.G if not _divides_t(th, lt[g])] + [h]

    def _spoly(self, i: int, j: int, L: tuple) -> dict:
        key = self.ctx.packer.key
        mi = key(L) - self.lk[i]
        mj = key(L) - self.lk[j]
        out = {k + mi: c for k, c in self.polys[i].items()}
        get = out.get
        for k, c in self.polys[j].items():
            nk = k + mj
            v = get(nk, 0) - c
            if v:
                out[nk] = v
            else:
                del out[nk]
        return out

    def run(self, inputs: Iterable[dict]) -> list[dict]:
        ctx = self.ctx
        for p in inputs:
            if not p:
                continue
            sugar = max(sum(ctx.tuple_of(k)) for k in p)
            r = _reduce(ctx, dict(p), self.polys, self.lk, self.le, self.G, True, self.counter)
            if r:
                if max(r) == 0:
                    return [{0: mpq(1)}]
                self._update(self._add(r, sugar))
        while self.B:
            best = min(range(len(self.B)), key=lambda t: self.B[t][:4])
            s, _, i, j, L = self.B.pop(best)
            h = self._spoly(i, j, L)
            h = _reduce(ctx, h, self.polys, self.lk, self.le, self.G, False, self.counter)
            if not h:
                continue
            if max(h) == 0:
                return [{0: mpq(1)}]
            h = _reduce(ctx, h, self.polys, self.lk, self.le, self.G, True, self.counter)
            self._update(self._add(h, s))
        return self._interreduce()

    def _interreduce(self) -> list[dict]:
        G = sorted(self.G, key=lambda g: self.lk[g])
        out = []
        for g in G:
            others = [x for x in G if x != g]
            r = _reduce(self.ctx, dict(self.polys[g]), self.polys, self.lk, self.le,
                        others, True, self.counter)
            out.append(_monic(r))
        return out


def groebner(ctx: Context, inputs: Iterable[dict], max_steps: int | None = None) -> Basis:
    limit = settings.max_steps if max_steps is None else max_steps
    engine = _Buchberger(ctx, limit)
    polys = engine.run(inputs)
    stats.bases += 1
    stats.steps += engine.counter[0]
    basis = Basis(ctx, polys)
    if settings.audit:
        audit(basis)
    return basis


def audit(basis: Basis) -> None:
    """Raise :class:`AuditFailure` unless every S-polynomial reduces to zero.

    Pairs with coprime leading monomials are skipped (Buchberger's first
    criterion guarantees their reduction to zero).  Also checks that the
    basis is reduced and monic.
    """
    ctx = basis.ctx
    n = len(basis.polys)
    lt = [ctx.tuple_of(k) for k in basis.lead_keys]
    for i in range(n):
        if basis.polys[i][basis.lead_keys[i]] != 1:
            raise AuditFailure("basis element is not monic")
        for j in range(n):
            if i != j and _divides_t(lt[j], lt[i]):
                raise AuditFailure("basis is not minimal")
    key = ctx.packer.key
    for i in range(n):
        for j in range(i + 1, n):
            if _coprime(lt[i], lt[j]):
                continue
            L = _lcm(lt[i], lt[j])
            mi = key(L) - basis.lead_keys[i]
            mj = key(L) - basis.lead_keys[j]
            s = {k + mi: c for k, c in basis.polys[i].items()}
            for k, c in basis.polys[j].items():
                nk = k + mj
                v = s.get(nk, 0) - c
                if v:
                    s[nk] = v
                else:
                    del s[nk]
            if basis.normal_form(s):
                raise AuditFailure(f"S-polynomial of basis elements {i},{j} does not reduce to zero")
    stats.audited += 1
