"""Conormal and relative conormal spaces, joins, the exceptional image, and
the exact A_f test.

Everything lives in ``C^m x C^m`` with base coordinates ``x`` and covector
coordinates ``xi_x``; ideals are homogeneous in the covector block, so
they describe closed subsets of ``C^m x P^(m-1)``.  Fibers are always
saturated by the irrelevant ideal of the covector block before they are
compared.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .groebner import (
    Ideal,
    dimension,
    eliminate,
    fiber_ideal,
    fresh_name,
    intersect,
    radical_contained,
    radical_equal,
    radical_member,
    saturate,
)
from .polycore import Polynomial, PolyMap, jacobian, minors

COVECTOR_PREFIX = "xi_"


def covector_name(var: str) -> str:
    return COVECTOR_PREFIX + var


@dataclass(frozen=True)
class SpaceWithFunction:
    """``X = V(G)`` in ``C^k x C^n`` with a function ``f`` and the family split.

    ``y_vars`` are the parameters (``Y = {z = 0}``), ``z_vars`` the fiber
    coordinates.  ``codim`` is the expected codimension of ``X``.
    """

    G: PolyMap
    f: Polynomial | None
    y_vars: tuple = ()
    z_vars: tuple = ()
    codim: int = 0

    def __post_init__(self):
        vars = self.G.source_vars
        object.__setattr__(self, "y_vars", tuple(self.y_vars))
        object.__setattr__(self, "z_vars", tuple(self.z_vars) if self.z_vars else
                           tuple(v for v in vars if v not in self.y_vars))
        if set(self.y_vars) | set(self.z_vars) != set(vars) or set(self.y_vars) & set(self.z_vars):
            raise ValueError("y_vars and z_vars must partition the variables")
        if self.f is not None and self.f.vars != vars:
            object.__setattr__(self, "f", self.f.change_ring(vars))
        if not 0 <= self.codim <= len(vars):
            raise ValueError("codimension out of range")

    @property
    def vars(self) -> tuple:
        return self.G.source_vars

    @property
    def covector_vars(self) -> tuple:
        return tuple(covector_name(v) for v in self.vars)

    @property
    def ring(self) -> tuple:
        return self.vars + self.covector_vars

    @property
    def k(self) -> int:
        return len(self.y_vars)

    @property
    def n(self) -> int:
        return len(self.z_vars)

    def origin(self) -> dict:
        return {v: 0 for v in self.vars}

    def ideal_of_X(self) -> Ideal:
        return Ideal(self.G.components, self.vars)

    def df_at(self, point: Mapping[str, object] | None = None) -> tuple:
        point = self.origin() if point is None else point
        self._need_f()
        return tuple(self.f.diff(v).evaluate(point) for v in self.vars)

    def f_in_m_squared(self, point: Mapping[str, object] | None = None) -> bool:
        """Whether ``f`` lies in the square of the maximal ideal of ``X`` at ``point``."""
        point = self.origin() if point is None else point
        self._need_f()
        lin = [Polynomial.variable(v, self.vars) - point[v] for v in self.vars]
        m2 = [a * b for a, b in itertools.combinations_with_replacement(lin, 2)]
        return Ideal(list(self.G.components) + m2, self.vars).contains(self.f)

    def f_vanishes_on_Y(self) -> bool:
        self._need_f()
        return self.f.substitute({z: 0 for z in self.z_vars}).is_zero()

    def _need_f(self):
        if self.f is None:
            raise ValueError("this operation needs a function f")


@dataclass
class BigradedIdeal:
    """An ideal in base plus covector variables, homogeneous in the covectors."""

    base_vars: tuple
    covector_vars: tuple
    ideal: Ideal

    def __post_init__(self):
        self.base_vars = tuple(self.base_vars)
        self.covector_vars = tuple(self.covector_vars)
        ring = self.base_vars + self.covector_vars
        if self.ideal.vars != ring:
            self.ideal = self.ideal.change_ring(ring)

    def check_homogeneous(self) -> bool:
        return all(g.is_homogeneous_in(self.covector_vars) for g in self.ideal.generators)

    def fiber(self, point: Mapping[str, object]) -> Ideal:
        return fiber_at(self, point)

    def rename_covectors(self, names: Sequence[str]) -> BigradedIdeal:
        mapping = dict(zip(self.covector_vars, names))
        gens = [g.rename(mapping) for g in self.ideal.generators]
        return BigradedIdeal(self.base_vars, tuple(names), Ideal(gens, self.base_vars + tuple(names)))

    def __str__(self) -> str:
        return str(self.ideal)


def _ring_polys(polys, ring) -> list[Polynomial]:
    return [p.change_ring(ring) for p in polys]


def _check_codim(S: SpaceWithFunction) -> None:
    dim = dimension(S.ideal_of_X()) if S.G.components else len(S.vars)
    if dim != len(S.vars) - S.codim:
        raise ValueError(
            f"declared codimension {S.codim} but V(G) has dimension {dim} in C^{len(S.vars)}"
        )


def conormal_space(S: SpaceWithFunction, check_codim: bool = True) -> BigradedIdeal:
    """Ideal of ``C(X)``: closure of (x, H) with x smooth on X and H tangent at x.

    Built from I(X) and the (c+1)-minors of DG stacked over the covector
    row, saturated by the c-minors of DG.
    """
    if check_codim:
        _check_codim(S)
    ring = S.ring
    cov = [Polynomial.variable(v, ring) for v in S.covector_vars]
    gens = _ring_polys(S.G.components, ring)
    c = S.codim
    if c == 0:
        return BigradedIdeal(S.vars, S.covector_vars, Ideal(gens + cov, ring))
    DG = [[e.change_ring(ring) for e in row] for row in jacobian(S.G)]
    gens += minors(DG + [cov], c + 1)
    J = minors(DG, c)
    sat = saturate(Ideal(gens, ring), J)
    return BigradedIdeal(S.vars, S.covector_vars, sat)


def conormal_by_multipliers(S: SpaceWithFunction, covector_vars: Sequence[str] | None = None) -> BigradedIdeal:
    """Independent construction of ``C(X)``: eliminate lambda from ``xi = lambda * DG(x)``.

    This is the closure of the image of (x, lambda) -> (x, lambda DG(x)),
    valid when G generates the ideal of X.
    """
    cov_names = tuple(covector_vars) if covector_vars else S.covector_vars
    p = len(S.G)
    if p == 0:
        ring = S.vars + cov_names
        return BigradedIdeal(S.vars, cov_names,
                             Ideal([Polynomial.variable(v, ring) for v in cov_names], ring))
    taken = set(S.vars) | set(cov_names)
    lams = []
    for i in range(p):
        name = fresh_name(taken, f"_lam{i}")
        taken.add(name)
        lams.append(name)
    ring = tuple(lams) + S.vars + cov_names
    DG = [[e.change_ring(ring) for e in row] for row in jacobian(S.G)]
    lam = [Polynomial.variable(v, ring) for v in lams]
    gens = _ring_polys(S.G.components, ring)
    for j, name in enumerate(cov_names):
        expr = Polynomial.variable(name, ring)
        for i in range(p):
            expr = expr - lam[i] * DG[i][j]
        gens.append(expr)
    E = eliminate(Ideal(gens, ring), lams)
    return BigradedIdeal(S.vars, cov_names, E)


def conormal_of_Y(k: int, n: int, y_vars: Sequence[str] | None = None,
                  z_vars: Sequence[str] | None = None) -> BigradedIdeal:
    """``C(Y)`` for ``Y = C^k x 0``: based on Y, covectors vanishing on its tangent space."""
    y_vars = tuple(y_vars) if y_vars is not None else tuple(f"y{i + 1}" for i in range(k))
    z_vars = tuple(z_vars) if z_vars is not None else tuple(f"z{i + 1}" for i in range(n))
    if len(y_vars) != k or len(z_vars) != n:
        raise ValueError("variable lists do not match k and n")
    base = y_vars + z_vars
    cov = tuple(covector_name(v) for v in base)
    ring = base + cov
    gens = [Polynomial.variable(z, ring) for z in z_vars]
    gens += [Polynomial.variable(covector_name(y), ring) for y in y_vars]
    return BigradedIdeal(base, cov, Ideal(gens, ring))


def relative_conormal(S: SpaceWithFunction, check_codim: bool = True) -> BigradedIdeal:
    """Ideal of ``C(X, f)``: hyperplanes tangent to the fibers of f at its smooth points.

    I(X) plus the (c+2)-minors of [DG; df; xi], saturated by the
    (c+1)-minors of [DG; df].
    """
    S._need_f()
    if check_codim:
        _check_codim(S)
    ring = S.ring
    cov = [Polynomial.variable(v, ring) for v in S.covector_vars]
    DG = [[e.change_ring(ring) for e in row] for row in jacobian(S.G)]
    df = [S.f.diff(v).change_ring(ring) for v in S.vars]
    c = S.codim
    gens = _ring_polys(S.G.components, ring)
    gens += minors(DG + [df, cov], c + 2)
    J = minors(DG + [df], c + 1)
    if not J:
        raise ValueError("f is singular everywhere on X (no (c+1)-minor of [DG; df] is nonzero)")
    sat = saturate(Ideal(gens, ring), J)
    return BigradedIdeal(S.vars, S.covector_vars, sat)


def fiber_at(B: BigradedIdeal, point: Mapping[str, object]) -> Ideal:
    """Homogeneous ideal in the covector ring cutting out the projective fiber over ``point``."""
    return fiber_ideal(B.ideal, point, B.covector_vars)


def point_ideal(P: Sequence, covector_vars: Sequence[str]) -> Ideal:
    """Ideal of the projective point ``[P]``: 2x2 minors of [P; xi]."""
    cov = tuple(covector_vars)
    xs = [Polynomial.variable(v, cov) for v in cov]
    gens = []
    for i, j in itertools.combinations(range(len(cov)), 2):
        g = xs[i] * Fraction(P[j]) - xs[j] * Fraction(P[i])
        if g:
            gens.append(g)
    return Ideal(gens, cov)


def join_point_set(P: Sequence, V: Ideal) -> Ideal:
    """Ideal of the join ``P * V`` in projective space.

    Substitutes ``xi -> xi - s P`` into V, eliminates ``s`` and saturates by
    the irrelevant ideal.  The point P itself always belongs to the result:
    for ``V = {P}`` (or V empty) the join is ``{P}``.
    """
    P = [Fraction(c) for c in P]
    cov = V.vars
    if len(P) != len(cov):
        raise ValueError("point and covector ring have different dimensions")
    if not any(P):
        raise ValueError("join with the zero covector: use the f in m^2 convention (empty join)")
    s = fresh_name(cov, "_s")
    ring = (s,) + cov
    ss = Polynomial.variable(s, ring)
    shift = {v: Polynomial.variable(v, ring) - ss * P[i] for i, v in enumerate(cov)}
    gens = [g.change_ring(ring).substitute(shift) for g in V.generators]
    E = eliminate(Ideal(gens, ring), [s]) if gens else Ideal([], cov)
    E = saturate(E, [Polynomial.variable(v, cov) for v in cov]) if E.generators else E
    return intersect(E, point_ideal(P, cov)) if E.generators else E


def tangent_bundle_ideal(S: SpaceWithFunction, u_vars: Sequence[str]) -> Ideal:
    """Ideal of ``T*_X U`` (affine covectors, zero section included) in (x, u)."""
    return conormal_by_multipliers(S, u_vars).ideal


def exceptional_image(S: SpaceWithFunction) -> BigradedIdeal:
    """Ideal of ``pi(E_f)``: limits of directions of ``u - df(x)`` for u in ``T*_X U``.

    ``T*_X U`` is taken from the multiplier parametrization; the blow-up
    along the graph of df is presented as a Rees algebra (eliminating the
    Rees parameter s), the exceptional locus is cut by ``u = df(x)``.
    """
    S._need_f()
    taken = set(S.ring)
    u_vars = []
    for v in S.vars:
        name = fresh_name(taken, f"_u_{v}")
        taken.add(name)
        u_vars.append(name)
    s = fresh_name(taken, "_s")
    T = tangent_bundle_ideal(S, u_vars)
    ring = (s,) + S.vars + tuple(u_vars) + S.covector_vars
    ss = Polynomial.variable(s, ring)
    df = [S.f.diff(v).change_ring(ring) for v in S.vars]
    gens = _ring_polys(T.generators, ring)
    for j, v in enumerate(S.vars):
        g = Polynomial.variable(u_vars[j], ring) - df[j]
        gens.append(Polynomial.variable(covector_name(v), ring) - ss * g)
    R = eliminate(Ideal(gens, ring), [s])
    sub = {u: df[j].change_ring(R.vars) for j, u in enumerate(u_vars)}
    out_ring = S.ring
    E = [g.substitute(sub).change_ring(out_ring) for g in R.generators]
    return BigradedIdeal(S.vars, S.covector_vars, Ideal([g for g in E if g], out_ring))


@dataclass
class DecompositionReport:
    lhs: Ideal
    exceptional: Ideal
    conormal_fiber: Ideal
    join: Ideal | None
    rhs: Ideal
    equal: bool
    exceptional_contained: bool
    join_contained: bool | None
    join_dropped: bool
    df0: tuple
    notes: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "radical_equal": self.equal,
            "lhs": str(self.lhs),
            "rhs": str(self.rhs),
            "exceptional_fiber": str(self.exceptional),
            "conormal_fiber": str(self.conormal_fiber),
            "join": None if self.join is None else str(self.join),
            "join_dropped": self.join_dropped,
            "exceptional_contained_in_lhs": self.exceptional_contained,
            "join_contained_in_lhs": self.join_contained,
            "df0": [str(c) for c in self.df0],
            "notes": list(self.notes),
        }


def verify_decomposition(S: SpaceWithFunction, point: Mapping[str, object] | None = None) -> DecompositionReport:
    """Compare ``C(X,f)_0`` with ``pi(E_f)_0`` united with ``df(0) * C(X)_0``.

    The join term is dropped when ``f`` lies in the square of the maximal
    ideal of X at the point.  Both easy containments are also reported.
    """
    point = S.origin() if point is None else dict(point)
    lhs = fiber_at(relative_conormal(S), point)
    exc = fiber_at(exceptional_image(S), point)
    c0 = fiber_at(conormal_space(S), point)
    df0 = S.df_at(point)
    notes = []
    dropped = S.f_in_m_squared(point)
    if dropped:
        join = None
        rhs = exc
        notes.append("f lies in m^2 of X: join term is empty by convention")
    else:
        join = join_point_set(df0, c0)
        rhs = intersect(exc, join)
        if radical_equal(c0, point_ideal(df0, c0.vars)):
            notes.append("degenerate case: C(X)_0 is the single point <df(0)>")
    equal = radical_equal(lhs, rhs)
    exc_in = radical_contained(lhs, exc)
    join_in = None if join is None else radical_contained(lhs, join)
    return DecompositionReport(lhs, exc, c0, join, rhs, equal, exc_in, join_in, dropped, df0, notes)


@dataclass
class AfExactVerdict:
    holds: bool
    per_parameter: dict
    witness_covector: dict | None
    relative_conormal: BigradedIdeal

    def as_dict(self) -> dict:
        return {
            "holds": self.holds,
            "per_parameter": dict(self.per_parameter),
            "witness_covector": self.witness_covector,
            "relative_conormal": str(self.relative_conormal),
        }


def af_exact(S: SpaceWithFunction, rel: BigradedIdeal | None = None) -> AfExactVerdict:
    """Exact germ test of ``C(X,f)|_Y`` being contained in ``C(Y)`` near the origin.

    For each parameter ``y_j`` the part of ``C(X,f)`` over ``Y = {z = 0}``
    where ``xi_{y_j}`` does not vanish identically is ``(I + (z)) : xi_{y_j}^oo``;
    the condition fails for ``y_j`` exactly when that set has covectors over
    the origin.
    """
    if not S.y_vars:
        raise ValueError("A_f needs a parameter block (y_vars)")
    rel = relative_conormal(S) if rel is None else rel
    ring = S.ring
    over_Y = rel.ideal + [Polynomial.variable(z, ring) for z in S.z_vars]
    per = {}
    bad_fibers = []
    for y in S.y_vars:
        K = saturate(over_Y, Polynomial.variable(covector_name(y), ring))
        F = fiber_ideal(K, S.origin(), rel.covector_vars)
        per[y] = F.is_unit()
        if not per[y]:
            bad_fibers.append((y, F))
    holds = all(per.values())
    witness = None
    if not holds:
        witness = find_covector_witness(rel, S, [y for y, _ in bad_fibers], fibers=[F for _, F in bad_fibers])
    return AfExactVerdict(holds, per, witness, rel)


def find_covector_witness(rel: BigradedIdeal, S: SpaceWithFunction, bad: Sequence[str],
                          box: int = 2, fibers: Sequence[Ideal] | None = None) -> dict | None:
    """Search a small integer box for a covector over the origin violating the condition.

    ``fibers`` are the localized bad fibers; by default the whole fiber
    ``C(X,f)_0`` is searched.
    """
    Fs = list(fibers) if fibers else [fiber_at(rel, S.origin())]
    cov = Fs[0].vars
    gens = [g for F in Fs[:1] for g in F.generators]
    idx = [cov.index(covector_name(y)) for y in bad]
    rng = range(-box, box + 1)
    # smallest covectors first, so simple witnesses such as [1 : 0] are found before others
    candidates = sorted(itertools.product(rng, repeat=len(cov)),
                        key=lambda v: (sum(map(abs, v)), tuple(-c for c in v)))
    # prefer covectors with a nonzero bad component, then any point of the fiber
    for need_bad in (True, False):
        for vec in candidates:
            if not any(vec):
                continue
            if need_bad and not any(vec[i] for i in idx):
                continue
            # first nonzero entry positive: one representative per projective point
            if next(c for c in vec if c) < 0:
                continue
            point = dict(zip(cov, vec))
            if all(not g.evaluate(point) for g in gens):
                return {"base_point": {v: 0 for v in S.vars},
                        "covector": {v: vec[i] for i, v in enumerate(S.vars)}}
    return None
