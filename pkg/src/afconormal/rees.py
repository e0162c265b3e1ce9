"""Rees algebras of submodules of free modules and their fibers over a parameter space."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .groebner import (
    Ideal,
    eliminate,
    fresh_name,
    projective_fiber_dimension,
    radical_contained,
    radical_equal,
    saturate,
)
from .polycore import Polynomial, PolyMap, jacobian


@dataclass(frozen=True)
class PresentedModule:
    """Submodule of ``O^p`` spanned by the columns of a ``p x s`` matrix."""

    vars: tuple
    matrix: tuple

    def __post_init__(self):
        vars = tuple(self.vars)
        rows = tuple(tuple(e if e.vars == vars else e.change_ring(vars) for e in row)
                     for row in self.matrix)
        if len({len(r) for r in rows}) > 1:
            raise ValueError("ragged generator matrix")
        object.__setattr__(self, "vars", vars)
        object.__setattr__(self, "matrix", rows)

    @classmethod
    def from_columns(cls, vars: Sequence[str], columns: Sequence[Sequence[Polynomial]]) -> PresentedModule:
        cols = [list(c) for c in columns]
        p = len(cols[0]) if cols else 0
        return cls(tuple(vars), tuple(tuple(c[i] for c in cols) for i in range(p)))

    @classmethod
    def jacobian_module(cls, G: PolyMap, wrt: Sequence[str] | None = None) -> PresentedModule:
        """``JM``: the columns are the partial derivatives of G."""
        return cls(G.source_vars, tuple(tuple(r) for r in jacobian(G, wrt)))

    @property
    def p(self) -> int:
        return len(self.matrix)

    @property
    def s(self) -> int:
        return len(self.matrix[0]) if self.matrix else 0

    def column(self, i: int) -> tuple:
        return tuple(row[i] for row in self.matrix)

    def substitute(self, values: Mapping[str, object], vars: Sequence[str] | None = None) -> PresentedModule:
        vars = self.vars if vars is None else tuple(vars)
        return PresentedModule(vars, tuple(tuple(e.substitute(values).change_ring(vars) for e in row)
                                           for row in self.matrix))

    def rank_at(self, point: Mapping[str, object]) -> int:
        """Rank of the generator matrix evaluated at a rational point."""
        rows = [[e.evaluate(point) for e in row] for row in self.matrix]
        return _rank(rows)


def _rank(rows: list[list[Fraction]]) -> int:
    rows = [list(r) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                q = rows[i][col] / rows[rank][col]
                rows[i] = [a - q * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


@dataclass
class ReesSetup:
    """Family ``X -> Y`` with a module ``M`` in ``O_X^p`` free of rank ``e`` off ``S``.

    ``assertions`` records user-asserted hypotheses that are not decided
    (equidimensionality, S finite over Y, direct summand off S, ...).
    """

    y_vars: tuple
    z_vars: tuple
    X: tuple
    M: PresentedModule
    S: tuple = ()
    d: int = 1
    e: int = 1
    assertions: dict = field(default_factory=dict)

    def __post_init__(self):
        self.y_vars = tuple(self.y_vars)
        self.z_vars = tuple(self.z_vars)
        if set(self.vars) != set(self.M.vars):
            raise ValueError("module ring does not match y_vars + z_vars")
        self.X = tuple(g.change_ring(self.vars) for g in self.X)
        self.S = tuple(g.change_ring(self.vars) for g in self.S)
        if self.M.vars != self.vars:
            self.M = PresentedModule(self.vars, self.M.matrix)

    @property
    def vars(self) -> tuple:
        return self.y_vars + self.z_vars

    @property
    def r(self) -> int:
        return self.d + self.e - 1

    def T_vars(self) -> tuple:
        taken = set(self.vars)
        out = []
        for i in range(self.M.s):
            name = fresh_name(taken, f"T{i + 1}")
            taken.add(name)
            out.append(name)
        return tuple(out)

    def restrict(self, y0: Mapping[str, object]) -> ReesSetup:
        """The fiber data ``(X_y, M(y))`` as a setup without parameters."""
        vals = {y: y0[y] for y in self.y_vars}
        X = tuple(g.substitute(vals).change_ring(self.z_vars) for g in self.X)
        X = tuple(g for g in X if g)
        M = self.M.substitute(vals, self.z_vars)
        S = tuple(g.substitute(vals).change_ring(self.z_vars) for g in self.S)
        return ReesSetup((), self.z_vars, X, M, S, self.d, self.e, dict(self.assertions))

    def check_free_locus(self, points: Sequence[Mapping[str, object]]) -> list[dict]:
        """At each sample point of X: rank of M and whether the point lies in V(S).

        Consistent points have rank ``e`` exactly when they are off ``V(S)``.
        """
        out = []
        for pt in points:
            if any(g.evaluate(pt) for g in self.X):
                raise ValueError(f"sample point {dict(pt)} is not on X")
            rank = self.M.rank_at(pt)
            in_S = all(not g.evaluate(pt) for g in self.S)
            out.append({"point": {k: str(v) for k, v in pt.items()}, "rank": rank, "in_S": in_S,
                        "consistent": (rank == self.e) != in_S})
        return out


@dataclass
class ReesPresentation:
    """Kernel of ``T_i -> sum_j M_ji w_j``: an ideal in the ambient variables and ``T``."""

    base_vars: tuple
    T_vars: tuple
    ideal: Ideal

    def check_homogeneous(self) -> bool:
        return all(g.is_homogeneous_in(self.T_vars) for g in self.ideal.generators)


def _w_names(taken, p: int) -> list[str]:
    taken = set(taken)
    out = []
    for j in range(p):
        name = fresh_name(taken, f"_w{j + 1}")
        taken.add(name)
        out.append(name)
    return out


def rees_presentation(R: ReesSetup) -> ReesPresentation:
    """Presentation ideal of the Rees algebra of M over ``O_X``.

    The graph ideal ``I(X) + (T_i - l_i(w))`` with ``l_i(w) = sum_j M_ji w_j``
    is eliminated with respect to ``w``.
    """
    T = R.T_vars()
    ws = _w_names(set(R.vars) | set(T), R.M.p)
    ring = tuple(ws) + R.vars + T
    gens = [g.change_ring(ring) for g in R.X]
    wpoly = [Polynomial.variable(w, ring) for w in ws]
    for i, t in enumerate(T):
        expr = Polynomial.variable(t, ring)
        for j in range(R.M.p):
            expr = expr - R.M.matrix[j][i].change_ring(ring) * wpoly[j]
        gens.append(expr)
    E = eliminate(Ideal(gens, ring), ws)
    return ReesPresentation(R.vars, T, E)


def kernel_check(P: ReesPresentation, R: ReesSetup) -> bool:
    """Every presentation generator maps into ``I(X)`` after ``T_i -> l_i(w)``."""
    ws = _w_names(set(P.base_vars) | set(P.T_vars), R.M.p)
    ring = P.base_vars + P.T_vars + tuple(ws)
    wpoly = [Polynomial.variable(w, ring) for w in ws]
    sub = {}
    for i, t in enumerate(P.T_vars):
        expr = Polynomial.zero(ring)
        for j in range(R.M.p):
            expr = expr + R.M.matrix[j][i].change_ring(ring) * wpoly[j]
        sub[t] = expr
    IX = Ideal([g.change_ring(ring) for g in R.X], ring)
    return all(IX.contains(g.change_ring(ring).substitute(sub)) for g in P.ideal.generators)


def _irrelevant(T: Sequence[str], ring: Sequence[str]) -> list[Polynomial]:
    return [Polynomial.variable(t, ring) for t in T]


def fiber_Cy(P: ReesPresentation, y_vars: Sequence[str], y0: Mapping[str, object]) -> Ideal:
    """``C_y``: the presentation restricted over ``y0``, saturated by ``(T)``.

    Lives in the ring of the fiber coordinates and ``T``.
    """
    y_vars = tuple(y_vars)
    rest = tuple(v for v in P.base_vars if v not in y_vars) + P.T_vars
    sub = P.ideal.substitute({y: y0[y] for y in y_vars})
    I = Ideal([g.change_ring(rest) for g in sub.generators], rest)
    return saturate(I, _irrelevant(P.T_vars, rest))


def fiber_C_of_y(R: ReesSetup, y0: Mapping[str, object]) -> Ideal:
    """``C(y)``: the Rees algebra of ``M(y)`` over ``X_y``, saturated by ``(T)``."""
    Ry = R.restrict(y0)
    P = rees_presentation(Ry)
    ring = P.base_vars + P.T_vars
    return saturate(P.ideal, _irrelevant(P.T_vars, ring))


def _origin_of_Y(R: ReesSetup) -> dict:
    return {y: 0 for y in R.y_vars}


@dataclass
class SaturationIdentityReport:
    y0: dict
    Cy: Ideal
    C_of_y: Ideal
    saturated: Ideal
    identity_holds: bool
    plain_equal: bool
    C_of_y_in_Cy: bool

    def as_dict(self) -> dict:
        return {
            "y0": {k: str(v) for k, v in self.y0.items()},
            "identity_holds": self.identity_holds,
            "vertical_part_present": not self.plain_equal,
            "C_of_y_contained_in_Cy": self.C_of_y_in_Cy,
            "Cy": str(self.Cy),
            "C_of_y": str(self.C_of_y),
            "Cy_saturated_by_S": str(self.saturated),
        }


def remark_identity_check(R: ReesSetup, y0: Mapping[str, object] | None = None,
                          P: ReesPresentation | None = None) -> SaturationIdentityReport:
    """``C(y)`` against ``C_y`` with everything over ``S_y`` removed (saturation by S)."""
    if not R.S:
        raise ValueError("the non-free locus S must be declared")
    y0 = _origin_of_Y(R) if y0 is None else dict(y0)
    P = rees_presentation(R) if P is None else P
    Cy = fiber_Cy(P, R.y_vars, y0)
    Cofy = fiber_C_of_y(R, y0)
    ring = Cy.vars
    Sy = [g.substitute({y: y0[y] for y in R.y_vars}).change_ring(ring) for g in R.S]
    Sy = [g for g in Sy if g]
    sat = saturate(Cy, Sy) if Sy else Ideal([Polynomial.constant(1, ring)], ring)
    Cofy = Cofy.change_ring(ring)
    return SaturationIdentityReport(
        y0=y0,
        Cy=Cy,
        C_of_y=Cofy,
        saturated=sat,
        identity_holds=radical_equal(sat, Cofy),
        plain_equal=radical_equal(Cy, Cofy),
        C_of_y_in_Cy=radical_contained(Cy, Cofy),
    )


@dataclass
class ComponentsReport:
    fiber_dimension: int
    r: int
    hypothesis_holds: bool
    fibers_equal: bool | None
    verdict: str
    assertions: dict

    def as_dict(self) -> dict:
        return {
            "dim_c_inverse_0": self.fiber_dimension,
            "r": self.r,
            "hypothesis_holds": self.hypothesis_holds,
            "fibers_radical_equal": self.fibers_equal,
            "verdict": self.verdict,
            "assertions": dict(self.assertions),
            "cycles_compared": False,
        }


def theorem_components_check(R: ReesSetup, P: ReesPresentation | None = None) -> ComponentsReport:
    """Checks ``dim c^-1(0) < r`` exactly, then compares ``C_0`` and ``C(0)`` set-theoretically.

    A failed hypothesis gives the verdict ``"inconclusive"``; multiplicities
    of fundamental cycles are not compared.
    """
    P = rees_presentation(R) if P is None else P
    origin = {v: 0 for v in R.vars}
    fdim = projective_fiber_dimension(P.ideal, origin, P.T_vars)
    ok = fdim < R.r
    equal = radical_equal(fiber_Cy(P, R.y_vars, _origin_of_Y(R)),
                          fiber_C_of_y(R, _origin_of_Y(R)).change_ring(R.z_vars + P.T_vars))
    if not ok:
        verdict = "inconclusive"
    else:
        verdict = "holds" if equal else "violated"
    return ComponentsReport(fdim, R.r, ok, equal, verdict, dict(R.assertions))
