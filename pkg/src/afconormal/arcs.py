"""Arc-based strict dependence, the infinitesimal Whitney A fiber condition,
A_f through the Jacobian module of ``H = (f, G)``, and the main pipeline.

An element ``u`` of ``O^p`` is strictly dependent on ``M`` when along every
arc ``phi`` the pullback ``phi*u`` lies in ``t * phi*M``.  Over power
series this is decided by valuation-pivot row elimination; we can only
sweep finitely many arcs, so positive answers are "up to the arc bound"
while a failing arc is a genuine counterexample.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .conormal import SpaceWithFunction, af_exact, covector_name, relative_conormal
from .groebner import projective_fiber_dimension
from .polycore import (
    DEFAULT_PRECISION,
    Polynomial,
    PolyMap,
    TruncatedSeries,
    format_terms,
    jacobian,
    parse_polynomial,
    substitute_arc,
)
from .polycore.gaussian import I as IMAG
from .polycore.gaussian import gaussian
from .rees import PresentedModule

HOLDS = "holds_up_to_bound"
FAILS = "fails"
INCONCLUSIVE = "inconclusive"
_RANK = {HOLDS: 0, INCONCLUSIVE: 1, FAILS: 2}
DEFAULT_MARGIN = 4
DEFAULT_DEGREE_BOUND = 8


class ArcNotOnVariety(ValueError):
    pass


def series_from_string(text: str, precision: int = DEFAULT_PRECISION) -> TruncatedSeries:
    """Parse a polynomial in ``t`` whose coefficients may involve ``i`` (with ``i^2 = -1``)."""
    p = parse_polynomial(text, ("t", "i"))
    coeffs: dict[int, object] = {}
    powers_of_i = (1, IMAG, -1, -IMAG)
    for (k, j), c in p.terms.items():
        coeffs[k] = coeffs.get(k, 0) + c * powers_of_i[j % 4]
    top = max(coeffs, default=-1)
    return TruncatedSeries([gaussian(0) + coeffs.get(k, 0) for k in range(min(top + 1, precision))], precision)


class Arc:
    """A germ ``phi: (C, 0) -> (C^m, 0)`` given by one truncated series per variable."""

    __slots__ = ("vars", "components", "label")

    def __init__(self, vars: Sequence[str], components: Sequence[TruncatedSeries], label: str = ""):
        self.vars = tuple(vars)
        comps = tuple(components)
        if len(comps) != len(self.vars):
            raise ValueError("one series per variable is required")
        if len({c.precision for c in comps}) > 1:
            raise ValueError("arc components must share one precision")
        if any(c.coeffs and c.coeffs[0] for c in comps):
            raise ValueError("arcs must pass through the origin (zero constant terms)")
        self.components = comps
        self.label = label

    @classmethod
    def from_strings(cls, vars: Sequence[str], exprs: Sequence[str], precision: int = DEFAULT_PRECISION,
                     label: str = "") -> Arc:
        """Components are polynomials in ``t`` over Q(i); ``i`` denotes the imaginary unit."""
        return cls(vars, [series_from_string(e, precision) for e in exprs], label)

    @classmethod
    def monomial(cls, vars: Sequence[str], coeffs: Sequence, exps: Sequence[int],
                 precision: int = DEFAULT_PRECISION, label: str = "") -> Arc:
        comps = [TruncatedSeries.monomial(c if c else 0, e if c else 0, precision) for c, e in zip(coeffs, exps)]
        return cls(vars, comps, label)

    @property
    def precision(self) -> int:
        return self.components[0].precision if self.components else DEFAULT_PRECISION

    def with_precision(self, precision: int) -> Arc:
        comps = [TruncatedSeries(c.coeffs, precision) for c in self.components]
        return Arc(self.vars, comps, self.label)

    def pullback(self, p: Polynomial) -> TruncatedSeries:
        if p.vars != self.vars:
            p = p.change_ring(self.vars)
        return substitute_arc(p, self.components)

    def lies_on(self, polys: Iterable[Polynomial]) -> bool:
        return all(self.pullback(g).is_zero_to_precision() for g in polys)

    def expressions(self) -> list[str]:
        return [format_terms(c.coeffs) for c in self.components]

    def __str__(self) -> str:
        return "(" + ", ".join(f"{v}={e}" for v, e in zip(self.vars, self.expressions())) + ")"

    def __repr__(self) -> str:
        return f"Arc{self}"


@dataclass
class ArcCertificate:
    arc: Arc
    status: str
    pivot_orders: list
    element_orders: list
    residual_precision: int
    functional: list | None = None
    covector: list | None = None

    def as_dict(self) -> dict:
        return {
            "arc": self.arc.expressions(),
            "label": self.arc.label,
            "status": self.status,
            "pivot_orders": self.pivot_orders,
            "element_orders": self.element_orders,
            "residual_precision": self.residual_precision,
            "covector": None if self.covector is None else [str(c) for c in self.covector],
        }


@dataclass
class DependenceVerdict:
    status: str
    witness: Arc | None = None
    certificate: list = field(default_factory=list)
    covector: list | None = None

    @property
    def holds(self) -> bool:
        return self.status == HOLDS

    @property
    def fails(self) -> bool:
        return self.status == FAILS

    def as_dict(self) -> dict:
        return {
            "status": self.status,
            "witness_arc": None if self.witness is None else self.witness.expressions(),
            "witness_covector": None if self.covector is None else [str(c) for c in self.covector],
            "arcs_checked": len(self.certificate),
            "certificate": [c.as_dict() for c in self.certificate],
        }


def combine(statuses: Iterable[str]) -> str:
    """Aggregate verdicts: fails dominates, then inconclusive, then holds."""
    out = HOLDS
    for s in statuses:
        if _RANK[s] > _RANK[out]:
            out = s
    return out


def _arc_membership(A: list[list[TruncatedSeries]], u: list[TruncatedSeries], margin: int):
    """Decide ``u in t * colspan(A)`` over truncated series for one arc.

    Returns (status, pivot_orders, element_orders, residual_precision, functional_row).
    Row operations are tracked in ``R`` so a failing row yields the functional
    ``psi`` with ``psi . A`` and ``psi . u`` of the offending orders.
    """
    p = len(u)
    s = len(A[0]) if p else 0
    N = max([e.precision for row in A for e in row] + [x.precision for x in u] + [1])
    A = [list(row) for row in A]
    u = list(u)
    R = [[TruncatedSeries([1 if i == j else 0], N) for j in range(p)] for i in range(p)]
    rows = list(range(p))
    cols = list(range(s))
    pivots = []
    element_orders = []
    residual = N
    while rows and cols:
        best = None
        for i in rows:
            for j in cols:
                o = A[i][j].order()
                if o is not None and (best is None or o < best[0]):
                    best = (o, i, j)
        if best is None:
            break
        a, i, j = best
        pivots.append(a)
        ou = u[i].order()
        element_orders.append(ou)
        if ou is not None and ou <= a:
            return FAILS, pivots, element_orders, residual, R[i]
        if ou is None and u[i].precision < a + 1:
            return INCONCLUSIVE, pivots, element_orders, min(residual, u[i].precision), None
        residual = min(residual, u[i].precision)
        piv = A[i][j]
        for i2 in rows:
            if i2 == i or A[i2][j].is_zero_to_precision():
                continue
            q = A[i2][j].divide(piv)
            for k in cols:
                A[i2][k] = A[i2][k] - q * A[i][k]
            u[i2] = u[i2] - q * u[i]
            R[i2] = [R[i2][k] - q * R[i][k] for k in range(p)]
        rows.remove(i)
        cols.remove(j)
    if not rows:
        status = HOLDS if (not pivots or residual >= max(pivots) + margin) else INCONCLUSIVE
        return status, pivots, element_orders, residual, None
    # the remaining block of A is zero to its precision
    pmin = min((A[i][j].precision for i in rows for j in cols), default=None)
    known = [(u[i].order(), i) for i in rows if u[i].order() is not None]
    if known:
        q, i = min(known)
        element_orders.append(q)
        if pmin is None or q <= pmin:
            return FAILS, pivots, element_orders, residual, R[i]
        return INCONCLUSIVE, pivots, element_orders, residual, None
    element_orders.append(None)
    residual = min([residual] + [u[i].precision for i in rows])
    top = max(pivots) if pivots else 0
    status = HOLDS if residual >= top + margin else INCONCLUSIVE
    return status, pivots, element_orders, residual, None


def _leading_covector(functional, A_full: list[list[TruncatedSeries]]) -> list[Fraction]:
    """Lowest-order coefficient vector of ``psi . A`` (the limiting hyperplane)."""
    p = len(functional)
    ncols = len(A_full[0]) if A_full else 0
    combos = []
    for j in range(ncols):
        acc = None
        for i in range(p):
            term = functional[i] * A_full[i][j]
            acc = term if acc is None else acc + term
        combos.append(acc)
    orders = [c.order() for c in combos if c.order() is not None]
    if not orders:
        return [Fraction(0)] * ncols
    o = min(orders)
    return [c.coeffs[o] if o < c.precision else Fraction(0) for c in combos]


def strict_dependence(u: Sequence[Polynomial], M: PresentedModule, arcs: Sequence[Arc],
                      variety: Sequence[Polynomial] = (), margin: int = DEFAULT_MARGIN,
                      covector_columns: Sequence[Sequence[Polynomial]] | None = None) -> DependenceVerdict:
    """Whether ``u`` is strictly dependent on ``M`` along each arc in ``arcs``.

    ``covector_columns`` (p x m) is used to express a failing functional as a
    limiting covector; by default the module generators are used.
    """
    if len(u) != M.p:
        raise ValueError("element and module have different ranks")
    certs = []
    witness = None
    covector = None
    for arc in arcs:
        if variety and not arc.lies_on(variety):
            raise ArcNotOnVariety(f"arc {arc} does not lie on the declared variety")
        A = [[arc.pullback(e) for e in row] for row in M.matrix]
        uu = [arc.pullback(e) for e in u]
        status, pivots, eorders, residual, psi = _arc_membership(A, uu, margin)
        cert = ArcCertificate(arc, status, pivots, eorders, residual)
        if status == FAILS:
            cols = covector_columns if covector_columns is not None else M.matrix
            full = [[arc.pullback(e) for e in row] for row in cols]
            cert.functional = psi
            cert.covector = _leading_covector(psi, full)
            if witness is None:
                witness, covector = arc, cert.covector
        certs.append(cert)
    status = combine(c.status for c in certs) if certs else INCONCLUSIVE
    return DependenceVerdict(status, witness, certs, covector)


# arc sources

def _vanishes_on_monomial_arc(p: Polynomial, coeffs, exps) -> bool:
    acc: dict[int, object] = {}
    for exp, c in p.terms.items():
        val = c
        deg = 0
        for ci, wi, e in zip(coeffs, exps, exp):
            if e:
                if not ci:
                    val = 0
                    break
                val = val * ci ** e
                deg += wi * e
        if val:
            acc[deg] = acc.get(deg, 0) + val
    return not any(acc.values())


DEFAULT_COEFFICIENTS = (1, -1, IMAG, -IMAG)


def monomial_arcs(vars: Sequence[str], variety: Sequence[Polynomial], degree_bound: int = DEFAULT_DEGREE_BOUND,
                  coefficients: Sequence = DEFAULT_COEFFICIENTS, zero_vars: Sequence[str] = (),
                  precision: int = DEFAULT_PRECISION, limit: int = 400000) -> list[Arc]:
    """Arcs ``x_i = c_i t^(w_i)`` (or ``x_i = 0``) lying on the variety.

    Coefficients come from ``coefficients`` (by default the fourth roots of
    unity, so arcs like ``v = i*y`` are seen); the first nonzero one is
    fixed to 1, which a rescaling of ``t`` achieves anyway.  Exponents run
    over ``1..degree_bound``; exponent vectors with a common factor are
    skipped.  Variables in ``zero_vars`` are fixed to zero.
    """
    vars = tuple(vars)
    polys = [g.change_ring(vars) for g in variety]
    free = [v for v in vars if v not in zero_vars]
    nonzero = [(c, w) for w in range(1, degree_bound + 1) for c in coefficients]
    total = (len(nonzero) + 1) ** len(free)
    if total > limit:
        raise ValueError(f"{total} candidate arcs exceed the limit {limit}; lower the degree bound")
    out = []
    for combo in itertools.product([(0, 0)] + nonzero, repeat=len(free)):
        first = next((c for c, _ in combo if c), None)
        if first is None or first != 1:
            continue
        nz = [w for c, w in combo if c]
        if math.gcd(*nz) != 1:
            continue
        full = dict(zip(free, combo))
        coeffs = [full.get(v, (0, 0))[0] for v in vars]
        exps = [full.get(v, (0, 0))[1] for v in vars]
        if all(_vanishes_on_monomial_arc(g, coeffs, exps) for g in polys):
            out.append(Arc.monomial(vars, coeffs, exps, precision, "monomial"))
    return out


def normalization_arc(a: int, d: int, vars: Sequence[str] = ("y", "v", "w"),
                      precision: int = DEFAULT_PRECISION) -> Arc:
    """``y = 0, v = t^(a/g), w = t^(d/g)``: normalizes the curve ``w^a = v^d``."""
    g = math.gcd(a, d)
    return Arc.monomial(vars, (0, 1, 1), (0, a // g, d // g), precision, f"normalization(a={a},d={d})")


# conditions

def whitney_fiber_check(S: SpaceWithFunction, arcs: Sequence[Arc] | None = None,
                        margin: int = DEFAULT_MARGIN, degree_bound: int = DEFAULT_DEGREE_BOUND,
                        precision: int = DEFAULT_PRECISION) -> dict[str, DependenceVerdict]:
    """Infinitesimal Whitney A fiber condition along arcs on ``X_0``.

    Supplied arcs that do not lie on ``X_0`` are skipped; if none is left,
    monomial arcs on ``X_0`` are generated.

    For every parameter ``y_j``: is ``dG/dy_j`` strictly dependent on
    ``JM(X_0)`` (partials of ``G`` restricted to ``y = 0`` in the fiber
    directions only)?
    """
    if not S.y_vars:
        raise ValueError("the fiber condition needs a parameter block (y_vars)")
    vars = S.vars
    zero_y = {y: 0 for y in S.y_vars}
    G0 = [g.substitute(zero_y) for g in S.G.components]
    fiber_eqs = G0 + [Polynomial.variable(y, vars) for y in S.y_vars]
    if arcs is not None:
        # user arcs on X that leave the special fiber are not relevant here
        arcs = [a for a in arcs if a.lies_on(fiber_eqs)] or None
    if arcs is None:
        arcs = monomial_arcs(vars, fiber_eqs, degree_bound, zero_vars=S.y_vars, precision=precision)
    JM0 = PresentedModule(vars, tuple(tuple(r) for r in jacobian(PolyMap(vars, G0), S.z_vars)))
    # failing functionals are reported against the full differential of G
    DG = jacobian(S.G)
    out = {}
    for y in S.y_vars:
        u = [g.diff(y) for g in S.G.components]
        out[y] = strict_dependence(u, JM0, arcs, variety=fiber_eqs, margin=margin, covector_columns=DG)
    return out


def trotman_criterion(a: int, b: int, c: int, d: int) -> bool:
    """Closed form for ``w^a - y^b v^c - v^d``: holds if b > 1, else iff c > min(d-1, d-d/a)."""
    for name, val in (("a", a), ("b", b), ("c", c), ("d", d)):
        if not isinstance(val, int) or val < 1:
            raise ValueError(f"{name} must be a positive integer")
    if a < 2 or d < 2:
        raise ValueError("a and d must be at least 2 (singular fiber)")
    if b > 1:
        return True
    return Fraction(c) > min(Fraction(d - 1), Fraction(d) - Fraction(d, a))


def trotman_space(a: int, b: int, c: int, d: int, f: str | None = None) -> SpaceWithFunction:
    vars = ("y", "v", "w")
    G = parse_polynomial(f"w^{a} - y^{b}*v^{c} - v^{d}", vars)
    fp = parse_polynomial(f, vars) if f else None
    return SpaceWithFunction(PolyMap(vars, [G]), fp, ("y",), ("v", "w"), 1)


def jacobian_module_of_H(S: SpaceWithFunction) -> PresentedModule:
    """``JM(H)`` for ``H = (f, G)``: all partial derivatives, first row from f."""
    S._need_f()
    H = PolyMap(S.vars, [S.f] + list(S.G.components))
    return PresentedModule.jacobian_module(H)


def af_arcs(S: SpaceWithFunction, arcs: Sequence[Arc] | None = None, margin: int = DEFAULT_MARGIN,
            degree_bound: int = DEFAULT_DEGREE_BOUND,
            precision: int = DEFAULT_PRECISION) -> dict[str, DependenceVerdict]:
    """Strict dependence of ``dH/dy_j`` on ``JM(H)`` along arcs on X."""
    if not S.y_vars:
        raise ValueError("A_f needs a parameter block (y_vars)")
    variety = list(S.G.components)
    if arcs is None:
        arcs = monomial_arcs(S.vars, variety, degree_bound, precision=precision)
    JM = jacobian_module_of_H(S)
    H = [S.f] + list(S.G.components)
    out = {}
    for y in S.y_vars:
        u = [h.diff(y) for h in H]
        out[y] = strict_dependence(u, JM, arcs, variety=variety, margin=margin)
    return out


@dataclass
class PipelineReport:
    fiber_dimension: int
    n: int
    dimension_ok: bool
    join_needed: bool
    whitney: dict | None
    conclusion: str
    certified: bool
    af_exact: bool | None
    consistent: bool | None
    assumptions: list

    def as_dict(self) -> dict:
        return {
            "dim_relative_conormal_fiber": self.fiber_dimension,
            "n": self.n,
            "dimension_hypothesis": self.dimension_ok,
            "join_components_possible": self.join_needed,
            "whitney_fiber": None if self.whitney is None else
            {y: v.status for y, v in self.whitney.items()},
            "conclusion": self.conclusion,
            "certified": self.certified,
            "af_exact": self.af_exact,
            "consistent_with_af_exact": self.consistent,
            "assumptions": list(self.assumptions),
        }


def main_theorem_pipeline(S: SpaceWithFunction, arcs: Sequence[Arc] | None = None, cross_check: bool = True,
                          margin: int = DEFAULT_MARGIN, degree_bound: int = DEFAULT_DEGREE_BOUND,
                          precision: int = DEFAULT_PRECISION) -> PipelineReport:
    """Hypotheses of the A_f criterion for ``df(0) != 0`` and the resulting verdict.

    1. ``dim C(X,f)_0 < n`` (exact);
    2. the infinitesimal Whitney A fiber condition (arc-bounded), needed only
       when join components can occur, i.e. when f is not in ``m^2``;
    3. the conclusion, optionally cross-checked against :func:`af_exact`.
    """
    rel = relative_conormal(S)
    fdim = projective_fiber_dimension(rel.ideal, S.origin(), rel.covector_vars)
    dim_ok = fdim < S.n
    join_needed = not S.f_in_m_squared()
    whitney = None
    assumptions = [
        "X equidimensional with equidimensional fibers",
        "singular locus of X is Y; f non-singular on X - Y",
        "Y is contained in f^-1(0)",
    ]
    if not S.f_vanishes_on_Y():
        raise ValueError("f must vanish on Y = {z = 0}")
    if join_needed:
        whitney = whitney_fiber_check(S, arcs, margin, degree_bound, precision)
    wstatus = combine(v.status for v in whitney.values()) if whitney else HOLDS
    if not dim_ok:
        conclusion, certified = f"hypothesis failed: dim C(X,f)_0 = {fdim} >= n = {S.n}; no conclusion", False
    elif wstatus == FAILS:
        conclusion, certified = "hypothesis failed: infinitesimal Whitney A fiber condition fails; no conclusion", False
    elif wstatus == INCONCLUSIVE:
        conclusion, certified = "inconclusive: Whitney fiber condition undecided at this precision", False
    elif join_needed:
        conclusion, certified = "A_f certified modulo arc bound", True
    else:
        conclusion, certified = "A_f certified (f in m^2: no join components)", True
    exact = None
    consistent = None
    if cross_check:
        exact = af_exact(S, rel).holds
        consistent = exact if certified else None
    return PipelineReport(fdim, S.n, dim_ok, join_needed, whitney, conclusion, certified, exact,
                          consistent, assumptions)


def covector_dict(S: SpaceWithFunction, covector: Sequence | None) -> dict | None:
    if covector is None:
        return None
    return {covector_name(v): str(c) for v, c in zip(S.vars, covector)}
