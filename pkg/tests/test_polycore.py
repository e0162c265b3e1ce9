from fractions import Fraction

import pytest
from hypothesis import given, settings as hsettings, strategies as st

from afconormal.polycore import (
    GaussianRational,
    ParseError,
    PolyMap,
    Polynomial,
    PrecisionError,
    TruncatedSeries,
    determinant,
    jacobian,
    minors,
    parse_polynomial,
    substitute_arc,
)

VW = ("v", "w")
XY = ("x", "y")
XYZ = ("x", "y", "z")


def P(text, vars=XY):
    return parse_polynomial(text, vars)


# parsing

def test_parse_reads_terms():
    p = P("w^2 - v^3", VW)
    assert p.terms == {(0, 2): 1, (3, 0): -1}


def test_parse_zero():
    assert P("0").terms == {}
    assert P("0").is_zero()


def test_parse_identity_collapses():
    assert P("(v+w)^2 - v^2 - 2*v*w", VW) == P("w^2", VW)


@pytest.mark.parametrize("text,expected", [
    ("x**2", "x^2"),
    ("-x + 1/2*y", "-x + 1/2*y"),
    ("(x - y)*(x + y)", "x^2 - y^2"),
    ("x/2", "1/2*x"),
    ("3", "3"),
    ("--x", "x"),
])
def test_parse_and_print(text, expected):
    assert str(P(text)) == expected


@pytest.mark.parametrize("text,col", [
    ("x + ", 5),
    ("x + q", 5),
    ("(x + y", 7),
    ("x / y", 3),
    ("x ^ y", 5),
    ("x $ y", 3),
])
def test_parse_errors_report_column(text, col):
    with pytest.raises(ParseError) as info:
        P(text)
    assert info.value.pos + 1 == col


def test_division_by_zero_constant_rejected():
    with pytest.raises(ParseError):
        P("x/0")


@pytest.mark.parametrize("text", ["x^2 - 3*x*y + 1/7", "w^3 - y*v - v^2", "-y^2*z + x^2", "0", "5/3"])
def test_print_parse_round_trip(text):
    vars = ("x", "y", "z", "v", "w")
    p = parse_polynomial(text, vars)
    assert parse_polynomial(str(p), vars) == p


# arithmetic properties

coeff = st.fractions(min_value=-5, max_value=5, max_denominator=4)
exps = st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 2))
polys = st.dictionaries(exps, coeff, max_size=5).map(lambda d: Polynomial(XYZ, d))


@hsettings(max_examples=60, deadline=None)
@given(polys, polys, polys)
def test_ring_axioms(p, q, r):
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p + q == q + p
    assert p * q == q * p
    assert p - p == Polynomial.zero(XYZ)


@hsettings(max_examples=60, deadline=None)
@given(polys, polys)
def test_leibniz_rule(p, q):
    for v in XYZ:
        assert (p * q).diff(v) == p * q.diff(v) + q * p.diff(v)


@hsettings(max_examples=40, deadline=None)
@given(polys, st.tuples(coeff, coeff, coeff))
def test_evaluate_is_a_homomorphism(p, pt):
    point = dict(zip(XYZ, pt))
    q = p * p + p
    assert q.evaluate(point) == p.evaluate(point) ** 2 + p.evaluate(point)


def test_mixed_rings_rejected():
    with pytest.raises(ValueError):
        P("x") + parse_polynomial("x", ("x", "z"))


def test_change_ring_by_name():
    p = P("x*y^2")
    q = p.change_ring(("y", "z", "x"))
    assert q.terms == {(2, 0, 1): 1}
    with pytest.raises(ValueError):
        p.change_ring(("x",))


def test_substitute_polynomial_values():
    p = P("x^2 - y")
    t = ("x", "y")
    assert p.substitute({"y": P("x^2")}) == Polynomial.zero(t)


# jacobian

def test_jacobian_power_rule():
    G = PolyMap(XY, [P("x^2 - y^3")])
    assert jacobian(G) == [[P("2*x"), P("-3*y^2")]]


def test_jacobian_identity():
    G = PolyMap(("x",), [parse_polynomial("x", ("x",))])
    assert jacobian(G) == [[parse_polynomial("1", ("x",))]]


def test_jacobian_trotman_all_twos():
    V = ("y", "v", "w")
    G = PolyMap(V, [parse_polynomial("w^2 - y^2*v^2 - v^2", V)])
    expected = [parse_polynomial(e, V) for e in ("-2*y*v^2", "-2*y^2*v - 2*v", "2*w")]
    assert jacobian(G)[0] == expected


@pytest.mark.parametrize("point", [(Fraction(1, 3), Fraction(-2, 5), Fraction(7, 4)),
                                   (Fraction(2), Fraction(1, 7), Fraction(-3, 2))])
def test_jacobian_matches_finite_differences(point):
    # exact difference quotient of a polynomial converges; with step h the error is O(h)
    V = ("y", "v", "w")
    g = parse_polynomial("w^3 - y^2*v^2 - v^4 + y*w", V)
    J = jacobian(PolyMap(V, [g]))[0]
    pt = dict(zip(V, point))
    h = Fraction(1, 10**6)
    for i, v in enumerate(V):
        shifted = dict(pt)
        shifted[v] += h
        quotient = (g.evaluate(shifted) - g.evaluate(pt)) / h
        assert abs(quotient - J[i].evaluate(pt)) < Fraction(1, 10**4)


def test_determinant_and_minors():
    m = [[P("x"), P("y")], [P("y"), P("x")]]
    assert determinant(m) == P("x^2 - y^2")
    ms = minors([[P("x"), P("2*x"), P("y")]], 1)
    assert len(ms) == 2  # 2x is x up to a scalar


# series

def test_series_orders_and_printing():
    s = TruncatedSeries([0, 0, 1, -2], 8)
    assert s.order() == 2
    assert str(s) == "t^2 - 2*t^3 + O(t^8)"
    assert TruncatedSeries([], 5).order() is None
    assert TruncatedSeries([], 5).order_bound() == 5


def test_series_product_precision():
    a = TruncatedSeries.monomial(1, 2, 10)
    b = TruncatedSeries([1, 1], 6)
    c = a * b
    assert c.precision == 8  # min(10 + 0, 6 + 2)
    assert c.coeffs[2:4] == (1, 1)


def test_series_division_drops_precision():
    num = TruncatedSeries([0, 0, 1, 1], 10)
    den = TruncatedSeries([0, 1], 10)
    q = num.divide(den)
    assert q.precision == 9
    assert q.coeffs[:3] == (0, 1, 1)
    with pytest.raises(ValueError):
        den.divide(num)


def test_series_inverse():
    s = TruncatedSeries([1, -1], 12)
    inv = s.inverse()
    assert all(c == 1 for c in inv.coeffs)
    assert (s * inv).coeffs == (1,) + (0,) * 11


def test_substitute_arc_on_cusp():
    p = P("x^2 - y^3")
    arc = [TruncatedSeries.monomial(1, 3, 64), TruncatedSeries.monomial(1, 2, 64)]
    assert substitute_arc(p, arc).is_zero_to_precision()


def test_substitute_arc_order():
    arc = [TruncatedSeries.monomial(1, 2, 64), TruncatedSeries.monomial(1, 3, 64)]
    s = substitute_arc(P("x"), arc)
    assert s.order() == 2


def test_normalization_arc_on_fiber():
    arc = [TruncatedSeries.monomial(1, 2, 64), TruncatedSeries.monomial(1, 3, 64)]
    assert substitute_arc(P("w^2 - v^3", VW), arc).is_zero_to_precision()


def test_substitute_arc_mixed_precision_rejected():
    arc = [TruncatedSeries.monomial(1, 1, 8), TruncatedSeries.monomial(1, 1, 9)]
    with pytest.raises(PrecisionError):
        substitute_arc(P("x*y"), arc)


@hsettings(max_examples=40, deadline=None)
@given(polys, polys, st.tuples(st.integers(1, 3), st.integers(1, 3), st.integers(1, 3)),
       st.tuples(st.integers(-2, 2), st.integers(-2, 2), st.integers(-2, 2)))
def test_substitute_arc_is_multiplicative(p, q, ws, cs):
    N = 16
    arc = [TruncatedSeries.monomial(c, w, N) for c, w in zip(cs, ws)]
    assert substitute_arc(p * q, arc) == (substitute_arc(p, arc) * substitute_arc(q, arc)).truncate(N)


def test_gaussian_series_arithmetic():
    i = GaussianRational(0, 1)
    s = TruncatedSeries([0, i], 6)
    sq = s * s
    assert sq.coeffs[2] == -1
    assert str(TruncatedSeries([0, i, 0, -i], 6)) == "i*t - i*t^3 + O(t^6)"
    assert (1 / (1 + i)) == GaussianRational(Fraction(1, 2), Fraction(-1, 2))
