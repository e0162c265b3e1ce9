import pytest

from afconormal.conormal import SpaceWithFunction, conormal_space
from afconormal.groebner import Ideal, radical_contained, radical_equal, saturate
from afconormal.polycore import PolyMap, Polynomial, parse_polynomial
from afconormal.rees import (
    PresentedModule,
    ReesSetup,
    fiber_C_of_y,
    fiber_Cy,
    kernel_check,
    rees_presentation,
    remark_identity_check,
    theorem_components_check,
)

YZ = ("y", "z")
YVW = ("y", "v", "w")


def P(text, vars):
    return parse_polynomial(text, vars)


def koszul_setup():
    M = PresentedModule(YZ, ((P("y", YZ), P("z", YZ)),))
    return ReesSetup(("y",), ("z",), (), M, (P("y", YZ), P("z", YZ)), 1, 1)


def free_setup():
    one, zero = P("1", YZ), P("0", YZ)
    M = PresentedModule(YZ, ((one, zero), (zero, one)))
    return ReesSetup(("y",), ("z",), (), M, (P("z", YZ),), 1, 2)


def jacobian_setup(eq):
    G = PolyMap(YVW, [P(eq, YVW)])
    return ReesSetup(("y",), ("v", "w"), G.components, PresentedModule.jacobian_module(G),
                     (P("v", YVW), P("w", YVW)), 1, 1)


def strs(ideal):
    return sorted(str(g) for g in ideal.groebner_basis())


def test_free_module_has_trivial_presentation():
    R = free_setup()
    P_ = rees_presentation(R)
    assert P_.ideal.generators == () or all(g.is_zero() for g in P_.ideal.groebner_basis())


def test_koszul_relation():
    R = koszul_setup()
    P_ = rees_presentation(R)
    assert strs(P_.ideal) == ["z*T1 - y*T2"]
    assert kernel_check(P_, R)
    assert P_.check_homogeneous()


@pytest.mark.parametrize("eq,vars,y", [
    ("w^2 - v^3", YVW, ("y",)),
    ("w^2 - v^3 - y*v^2", YVW, ("y",)),
    ("x^2 - z*y^2", ("x", "y", "z"), ()),
])
def test_jacobian_module_projan_is_conormal(eq, vars, y):
    G = PolyMap(vars, [P(eq, vars)])
    z = tuple(v for v in vars if v not in y)
    R = ReesSetup(y, z, G.components, PresentedModule.jacobian_module(G), (), 2, 1)
    pres = rees_presentation(R)
    assert kernel_check(pres, R)
    assert pres.check_homogeneous()
    ring = pres.base_vars + pres.T_vars
    projan = saturate(pres.ideal, [Polynomial.variable(t, ring) for t in pres.T_vars])
    C = conormal_space(SpaceWithFunction(G, None, y, (), 1)).rename_covectors(pres.T_vars)
    assert radical_equal(projan, C.ideal.change_ring(ring))


def test_koszul_fibers():
    R = koszul_setup()
    origin = {"y": 0}
    Cy = fiber_Cy(rees_presentation(R), R.y_vars, origin)
    Cofy = fiber_C_of_y(R, origin)
    assert strs(Cy) == ["z*T1"]
    assert strs(Cofy) == ["T1"]


@pytest.mark.parametrize("make", [koszul_setup, free_setup,
                                  lambda: jacobian_setup("w^2 - v^3"),
                                  lambda: jacobian_setup("w^2 - v^3 - y*v^2")])
def test_C_of_y_lies_in_Cy(make):
    R = make()
    origin = {"y": 0}
    Cy = fiber_Cy(rees_presentation(R), R.y_vars, origin)
    Cofy = fiber_C_of_y(R, origin).change_ring(Cy.vars)
    assert radical_contained(Cy, Cofy)


def test_saturation_identity_with_vertical_component():
    report = remark_identity_check(koszul_setup())
    assert report.identity_holds
    assert not report.plain_equal
    assert report.as_dict()["vertical_part_present"]


def test_saturation_identity_for_deformed_cusp():
    report = remark_identity_check(jacobian_setup("w^2 - v^3 - y*v^2"))
    assert report.identity_holds
    assert not report.plain_equal
    # the y-column of the jacobian restricts to a multiple of the v-column
    assert "T1 - 1/3*T2" in str(report.C_of_y)


def test_saturation_identity_trivial_family():
    report = remark_identity_check(jacobian_setup("w^2 - v^3"))
    assert report.identity_holds
    assert report.plain_equal


def test_saturation_identity_needs_S():
    R = koszul_setup()
    R.S = ()
    with pytest.raises(ValueError):
        remark_identity_check(R)


@pytest.mark.parametrize("make,dim,r,verdict", [
    (free_setup, 1, 2, "holds"),
    (lambda: jacobian_setup("w^2 - v^3"), 0, 1, "holds"),
    (koszul_setup, 1, 1, "inconclusive"),
    (lambda: jacobian_setup("w^2 - v^3 - y*v^2"), 1, 1, "inconclusive"),
])
def test_components_check(make, dim, r, verdict):
    rep = theorem_components_check(make())
    assert (rep.fiber_dimension, rep.r, rep.verdict) == (dim, r, verdict)
    assert rep.hypothesis_holds == (dim < r)
    assert rep.as_dict()["cycles_compared"] is False


def test_two_generator_module_over_plane():
    V = ("y", "a", "b")
    M = PresentedModule(V, ((P("a", V), P("b", V)),))
    R = ReesSetup(("y",), ("a", "b"), (), M, (P("a", V), P("b", V)), 2, 1)
    assert R.r == 2
    assert remark_identity_check(R).identity_holds
    assert theorem_components_check(R).verdict == "holds"


def test_free_locus_samples():
    R = jacobian_setup("w^2 - v^3")
    out = R.check_free_locus([{"y": 0, "v": 0, "w": 0}, {"y": 3, "v": 1, "w": 1}, {"y": 0, "v": 4, "w": 8}])
    assert [o["rank"] for o in out] == [0, 1, 1]
    assert all(o["consistent"] for o in out)
    with pytest.raises(ValueError):
        R.check_free_locus([{"y": 0, "v": 1, "w": 0}])


def test_module_validation():
    with pytest.raises(ValueError):
        PresentedModule(YZ, ((P("y", YZ),), (P("y", YZ), P("z", YZ))))
    M = PresentedModule.from_columns(YZ, [[P("y", YZ)], [P("z", YZ)]])
    assert (M.p, M.s) == (1, 2)
    assert M.rank_at({"y": 0, "z": 0}) == 0
    assert M.rank_at({"y": 1, "z": 0}) == 1
