import pytest

from afconormal.conormal import (
    SpaceWithFunction,
    af_exact,
    conormal_by_multipliers,
    conormal_of_Y,
    conormal_space,
    exceptional_image,
    fiber_at,
    join_point_set,
    point_ideal,
    relative_conormal,
    verify_decomposition,
)
from afconormal.groebner import Ideal, dimension, radical_contained, radical_equal
from afconormal.polycore import PolyMap, parse_polynomial


def space(eqs, vars, f=None, y=(), codim=None):
    G = PolyMap(vars, [parse_polynomial(e, vars) for e in eqs])
    fp = parse_polynomial(f, vars) if f is not None else None
    return SpaceWithFunction(G, fp, y, (), len(eqs) if codim is None else codim)


def cov_ideal(gens, cov):
    return Ideal([parse_polynomial(g, cov) for g in gens], cov)


def strs(ideal):
    return sorted(str(g) for g in ideal.groebner_basis())


XY = ("x", "y")
XYZ = ("x", "y", "z")
UMBRELLA = (["x^2 - z*y^2"], XYZ)


def test_conormal_of_a_line():
    C = conormal_space(space(["y"], XY))
    assert strs(C.ideal) == ["xi_x", "y"]


def test_cusp_fiber_is_dy():
    S = space(["y^2 - x^3"], XY)
    F = fiber_at(conormal_space(S), S.origin())
    assert radical_equal(F, cov_ideal(["xi_x"], F.vars))


def test_umbrella_agrees_with_multiplier_oracle():
    S = space(*UMBRELLA)
    assert radical_equal(conormal_space(S).ideal, conormal_by_multipliers(S).ideal)


def test_umbrella_fiber_over_origin():
    S = space(*UMBRELLA)
    F = fiber_at(conormal_space(S), S.origin())
    assert radical_equal(F, cov_ideal(["xi_y"], F.vars))


@pytest.mark.parametrize("eqs,vars", [
    (["y^2 - x^3"], XY),
    (["x*y"], XY),
    (["x^2 - z*y^2"], XYZ),
    (["x*y - z^2"], XYZ),
    (["y", "z"], XYZ),
])
def test_minor_construction_matches_multipliers(eqs, vars):
    S = space(eqs, vars)
    assert radical_equal(conormal_space(S).ideal, conormal_by_multipliers(S).ideal)


@pytest.mark.parametrize("eqs,vars", [(["y^2 - x^3"], XY), UMBRELLA, (["x*y - z^2"], XYZ)])
def test_conormal_is_covector_homogeneous_and_lagrangian_sized(eqs, vars):
    S = space(eqs, vars)
    C = conormal_space(S)
    assert C.check_homogeneous()
    # affine cone over C(X) has the dimension of the ambient space
    assert dimension(C.ideal) == len(vars)


def test_codimension_is_validated():
    with pytest.raises(ValueError):
        conormal_space(space(["x^2 - z*y^2"], XYZ, codim=2))


def test_conormal_of_Y():
    C = conormal_of_Y(1, 2)
    assert strs(C.ideal) == ["xi_y1", "z1", "z2"]
    assert conormal_of_Y(2, 1, ("a", "b"), ("c",)).covector_vars == ("xi_a", "xi_b", "xi_c")
    with pytest.raises(ValueError):
        conormal_of_Y(1, 1, ("a", "b"))


def test_relative_conormal_of_linear_function_on_plane():
    S = space([], ("y", "z"), "z", ("y",), 0)
    R = relative_conormal(S)
    assert strs(R.ideal) == ["xi_y"]


def test_relative_conormal_contains_conormal():
    # C(X) lies in C(X, f)
    S = space(["y^2 - x^3"], XY, "x")
    assert radical_contained(relative_conormal(S).ideal, conormal_space(S).ideal)


def test_relative_conormal_homogeneous():
    S = space(*UMBRELLA, f="x", y=("y",))
    assert relative_conormal(S).check_homogeneous()


def test_relative_conormal_rejects_everywhere_singular_f():
    with pytest.raises(ValueError):
        relative_conormal(space([], XY, "1", ("x",), 0))


# joins

def test_join_of_point_and_point_is_a_line():
    cov = ("a", "b", "c")
    J = join_point_set([1, 0, 0], cov_ideal(["a", "b"], cov))
    assert radical_equal(J, cov_ideal(["b"], cov))


def test_join_with_itself_is_the_point():
    cov = ("a", "b", "c")
    J = join_point_set([1, 0, 0], cov_ideal(["b", "c"], cov))
    assert radical_equal(J, point_ideal([1, 0, 0], cov))


def test_join_with_empty_set_is_the_point():
    cov = ("a", "b")
    J = join_point_set([0, 1], cov_ideal(["a", "b"], cov))
    assert radical_equal(J, point_ideal([0, 1], cov))


def test_join_rejects_zero_covector():
    with pytest.raises(ValueError):
        join_point_set([0, 0], cov_ideal(["a"], ("a", "b")))


# decomposition check

@pytest.mark.parametrize("eqs,vars,f,y", [
    ([], ("y", "z"), "z", ("y",)),
    ([], ("x", "y"), "x^2 + y^2", ()),
    ([], ("x", "y"), "x", ()),
    (["y^2 - x^3"], XY, "y", ()),
    (["y - x^2"], XY, "x", ()),
    (["x^2 - z*y^2"], XYZ, "z", ()),
    ([], ("y", "z"), "y*z", ("y",)),
])
def test_decomposition_holds(eqs, vars, f, y):
    S = space(eqs, vars, f, y, len(eqs))
    report = verify_decomposition(S)
    assert report.equal
    assert report.exceptional_contained
    assert report.join_contained in (True, None)


def test_join_term_dropped_exactly_for_m_squared():
    assert verify_decomposition(space([], XY, "x^2 + y^2", (), 0)).join_dropped
    assert not verify_decomposition(space([], XY, "x", (), 0)).join_dropped
    # f = y lies in m^2 + I(X) on the parabola y = x^2
    assert verify_decomposition(space(["y - x^2"], XY, "y")).join_dropped


def test_exceptional_image_homogeneous():
    S = space(["y^2 - x^3"], XY, "y")
    assert exceptional_image(S).check_homogeneous()


# exact A_f

def test_af_exact_holds_for_submersion():
    S = space([], ("y", "z"), "z + y*z", ("y",), 0)
    assert af_exact(S).holds


def test_af_exact_is_local_at_the_origin():
    # z*(1 + y) is singular along y = -1, far from the origin
    S = space([], ("y", "z"), "z*(1 + y)", ("y",), 0)
    assert af_exact(S).holds


def test_af_exact_fails_with_witness():
    S = space([], ("y", "z"), "y*z", ("y",), 0)
    v = af_exact(S)
    assert not v.holds
    assert v.per_parameter == {"y": False}
    assert v.witness_covector == {"base_point": {"y": 0, "z": 0}, "covector": {"y": 1, "z": 0}}


def test_af_exact_umbrella_with_linear_function_fails():
    S = space(*UMBRELLA, f="x", y=("y",))
    assert not af_exact(S).holds


def test_af_exact_needs_parameters():
    with pytest.raises(ValueError):
        af_exact(space([], XY, "x", (), 0))
