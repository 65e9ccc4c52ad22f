import dataclasses
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from prymforms import prototypes as pr
from prymforms.dynamics import horocycle, kernel_deform
from prymforms.quadfield import QF
from prymforms.surface import (
    Cyl,
    alpha_coefficients,
    area,
    assemble,
    classify_stability,
    distinguished_pair,
    from_json,
    from_json_text,
    genus,
    involution_orbits,
    is_isomorphic,
    relabel,
    to_json,
    to_json_text,
    validate,
)

from support import one_zero_surface, one_zero_permutations, parabolic_stable_covers


def q5(v):
    return QF.of(F(v), 5)


def example_surfaces():
    out = [pr.unit_torus(), pr.five_cylinder_prym112(), pr.four_cylinder_prym22(), pr.unstable_three_cylinder()]
    p = pr.ThreeToriProto(1, 2, 0, 1)
    out.append(pr.build_three_tori(p, (p.lam / 4, 0)))
    h = pr.H2Proto(1, 1, 0, -1)
    out.append(pr.build_h2_surface(h))
    out += [pr.build_double_cover(h, m)[0] for m in ("model1", "model2")]
    out.append(one_zero_surface(one_zero_permutations()[0]))
    return out


# validate -----------------------------------------------------------------------

def test_unit_torus_is_valid():
    assert validate(pr.unit_torus()) == []


def test_boundary_sum_mismatch_is_reported():
    cyls = [
        Cyl("C0", q5(1), q5(1), q5(0), ("a",), ("b",)),
        Cyl("C1", q5(2), q5(1), q5(0), ("b",), ("a",)),
    ]
    X = assemble(5, cyls, {"a": q5(1), "b": q5(2)})
    errs = validate(X)
    assert any("boundary sum mismatch" in e for e in errs)


def test_missing_connection_is_reported():
    cyls = [Cyl("C0", q5(1), q5(1), q5(0), ("a",), ("a",))]
    X = assemble(5, cyls, {"a": q5(1)})
    X = X.replace(cyls=(dataclasses.replace(X.cyls[0], top=("a", "a")),))
    assert any("occurs 2 times" in e for e in validate(X))


def test_twist_is_normalized_on_construction():
    c = Cyl("C0", q5(2), q5(1), q5(F(-7, 2)), ("a",), ("a",))
    assert c.twist == F(1, 2)


def test_non_involution_is_reported():
    X = pr.four_cylinder_prym22()
    bad = dataclasses.replace(X.inv, cyl_perm={"C1": "C2", "C2": "C3", "C3": "C4", "C4": "C1"})
    assert any("involution" in e for e in validate(X.replace(inv=bad)))


def test_three_tori_surface_is_valid():
    for D in (17, 33, 41):
        for p in pr.enumerate_three_tori(D):
            x = min(p.lam, QF.of(p.w, D)) / 3
            assert validate(pr.build_three_tori(p, (x, 0))) == []


@pytest.mark.parametrize("X", example_surfaces(), ids=lambda X: X.tag)
def test_constructors_validate(X):
    assert validate(X) == []


# stability and alpha ----------------------------------------------------------------

def test_single_zero_surfaces_are_stable():
    assert classify_stability(pr.unit_torus()) == "stable"
    assert classify_stability(pr.build_h2_surface(pr.H2Proto(1, 1, 0, -1))) == "stable"


def test_three_tori_slit_surface_is_unstable():
    p = pr.ThreeToriProto(1, 1, 0, 1)
    X = pr.build_three_tori(p, (F(1, 10), 0))
    assert validate(X) == []
    assert classify_stability(X) == "unstable"


def test_four_cylinder_prym22_surfaces_are_stable():
    assert classify_stability(pr.four_cylinder_prym22()) == "stable"
    for _, _, X in parabolic_stable_covers(limit=8):
        assert len(X.cyls) == 4 and classify_stability(X) == "stable"


def test_alpha_on_five_cylinder_model():
    X = pr.five_cylinder_prym112()
    alpha = alpha_coefficients(X)
    reps = [c for c, _ in involution_orbits(X)]
    assert [alpha[c] for c in reps] == [-1, 0, F(1, 2)]


def test_alpha_vanishes_with_one_zero():
    X = one_zero_surface(one_zero_permutations()[3])
    assert set(alpha_coefficients(X).values()) == {0}


def test_alpha_requires_stability():
    with pytest.raises(ValueError):
        alpha_coefficients(pr.unstable_three_cylinder())


def test_area_relation_on_stable_examples():
    surfaces = [pr.five_cylinder_prym112(), pr.four_cylinder_prym22()]
    surfaces += [X for _, _, X in parabolic_stable_covers(limit=10)]
    for X in surfaces:
        alpha = alpha_coefficients(X)
        total = sum((X.cyl[c].width * (alpha[c] * b) for c, b in involution_orbits(X)), X.q(0))
        assert total == 0


def test_distinguished_pair():
    assert distinguished_pair(pr.five_cylinder_prym112()) == ("P", "Q")
    assert distinguished_pair(pr.unit_torus()) is None


# orbits, area, cone angles ------------------------------------------------------------

def test_orbits_of_four_cylinder_model():
    assert set(involution_orbits(pr.four_cylinder_prym22())) == {("C2", 1), ("C3", 1), ("C1", 2)}


def test_orbits_of_three_tori_surface():
    p = pr.ThreeToriProto(1, 2, 0, 1)
    X = pr.build_three_tori(p, (p.lam / 5, 0))
    assert involution_orbits(X) == [("C0", 1), ("C1", 2)]


def test_area_of_unit_torus():
    assert area(pr.unit_torus()) == 1


@pytest.mark.parametrize("proto", [(1, 2, 0, 1), (2, 1, 0, -1), (1, 1, 0, -3), (2, 2, 1, 3)])
def test_area_of_three_tori_surface(proto):
    p = pr.ThreeToriProto(*proto)
    for frac in (F(1, 7), F(1, 3)):
        X = pr.build_three_tori(p, (min(p.lam, QF.of(p.w, p.disc)) * frac, 0))
        assert area(X) == p.lam * p.lam + 2 * p.w * p.h


def test_prym22_cone_angles():
    for X in [pr.four_cylinder_prym22()] + [X for _, _, X in parabolic_stable_covers(limit=4)]:
        assert sorted(z.order for z in X.zeros) == [2, 2]
        assert genus(X) == 3


@given(st.fractions(min_value=F(-1, 3), max_value=F(1, 3), max_denominator=40),
       st.fractions(min_value=F(-1, 5), max_value=F(1, 5), max_denominator=40))
def test_area_invariant_under_small_kernel_moves(x, y):
    X = pr.five_cylinder_prym112()
    Y = kernel_deform(X, (x, y))
    assert area(Y) == area(X)
    assert classify_stability(Y) == "stable"


@given(st.fractions(min_value=-5, max_value=5, max_denominator=30))
def test_stability_invariant_under_horocycle(s):
    for X in (pr.four_cylinder_prym22(), pr.unstable_three_cylinder()):
        assert classify_stability(horocycle(X, s)) == classify_stability(X)


# json and isomorphism -------------------------------------------------------------------

@pytest.mark.parametrize("X", example_surfaces(), ids=lambda X: X.tag)
def test_json_round_trip(X):
    assert from_json(to_json(X)) == X
    assert from_json_text(to_json_text(X)) == X
    assert to_json_text(from_json_text(to_json_text(X))) == to_json_text(X)


def test_relabeled_surface_is_isomorphic():
    X = pr.four_cylinder_prym22()
    Y = relabel(X, zmap={"P": "Q", "Q": "P"}, cmap={"C1": "K1", "C2": "K2", "C3": "K3", "C4": "K4"},
                smap={a: a.upper() for a in X.sc})
    assert Y != X
    assert is_isomorphic(X, Y)


def test_different_twists_are_not_isomorphic():
    X = pr.unit_torus()
    Y = pr.torus(5, 1, 1, F(1, 3))
    assert not is_isomorphic(X, Y)
