from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from prymforms import prototypes as pr
from prymforms.periods import build_period_data, check_eigenform, proper_discriminant
from prymforms.quadfield import QF
from prymforms.surface import (
    SurfaceError,
    area,
    classify_stability,
    involution_orbits,
    is_isomorphic,
    relabel,
    validate,
)

from support import nonsquare_discs


def as_tuples(protos):
    return [p.astuple() for p in protos]


# enumeration against the frozen brute-force tables -------------------------------

def test_three_tori_matches_oracle(oracles):
    for key, expected in oracles["three_tori"].items():
        got = as_tuples(pr.enumerate_three_tori(int(key)))
        assert sorted(got) == sorted(map(tuple, expected)), key
        assert len(set(got)) == len(got)


def test_h2_splitting_matches_oracle(oracles):
    for key, expected in oracles["h2_splitting"].items():
        got = as_tuples(pr.enumerate_h2_splitting(int(key)))
        assert sorted(got) == sorted(map(tuple, expected)), key


def test_enumeration_order():
    for D in (17, 33, 100, 161):
        ps = pr.enumerate_three_tori(D)
        keys = [(p.e, p.w, p.h, p.t) for p in ps]
        assert keys == sorted(keys)


def test_three_tori_d17():
    assert sorted(as_tuples(pr.enumerate_three_tori(17))) == sorted(
        [(1, 2, 0, 1), (1, 2, 0, -1), (2, 1, 0, 1), (2, 1, 0, -1), (1, 1, 0, 3), (1, 1, 0, -3)]
    )


def test_three_tori_d9_and_d4():
    assert sorted(as_tuples(pr.enumerate_three_tori(9))) == [(1, 1, 0, -1), (1, 1, 0, 1)]
    assert pr.enumerate_three_tori(4) == []


def test_h2_small_discriminants():
    assert as_tuples(pr.enumerate_h2_splitting(5)) == [(1, 1, 0, -1)]
    assert sorted(as_tuples(pr.enumerate_h2_splitting(8))) == [(1, 1, 0, -2), (2, 1, 0, 0)]
    lam = pr.enumerate_h2_splitting(5)[0].lam
    assert lam == QF(F(-1, 2), F(1, 2), 5)
    assert 0 < lam < 1


def test_bad_discriminant_rejected():
    with pytest.raises(ValueError):
        pr.enumerate_three_tori(7)


@pytest.mark.parametrize("args", [(0, 1, 0, 1), (2, 2, 0, 2), (2, 2, 2, 1), (1, 1, 1, 1)])
def test_invalid_three_tori_quadruples(args):
    with pytest.raises(ValueError):
        pr.ThreeToriProto(*args)


def test_h2_window_enforced():
    with pytest.raises(ValueError):
        pr.H2Proto(1, 1, 0, 1)  # lambda is the golden ratio, larger than w


def test_parse_proto():
    p = pr.parse_proto("(1,2,0,1):17", "three-tori")
    assert p == pr.ThreeToriProto(1, 2, 0, 1)
    assert str(p) == "(1,2,0,1):17"
    assert pr.parse_proto(" 1,1,0,-1 ", "h2") == pr.H2Proto(1, 1, 0, -1)
    with pytest.raises(ValueError):
        pr.parse_proto("(1,2,0,1):16", "three-tori")
    with pytest.raises(ValueError):
        pr.parse_proto("(1,2,0)", "three-tori")


# constructions --------------------------------------------------------------------

def test_torus_triple_at_zero_slit():
    p = pr.ThreeToriProto(1, 2, 0, 1)
    T = pr.build_three_tori(p, (0, 0))
    assert isinstance(T, pr.TorusTriple) and T.tag == "E(0,0,0)"
    q = lambda v: QF.of(v, 17)  # noqa: E731
    assert T.lattices[0] == ((p.lam, q(0)), (q(0), p.lam))
    assert T.lattices[1] == T.lattices[2] == ((q(1), q(0)), (q(0), q(2)))
    assert T.area() == p.lam * p.lam + 4


def test_three_tori_example_slit():
    X = pr.build_three_tori(pr.ThreeToriProto(1, 1, 0, 1), (F(1, 10), 0))
    assert validate(X) == []
    assert classify_stability(X) == "unstable"
    pq = [s for s in X.scs if (s.from_zero, s.to_zero) == ("P", "Q")]
    assert all(s.from_zero != s.to_zero for s in X.scs)
    assert len(pq) == 3 and {s.length for s in pq} == {QF.of(F(1, 10), 9)}


def test_three_tori_slit_limits():
    p = pr.ThreeToriProto(1, 2, 0, 1)
    with pytest.raises(SurfaceError):
        pr.build_three_tori(p, (1, 0))
    with pytest.raises(SurfaceError):
        pr.build_three_tori(p, (F(1, 10), F(1, 10)))


def test_slit_sign_gives_isomorphic_surfaces():
    p = pr.ThreeToriProto(2, 1, 0, -1)
    x = F(1, 7)
    X, Y = pr.build_three_tori(p, (x, 0)), pr.build_three_tori(p, (-x, 0))
    assert X != Y
    assert is_isomorphic(X, Y)


def test_golden_l():
    h = pr.H2Proto(1, 1, 0, -1)
    X = pr.build_h2_surface(h)
    assert validate(X) == [] and len(X.cyls) == 2
    assert classify_stability(X) == "stable"
    assert check_eigenform(X.periods.endo, build_period_data(X)) == h.lam


def test_cover_discriminants_examples():
    h = pr.H2Proto(1, 1, 0, -1)
    assert pr.build_double_cover(h, "model1")[1] == 20
    assert pr.build_double_cover(h, pr.CoverModel.MODEL2)[1] == 20


@pytest.mark.parametrize("D", nonsquare_discs(5, 80))
def test_covers_share_area(D):
    for h in pr.enumerate_h2_splitting(D):
        areas = {area(pr.build_double_cover(h, m)[0]) for m in ("model1", "model2")}
        assert areas == {(h.lam * h.lam + h.w * h.h) * 2}


def test_cover_structure():
    h = pr.H2Proto(2, 1, 0, -1)
    for m in ("model1", "model2"):
        X, Dt = pr.build_double_cover(h, m)
        assert len(X.cyls) == 4 and len(involution_orbits(X)) == 3
        assert Dt == proper_discriminant(X.periods.endo)[1]
        assert check_eigenform(X.periods.endo, X.periods) == 2 * h.lam


# Weierstrass marking -------------------------------------------------------------

def test_golden_l_weierstrass_sites():
    X = pr.build_h2_surface(pr.H2Proto(1, 1, 0, -1))
    sites = pr.weierstrass_sites(X)
    assert len(sites) == 5  # six fixed points in genus 2, one is the zero
    for site in sites:
        Y = pr.mark_weierstrass_point(X, site)
        assert validate(Y) == []
        assert area(Y) == area(X)
        assert sorted(z.order for z in Y.zeros) == [0, 2]


def test_marking_a_moved_connection_fails():
    X = pr.build_h2_surface(pr.H2Proto(1, 1, 0, -1))
    with pytest.raises(SurfaceError):
        pr.mark_weierstrass_point(X, ("sc", "a"))


# properties -------------------------------------------------------------------------

protos = st.sampled_from([p for D in nonsquare_discs(5, 120) for p in pr.enumerate_three_tori(D)])


@given(protos, st.fractions(min_value=F(1, 50), max_value=F(49, 50)))
def test_three_tori_area_is_slit_independent(p, frac):
    x = min(p.lam, QF.of(p.w, p.disc)) * frac
    X = pr.build_three_tori(p, (x, 0))
    assert validate(X) == []
    assert area(X) == p.lam * p.lam + 2 * p.w * p.h


@given(protos)
def test_relabeled_three_tori_is_isomorphic(p):
    X = pr.build_three_tori(p, (min(p.lam, QF.of(p.w, p.disc)) / 3, 0))
    Y = relabel(X, cmap={"C0": "Z0", "C1": "Z2", "C2": "Z1"})
    assert is_isomorphic(X, Y)
