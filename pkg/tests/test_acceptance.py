"""Acceptance suite: one marked group per criterion, summarized at the end of the run."""

from fractions import Fraction as F
from math import gcd

import pytest

from prymforms import prototypes as pr
from prymforms.degeneration import (
    LimitKind,
    break_zero,
    class_beta,
    classify_limit,
    interval_from_holonomies,
    kernel_interval,
    pq_holonomies,
    separatrix_permutation,
    split_slit_pair,
    veech_obstruction,
)
from prymforms.dynamics import (
    Direction,
    approximate_shift,
    choose_orbits,
    good_time,
    horocycle,
    kernel_deform,
    moduli_relation,
    redecompose,
    same_diagram,
)
from prymforms.periods import check_eigenform, check_self_adjoint
from prymforms.quadfield import QF
from prymforms.surface import (
    alpha_coefficients,
    classify_stability,
    involution_orbits,
    is_isomorphic,
)

from support import (
    nonsquare_discs,
    one_zero_surface,
    parabolic_stable_covers,
    random_one_zero_permutations,
    sector_vector,
    three_tori_instances,
)

criterion = pytest.mark.criterion


def assert_moduli_relations(X):
    zero = X.q(0)
    orbits = involution_orbits(X)
    weighted = sum((X.cyl[c].modulus * (X.cyl[c].width.norm() * b) for c, b in orbits), zero)
    assert weighted == 0
    if classify_stability(X) != "stable":
        return
    alpha = alpha_coefficients(X)
    rel = moduli_relation(X)
    assert sum((X.cyl[c].width.inverse() * (alpha[c] * k) for c, k in zip(rel.reps, rel.r)), zero) == 0
    assert sum((X.cyl[c].width * (alpha[c] * b) for c, b in orbits), zero) == 0


def marked_sources(max_disc):
    out = []
    for D in nonsquare_discs(5, max_disc):
        for h in pr.enumerate_h2_splitting(D):
            X = pr.build_h2_surface(h)
            out += [pr.mark_weierstrass_point(X, site) for site in pr.weierstrass_sites(X)]
    return out


# 1 ----------------------------------------------------------------------------------

@criterion(1, "prototype enumeration matches brute force")
def test_enumeration_oracles(oracles):
    assert len(oracles["three_tori"]) == len([D for D in range(1, 401) if D % 4 in (0, 1)])
    for family, enum in (("three_tori", pr.enumerate_three_tori), ("h2_splitting", pr.enumerate_h2_splitting)):
        for key, expected in oracles[family].items():
            assert sorted(p.astuple() for p in enum(int(key))) == sorted(map(tuple, expected)), (family, key)


@criterion(1, "prototype enumeration matches brute force")
def test_enumeration_spot_values():
    assert len(pr.enumerate_three_tori(17)) == 6
    assert len(pr.enumerate_h2_splitting(5)) == 1
    assert len(pr.enumerate_h2_splitting(8)) == 2


# 2 ----------------------------------------------------------------------------------

@criterion(2, "exact real multiplication on every prototype")
def test_real_multiplication():
    checked = 0
    for D in nonsquare_discs(5, 200):
        for p in pr.enumerate_three_tori(D):
            T, per = pr.three_tori_endo(p), pr.three_tori_periods(p)
            assert check_self_adjoint(T, per.form) and T.satisfies_quadratic()
            assert (T.e, T.c) == (p.e, 2 * p.w * p.h)
            assert check_eigenform(T, per) == p.lam and p.lam > 0
            checked += 1
        for h in pr.enumerate_h2_splitting(D):
            T, per = pr.h2_endo(h), pr.h2_periods(h)
            assert check_self_adjoint(T, per.form) and T.satisfies_quadratic()
            assert (T.e, T.c) == (h.e, h.w * h.h)
            assert check_eigenform(T, per) == h.lam and h.lam > 0
            checked += 1
    assert checked > 1000


# 3 ----------------------------------------------------------------------------------

@criterion(3, "double cover discriminant parity law")
def test_cover_parity_law():
    for D in nonsquare_discs(5, 200):
        for h in pr.enumerate_h2_splitting(D):
            for model, odd in (("model1", h.h % 2), ("model2", h.w % 2)):
                _, Dt = pr.build_double_cover(h, model)
                assert Dt in (D, 4 * D)
                assert (Dt == 4 * D) == bool(odd), (h, model)
                if D % 8 == 5:
                    assert Dt == 4 * D


# 4 ----------------------------------------------------------------------------------

def constructed_eigenforms():
    out = [X for _, _, X in three_tori_instances(limit=400, max_disc=100)]
    out += [X for _, _, X in parabolic_stable_covers(limit=400, max_disc=100)]
    out += [pr.build_h2_surface(h) for D in nonsquare_discs(5, 100) for h in pr.enumerate_h2_splitting(D)]
    out += [split_slit_pair(src, 0, (F(1, 20), 0)).surface for src in marked_sources(24)]
    return out


@criterion(4, "moduli relations on constructed eigenforms")
def test_moduli_relations():
    surfaces = constructed_eigenforms()
    assert len(surfaces) > 300
    assert any(classify_stability(X) == "stable" for X in surfaces)
    for X in surfaces:
        assert_moduli_relations(X)


# 5 ----------------------------------------------------------------------------------

@criterion(5, "good times make the horocycle a kernel move")
def test_good_time_commutation():
    covers = parabolic_stable_covers(limit=12)
    assert len(covers) >= 10
    for _, _, X in covers:
        ch = choose_orbits(X)
        for k1 in range(-5, 6):
            for k3 in range(-5, 6):
                s, x = good_time(X, k1, k3, ch)
                assert same_diagram(horocycle(X, s), kernel_deform(X, (x, 0))), (k1, k3)


@criterion(5, "good times make the horocycle a kernel move")
def test_approximate_shift_rate():
    for _, _, X in parabolic_stable_covers(limit=12):
        lam = X.cyl["B1"].height
        for target in (lam / 3, lam * F(7, 5), QF.of(F(2, 9), X.disc)):
            for depth in (2, 4, 6):
                sh = approximate_shift(X, target, depth)
                assert sh.gap < sh.bound / sh.q


# 6 ----------------------------------------------------------------------------------

@criterion(6, "collapse then rebuild is the identity")
def test_three_tori_round_trips():
    instances = three_tori_instances(limit=12)
    assert len(instances) >= 10
    for p, x, X in instances:
        lo, hi = kernel_interval(X)
        assert (lo, hi) == (-x, min(p.lam, QF.of(p.w, p.disc)) - x)
        assert (lo, hi) == interval_from_holonomies(pq_holonomies(X).values())
        lim = classify_limit(X, "min")
        assert lim.kind is LimitKind.THREE_TORI and len(lim.vanishing) == 3
        assert lim.proto == p and pr.build_three_tori(lim.proto, (x, 0)) == X


@criterion(6, "collapse then rebuild is the identity")
def test_zero_break_round_trips():
    perms = random_one_zero_permutations(10, seed=7)
    for pi in perms:
        src = one_zero_surface(pi)
        for k in (0, 1):
            v = (F(1, 10), 0) if k % 2 == 0 else (F(-1, 10), 0)
            Y = break_zero(src, k, v)
            lo, hi = kernel_interval(Y, ("P", "Q"))
            assert lo < 0 < hi
            assert (lo, hi) == interval_from_holonomies(pq_holonomies(Y, ("P", "Q")).values())
            lim = classify_limit(Y, "min" if k % 2 == 0 else "max", ("P", "Q"))
            assert lim.kind is LimitKind.PRYM4 and len(lim.vanishing) == 1
            assert is_isomorphic(lim.surface, src)


@criterion(6, "collapse then rebuild is the identity")
def test_slit_pair_round_trips():
    sources = marked_sources(24)
    assert len(sources) >= 10
    for src in sources:
        res = split_slit_pair(src, 0, (F(1, 20), 0))
        lim = classify_limit(res.surface, "min")
        assert lim.kind is LimitKind.PRYM2_STAR and len(lim.vanishing) == 2
        assert is_isomorphic(lim.surface.replace(periods=None), src.replace(periods=None))


# 7 ----------------------------------------------------------------------------------

@criterion(7, "zero breaking adds one cylinder per sector cycle")
def test_sector_cycle_law(oracles):
    table = oracles["sector_cycles"]
    misses = []
    for pi in random_one_zero_permutations(20):
        src = one_zero_surface(pi)
        sp = separatrix_permutation(src, src.zeros[0].id)
        expected = table["".join(map(str, sp))]
        for k in range(10):
            Y = break_zero(src, k, sector_vector(k, F(1, 10)))
            if len(Y.cyls) != len(src.cyls) + expected[k]:
                misses.append((pi, k))
    assert not misses, f"{len(misses)} of 200 sector breaks miss the cycle count"


@criterion(7, "zero breaking adds one cylinder per sector cycle")
def test_sector_combinatorics_constant():
    for pi in random_one_zero_permutations(20):
        src = one_zero_surface(pi)
        for k in range(10):
            shapes = set()
            for mag in (F(1, 10), F(1, 20), F(1, 40)):
                Y = break_zero(src, k, sector_vector(k, mag))
                shapes.add(tuple(sorted((c.bottom, c.top) for c in Y.cyls)))
            assert len(shapes) == 1


# 8 ----------------------------------------------------------------------------------

@criterion(8, "separatrix tracing matches unfolding")
def test_torus_unfolding(oracles):
    rows = oracles["torus_unfolding"]
    pairs = {(p, q) for p in range(-10, 11) for q in range(-10, 11) if gcd(p, q) == 1}
    assert {(r["p"], r["q"]) for r in rows} == pairs
    for row in rows:
        (c,) = redecompose(pr.unit_torus(), Direction.of(row["p"], row["q"], 5)).cyls
        assert (str(c.width), str(c.height), str(c.twist)) == (row["width"], row["height"], row["twist"])


@criterion(8, "separatrix tracing matches unfolding")
def test_three_tori_lattice_directions():
    for _, _, X in three_tori_instances(limit=8):
        for a in range(-3, 4):
            for b in range(1, 4):
                if gcd(a, b) == 1:
                    assert_moduli_relations(redecompose(X, Direction.of(a, b, X.disc)))


# 9 ----------------------------------------------------------------------------------

def small_three_tori():
    return [p for D in nonsquare_discs(5, 100) for p in pr.enumerate_three_tori(D)]


@criterion(9, "obstruction threshold on every small prototype")
def test_obstruction_everywhere():
    failures = []
    for p in small_three_tori():
        beta, beta_p = class_beta(p, (0, 1))[0], class_beta(p, (1, 2))[0]
        if beta == beta_p:
            failures.append((str(p), "classes coincide"))
            continue
        o = veech_obstruction(p)
        if not o.s2 > 0:
            failures.append((str(p), "threshold not positive"))
    assert not failures, f"{len(failures)} prototypes fail: {failures[:5]}"


@criterion(9, "obstruction threshold on every small prototype")
def test_obstruction_deterministic():
    for p in small_three_tori():
        if class_beta(p, (0, 1))[0] != class_beta(p, (1, 2))[0]:
            assert veech_obstruction(p) == veech_obstruction(p)
