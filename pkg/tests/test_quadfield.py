from fractions import Fraction as F
from math import sqrt

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from prymforms.quadfield import (
    NEGATIVE,
    POSITIVE,
    ZERO,
    FieldMismatch,
    QF,
    check_disc,
    format_qf,
    parse_qf,
    qf_conjugate,
    qf_norm,
    qf_sign,
)

DISCS = [5, 8, 12, 13, 17, 21, 24, 28, 33, 41, 9, 16, 36]
NONSQUARE = [D for D in DISCS if int(sqrt(D)) ** 2 != D]

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=60)


@st.composite
def elements(draw, D=None):
    D = D if D is not None else draw(st.sampled_from(DISCS))
    return QF(draw(rationals), draw(rationals), D)


@st.composite
def pairs(draw):
    D = draw(st.sampled_from(DISCS))
    return draw(elements(D)), draw(elements(D))


# examples ---------------------------------------------------------------------

def test_sign_of_rational():
    assert qf_sign(QF(F(1), F(0), 5)) == POSITIVE


def test_sign_when_radical_dominates():
    assert qf_sign(QF(F(-1), F(1), 5)) == POSITIVE


def test_sign_of_conjugate_golden_ratio():
    assert qf_sign(QF(F(1, 2), F(-1, 2), 5)) == NEGATIVE


def test_sign_zero():
    assert qf_sign(QF(F(0), F(0), 17)) == ZERO


def test_conjugate_of_zero():
    z = QF(F(0), F(0), 5)
    assert qf_conjugate(z) == z


def test_conjugate_of_lambda_17():
    lam = QF(F(1, 2), F(1, 2), 17)
    assert qf_conjugate(lam) == QF(F(1, 2), F(-1, 2), 17)


def test_conjugate_multiplicative_example():
    x, y = QF(F(1), F(1), 8), QF(F(2), F(-1), 8)
    assert qf_conjugate(x * y) == qf_conjugate(x) * qf_conjugate(y)


def test_norm_examples():
    assert qf_norm(QF(F(1, 2), F(1, 2), 17)) == -4
    assert qf_norm(QF.of(F(3, 7), 13)) == F(9, 49)


@pytest.mark.parametrize("w,h,e", [(1, 2, 1), (2, 1, -1), (1, 1, 3), (3, 2, -5)])
def test_norm_of_eigenvalue_is_product_of_roots(w, h, e):
    D = e * e + 8 * w * h
    lam = (QF.of(e, D) + QF.sqrt(D)) / 2
    assert lam * lam == lam * e + 2 * w * h
    assert qf_norm(lam) == -2 * w * h


def test_square_discriminant_folds():
    x = QF(F(1), F(2), 9)
    assert x.b == 0 and x.a == 7
    assert x.is_rational
    assert qf_conjugate(x) == x


def test_mixed_fields_rejected():
    with pytest.raises(FieldMismatch):
        QF.sqrt(5) + QF.sqrt(13)
    with pytest.raises(FieldMismatch):
        QF.of(QF.sqrt(5), 8)


@pytest.mark.parametrize("D", [0, -3, 2, 3, 6, 7])
def test_invalid_discriminants(D):
    with pytest.raises(ValueError):
        check_disc(D)


def test_floats_rejected():
    with pytest.raises(TypeError):
        QF(0.5, F(0), 5)


def test_inverse_of_zero():
    with pytest.raises(ZeroDivisionError):
        QF.of(0, 5).inverse()


@pytest.mark.parametrize(
    "text,expected",
    [
        ("3", QF(F(3), F(0), 5)),
        ("-1/2 + 1/2*sqrt(5)", QF(F(-1, 2), F(1, 2), 5)),
        ("sqrt(5)", QF(F(0), F(1), 5)),
        ("- 2/3*sqrt(5)", QF(F(0), F(-2, 3), 5)),
        ("1 - sqrt(5)", QF(F(1), F(-1), 5)),
    ],
)
def test_parse_examples(text, expected):
    assert parse_qf(text, 5) == expected


@pytest.mark.parametrize("text", ["", "1 2", "sqrt(7)", "abc", "1 + + 2"])
def test_parse_rejects(text):
    with pytest.raises(ValueError):
        parse_qf(text, 5)


def test_floor_and_mod():
    phi = QF(F(1, 2), F(1, 2), 5)
    assert phi.floor() == 1
    assert (-phi).floor() == -2
    assert QF(F(7, 2), F(0), 5).mod(1) == F(1, 2)
    assert (phi * 3).mod(phi) == 0


# properties ---------------------------------------------------------------------

@given(elements())
def test_text_round_trip(x):
    assert parse_qf(format_qf(x), x.D) == x


@given(elements())
def test_conjugation_is_involutive(x):
    assert qf_conjugate(qf_conjugate(x)) == x


@given(pairs())
def test_conjugation_is_a_ring_map(xy):
    x, y = xy
    assert qf_conjugate(x + y) == qf_conjugate(x) + qf_conjugate(y)
    assert qf_conjugate(x * y) == qf_conjugate(x) * qf_conjugate(y)


@given(elements())
def test_conjugation_commutes_with_inverse(x):
    assume(x)
    assert qf_conjugate(x.inverse()) == qf_conjugate(x).inverse()


@given(pairs())
def test_norm_is_multiplicative(xy):
    x, y = xy
    assert qf_norm(x * y) == qf_norm(x) * qf_norm(y)


@given(elements())
def test_norm_is_product_with_conjugate(x):
    prod = x * qf_conjugate(x)
    assert prod.is_rational and prod.a == qf_norm(x)


@given(elements())
def test_sign_antisymmetric(x):
    assert qf_sign(-x) == -qf_sign(x)
    assert (qf_sign(x) == ZERO) == (x.a == 0 and x.b == 0)


@given(elements(), st.sampled_from(NONSQUARE))
def test_sign_agrees_with_float_when_far_from_zero(x, _):
    v = float(x)
    assume(abs(v) > 1e-6)
    assert qf_sign(x) == (POSITIVE if v > 0 else NEGATIVE)


@given(pairs())
def test_order_is_translation_invariant(xy):
    x, y = xy
    assert (x < y) == (x + 7 < y + 7)
    assert (x < y) or (x == y) or (x > y)


@given(elements())
def test_floor_brackets(x):
    n = x.floor()
    assert n <= x < n + 1


@given(pairs())
def test_field_axioms(xy):
    x, y = xy
    assert x * y == y * x
    assert (x + y) - y == x
    if y:
        assert (x / y) * y == x
