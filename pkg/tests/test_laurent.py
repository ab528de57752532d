"""Laurent polynomial arithmetic: exactness, immutability, involutions."""

import pytest
from hypothesis import given, strategies as st

from khcube.laurent import LaurentPoly


def L(d):
    return LaurentPoly(d)


coeff_dicts = st.dictionaries(
    st.integers(min_value=-6, max_value=6),
    st.integers(min_value=-9, max_value=9),
    max_size=6,
)


def test_constructor_drops_zero_coefficients():
    assert L({3: 0, 1: 2}).to_dict() == {1: 2}
    assert L({}) == LaurentPoly.zero()
    assert L(None) == LaurentPoly.zero()


def test_basic_queries():
    p = L({-2: 3, 5: -1})
    assert p.coeff(-2) == 3 and p.coeff(0) == 0
    assert p.min_exp == -2 and p.max_exp == 5
    assert p.abs_coeff_sum() == 4
    assert not p.is_zero()
    assert LaurentPoly.zero().is_zero()


def test_monomial_and_shift():
    t = LaurentPoly.monomial(1)
    assert t.to_dict() == {1: 1}
    assert LaurentPoly.monomial(-3, 4).to_dict() == {-3: 4}
    assert t.shift(2).to_dict() == {3: 1}
    assert L({0: 1, 2: 1}).shift(-1).to_dict() == {-1: 1, 1: 1}


def test_addition_and_negation():
    p = L({0: 1, 1: 2})
    q = L({1: -2, 3: 5})
    assert (p + q).to_dict() == {0: 1, 3: 5}
    assert (p - p).is_zero()
    assert (-p).to_dict() == {0: -1, 1: -2}


def test_multiplication_int_and_poly():
    p = L({0: 1, 1: 1})
    assert (p * 3).to_dict() == {0: 3, 1: 3}
    assert (p * p).to_dict() == {0: 1, 1: 2, 2: 1}
    assert (p * LaurentPoly.zero()).is_zero()
    # (T - T^-1)(T + T^-1) = T^2 - T^-2
    assert (L({1: 1, -1: -1}) * L({1: 1, -1: 1})).to_dict() == {2: 1, -2: -1}


def test_divide_exact_round_trip():
    a = L({2: 6, 0: -3, -1: 9})
    b = L({1: 3})
    assert (a * b).divide_exact(b) == a
    assert (a * a).divide_exact(a) == a


def test_divide_exact_rejects_inexact():
    with pytest.raises(Exception):
        L({0: 1}).divide_exact(L({0: 2}))
    with pytest.raises(Exception):
        L({2: 1, 0: 1}).divide_exact(L({1: 1, 0: 1}))


def test_divide_by_zero_rejected():
    with pytest.raises(Exception):
        L({0: 1}).divide_exact(LaurentPoly.zero())


def test_evaluation():
    p = L({2: 1, 0: -3, -1: 2})
    assert p(1) == 0
    assert p(2) == 4 - 3 + 1  # 2^2 - 3 + 2*2^-1 with exact arithmetic
    assert LaurentPoly.zero()(5) == 0


def test_reversed_variable_is_involution():
    p = L({3: 2, -1: 5})
    assert p.reversed_variable().to_dict() == {-3: 2, 1: 5}
    assert p.reversed_variable().reversed_variable() == p


def test_equality_and_hash():
    assert L({1: 1, 0: -1}) == L({0: -1, 1: 1})
    assert hash(L({2: 3})) == hash(L({2: 3}))
    assert L({1: 1}) != L({1: 2})


@given(coeff_dicts, coeff_dicts)
def test_addition_commutes(a, b):
    assert L(a) + L(b) == L(b) + L(a)


@given(coeff_dicts, coeff_dicts, coeff_dicts)
def test_multiplication_distributes(a, b, c):
    pa, pb, pc = L(a), L(b), L(c)
    assert pa * (pb + pc) == pa * pb + pa * pc


@given(coeff_dicts, coeff_dicts)
def test_product_divides_back(a, b):
    pa, pb = L(a), L(b)
    if pb.is_zero():
        return
    assert (pa * pb).divide_exact(pb) == pa


@given(coeff_dicts, st.sampled_from([-2, -1, 1, 2]))
def test_shift_scales_evaluation(a, x):
    pa = L(a)
    try:
        base = pa(x)
    except ValueError:
        return  # negative exponents need not divide out
    assert pa.shift(1)(x) == x * base
    assert pa.shift(2)(x) == x * x * base
