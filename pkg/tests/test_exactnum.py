from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from dedekind_todd.exactnum import (
    as_rational, bernoulli_number, bernoulli_numbers, bernoulli_polynomial, format_rational,
    fractional_part, gen_binomial, lcm_all, modinv, parse_rational, periodic_bernoulli,
)


def akiyama_tanigawa(n):
    """B_n with B_1 = +1/2, from the Akiyama-Tanigawa triangle."""
    a = [Fraction(0)] * (n + 1)
    for m in range(n + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
    return a[0]


rationals = st.fractions(max_denominator=50).filter(lambda t: abs(t) < 100)


@pytest.mark.parametrize("k,expected", [(0, 1), (1, Fraction(-1, 2)), (2, Fraction(1, 6)), (3, 0),
                                         (12, Fraction(-691, 2730))])
def test_bernoulli_examples(k, expected):
    assert bernoulli_number(k) == expected


def test_bernoulli_against_akiyama_tanigawa():
    for k in range(0, 41):
        oracle = akiyama_tanigawa(k)
        if k == 1:
            oracle = -oracle
        assert bernoulli_number(k) == oracle, k


def test_odd_bernoulli_vanish():
    assert all(b == 0 for b in bernoulli_numbers(41)[3::2])


def test_bernoulli_polynomial_examples():
    x = Fraction
    assert bernoulli_polynomial(0).coeffs == (1,)
    assert bernoulli_polynomial(1).coeffs == (x(-1, 2), 1)
    assert bernoulli_polynomial(2).coeffs == (x(1, 6), -1, 1)


def test_bernoulli_polynomial_against_sympy():
    X = sympy.Symbol("X")
    for k in range(0, 16):
        ref = sympy.Poly(sympy.bernoulli(k, X), X).all_coeffs()[::-1]
        ours = bernoulli_polynomial(k).coeffs
        assert [Fraction(int(c.p), int(c.q)) for c in ref] == list(ours)


def test_polynomial_at_zero_is_number():
    for k in range(31):
        assert bernoulli_polynomial(k)(0) == bernoulli_number(k)


@pytest.mark.parametrize("k,t,expected", [(1, 0, 0), (1, Fraction(7, 3), Fraction(-1, 6)),
                                           (2, 0, Fraction(1, 6))])
def test_periodic_examples(k, t, expected):
    assert periodic_bernoulli(k, t) == expected


@pytest.mark.parametrize("t,expected", [(Fraction(7, 3), Fraction(1, 3)), (Fraction(-1, 4), Fraction(3, 4)),
                                         (5, 0)])
def test_fractional_part_examples(t, expected):
    assert fractional_part(t) == expected


@given(st.integers(0, 12), rationals)
def test_periodicity(k, t):
    assert periodic_bernoulli(k, t + 1) == periodic_bernoulli(k, t)


@given(st.integers(0, 12), rationals.filter(lambda t: t.denominator != 1))
def test_parity(k, t):
    assert periodic_bernoulli(k, -t) == (-1) ** k * periodic_bernoulli(k, t)


@given(rationals)
def test_fractional_part_range(t):
    f = fractional_part(t)
    assert 0 <= f < 1 and (t - f).denominator == 1


@given(st.fractions())
def test_format_parse_roundtrip(t):
    assert parse_rational(format_rational(t)) == t


def test_rational_is_reduced():
    v = as_rational("-6/4")
    assert (v.numerator, v.denominator) == (-3, 2)
    with pytest.raises(TypeError):
        as_rational(0.5)
    assert format_rational(Fraction(4, 2)) == "2"


def test_modinv():
    assert modinv(2, 5) == 3
    with pytest.raises(ValueError):
        modinv(2, 4)


def test_gen_binomial():
    assert [gen_binomial(-1, k) for k in range(5)] == [1, -1, 1, -1, 1]
    assert gen_binomial(5, 2) == 10 and gen_binomial(2, 5) == 0 and gen_binomial(3, -1) == 0
    assert gen_binomial(-3, 2) == 6


def test_lcm_all():
    assert lcm_all([4, 6, 10]) == 60
