import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given, settings, strategies as st

from dedekind_todd.cones import LatticeCone, standard_cone
from dedekind_todd.exactnum import bernoulli_number
from dedekind_todd.toddcore import (
    HomogPolynomial, HomogeneousRationalFn, MultiIndex, compositions, denominator_dNn,
    inner_pole_check, normalized_todd, todd_coefficient_t, todd_polynomial, todd_polynomial_of_cone,
    verify_cocycle,
)
from conftest import random_input, units


def sawtooth(x):
    x = Fraction(x)
    return Fraction(0) if x.denominator == 1 else x - math.floor(x) - Fraction(1, 2)


def classical_s(a, c):
    return sum(sawtooth(Fraction(k, c)) * sawtooth(Fraction(a * k, c)) for k in range(c))


def test_multi_index():
    m = MultiIndex((2, 0, 3))
    assert m.weight == 5 and m.factorial == 12
    assert list(compositions(2, 2)) == [(2, 0), (1, 1), (0, 2)]


def test_todd_polynomial_examples():
    assert todd_polynomial(0, 3).terms == {(0, 0, 0): 1}
    assert todd_polynomial(1, 2).terms == {(1, 0): Fraction(1, 2), (0, 1): Fraction(1, 2)}
    assert todd_polynomial(2, 1).terms == {(2,): Fraction(1, 12)}


def test_todd_polynomial_against_series():
    x, y = sympy.symbols("x y")
    g = (x / (1 - sympy.exp(-x))) * (y / (1 - sympy.exp(-y)))
    t = sympy.Symbol("t")
    ser = sympy.series(g.subs({x: t * x, y: t * y}), t, 0, 6).removeO()
    for N in range(6):
        part = sympy.Poly(sympy.expand(ser.coeff(t, N)), x, y)
        ref = {m: Fraction(int(c.p), int(c.q)) for m, c in part.terms()}
        assert todd_polynomial(N, 2).terms == {k: v for k, v in ref.items() if v}


def test_denominator_matches_full_polynomial():
    for N in range(9):
        for n in range(1, 5):
            assert denominator_dNn(N, n) == todd_polynomial(N, n).denominator_lcm()


def test_denominator_examples():
    assert denominator_dNn(2, 2) == 12
    assert denominator_dNn(4, 4) == 720
    assert denominator_dNn(12, 3) == 2 ** 12 * 3 ** 6 * 5 ** 3 * 7 ** 2 * 11 * 13


def test_t_examples():
    for q in (3, 5, 7, 11):
        for p in units(q):
            assert todd_coefficient_t((1, 1), q, (p,)) == classical_s(p, q) + Fraction(1, 4)
    for j in range(8):
        assert todd_coefficient_t((j,), 5, ()) == bernoulli_number(j)


def test_t_direct_and_fold_agree(rng):
    for _ in range(40):
        n = rng.choice([2, 3])
        q, p = random_input(rng, n, 25)
        r = tuple(rng.randint(0, 4) for _ in range(n))
        assert todd_coefficient_t(r, q, p) == todd_coefficient_t(r, q, p, method="direct")


def test_t_invariant_under_shift(rng):
    for _ in range(30):
        q, p = random_input(rng, 3, 20)
        r = tuple(rng.randint(0, 4) for _ in range(3))
        shifted = (p[0] + q, p[1] - 2 * q)
        assert todd_coefficient_t(r, q, p, method="direct") == todd_coefficient_t(r, q, shifted, method="direct")


def test_odd_weight_t_vanishes_without_a_one():
    for q in range(2, 12):
        for p in units(q):
            for r in compositions(5, 2):
                if 1 not in r:
                    assert todd_coefficient_t(r, q, (p,)) == 0


def test_standard_cone_coefficient_example():
    todd = todd_polynomial_of_cone(standard_cone(3, [1]), 2)
    assert todd.coefficient((1, 1)) == Fraction(11, 12)
    assert todd.coefficient((2, 0)) == Fraction(1, 12)


def test_nonsingular_cone_gives_plain_todd():
    c = LatticeCone([(2, 1), (1, 1)])
    assert todd_polynomial_of_cone(c, 3) == todd_polynomial(3, 2)


def test_standard_equals_lattice(rng):
    for n, qmax, Nmax in ((2, 20, 8), (3, 20, 5)):
        for _ in range(12):
            q, p = random_input(rng, n, qmax)
            cone = standard_cone(q, p)
            for N in range(Nmax + 1):
                a = todd_polynomial_of_cone(cone, N, "standard")
                b = todd_polynomial_of_cone(cone, N, "lattice")
                assert a == b, (q, p, N)


def test_standard_equals_subdivision(rng):
    for n in (2, 3):
        for _ in range(5):
            q, p = random_input(rng, n, 12)
            cone = standard_cone(q, p)
            for N in range(4):
                assert todd_polynomial_of_cone(cone, N, "standard") == \
                    todd_polynomial_of_cone(cone, N, "subdivision")


def test_eq_33_assembly():
    q, p = 7, (3,)
    todd = todd_polynomial_of_cone(standard_cone(q, p), 4)
    for j in compositions(4, 2):
        t = todd_coefficient_t(j, q, p, method="direct")
        assert todd.coefficient(j) == q ** 3 * t / (math.factorial(j[0]) * math.factorial(j[1]))


def test_odd_degree_support():
    for q in (5, 9):
        todd = todd_polynomial_of_cone(standard_cone(q, (2, 4)), 5)
        assert all(1 in idx for idx in todd.terms)


def test_integrality_n2():
    for q in range(2, 51):
        for p in units(q):
            for N in range(9):
                d = denominator_dNn(N, 2)
                todd = todd_polynomial_of_cone(standard_cone(q, (p,)), N)
                assert all((d * c).denominator == 1 for c in todd.terms.values())


def test_integrality_n3_sample(rng):
    for _ in range(40):
        q, p = random_input(rng, 3, 50)
        for N in range(9):
            d = denominator_dNn(N, 3)
            todd = todd_polynomial_of_cone(standard_cone(q, p), N)
            assert all((d * c).denominator == 1 for c in todd.terms.values())


def test_normalized_todd_unit_and_swap():
    unit = LatticeCone([(1, 0), (0, 1)])
    s = normalized_todd(unit, 2)
    expected = HomogeneousRationalFn(todd_polynomial(2, 2), [(1, 0), (0, 1)])
    assert s == expected
    swapped = normalized_todd(LatticeCone([(0, 1), (1, 0)]), 2)
    assert swapped == -s


def test_degenerate_cone_has_zero_todd():
    assert normalized_todd(LatticeCone([(1, 0), (1, 0)]), 2).numerator.is_zero()


def test_cocycle_samples():
    assert verify_cocycle(standard_cone(3, [1]), 2)
    assert verify_cocycle(LatticeCone([(1, 0), (0, 1)]), 3)
    for q, p in ((7, (3,)), (11, (4,)), (7, (2, 3)), (9, (4, 7))):
        for N in range(4):
            assert verify_cocycle(standard_cone(q, p), N)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.tuples(st.integers(-5, 5), st.integers(-5, 5)).filter(any), min_size=2, max_size=2),
       st.integers(0, 4))
def test_cocycle_on_random_plane_cones(gens, N):
    gens = [tuple(x // math.gcd(*g) for x in g) for g in gens]
    cone = LatticeCone(gens)
    assume(cone.det != 0)
    assert verify_cocycle(cone, N)


def test_inner_pieces_have_no_facet_poles():
    for q, p in ((5, (2,)), (7, (3,)), (5, (2, 3)), (7, (2, 3))):
        for N in (2, 3):
            assert inner_pole_check(standard_cone(q, p), N)


def test_homog_polynomial_json_and_division():
    t = todd_polynomial(4, 3)
    assert HomogPolynomial.from_json(t.to_json()) == t
    prod = t * HomogPolynomial(3, 1, {(1, 0, 0): 1, (0, 1, 0): -2})
    assert prod.divide_linear((1, -2, 0)) == t
    assert t.divide_linear((1, 0, 0)) is None
