import itertools
import json
import math
from fractions import Fraction

import pytest

from dedekind_todd.congruence import (
    InvariantViolation, count_congruence_roots, evaluate_mod, f_r_by_constant_terms, f_r_polynomial,
    fractional_identity, iter_indices, iter_inputs, normalized_sum_integer, verify_congruence,
    verify_congruence_s, verify_congruence_t, verify_zagier_congruence, zagier_polynomial,
)
from dedekind_todd.dedekind import dedekind_sum
from dedekind_todd.exactnum import bernoulli_number
from dedekind_todd.laurent import parse_laurent, ZZ
from dedekind_todd.toddcore import compositions, denominator_dNn
from conftest import random_input


def test_normalized_examples():
    assert normalized_sum_integer((1, 1), 3, (1,)) == 2
    assert normalized_sum_integer((1, 2), 7, (3,)) == 0
    assert normalized_sum_integer((2, 1, 2), 9, (2, 4)) == 0
    for p in (1, 2, 3, 4):
        exact = 720 * Fraction(5) ** 3 * dedekind_sum((2, 2), 5, (p,), method="direct") / 4
        assert exact.denominator == 1
        assert normalized_sum_integer((2, 2), 5, (p,)) == exact


def test_f_r_examples():
    assert f_r_polynomial((1, 1)) == parse_laurent("p1 + p1^-1", ["p1"], ZZ)
    assert f_r_polynomial((1, 2)).is_zero()
    f = f_r_polynomial((6, 4, 2))
    assert f.coefficient((-6, -4)) == 15202
    assert f.coefficient((6, -4)) == 638484
    assert f.coefficient((4, -4)) == 573300


def test_f_r_for_ones_is_minus_cotangent_polynomial():
    # n = 4: (-1)^(n/2+1) = -1
    assert f_r_polynomial((1, 1, 1, 1)) == -zagier_polynomial(4)
    assert f_r_polynomial((1, 1)) == zagier_polynomial(2)


def test_cotangent_polynomial_n4():
    shown = parse_laurent(
        "p1^4 + p2^4 + p3^4 - 5*p1^2*p2^2 - 5*p2^2*p3^2 - 5*p3^2*p1^2 - 5*p1^2 - 5*p2^2 - 5*p3^2 + 1",
        ["p1", "p2", "p3"], ZZ)
    assert zagier_polynomial(4) * parse_laurent("p1*p2*p3", ["p1", "p2", "p3"], ZZ) == shown


def test_cotangent_congruence():
    for n, qmax in ((2, 60), (4, 9)):
        for q, p in iter_inputs(n, qmax):
            assert verify_zagier_congruence(q, p)[2]


@pytest.mark.parametrize("kind", ["s", "t"])
def test_pruning_never_changes_f(kind):
    for n in range(1, 5):
        for r in iter_indices(n, 10):
            assert f_r_polynomial(r, kind) == f_r_polynomial(r, kind, pruned=True), r


def test_coefficients_are_integral():
    for n in range(1, 5):
        for N in range(0, 13):
            d = denominator_dNn(N, n)
            for m in compositions(N, n):
                c = Fraction(d)
                for mi in m:
                    c *= bernoulli_number(mi) / math.factorial(mi)
                assert c.denominator == 1


def test_verify_examples():
    rep = verify_congruence_s((1, 1), 3, (1,))
    assert (rep.lhs, rep.rhs, rep.holds, rep.d) == (2, 2, True, 12)
    rep = verify_congruence_s((2, 3), 11, (4,))
    assert rep.lhs == 0 and rep.rhs == 0 and rep.holds
    assert json.loads(rep.to_json())["r"] == [2, 3]


def test_small_sweeps():
    for n, qmax, rmax in ((2, 40, 8), (3, 12, 6), (4, 6, 6)):
        for q, p in iter_inputs(n, qmax):
            for r in iter_indices(n, rmax):
                assert verify_congruence_t(r, q, p).holds, (r, q, p)
                assert verify_congruence_s(r, q, p).holds, (r, q, p)


def test_rhs_is_representative_independent(rng):
    for _ in range(40):
        n = rng.choice([2, 3])
        q, p = random_input(rng, n, 30)
        f = f_r_polynomial(tuple(rng.randint(1, 3) for _ in range(n)))
        other = [pi + rng.randint(-3, 3) * q for pi in p]
        # exact evaluation with an arbitrary inverse lift
        total = Fraction(0)
        for e, c in f.terms.items():
            term = Fraction(c)
            for v, k in zip(other, e):
                lift = pow(v, -1, q) + rng.randint(0, 3) * q
                term *= v ** k if k >= 0 else lift ** (-k)
            total += term
        assert total % q == evaluate_mod(f, p, q)


def test_fractional_identity_examples():
    assert fractional_identity((1, 1), 5, (2,)) == (0, 0, True)
    assert fractional_identity((1, 1), 3, (1,)) == (Fraction(2, 3), Fraction(2, 3), True)
    for n, qmax in ((2, 30), (3, 10)):
        for q, p in iter_inputs(n, qmax):
            for r in iter_indices(n, 6):
                if sum(r) % 2 == 0:
                    assert fractional_identity(r, q, p)[2]


def test_constant_term_route_agrees(rng):
    for _ in range(25):
        n = rng.choice([2, 3])
        q, p = random_input(rng, n, 25, qmin=3)
        r = tuple(rng.randint(1, 3) for _ in range(n))
        for kind in ("s", "t"):
            assert f_r_by_constant_terms(r, q, p, kind) == evaluate_mod(f_r_polynomial(r, kind), p, q)


def test_integrality_violation_is_reported():
    # a value that is not an integer must raise, not round
    from dedekind_todd import congruence
    original = congruence._normalized
    try:
        congruence._normalized = lambda *a: Fraction(1, 2)
        with pytest.raises(InvariantViolation):
            normalized_sum_integer((1, 1), 3, (1,))
    finally:
        congruence._normalized = original


def test_root_examples():
    rc = count_congruence_roots([0, 0, 1], 3, 2)
    assert (rc.count, rc.bound, rc.within) == (3, 3, True)
    for p in (2, 3, 5, 7):
        for k in (1, 2, 3):
            rc = count_congruence_roots([0, 1], p, k)
            assert rc.count == 1 and rc.bound == 1
    rc = count_congruence_roots([-1, 0, 1], 5, 3)
    assert (rc.count, rc.bound) == (2, 2)
    with pytest.raises(ValueError):
        count_congruence_roots([1, 1, 3], 3, 2)


def test_root_counts_against_plain_loop():
    for coeffs, p, k in (([0, -2, 1], 2, 3), ([2, 0, 1, 1], 3, 3), ([-1, 0, 0, 0, 1], 5, 2)):
        mod = p ** k
        plain = sum(1 for z in range(mod) if sum(c * z ** i for i, c in enumerate(coeffs)) % mod == 0)
        assert count_congruence_roots(coeffs, p, k).count == plain


def test_per_root_and_degree_bounds_hold():
    for deg in range(1, 5):
        for cs in itertools.product(range(-3, 4), repeat=deg):
            coeffs = list(cs) + [1]
            for p in (2, 3, 5, 7):
                for k in range(1, 5):
                    rc = count_congruence_roots(coeffs, p, k)
                    assert rc.count <= rc.refined_bound <= rc.degree_bound


def test_multiplicity_bound_can_be_exceeded():
    # x^2 - 2x = x(x - 2): one double root mod 2 but four roots mod 8
    rc = count_congruence_roots([0, -2, 1], 2, 3)
    assert rc.count == 4 and rc.bound == 2 and not rc.within
    assert rc.refined_bound == 4
