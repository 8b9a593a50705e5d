"""Integrality and mod-q congruences of normalized Dedekind sums.

For r with all r_i >= 1, N = |r| and d = d_{N,n}, the number

    d q^(N-n+1) s_r(q; p) / r!

is an integer, congruent mod q to ``f_r(p_1, ..., p_{n-1})`` where f_r is
an explicit Laurent polynomial with integer coefficients. The same holds
with Todd coefficients t_r in place of s_r for a larger index set. This
module builds f_r, checks the congruence, and counts roots of integer
polynomials modulo prime powers.
"""
from __future__ import annotations

import functools
import itertools
import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .bernsums import validate_input
from .dedekind import dedekind_sum
from .exactnum import bernoulli_number, fractional_part, gen_binomial, modinv
from .laurent import LaurentPolynomial, RationalFn, Ring, ZZ, iterated_constant_term
from .toddcore import compositions, denominator_dNn, todd_coefficient_t

__all__ = [
    "InvariantViolation",
    "CongruenceReport",
    "normalized_sum_integer",
    "f_r_polynomial",
    "evaluate_mod",
    "verify_congruence",
    "verify_congruence_t",
    "verify_congruence_s",
    "fractional_identity",
    "iter_inputs",
    "iter_indices",
    "congruence_sweep",
    "f_r_by_constant_terms",
    "zagier_polynomial",
    "verify_zagier_congruence",
    "RootCount",
    "count_congruence_roots",
]


class InvariantViolation(ArithmeticError):
    """A proven identity failed on concrete input."""


def _index_factorial(r: Sequence[int]) -> int:
    out = 1
    for x in r:
        out *= math.factorial(x)
    return out


def _normalized(r: Sequence[int], q: int, p: Sequence[int], kind: str) -> Fraction:
    n = len(r)
    N = sum(r)
    d = denominator_dNn(N, n)
    value = todd_coefficient_t(r, q, p) if kind == "t" else dedekind_sum(r, q, p)
    return d * Fraction(q) ** (N - n + 1) * value / _index_factorial(r)


def normalized_sum_integer(r: Sequence[int], q: int, p: Sequence[int], kind: str = "s") -> int:
    """d q^(N-n+1) s_r / r! (or the same with t_r), checked to be an integer."""
    _check_index(r, p)
    val = _normalized(r, q, p, kind)
    if val.denominator != 1:
        raise InvariantViolation(f"normalized {kind}-sum for r={tuple(r)}, q={q}, p={tuple(p)} is {val}")
    return val.numerator


def _check_index(r: Sequence[int], p: Sequence[int]) -> None:
    if len(r) != len(p) + 1:
        raise ValueError("need len(r) == len(p) + 1")
    if any(x < 1 for x in r):
        raise ValueError("indices must be >= 1")


def _m_range(r: Sequence[int], kind: str, pruned: bool) -> Iterator[Tuple[int, ...]]:
    n, N = len(r), sum(r)
    for m in compositions(N, n):
        if 0 not in m:
            continue
        if kind == "s" and any(x % 2 for x in m):
            continue
        if pruned:
            if any(x > 1 and x % 2 for x in m):
                continue
            if any(x and x < ri for x, ri in zip(m, r)):
                continue
        yield m


@functools.lru_cache(maxsize=None)
def _f_r_terms(r: Tuple[int, ...], kind: str, pruned: bool) -> Dict[Tuple[int, ...], int]:
    n, N = len(r), sum(r)
    d = denominator_dNn(N, n)
    terms: Dict[Tuple[int, ...], int] = {}
    for m in _m_range(r, kind, pruned):
        coeff = Fraction(-d)
        for mi in m:
            coeff *= bernoulli_number(mi) / math.factorial(mi)
        if not coeff:
            continue
        for mi, ri in zip(m, r):
            coeff *= gen_binomial(mi - 1, ri - 1)
        # p_n = -1
        coeff *= (-1) ** ((m[-1] - r[-1]) % 2)
        if not coeff:
            continue
        if coeff.denominator != 1:
            raise InvariantViolation(f"d B_m / m! not integral for m={m}")
        e = tuple(mi - ri for mi, ri in zip(m[:-1], r[:-1]))
        terms[e] = terms.get(e, 0) + coeff.numerator
    return {e: c for e, c in terms.items() if c}


def f_r_polynomial(r: Sequence[int], kind: str = "s", pruned: bool = False) -> LaurentPolynomial:
    """Integer Laurent polynomial f_r in p_1, ..., p_{n-1}.

    Sum over m with |m| = |r| and some m_i = 0 of
    -d B_m/m! prod C(m_i - 1, r_i - 1) p_i^(m_i - r_i), with p_n = -1.
    ``kind="s"`` keeps even m only; ``kind="t"`` keeps all m.
    ``pruned`` skips m that cannot contribute (odd m_i > 1, or 0 < m_i < r_i).
    """
    if kind not in ("s", "t"):
        raise ValueError("kind must be 's' or 't'")
    r = tuple(int(x) for x in r)
    if not r or any(x < 1 for x in r):
        raise ValueError("indices must be >= 1")
    names = [f"p{i + 1}" for i in range(len(r) - 1)]
    return LaurentPolynomial(names, _f_r_terms(r, kind, pruned), ZZ)


def evaluate_mod(poly: LaurentPolynomial, values: Sequence[int], q: int) -> int:
    """Value in [0, q) with negative powers read as modular inverses."""
    total = 0
    for e, c in poly.terms.items():
        term = int(c)
        for v, k in zip(values, e):
            term = term * pow(v, k, q) % q
        total += term
    return total % q


@dataclass(frozen=True)
class CongruenceReport:
    r: Tuple[int, ...]
    q: int
    p: Tuple[int, ...]
    kind: str
    d: int
    lhs: int
    rhs: int
    holds: bool

    def to_json(self) -> str:
        data = asdict(self)
        data["r"], data["p"] = list(self.r), list(self.p)
        return json.dumps(data)


def verify_congruence(r: Sequence[int], q: int, p: Sequence[int], kind: str = "s") -> CongruenceReport:
    """Exact left side against f_r evaluated mod q."""
    r = tuple(int(x) for x in r)
    p = tuple(int(x) for x in p)
    _check_index(r, p)
    validate_input(q, p)
    lhs = normalized_sum_integer(r, q, p, kind)
    rhs = evaluate_mod(f_r_polynomial(r, kind, pruned=True), p, q)
    return CongruenceReport(r, q, p, kind, denominator_dNn(sum(r), len(r)), lhs, rhs, lhs % q == rhs)


def verify_congruence_t(r: Sequence[int], q: int, p: Sequence[int]) -> CongruenceReport:
    return verify_congruence(r, q, p, "t")


def verify_congruence_s(r: Sequence[int], q: int, p: Sequence[int]) -> CongruenceReport:
    return verify_congruence(r, q, p, "s")


def fractional_identity(r: Sequence[int], q: int, p: Sequence[int]) -> Tuple[Fraction, Fraction, bool]:
    """<d q^(N-n) s_r / r!> against <f_r(p) / q>. Note the exponent N - n."""
    r = tuple(r)
    _check_index(r, p)
    lhs = fractional_part(_normalized(r, q, p, "s") / q)
    rhs = Fraction(evaluate_mod(f_r_polynomial(r, "s", pruned=True), p, q), q)
    return lhs, rhs, lhs == rhs


# sweeps ----------------------------------------------------------------------

def iter_inputs(n: int, qmax: int, qmin: int = 2) -> Iterator[Tuple[int, Tuple[int, ...]]]:
    """(q, p) with qmin <= q <= qmax, 1 <= p_i < q and gcd(p_i, q) = 1."""
    for q in range(qmin, qmax + 1):
        units = [a for a in range(1, q) if math.gcd(a, q) == 1]
        for p in itertools.product(units, repeat=n - 1):
            yield q, p


def iter_indices(n: int, max_weight: int, min_weight: Optional[int] = None) -> Iterator[Tuple[int, ...]]:
    """r with every r_i >= 1 and n <= |r| <= max_weight."""
    lo = n if min_weight is None else max(n, min_weight)
    for N in range(lo, max_weight + 1):
        for c in compositions(N - n, n):
            yield tuple(x + 1 for x in c)


def congruence_sweep(n: int, qmax: int, rmax: int, kinds: Sequence[str] = ("t", "s"),
                     qmin: int = 2) -> Iterator[CongruenceReport]:
    """All reports for the box, ordered by q, p, r, kind."""
    rs = list(iter_indices(n, rmax))
    for q, p in iter_inputs(n, qmax, qmin):
        for r in rs:
            for kind in kinds:
                yield verify_congruence(r, q, p, kind)


# second route through iterated constant terms --------------------------------

def f_r_by_constant_terms(r: Sequence[int], q: int, p: Sequence[int], kind: str = "s") -> int:
    """f_r(p) mod q recomputed as a sum of iterated constant terms over Z/q.

    For each j the rational function

        F_j = sum_{m, m_j = 0} d B_m/m! prod_{i != j} (x_i - p_i p_j^-1 x_j)^(m_i - 1) / x_i^(r_i - 1) / x_j^r_j

    is expanded along (x_1, ..., x_n) with x_n innermost, and the constant
    terms are added. Factors with m_i = 0 are genuine poles, so this goes
    through the general expansion engine rather than the closed form.
    """
    r = tuple(int(x) for x in r)
    _check_index(r, p)
    validate_input(q, p)
    n, N = len(r), sum(r)
    d = denominator_dNn(N, n)
    ring = Ring.mod(q)
    names = [f"x{i + 1}" for i in range(n)]
    full = list(p) + [-1]
    x = [LaurentPolynomial.variable(names, v, ring) for v in names]
    one = LaurentPolynomial.constant(names, 1, ring)
    total = 0
    for j in range(n):
        inv_pj = modinv(full[j] % q, q)
        num = LaurentPolynomial(names, None, ring)
        den = one
        pieces = []
        for m in compositions(N, n):
            if m[j] != 0 or (kind == "s" and any(mi % 2 for mi in m)):
                continue
            coeff = Fraction(d)
            for mi in m:
                coeff *= bernoulli_number(mi) / math.factorial(mi)
            if not coeff:
                continue
            top = one.scale(coeff)
            bottom = x[j] ** r[j]
            for i in range(n):
                if i == j:
                    continue
                lin = x[i] - x[j].scale(full[i] * inv_pj)
                if m[i] >= 1:
                    top = top * lin ** (m[i] - 1)
                else:
                    bottom = bottom * lin
                bottom = bottom * x[i] ** (r[i] - 1)
            pieces.append((top, bottom))
        for top, bottom in pieces:
            value = iterated_constant_term(RationalFn(top, bottom), names)
            total += int(value)
    return total % q


# cotangent sums -----------------------------------------------------------------

def zagier_polynomial(n: int) -> LaurentPolynomial:
    """(-1)^(n/2+1) sum over even m, |m| = n, of d B_m/m! prod_{i<n} p_i^(m_i - 1).

    This is the residue of (d/2^n) times the cotangent sum d(q; p) mod q,
    with d = d_{n,n}. It equals (-1)^(n/2+1) f_r for r = (1, ..., 1).
    """
    if n < 2 or n % 2:
        raise ValueError("n must be even and >= 2")
    names = [f"p{i + 1}" for i in range(n - 1)]
    d = denominator_dNn(n, n)
    sign = (-1) ** (n // 2 + 1)
    terms: Dict[Tuple[int, ...], int] = {}
    for m in compositions(n, n):
        if any(x % 2 for x in m):
            continue
        coeff = Fraction(sign * d)
        for mi in m:
            coeff *= bernoulli_number(mi) / math.factorial(mi)
        if coeff.denominator != 1:
            raise InvariantViolation(f"d B_m / m! not integral for m={m}")
        e = tuple(mi - 1 for mi in m[:-1])
        terms[e] = terms.get(e, 0) + coeff.numerator
    return LaurentPolynomial(names, {e: c for e, c in terms.items() if c}, ZZ)


def verify_zagier_congruence(q: int, p: Sequence[int]) -> Tuple[int, int, bool]:
    """(d/2^n) d(q; p) against the cotangent-sum polynomial, mod q."""
    from .dedekind import zagier_sum

    n = len(p) + 1
    d = denominator_dNn(n, n)
    lhs = Fraction(d, 2 ** n) * zagier_sum(q, p)
    if lhs.denominator != 1:
        raise InvariantViolation(f"(d/2^n) d({q}; {tuple(p)}) = {lhs} is not an integer")
    rhs = evaluate_mod(zagier_polynomial(n), p, q)
    return lhs.numerator, rhs, lhs.numerator % q == rhs


# roots modulo prime powers ------------------------------------------------

@dataclass(frozen=True)
class RootCount:
    count: int
    bound: int
    within: bool
    distinct_roots_mod_p: int
    max_multiplicity: int
    multiplicities: Tuple[Tuple[int, int], ...] = field(default=())
    refined_bound: int = 0
    degree_bound: int = 0


def _root_multiplicity(coeffs_mod_p: List[int], root: int, p: int) -> int:
    """Multiplicity of ``root`` for a polynomial over F_p (coefficients low to high)."""
    c = list(coeffs_mod_p)
    mult = 0
    while len(c) > 1:
        # synthetic division by (x - root), highest degree first
        out = [0] * (len(c) - 1)
        acc = 0
        for i in range(len(c) - 1, 0, -1):
            acc = (acc * root + c[i]) % p
            out[i - 1] = acc
        rem = (acc * root + c[0]) % p
        if rem:
            break
        mult += 1
        c = out
    return mult


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def count_congruence_roots(coeffs: Sequence[int], p: int, n: int) -> RootCount:
    """Roots of f modulo p^n by brute force, with the bounds from Hensel-type arguments.

    ``coeffs`` lists f from the constant term up. ``bound`` is
    c p^(n - ceil(n/l)) with c distinct roots mod p and l their largest
    multiplicity. ``refined_bound`` is sum over roots of m p^(n - ceil(n/m))
    and ``degree_bound`` is deg(f) p^(n - ceil(n/deg f)).
    """
    coeffs = [int(c) for c in coeffs]
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    deg = len(coeffs) - 1
    if deg < 1:
        raise ValueError("f must have positive degree")
    if coeffs[-1] % p == 0:
        raise ValueError(f"{p} divides the leading coefficient")
    if n < 1:
        raise ValueError("n must be >= 1")
    mod = p ** n
    if mod > 10 ** 7:
        raise ValueError("p^n too large for brute force")
    z = np.arange(mod, dtype=np.int64)
    acc = np.zeros(mod, dtype=np.int64)
    for c in reversed(coeffs):
        acc = (acc * z + (c % mod)) % mod
    count = int(np.count_nonzero(acc == 0))
    cp = [c % p for c in coeffs]
    mults = []
    for a in range(p):
        if sum(c * pow(a, i, p) for i, c in enumerate(cp)) % p == 0:
            mults.append((a, _root_multiplicity(cp, a, p)))
    c_roots = len(mults)
    l = max((m for _, m in mults), default=1)
    bound = c_roots * p ** (n - _ceil_div(n, l))
    refined = sum(m * p ** (n - _ceil_div(n, m)) for _, m in mults)
    degree_bound = deg * p ** (n - _ceil_div(n, deg))
    return RootCount(count, bound, count <= bound, c_roots, l, tuple(mults), refined, degree_bound)
