"""Generalized Dedekind sums, Zagier's cotangent sums and the t/s conversion."""
from __future__ import annotations

import itertools
import json
import math
from fractions import Fraction
from typing import List, Sequence, Tuple

from .bernsums import bernoulli_product_sum, validate_input
from .exactnum import format_rational, modinv
from .toddcore import todd_coefficient_t

__all__ = [
    "dedekind_sum",
    "classical_dedekind_sum",
    "zagier_sum",
    "zagier_sum_float",
    "reduced_moduli",
    "s_from_t",
    "t_from_s",
    "rademacher_phi",
    "sum_to_json",
]


def dedekind_sum(r: Sequence[int], q: int, p: Sequence[int], *, method: str = "fold") -> Fraction:
    """Box sum of periodic Bernoulli values indexed by ``r``.

    ``len(r) == len(p) + 1``. An empty ``r`` gives 1 and a single index j
    gives the periodic value at 0 (so 0 for j = 1).
    """
    if len(r) == 0:
        return Fraction(1)
    if any(x < 1 for x in r):
        raise ValueError("indices must be >= 1")
    return bernoulli_product_sum(r, q, p, periodic=True, method=method)


def classical_dedekind_sum(a: int, c: int) -> Fraction:
    """s(a, c) = sum_{k mod c} ((k/c)) ((a k / c)), c >= 1, gcd(a, c) = 1."""
    if c < 1:
        raise ValueError("c must be positive")
    return dedekind_sum((1, 1), c, [a % c if c > 1 else 0])


def zagier_sum(q: int, p: Sequence[int]) -> Fraction:
    """Zagier's cotangent sum d(q; p), exactly, through s_{1,...,1}.

    Uses d = (-1)^(n/2+1) 2^n q s_{1..1}; returns 0 for odd n.
    """
    n = len(p) + 1
    validate_input(q, p)
    if n % 2:
        return Fraction(0)
    s = dedekind_sum((1,) * n, q, p)
    return (-1) ** (n // 2 + 1) * 2 ** n * q * s


def zagier_sum_float(q: int, p: Sequence[int], sign_convention: str = "plain") -> float:
    """Floating-point cotangent sum sum_k cot(pi k/q) prod cot(pi p_i k/q).

    Used only as a cross-check of :func:`zagier_sum`. The plain sum is what
    the exact route reproduces for every even n. ``sign_convention="alternating"``
    multiplies by (-1)^(n/2); that variant agrees only when n is divisible by 4.
    """
    n = len(p) + 1
    total = math.fsum(
        math.prod(1.0 / math.tan(math.pi * a * k / q) for a in (1, *p)) for k in range(1, q))
    if sign_convention == "alternating":
        return (-1) ** (n // 2) * total
    if sign_convention != "plain":
        raise ValueError(f"unknown sign convention {sign_convention!r}")
    return total


def reduced_moduli(T: Sequence[int], q: int, p: Sequence[int]) -> Tuple[List[int], List[int]]:
    """Surviving coordinates and their moduli after pinning the coordinates in T.

    Coordinates are 0-based, the last one (index n-1) is the dependent one
    with modulus -1. Pinning i < n-1 forces k_i = 0; pinning n-1 forces the
    dependent value to vanish, and the largest surviving coordinate j takes
    over as the dependent one, which rescales every other modulus by
    ``-p_j^{-1}`` mod q. Returns (kept coordinates in order, new moduli).
    """
    n = len(p) + 1
    full = list(p) + [-1]
    pinned = set(T)
    kept = [i for i in range(n) if i not in pinned]
    if not kept:
        return [], []
    last = kept[-1]
    scale = -modinv(full[last] % q, q) if q > 1 else 0
    moduli = [(scale * full[i]) % q for i in kept[:-1]]
    return kept, moduli


def _convert(r: Sequence[int], q: int, p: Sequence[int], periodic_target: bool) -> Fraction:
    validate_input(q, p)
    r = tuple(r)
    if any(x < 1 for x in r):
        raise ValueError("indices must be >= 1")
    if len(r) != len(p) + 1:
        raise ValueError("need len(r) == len(p) + 1")
    ones = [i for i, x in enumerate(r) if x == 1]
    half = Fraction(1, 2) if periodic_target else Fraction(-1, 2)
    source = todd_coefficient_t if periodic_target else dedekind_sum
    total = Fraction(0)
    for size in range(len(ones) + 1):
        for T in itertools.combinations(ones, size):
            kept, moduli = reduced_moduli(T, q, p)
            value = source(tuple(r[i] for i in kept), q, moduli)
            total += half ** size * value
    return total


def s_from_t(r: Sequence[int], q: int, p: Sequence[int]) -> Fraction:
    """Dedekind sum rebuilt from Todd coefficients of the pinned sub-boxes.

    Each index equal to 1 contributes either its Bernoulli value or half
    of the indicator of an integer argument.
    """
    return _convert(r, q, p, periodic_target=True)


def t_from_s(r: Sequence[int], q: int, p: Sequence[int]) -> Fraction:
    """Inverse of :func:`s_from_t`, with weights (-1/2)^|T|."""
    return _convert(r, q, p, periodic_target=False)


def rademacher_phi(a: int, b: int, c: int, d: int) -> Fraction:
    """Rademacher's function on SL_2(Z): b/d if c = 0, else sign(c) s(a,|c|) - (a+d)/(12c)."""
    if a * d - b * c != 1:
        raise ValueError("matrix must have determinant 1")
    if c == 0:
        return Fraction(b, d)
    sign = 1 if c > 0 else -1
    return sign * classical_dedekind_sum(a, abs(c)) - Fraction(a + d, 12 * c)


def sum_to_json(r: Sequence[int], q: int, p: Sequence[int], value: Fraction) -> str:
    return json.dumps({"r": list(r), "q": q, "p": list(p),
                       "value": {"num": value.numerator, "den": value.denominator}})
