"""Exact sums of Bernoulli products over the box (Z/q)^(n-1).

Both the Todd coefficients and the generalized Dedekind sums have the shape

    sum over k in (Z/q)^(n-1) of  F_1(k_1/q) ... F_{n-1}(k_{n-1}/q) F_n(<sum p_i k_i / q>)

with F_i a Bernoulli polynomial (``periodic=False``) or its periodic
version (``periodic=True``). They differ only at k = 0 for index 1.

The fast route scales each factor to an integer table
``A_j(k) = L_j q^j F_j(k/q)`` and folds one variable at a time:
``W(c) <- sum_k A(k) W(c + p k mod q)``. That costs O(n q^2) big-integer
operations instead of O(q^(n-1)) rational ones. The straightforward
rational loop is kept as ``method="direct"``.
"""
from __future__ import annotations

import functools
import itertools
import math
from fractions import Fraction
from typing import Sequence, Tuple

import numpy as np

from .exactnum import bernoulli_numbers, bernoulli_polynomial, lcm_all, periodic_bernoulli

__all__ = ["bernoulli_product_sum", "validate_input", "bernoulli_scale", "bernoulli_table"]


def validate_input(q: int, p: Sequence[int]) -> None:
    if q < 1:
        raise ValueError("q must be positive")
    for pi in p:
        if math.gcd(pi, q) != 1:
            raise ValueError(f"gcd({pi}, {q}) != 1, input is outside I_n")


@functools.lru_cache(maxsize=None)
def bernoulli_scale(j: int) -> int:
    """lcm of the denominators of B_0, ..., B_j."""
    return lcm_all(b.denominator for b in bernoulli_numbers(j))


@functools.lru_cache(maxsize=4096)
def bernoulli_table(j: int, q: int, periodic: bool) -> Tuple[int, ...]:
    """``L_j q^j F_j(k/q)`` for k = 0..q-1, all integers."""
    scale = bernoulli_scale(j) * q ** j
    poly = bernoulli_polynomial(j)
    out = []
    for k in range(q):
        if periodic and j == 1 and k == 0:
            out.append(0)
            continue
        v = poly(Fraction(k, q)) * scale
        assert v.denominator == 1
        out.append(v.numerator)
    return tuple(out)


def _as_objects(values: Sequence[int]) -> np.ndarray:
    arr = np.empty(len(values), dtype=object)
    arr[:] = list(values)
    return arr


@functools.lru_cache(maxsize=8192)
def _folded(q: int, p_tail: Tuple[int, ...], r_tail: Tuple[int, ...],
            periodic: bool) -> Tuple[int, ...]:
    """W(c) = sum over the tail variables, as a function of the offset c.

    ``r_tail`` ends with the index of the last (dependent) factor; ``p_tail``
    holds the moduli of the free tail variables, one fewer entry.
    """
    if not p_tail:
        return bernoulli_table(r_tail[0], q, periodic)
    inner = _as_objects(_folded(q, p_tail[1:], r_tail[1:], periodic))
    weights = _as_objects(bernoulli_table(r_tail[0], q, periodic))
    c = np.arange(q)[:, None]
    k = np.arange(q)[None, :]
    idx = (c + p_tail[0] * k) % q
    return tuple(inner[idx].dot(weights))


def bernoulli_product_sum(r: Sequence[int], q: int, p: Sequence[int], *,
                          periodic: bool, method: str = "fold") -> Fraction:
    """Exact value of the box sum described in the module docstring.

    ``len(r) == len(p) + 1``. Moduli are reduced into [0, q) first; the sum
    depends only on residues. n = 1 gives F_{r_1}(0).
    """
    r = tuple(int(x) for x in r)
    if len(r) != len(p) + 1:
        raise ValueError("need len(r) == len(p) + 1")
    if any(x < 0 for x in r):
        raise ValueError("indices must be non-negative")
    validate_input(q, p)
    p = tuple(int(x) % q for x in p)
    if method == "direct":
        return _direct(r, q, p, periodic)
    if method != "fold":
        raise ValueError(f"unknown method {method!r}")
    if not p:
        total = bernoulli_table(r[0], q, periodic)[0]
    else:
        # only the offset c = 0 is needed at the outermost level
        inner = _as_objects(_folded(q, p[1:], r[1:], periodic))
        weights = _as_objects(bernoulli_table(r[0], q, periodic))
        total = inner[(p[0] * np.arange(q)) % q].dot(weights)
    scale = 1
    for j in r:
        scale *= bernoulli_scale(j) * q ** j
    return Fraction(total, scale)


def _direct(r: Tuple[int, ...], q: int, p: Tuple[int, ...], periodic: bool) -> Fraction:
    n = len(r)
    if periodic:
        f = periodic_bernoulli
    else:
        def f(j: int, t: Fraction) -> Fraction:
            return bernoulli_polynomial(j)(t - math.floor(t))
    total = Fraction(0)
    for ks in itertools.product(range(q), repeat=n - 1):
        term = Fraction(1)
        for j, k in zip(r, ks):
            term *= f(j, Fraction(k, q))
        last = sum(pi * k for pi, k in zip(p, ks))
        term *= f(r[-1], Fraction(last % q, q))
        total += term
    return total
