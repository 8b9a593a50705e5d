"""Exact rationals, small integer helpers and the Bernoulli family.

``ExactRational`` is :class:`fractions.Fraction`. It is always reduced and
keeps a positive denominator, which is exactly the contract needed here.
"""
from __future__ import annotations

import functools
import math
import threading
from fractions import Fraction
from typing import Iterable, List, Sequence, Union

__all__ = [
    "ExactRational",
    "as_rational",
    "UniPolynomial",
    "bernoulli_number",
    "bernoulli_numbers",
    "bernoulli_polynomial",
    "periodic_bernoulli",
    "fractional_part",
    "modinv",
    "lcm_all",
    "gen_binomial",
    "format_rational",
    "parse_rational",
]

ExactRational = Fraction
RationalLike = Union[int, Fraction, str]


def as_rational(value: RationalLike) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a rational")
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"cannot read {value!r} as an exact rational")


def format_rational(value: RationalLike) -> str:
    """Reduced ``num/den`` form; integers print without a denominator."""
    v = as_rational(value)
    if v.denominator == 1:
        return str(v.numerator)
    return f"{v.numerator}/{v.denominator}"


def parse_rational(text: str) -> Fraction:
    return Fraction(text.strip())


def modinv(a: int, m: int) -> int:
    """Inverse of ``a`` modulo ``m`` in ``[0, m)``; ValueError if none exists."""
    if m == 1:
        return 0
    try:
        return pow(a, -1, m)
    except ValueError:
        raise ValueError(f"{a} is not invertible modulo {m}") from None


def lcm_all(values: Iterable[int]) -> int:
    out = 1
    for v in values:
        out = math.lcm(out, v)
    return out


def gen_binomial(top: int, k: int) -> int:
    """Binomial coefficient C(top, k) for any integer ``top`` and k >= 0.

    Uses the falling-factorial definition, so C(-1, k) = (-1)^k.
    """
    if k < 0:
        return 0
    if top >= 0:
        return math.comb(top, k)
    # C(-a, k) = (-1)^k C(a + k - 1, k)
    return (-1) ** k * math.comb(-top + k - 1, k)


# Bernoulli numbers -----------------------------------------------------------

_BERN: List[Fraction] = [Fraction(1)]
_BERN_LOCK = threading.Lock()


def _extend_bernoulli(k: int) -> None:
    with _BERN_LOCK:
        table = _BERN
        for m in range(len(table), k + 1):
            # sum_{j<=m} C(m+1, j) B_j = 0
            acc = Fraction(0)
            for j in range(m):
                acc += math.comb(m + 1, j) * table[j]
            table.append(-acc / (m + 1))


def bernoulli_number(k: int) -> Fraction:
    """B_k with the convention B_1 = -1/2."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if k >= len(_BERN):
        _extend_bernoulli(k)
    return _BERN[k]


def bernoulli_numbers(k: int) -> List[Fraction]:
    """[B_0, ..., B_k]."""
    bernoulli_number(k)
    return list(_BERN[: k + 1])


class UniPolynomial:
    """Dense univariate polynomial with exact rational coefficients.

    ``coeffs[i]`` is the coefficient of x^i. Trailing zeros are stripped, so
    the zero polynomial has an empty coefficient list and degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[RationalLike]):
        cs = [as_rational(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x: RationalLike) -> Fraction:
        x = as_rational(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other: object) -> bool:
        if isinstance(other, UniPolynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == UniPolynomial([other]).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other: "UniPolynomial") -> "UniPolynomial":
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return UniPolynomial(
            [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]
        )

    def __neg__(self) -> "UniPolynomial":
        return UniPolynomial([-c for c in self.coeffs])

    def __sub__(self, other: "UniPolynomial") -> "UniPolynomial":
        return self + (-other)

    def __mul__(self, other: Union["UniPolynomial", int, Fraction]) -> "UniPolynomial":
        if not isinstance(other, UniPolynomial):
            return UniPolynomial([c * other for c in self.coeffs])
        if not self.coeffs or not other.coeffs:
            return UniPolynomial([])
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UniPolynomial(out)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        if not self.coeffs:
            return "UniPolynomial(0)"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            parts.append(f"{format_rational(c)}{'*' + mono if mono else ''}")
        return "UniPolynomial(" + " + ".join(parts) + ")"


@functools.lru_cache(maxsize=None)
def bernoulli_polynomial(k: int) -> UniPolynomial:
    """B_k(x) = sum_j C(k, j) B_j x^(k-j)."""
    if k < 0:
        raise ValueError("k must be non-negative")
    bs = bernoulli_numbers(k)
    coeffs = [Fraction(0)] * (k + 1)
    for j in range(k + 1):
        coeffs[k - j] = math.comb(k, j) * bs[j]
    return UniPolynomial(coeffs)


def fractional_part(t: RationalLike) -> Fraction:
    """t - floor(t), always in [0, 1)."""
    t = as_rational(t)
    return t - (t.numerator // t.denominator)


def periodic_bernoulli(k: int, t: RationalLike) -> Fraction:
    """B_k evaluated at the fractional part of t, with the value 0 for k = 1 at integers."""
    frac = fractional_part(t)
    if k == 1 and frac == 0:
        return Fraction(0)
    return bernoulli_polynomial(k)(frac)
