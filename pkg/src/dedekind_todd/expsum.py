"""Exponential sums of Laurent polynomials over unit tuples, and equidistribution experiments.

All modular evaluation is exact. A sum of e_q(f(p)) over tuples is first
turned into a histogram of residues f(p) mod q, so the floating-point part
is a sum of at most q terms with integer weights.
"""
from __future__ import annotations

import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .congruence import f_r_polynomial
from .exactnum import modinv
from .laurent import LaurentPolynomial

__all__ = [
    "check_condition_H",
    "ExpSumResult",
    "exp_sum_K",
    "kloosterman_direct",
    "MultiplicativityCheck",
    "multiplicativity_check",
    "EquidistSample",
    "weyl_average",
    "WeilRow",
    "empirical_weil_check",
    "FractionalHistogram",
    "fractional_part_histogram",
    "star_discrepancy",
    "tuple_count",
]

_CHUNK = 1 << 20


def check_condition_H(f: LaurentPolynomial) -> Tuple[bool, Optional[int]]:
    """Is the top x_i-degree coefficient a single monomial for some i?

    Returns (True, i) for the first such variable index, else (False, None).
    """
    if f.is_zero():
        return False, None
    for i in range(len(f.vars)):
        top = max(e[i] for e in f.terms)
        if sum(1 for e in f.terms if e[i] == top) == 1:
            return True, i
    return False, None


def _units(q: int) -> np.ndarray:
    return np.array([a for a in range(1, q) if math.gcd(a, q) == 1], dtype=np.int64)


def _power_tables(units: np.ndarray, q: int, exponents: Iterable[int]) -> dict:
    inv = np.array([modinv(int(u), q) for u in units], dtype=np.int64)
    out = {}
    for e in sorted(set(exponents)):
        base = units if e >= 0 else inv
        acc = np.ones_like(units)
        for _ in range(abs(e)):
            acc = acc * base % q
        out[e] = acc
    return out


def _residue_histogram(terms: Sequence[Tuple[Tuple[int, ...], int]], nvars: int, q: int) -> np.ndarray:
    """counts[a] = #{unit tuples p : f(p) = a mod q}."""
    units = _units(q)
    phi = len(units)
    if nvars == 0:
        counts = np.zeros(q, dtype=np.int64)
        counts[sum(c for _, c in terms) % q] += 1
        return counts
    tables = [_power_tables(units, q, [e[i] for e, _ in terms]) for i in range(nvars)]
    counts = np.zeros(q, dtype=np.int64)
    # enumerate the first variable in blocks so memory stays bounded
    rest = phi ** (nvars - 1)
    block = max(1, _CHUNK // max(rest, 1))
    for start in range(0, phi, block):
        idx0 = np.arange(start, min(phi, start + block))
        grids = np.meshgrid(idx0, *([np.arange(phi)] * (nvars - 1)), indexing="ij")
        flat = [g.ravel() for g in grids]
        value = np.zeros(flat[0].shape, dtype=np.int64)
        for e, c in terms:
            term = np.full(flat[0].shape, c % q, dtype=np.int64)
            for i in range(nvars):
                if e[i]:
                    term = term * tables[i][e[i]][flat[i]] % q
            value = (value + term) % q
        counts += np.bincount(value, minlength=q)
    return counts


def _phase_sum(counts: np.ndarray, q: int) -> complex:
    nz = np.nonzero(counts)[0]
    ang = [2.0 * math.pi * int(a) / q for a in nz]
    w = [int(counts[a]) for a in nz]
    re = math.fsum(c * math.cos(t) for c, t in zip(w, ang))
    im = math.fsum(c * math.sin(t) for c, t in zip(w, ang))
    return complex(re, im)


def _int_terms(f: LaurentPolynomial, factor: int = 1) -> List[Tuple[Tuple[int, ...], int]]:
    out = []
    for e, c in sorted(f.terms.items()):
        if isinstance(c, Fraction):
            if c.denominator != 1:
                raise ValueError("f must have integer coefficients")
            c = c.numerator
        out.append((e, int(c) * factor))
    return out


@dataclass(frozen=True)
class ExpSumResult:
    q: int
    value: complex
    trivial_bound: int
    weil_reference: float

    @property
    def abs(self) -> float:
        return abs(self.value)


def exp_sum_K(f: LaurentPolynomial, q: int, factor: int = 1) -> ExpSumResult:
    """K(f, q) = sum over unit tuples of e_q(factor * f(p)).

    ``factor`` defaults to 1; other values give the twisted sums that appear
    when a modulus is split by the Chinese remainder theorem.
    """
    if q < 2:
        raise ValueError("q must be >= 2")
    nvars = len(f.vars)
    counts = _residue_histogram(_int_terms(f, factor), nvars, q)
    value = _phase_sum(counts, q)
    phi = sum(1 for a in range(1, q) if math.gcd(a, q) == 1)
    trivial = phi ** nvars
    if abs(value) > trivial * (1 + 1e-12) + 1e-9:
        raise ArithmeticError("exponential sum exceeds the trivial bound")
    return ExpSumResult(q, value, trivial, q ** (nvars - 0.5) if nvars else 1.0)


def kloosterman_direct(a: int, b: int, q: int) -> complex:
    """sum_{x in (Z/q)^*} e_q(a x + b x^-1) by a plain loop."""
    re, im = [], []
    for x in range(1, q):
        if math.gcd(x, q) != 1:
            continue
        t = 2.0 * math.pi * ((a * x + b * pow(x, -1, q)) % q) / q
        re.append(math.cos(t))
        im.append(math.sin(t))
    return complex(math.fsum(re), math.fsum(im))


@dataclass(frozen=True)
class MultiplicativityCheck:
    q1: int
    q2: int
    whole: complex
    product: complex
    twisted_product: complex

    @property
    def relative_error(self) -> float:
        return abs(self.whole - self.product) / max(1.0, abs(self.product))

    @property
    def twisted_relative_error(self) -> float:
        return abs(self.whole - self.twisted_product) / max(1.0, abs(self.twisted_product))


def multiplicativity_check(f: LaurentPolynomial, q1: int, q2: int) -> MultiplicativityCheck:
    """Compare K(f, q1 q2) with K(f, q1) K(f, q2) and with the CRT-twisted product.

    With u q2 + v q1 = 1 one has K(f, q1 q2) = K(u f, q1) K(v f, q2).
    """
    if math.gcd(q1, q2) != 1:
        raise ValueError("moduli must be coprime")
    whole = exp_sum_K(f, q1 * q2).value
    plain = exp_sum_K(f, q1).value * exp_sum_K(f, q2).value
    u = modinv(q2 % q1, q1)
    v = modinv(q1 % q2, q2)
    twisted = exp_sum_K(f, q1, u).value * exp_sum_K(f, q2, v).value
    return MultiplicativityCheck(q1, q2, whole, plain, twisted)


def tuple_count(n: int, x: float) -> int:
    """|I_n(x)| = sum_{2 <= q < x} phi(q)^(n-1)."""
    total = 0
    for q in range(2, math.ceil(x)):
        phi = sum(1 for a in range(1, q) if math.gcd(a, q) == 1)
        total += phi ** (n - 1)
    return total


@dataclass(frozen=True)
class EquidistSample:
    x: float
    k: int
    average: complex
    count: int


def _weyl_chunk(args) -> Tuple[List[float], List[float], int]:
    terms, nvars, qs, k = args
    re, im, count = [], [], 0
    for q in qs:
        counts = _residue_histogram([(e, c * k) for e, c in terms], nvars, q)
        z = _phase_sum(counts, q)
        re.append(z.real)
        im.append(z.imag)
        count += int(counts.sum())
    return re, im, count


def _partition(qs: List[int], parts: int) -> List[List[int]]:
    return [qs[i::parts] for i in range(parts)] if parts > 1 else [qs]


def weyl_average(f: LaurentPolynomial, k: int, x: float, workers: int = 1) -> EquidistSample:
    """(1/|I_n(x)|) sum over q < x and unit tuples p of e_q(k f(p))."""
    if k == 0:
        raise ValueError("k must be nonzero")
    if x <= 2:
        raise ValueError("x must exceed 2")
    if not check_condition_H(f)[0]:
        warnings.warn("f does not satisfy condition (H)", stacklevel=2)
    terms = _int_terms(f)
    nvars = len(f.vars)
    qs = list(range(2, math.ceil(x)))
    jobs = [(terms, nvars, chunk, k) for chunk in _partition(qs, workers) if chunk]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_weyl_chunk, jobs))
    else:
        results = [_weyl_chunk(j) for j in jobs]
    re = [v for r in results for v in r[0]]
    im = [v for r in results for v in r[1]]
    count = sum(r[2] for r in results)
    avg = complex(math.fsum(re), math.fsum(im)) / count
    return EquidistSample(x, k, avg, count)


@dataclass(frozen=True)
class WeilRow:
    p: int
    abs_value: float
    reference: float
    ratio: float


def empirical_weil_check(f: LaurentPolynomial, primes: Sequence[int]) -> Tuple[List[WeilRow], float]:
    """Rows (p, |K(f,p)|, p^((n-1) - 1/2), ratio) and the largest ratio."""
    if f.is_constant():
        raise ValueError("f must be nonconstant")
    rows = []
    for p in primes:
        res = exp_sum_K(f, p)
        rows.append(WeilRow(p, res.abs, res.weil_reference, res.abs / res.weil_reference))
    return rows, max((r.ratio for r in rows), default=0.0)


def star_discrepancy(points: Sequence[float]) -> float:
    """sup_t |#{x < t}/N - t| for points in [0, 1)."""
    xs = np.sort(np.asarray(points, dtype=float))
    n = len(xs)
    if n == 0:
        return 0.0
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - xs), np.max(xs - (i - 1) / n)))


@dataclass(frozen=True)
class FractionalHistogram:
    bins: int
    counts: Tuple[int, ...]
    total: int
    discrepancy: float

    def edges(self) -> List[Tuple[Fraction, Fraction]]:
        return [(Fraction(i, self.bins), Fraction(i + 1, self.bins)) for i in range(self.bins)]


def fractional_part_histogram(r: Sequence[int], x: float, bins: int = 20) -> FractionalHistogram:
    """Histogram of the fractional parts of normalized Dedekind sums over q < x.

    Each value is read off as f_r(p) mod q divided by q, which equals the
    fractional part of d q^(N-n) s_r / r!.
    """
    r = tuple(r)
    n = len(r)
    poly = f_r_polynomial(r, "s", pruned=True)
    terms = _int_terms(poly)
    counts = np.zeros(bins, dtype=np.int64)
    points: List[np.ndarray] = []
    for q in range(2, math.ceil(x)):
        hist = _residue_histogram(terms, n - 1, q)
        residues = np.nonzero(hist)[0]
        np.add.at(counts, residues * bins // q, hist[residues])
        points.append(np.repeat(residues / q, hist[residues]))
    allpts = np.concatenate(points) if points else np.zeros(0)
    return FractionalHistogram(bins, tuple(int(c) for c in counts), int(counts.sum()),
                               star_discrepancy(allpts))
