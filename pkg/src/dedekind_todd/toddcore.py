"""Todd polynomials of lattice cones and the normalized Todd cocycle.

Conventions. A cone ``C = Cone(v_1, ..., v_n)`` has Todd polynomial
``Todd_C^N(x)`` in coordinates x relative to the basis v. The normalized
Todd function ``S^N(C)`` lives on the ambient space: at ``y = sum x_i v_i``
it equals ``Todd_C^N(x) / (det M_C * x_1 ... x_n)``. Because
``x_i = <u_i, y> / <u_i, v_i>`` for the dual rows ``u_i``, the denominator
is a product of primitive integer linear forms in y.
"""
from __future__ import annotations

import functools
import itertools
import json
import math
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from .bernsums import bernoulli_product_sum
from .cones import (
    LatticeCone,
    ConeChain,
    SubdivisionNode,
    dual_cone,
    outer_inner_split,
    parallelepiped_lattice_points,
    subdivision_tree,
)
from .exactnum import bernoulli_number, bernoulli_polynomial, format_rational, lcm_all

__all__ = [
    "MultiIndex",
    "compositions",
    "HomogPolynomial",
    "HomogeneousRationalFn",
    "todd_polynomial",
    "todd_coefficient_t",
    "todd_polynomial_of_cone",
    "standard_cone_data",
    "normalized_todd",
    "chain_normalized_todd",
    "subdivision_sum",
    "verify_cocycle",
    "inner_pole_check",
    "denominator_dNn",
]

Index = Tuple[int, ...]


class MultiIndex(tuple):
    """Tuple of non-negative integers with its weight and factorial."""

    def __new__(cls, entries: Iterable[int]):
        vals = tuple(int(e) for e in entries)
        if any(v < 0 for v in vals):
            raise ValueError("multi-index entries must be non-negative")
        return super().__new__(cls, vals)

    @property
    def weight(self) -> int:
        return sum(self)

    @property
    def factorial(self) -> int:
        out = 1
        for v in self:
            out *= math.factorial(v)
        return out


def compositions(total: int, parts: int) -> Iterator[Index]:
    """All non-negative integer tuples of length ``parts`` summing to ``total``, lex order."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


# polynomials -----------------------------------------------------------------

class HomogPolynomial:
    """Homogeneous polynomial of degree N in n variables, exact coefficients."""

    __slots__ = ("n", "N", "terms")

    def __init__(self, n: int, N: int, terms: Optional[Mapping[Sequence[int], Fraction | int]] = None):
        self.n = n
        self.N = N
        self.terms: Dict[Index, Fraction] = {}
        if terms:
            for idx, c in terms.items():
                idx = tuple(int(i) for i in idx)
                if len(idx) != n or sum(idx) != N:
                    raise ValueError(f"index {idx} does not have length {n} and weight {N}")
                if c:
                    self.terms[idx] = self.terms.get(idx, Fraction(0)) + Fraction(c)
                    if not self.terms[idx]:
                        del self.terms[idx]

    @classmethod
    def monomial_power(cls, form: Sequence[Fraction | int], power: int) -> "HomogPolynomial":
        """(sum form_i y_i)^power."""
        n = len(form)
        out = cls(n, 0, {(0,) * n: 1})
        lin = cls(n, 1, {tuple(int(i == j) for j in range(n)): form[i] for i in range(n) if form[i]})
        for _ in range(power):
            out = out * lin
        return out

    def coefficient(self, idx: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(idx), Fraction(0))

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: "HomogPolynomial") -> None:
        if self.n != other.n:
            raise ValueError("variable count mismatch")

    def __add__(self, other: "HomogPolynomial") -> "HomogPolynomial":
        self._check(other)
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.N != other.N:
            raise ValueError("cannot add polynomials of different degrees")
        out = HomogPolynomial(self.n, self.N)
        out.terms = dict(self.terms)
        for k, v in other.terms.items():
            s = out.terms.get(k, 0) + v
            if s:
                out.terms[k] = s
            else:
                out.terms.pop(k, None)
        return out

    def __neg__(self) -> "HomogPolynomial":
        out = HomogPolynomial(self.n, self.N)
        out.terms = {k: -v for k, v in self.terms.items()}
        return out

    def __sub__(self, other: "HomogPolynomial") -> "HomogPolynomial":
        return self + (-other)

    def scale(self, c: Fraction | int) -> "HomogPolynomial":
        out = HomogPolynomial(self.n, self.N)
        if c:
            out.terms = {k: v * c for k, v in self.terms.items()}
        return out

    def __mul__(self, other: "HomogPolynomial") -> "HomogPolynomial":
        if not isinstance(other, HomogPolynomial):
            return self.scale(other)
        self._check(other)
        out: Dict[Index, Fraction] = {}
        for a, ca in self.terms.items():
            for b, cb in other.terms.items():
                k = tuple(x + y for x, y in zip(a, b))
                out[k] = out.get(k, 0) + ca * cb
        res = HomogPolynomial(self.n, self.N + other.N)
        res.terms = {k: v for k, v in out.items() if v}
        return res

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HomogPolynomial):
            return NotImplemented
        if self.n != other.n:
            return False
        if self.is_zero() and other.is_zero():
            return True
        return self.N == other.N and self.terms == other.terms

    def compose_linear(self, rows: Sequence[Sequence[Fraction | int]]) -> "HomogPolynomial":
        """Substitute x_i = sum_j rows[i][j] y_j."""
        m = len(rows[0]) if rows else 0
        powers: Dict[Tuple[int, int], HomogPolynomial] = {}

        def power(i: int, e: int) -> HomogPolynomial:
            key = (i, e)
            if key not in powers:
                if e == 0:
                    powers[key] = HomogPolynomial(m, 0, {(0,) * m: 1})
                else:
                    lin = HomogPolynomial(m, 1, {tuple(int(a == b) for b in range(m)): rows[i][a]
                                                 for a in range(m) if rows[i][a]})
                    powers[key] = power(i, e - 1) * lin
            return powers[key]

        out = HomogPolynomial(m, self.N)
        for idx, c in self.terms.items():
            term = HomogPolynomial(m, 0, {(0,) * m: c})
            for i, e in enumerate(idx):
                if e:
                    term = term * power(i, e)
            out = out + term
        return out

    def divide_linear(self, form: Sequence[int]) -> Optional["HomogPolynomial"]:
        """Exact quotient by the linear form, or None when it does not divide."""
        if self.is_zero():
            return HomogPolynomial(self.n, max(self.N - 1, 0))
        k = next(i for i, a in enumerate(form) if a)
        lead = Fraction(form[k])
        rest = [(i, a) for i, a in enumerate(form) if a and i != k]
        rem = dict(self.terms)
        quot: Dict[Index, Fraction] = {}
        for level in range(self.N, 0, -1):
            for idx in [i for i in rem if i[k] == level]:
                c = rem.pop(idx)
                qidx = idx[:k] + (idx[k] - 1,) + idx[k + 1:]
                qc = c / lead
                quot[qidx] = qc
                for i, a in rest:
                    t = list(qidx)
                    t[i] += 1
                    t = tuple(t)
                    v = rem.get(t, 0) - qc * a
                    if v:
                        rem[t] = v
                    else:
                        rem.pop(t, None)
        if rem:
            return None
        out = HomogPolynomial(self.n, self.N - 1)
        out.terms = quot
        return out

    def denominator_lcm(self) -> int:
        return lcm_all(c.denominator for c in self.terms.values())

    def sorted_terms(self) -> List[Tuple[Index, Fraction]]:
        return sorted(self.terms.items(), reverse=True)

    def to_json(self) -> str:
        return json.dumps({
            "n": self.n,
            "N": self.N,
            "terms": [{"index": list(k), "num": str(v.numerator), "den": str(v.denominator)}
                      for k, v in self.sorted_terms()],
        })

    @classmethod
    def from_json(cls, text: str | Mapping) -> "HomogPolynomial":
        data = json.loads(text) if isinstance(text, str) else text
        terms = {tuple(t["index"]): Fraction(int(t["num"]), int(t["den"])) for t in data["terms"]}
        return cls(int(data["n"]), int(data["N"]), terms)

    def __repr__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for idx, c in self.sorted_terms():
            mono = "*".join(f"x{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(idx) if e)
            parts.append(format_rational(c) + ("*" + mono if mono else ""))
        return " + ".join(parts)


def _canonical_form(form: Sequence[Fraction | int]) -> Tuple[Tuple[int, ...], Fraction]:
    """Primitive integer form with positive leading entry, and the scalar factor.

    ``form = factor * canonical``.
    """
    fr = [Fraction(a) for a in form]
    den = lcm_all(a.denominator for a in fr)
    ints = [int(a * den) for a in fr]
    g = math.gcd(*ints)
    if g == 0:
        raise ValueError("zero linear form")
    lead = next(a for a in ints if a)
    if lead < 0:
        g = -g
    return tuple(a // g for a in ints), Fraction(g, den)


class HomogeneousRationalFn:
    """numerator / product of linear forms (with multiplicity).

    Forms are primitive integer vectors with positive leading entry, so a
    reduced representation is unique. ``basis`` records the coordinates the
    variables refer to; the identity means standard coordinates.
    """

    __slots__ = ("numerator", "forms", "basis")

    def __init__(self, numerator: HomogPolynomial,
                 forms: Optional[Mapping[Tuple[int, ...], int] | Sequence[Sequence[int]]] = None,
                 basis: Optional[Sequence[Sequence[int]]] = None):
        n = numerator.n
        num = numerator
        fm: Dict[Tuple[int, ...], int] = {}
        items: Iterable[Tuple[Sequence[int], int]]
        if forms is None:
            items = []
        elif isinstance(forms, Mapping):
            items = forms.items()
        else:
            items = [(f, 1) for f in forms]
        for f, mult in items:
            canon, factor = _canonical_form(f)
            if len(canon) != n:
                raise ValueError("linear form length mismatch")
            fm[canon] = fm.get(canon, 0) + mult
            num = num.scale(Fraction(1) / factor ** mult)
        self.numerator = num
        self.forms = {f: m for f, m in fm.items() if m}
        self.basis = tuple(tuple(r) for r in basis) if basis is not None else tuple(
            tuple(int(i == j) for j in range(n)) for i in range(n))

    @classmethod
    def zero(cls, n: int) -> "HomogeneousRationalFn":
        return cls(HomogPolynomial(n, 0))

    @property
    def n(self) -> int:
        return self.numerator.n

    @property
    def degree(self) -> int:
        return self.numerator.N - sum(self.forms.values())

    def is_zero(self) -> bool:
        return self.numerator.is_zero()

    def _check(self, other: "HomogeneousRationalFn") -> None:
        if self.basis != other.basis:
            raise ValueError("rational functions refer to different bases")

    def _lifted(self, target: Mapping[Tuple[int, ...], int]) -> HomogPolynomial:
        num = self.numerator
        for f, m in target.items():
            for _ in range(m - self.forms.get(f, 0)):
                num = num * HomogPolynomial.monomial_power(f, 1)
        return num

    def __add__(self, other: "HomogeneousRationalFn") -> "HomogeneousRationalFn":
        self._check(other)
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        common = dict(self.forms)
        for f, m in other.forms.items():
            common[f] = max(common.get(f, 0), m)
        out = HomogeneousRationalFn.__new__(HomogeneousRationalFn)
        out.numerator = self._lifted(common) + other._lifted(common)
        out.forms = common
        out.basis = self.basis
        return out.reduced()

    def __neg__(self) -> "HomogeneousRationalFn":
        out = HomogeneousRationalFn.__new__(HomogeneousRationalFn)
        out.numerator, out.forms, out.basis = -self.numerator, dict(self.forms), self.basis
        return out

    def __sub__(self, other: "HomogeneousRationalFn") -> "HomogeneousRationalFn":
        return self + (-other)

    def scale(self, c: Fraction | int) -> "HomogeneousRationalFn":
        out = HomogeneousRationalFn.__new__(HomogeneousRationalFn)
        out.numerator, out.forms, out.basis = self.numerator.scale(c), dict(self.forms), self.basis
        return out

    def reduced(self) -> "HomogeneousRationalFn":
        """Cancel every linear form that divides the numerator."""
        if self.numerator.is_zero():
            return HomogeneousRationalFn(HomogPolynomial(self.n, 0), basis=self.basis)
        num = self.numerator
        forms = dict(self.forms)
        for f in sorted(forms):
            while forms[f] > 0:
                q = num.divide_linear(f)
                if q is None:
                    break
                num = q
                forms[f] -= 1
        out = HomogeneousRationalFn.__new__(HomogeneousRationalFn)
        out.numerator = num
        out.forms = {f: m for f, m in forms.items() if m}
        out.basis = self.basis
        return out

    def is_polynomial(self) -> bool:
        return not self.reduced().forms

    def compose_linear(self, matrix: Sequence[Sequence[int]]) -> "HomogeneousRationalFn":
        """Pull back along y = matrix @ x; the result is read in the new basis."""
        n = self.n
        num = self.numerator.compose_linear(matrix)
        new_forms: Dict[Tuple[int, ...], int] = {}
        for f, m in self.forms.items():
            g = [sum(f[i] * matrix[i][j] for i in range(n)) for j in range(n)]
            new_forms[tuple(g)] = new_forms.get(tuple(g), 0) + m
        cols = [[sum(b[i] * matrix[i][j] for i in range(n)) for j in range(n)] for b in self.basis]
        return HomogeneousRationalFn(num, new_forms, basis=None if _is_identity(cols) else cols)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HomogeneousRationalFn):
            return NotImplemented
        if self.basis != other.basis:
            return False
        if self.is_zero() or other.is_zero():
            return self.is_zero() and other.is_zero()
        if self.degree != other.degree:
            return False
        common = dict(self.forms)
        for f, m in other.forms.items():
            common[f] = max(common.get(f, 0), m)
        return self._lifted(common) == other._lifted(common)

    def __repr__(self) -> str:
        den = " * ".join(
            f"({'+'.join(f'{a}*y{i + 1}' for i, a in enumerate(f) if a)})" + (f"^{m}" if m > 1 else "")
            for f, m in sorted(self.forms.items()))
        return f"({self.numerator!r}) / ({den or '1'})"


def _is_identity(rows: Sequence[Sequence[int]]) -> bool:
    return all(rows[i][j] == int(i == j) for i in range(len(rows)) for j in range(len(rows)))


# Todd data -------------------------------------------------------------------

@functools.lru_cache(maxsize=None)
def todd_polynomial(N: int, n: int) -> HomogPolynomial:
    """Degree-N part of prod x_i / (1 - exp(-x_i))."""
    sign = (-1) ** N
    terms = {}
    for r in compositions(N, n):
        c = Fraction(sign)
        for ri in r:
            c *= bernoulli_number(ri) / math.factorial(ri)
        if c:
            terms[r] = c
    return HomogPolynomial(n, N, terms)


@functools.lru_cache(maxsize=None)
def denominator_dNn(N: int, n: int) -> int:
    """lcm of the coefficient denominators of the degree-N Todd polynomial in n variables."""
    if N < 0 or n < 1:
        raise ValueError("need N >= 0 and n >= 1")
    # the coefficient of x^j depends only on the multiset of exponents
    dens = []
    for part in _partitions(N, n):
        c = Fraction(1)
        for ri in part:
            c *= bernoulli_number(ri) / math.factorial(ri)
        if c:
            dens.append(c.denominator)
    return lcm_all(dens)


def _partitions(total: int, parts: int, largest: Optional[int] = None) -> Iterator[Tuple[int, ...]]:
    """Non-increasing tuples of at most ``parts`` positive integers summing to ``total``."""
    if largest is None:
        largest = total
    if total == 0:
        yield ()
        return
    if parts == 0:
        return
    for k in range(min(total, largest), 0, -1):
        for rest in _partitions(total - k, parts - 1, k):
            yield (k,) + rest


def todd_coefficient_t(r: Sequence[int], q: int, p: Sequence[int], *, method: str = "fold") -> Fraction:
    """Todd coefficient: box sum of Bernoulli polynomial values (no periodic correction).

    One entry of ``r`` per coordinate and one modulus per free coordinate.
    For a single coordinate this is B_{r_1}; for none it is 1.
    """
    if len(r) == 0:
        return Fraction(1)
    return bernoulli_product_sum(r, q, p, periodic=False, method=method)


def standard_cone_data(cone: LatticeCone) -> Optional[Tuple[int, Tuple[int, ...]]]:
    """(q, p) if the cone is Cone(e_1, ..., e_{n-1}, (p, q)) with q > 0, else None."""
    n = cone.dim
    if not cone.is_full or n < 1:
        return None
    for i, g in enumerate(cone.generators[:-1]):
        if g != tuple(int(i == j) for j in range(n)):
            return None
    last = cone.generators[-1]
    q = last[-1]
    if q < 1:
        return None
    return q, tuple(last[:-1])


def _todd_of_standard(q: int, p: Sequence[int], N: int) -> HomogPolynomial:
    n = len(p) + 1
    terms = {}
    for j in compositions(N, n):
        t = todd_coefficient_t(j, q, p)
        if t:
            fact = 1
            for ji in j:
                fact *= math.factorial(ji)
            terms[j] = (-1) ** N * Fraction(q) ** (N - n + 1) * t / fact
    return HomogPolynomial(n, N, terms)


def _todd_by_lattice_points(cone: LatticeCone, N: int) -> HomogPolynomial:
    """Todd polynomial from the dual parallelepiped, valid for any nondegenerate cone.

    With ``c_i = <u_i, v_i>`` and ``w = sum b_i u_i`` running over the integer
    points of the dual parallelepiped, the coefficient of x^j is
    ``|det| / prod c_i * sum_w prod B_{j_i}(b_i) (-c_i)^{j_i} / j_i!``.
    """
    n = cone.dim
    dual = dual_cone(cone)
    c = [sum(a * b for a, b in zip(dual.generators[i], cone.generators[i])) for i in range(n)]
    points = parallelepiped_lattice_points(dual)
    # barycentric coordinates of w in the dual basis: b_i = <w, v_i> / c_i
    coords = [[Fraction(sum(a * b for a, b in zip(w, cone.generators[i])), c[i]) for i in range(n)]
              for w in points]
    prefactor = Fraction(abs(cone.det), math.prod(c))
    terms = {}
    for j in compositions(N, n):
        polys = [bernoulli_polynomial(ji) for ji in j]
        acc = Fraction(0)
        for b in coords:
            term = Fraction(1)
            for poly, bi in zip(polys, b):
                term *= poly(bi)
                if not term:
                    break
            acc += term
        if acc:
            weight = Fraction(1)
            for ji, ci in zip(j, c):
                weight *= Fraction((-ci) ** ji, math.factorial(ji))
            terms[j] = prefactor * acc * weight
    return HomogPolynomial(n, N, terms)


def todd_polynomial_of_cone(cone: LatticeCone, N: int, method: str = "auto") -> HomogPolynomial:
    """Degree-N Todd polynomial of a cone, in coordinates relative to its generators.

    ``method``: ``"standard"`` uses Todd coefficients and needs a cone of the
    form Cone(e_1, ..., e_{n-1}, (p, q)); ``"lattice"`` sums over the dual
    parallelepiped; ``"subdivision"`` adds up the unimodular pieces;
    ``"auto"`` picks standard when possible, else lattice.
    """
    if cone.is_degenerate:
        raise ValueError("Todd polynomial needs a nondegenerate cone")
    n = cone.dim
    if cone.is_nonsingular and method == "auto":
        return todd_polynomial(N, n)
    std = standard_cone_data(cone)
    if method == "auto":
        method = "standard" if std is not None else "lattice"
    if method == "standard":
        if std is None:
            raise ValueError("cone is not of the form Cone(e_1, ..., e_{n-1}, (p, q))")
        return _todd_of_standard(std[0], std[1], N)
    if method == "lattice":
        return _todd_by_lattice_points(cone, N)
    if method == "subdivision":
        total = subdivision_sum(cone, N)
        in_basis = total.compose_linear(cone.matrix())
        coords = HomogeneousRationalFn(
            HomogPolynomial(n, n, {(1,) * n: cone.det}), basis=in_basis.basis)
        prod = _multiply(in_basis, coords).reduced()
        if prod.forms:
            raise AssertionError("subdivision sum did not clear to a polynomial")
        return prod.numerator
    raise ValueError(f"unknown method {method!r}")


def _multiply(a: HomogeneousRationalFn, b: HomogeneousRationalFn) -> HomogeneousRationalFn:
    forms = dict(a.forms)
    for f, m in b.forms.items():
        forms[f] = forms.get(f, 0) + m
    out = HomogeneousRationalFn.__new__(HomogeneousRationalFn)
    out.numerator = a.numerator * b.numerator
    out.forms = forms
    out.basis = a.basis
    return out


def normalized_todd(cone: LatticeCone, N: int, method: str = "auto") -> HomogeneousRationalFn:
    """S^N(C) as a rational function of the standard coordinates.

    Degenerate cones give zero.
    """
    n = cone.dim
    if cone.is_degenerate:
        return HomogeneousRationalFn.zero(n)
    todd = todd_polynomial_of_cone(cone, N, method=method)
    dual = dual_cone(cone)
    c = [sum(a * b for a, b in zip(dual.generators[i], cone.generators[i])) for i in range(n)]
    rows = [[Fraction(a, c[i]) for a in dual.generators[i]] for i in range(n)]
    num = todd.compose_linear(rows).scale(Fraction(math.prod(c), cone.det))
    return HomogeneousRationalFn(num, list(dual.generators))


def chain_normalized_todd(chain: ConeChain, N: int, n: Optional[int] = None) -> HomogeneousRationalFn:
    """Linear extension of S^N to chains of n-cones."""
    out = None
    for cone, k in chain:
        term = normalized_todd(cone, N).scale(k)
        out = term if out is None else out + term
    if out is None:
        if n is None:
            raise ValueError("dimension needed for an empty chain")
        return HomogeneousRationalFn.zero(n)
    return out


def _tree_sum(node: SubdivisionNode, N: int, skip: frozenset = frozenset()) -> HomogeneousRationalFn:
    if not node.children:
        if node.cone in skip:
            return HomogeneousRationalFn.zero(node.cone.dim)
        return normalized_todd(node.cone, N)
    total = HomogeneousRationalFn.zero(node.cone.dim)
    for child in node.children:
        total = total + _tree_sum(child, N, skip)
    return total


def subdivision_sum(cone: LatticeCone, N: int) -> HomogeneousRationalFn:
    """Sum of S^N over the unimodular pieces of the recursive subdivision.

    Pieces are added sibling group by sibling group, cancelling common
    linear factors after each addition, which keeps denominators small.
    """
    return _tree_sum(subdivision_tree(cone), N)


def verify_cocycle(cone: LatticeCone, N: int) -> bool:
    """S^N(C) equals the sum of S^N over its unimodular subdivision."""
    if cone.is_nonsingular:
        return True
    lhs = normalized_todd(cone, N)
    rhs = subdivision_sum(cone, N)
    return lhs == rhs


def inner_pole_check(cone: LatticeCone, N: int) -> bool:
    """True when the inner pieces' S^N sum has no pole along any facet of C.

    The sum over all pieces minus the outer pieces is reduced, and none of
    the dual rows of C may survive in its denominator.
    """
    tree = subdivision_tree(cone)
    leaves = tree.leaves()
    outer, inner = outer_inner_split(cone, leaves)
    outer_set = set()
    for d in outer:
        outer_set.update(x for x in leaves if set(x.generators) == set(d.generators))
    inner_sum = _tree_sum(tree, N, skip=frozenset(outer_set))
    facets = {_canonical_form(u)[0] for u in dual_cone(cone).generators}
    return not (set(inner_sum.reduced().forms) & facets)
