"""Sparse multivariate Laurent polynomials and iterated constant terms.

Coefficients live in one of three rings: the integers, the rationals, or
the integers modulo q. A :class:`RationalFn` is a quotient of two Laurent
polynomials. The iterated constant term with respect to an ordered
variable list ``[x_1, ..., x_n]`` expands in x_n first (the smallest
variable), takes the x_n constant term, then moves on to x_{n-1}, and so on.
"""
from __future__ import annotations

import json
import math
import re
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .exactnum import format_rational, modinv

__all__ = [
    "Ring",
    "ZZ",
    "QQ",
    "LaurentPolynomial",
    "RationalFn",
    "InadmissibleError",
    "parse_laurent",
    "univariate_laurent_expand",
    "iterated_constant_term",
    "iterated_coefficient",
    "admissible",
]

Exps = Tuple[int, ...]


class InadmissibleError(ValueError):
    """The rational function has no Laurent expansion for the requested order."""


def _factor(q: int) -> Dict[int, int]:
    out: Dict[int, int] = {}
    d = 2
    while d * d <= q:
        while q % d == 0:
            out[d] = out.get(d, 0) + 1
            q //= d
        d += 1
    if q > 1:
        out[q] = out.get(q, 0) + 1
    return out


class Ring:
    """Coefficient ring: ``ZZ``, ``QQ`` or ``ZZ/q``."""

    __slots__ = ("kind", "modulus", "_nil_index")

    def __init__(self, kind: str, modulus: Optional[int] = None):
        if kind not in ("ZZ", "QQ", "ZZ/q"):
            raise ValueError(f"unknown ring {kind!r}")
        if kind == "ZZ/q":
            if modulus is None or modulus < 2:
                raise ValueError("modulus must be >= 2")
        else:
            modulus = None
        self.kind = kind
        self.modulus = modulus
        self._nil_index = max(_factor(modulus).values()) if modulus else 1

    @classmethod
    def mod(cls, q: int) -> "Ring":
        return cls("ZZ/q", q)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Ring) and (self.kind, self.modulus) == (other.kind, other.modulus)

    def __hash__(self) -> int:
        return hash((self.kind, self.modulus))

    def __repr__(self) -> str:
        return f"ZZ/{self.modulus}" if self.modulus else self.kind

    @property
    def nilpotency_index(self) -> int:
        """Every product of this many nilpotent elements vanishes."""
        return self._nil_index

    def coerce(self, value: Union[int, Fraction, str]) -> Union[int, Fraction]:
        v = Fraction(value)
        if self.kind == "QQ":
            return v
        if self.kind == "ZZ":
            if v.denominator != 1:
                raise ValueError(f"{value} is not an integer")
            return v.numerator
        q = self.modulus
        return v.numerator * modinv(v.denominator % q, q) % q

    def is_zero(self, c) -> bool:
        return c == 0

    def is_unit(self, c) -> bool:
        if self.kind == "QQ":
            return c != 0
        if self.kind == "ZZ":
            return c in (1, -1)
        return math.gcd(c, self.modulus) == 1

    def inverse(self, c):
        if not self.is_unit(c):
            raise ZeroDivisionError(f"{c} is not a unit in {self}")
        if self.kind == "QQ":
            return 1 / Fraction(c)
        if self.kind == "ZZ":
            return c
        return modinv(c, self.modulus)

    def is_nilpotent(self, c) -> bool:
        """Nilpotency by gcd-powering: strip common factors of c from q."""
        if self.kind != "ZZ/q":
            return c == 0
        m = self.modulus
        while True:
            g = math.gcd(c, m)
            if g == 1:
                return m == 1
            m //= g

    def format(self, c) -> str:
        return format_rational(c)


ZZ = Ring("ZZ")
QQ = Ring("QQ")


class LaurentPolynomial:
    """Finite sum of coefficient times monomial, exponents in Z."""

    __slots__ = ("vars", "ring", "terms")

    def __init__(self, variables: Sequence[str], terms: Optional[Mapping[Sequence[int], object]] = None,
                 ring: Ring = QQ):
        self.vars = tuple(variables)
        self.ring = ring
        self.terms: Dict[Exps, object] = {}
        if terms:
            for e, c in terms.items():
                e = tuple(int(x) for x in e)
                if len(e) != len(self.vars):
                    raise ValueError("exponent length does not match the variables")
                c = ring.coerce(c)
                if ring.modulus:
                    s = (self.terms.get(e, 0) + c) % ring.modulus
                else:
                    s = self.terms.get(e, 0) + c
                if s:
                    self.terms[e] = s
                else:
                    self.terms.pop(e, None)

    # construction ---------------------------------------------------------
    @classmethod
    def _raw(cls, variables: Tuple[str, ...], ring: Ring, terms: Dict[Exps, object]) -> "LaurentPolynomial":
        out = cls.__new__(cls)
        out.vars, out.ring, out.terms = variables, ring, terms
        return out

    @classmethod
    def constant(cls, variables: Sequence[str], c, ring: Ring = QQ) -> "LaurentPolynomial":
        return cls(variables, {(0,) * len(variables): c}, ring)

    @classmethod
    def variable(cls, variables: Sequence[str], name: str, ring: Ring = QQ) -> "LaurentPolynomial":
        idx = list(variables).index(name)
        return cls(variables, {tuple(int(i == idx) for i in range(len(variables))): 1}, ring)

    def _like(self, terms: Dict[Exps, object]) -> "LaurentPolynomial":
        return LaurentPolynomial._raw(self.vars, self.ring, terms)

    def _check(self, other: "LaurentPolynomial") -> None:
        if self.ring != other.ring:
            raise ValueError(f"ring mismatch: {self.ring} vs {other.ring}")
        if self.vars != other.vars:
            raise ValueError("variable lists differ")

    def _lift(self, other) -> "LaurentPolynomial":
        if isinstance(other, LaurentPolynomial):
            self._check(other)
            return other
        return LaurentPolynomial.constant(self.vars, other, self.ring)

    def _norm(self, c):
        return c % self.ring.modulus if self.ring.modulus else c

    # arithmetic -----------------------------------------------------------
    def __add__(self, other) -> "LaurentPolynomial":
        other = self._lift(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = self._norm(out.get(e, 0) + c)
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return self._like(out)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPolynomial":
        return self._like({e: self._norm(-c) for e, c in self.terms.items()})

    def __sub__(self, other) -> "LaurentPolynomial":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "LaurentPolynomial":
        return self._lift(other) - self

    def scale(self, c) -> "LaurentPolynomial":
        c = self.ring.coerce(c)
        out = {}
        for e, v in self.terms.items():
            s = self._norm(v * c)
            if s:
                out[e] = s
        return self._like(out)

    def __mul__(self, other) -> "LaurentPolynomial":
        if not isinstance(other, LaurentPolynomial):
            return self.scale(other)
        self._check(other)
        out: Dict[Exps, object] = {}
        for a, ca in self.terms.items():
            for b, cb in other.terms.items():
                e = tuple(x + y for x, y in zip(a, b))
                out[e] = out.get(e, 0) + ca * cb
        return self._like({e: v for e, v in ((e, self._norm(v)) for e, v in out.items()) if v})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "LaurentPolynomial":
        if k < 0:
            if len(self.terms) != 1:
                raise ValueError("only monomials have negative powers")
            (e, c), = self.terms.items()
            inv = self.ring.inverse(c)
            return self._like({tuple(-x * -k for x in e): self._norm(inv ** -k)})
        out = LaurentPolynomial.constant(self.vars, 1, self.ring)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other: object) -> bool:
        if isinstance(other, LaurentPolynomial):
            return self.ring == other.ring and self.vars == other.vars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == self._lift(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.vars, self.ring, frozenset(self.terms.items())))

    # inspection -----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, exps: Sequence[int]):
        return self.terms.get(tuple(exps), 0)

    def constant_term(self):
        return self.coefficient((0,) * len(self.vars))

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def exponent_range(self, i: int) -> Tuple[int, int]:
        es = [e[i] for e in self.terms]
        return min(es), max(es)

    def split(self, i: int) -> Dict[int, "LaurentPolynomial"]:
        """Coefficients in variable i, with that exponent zeroed out."""
        out: Dict[int, Dict[Exps, object]] = {}
        for e, c in self.terms.items():
            out.setdefault(e[i], {})[e[:i] + (0,) + e[i + 1:]] = c
        return {k: self._like(v) for k, v in sorted(out.items())}

    def shift(self, i: int, k: int) -> "LaurentPolynomial":
        """Multiply by (variable i)^k."""
        return self._like({e[:i] + (e[i] + k,) + e[i + 1:]: c for e, c in self.terms.items()})

    def content_gcd(self) -> int:
        """gcd of the coefficients; meaningful over ZZ and ZZ/q."""
        g = 0
        for c in self.terms.values():
            g = math.gcd(g, int(c))
        return g

    def is_zero_divisor(self) -> bool:
        """Zero divisor in the polynomial ring (McCoy: killed by a nonzero constant)."""
        if self.is_zero():
            return True
        if self.ring.kind != "ZZ/q":
            return False
        return math.gcd(self.content_gcd(), self.ring.modulus) != 1

    def is_nilpotent(self) -> bool:
        return all(self.ring.is_nilpotent(c) for c in self.terms.values())

    def is_polynomial(self) -> bool:
        return all(x >= 0 for e in self.terms for x in e)

    # evaluation -----------------------------------------------------------
    def substitute(self, name: str, value) -> "LaurentPolynomial":
        """Set one variable to a ring element; negative powers need a unit."""
        i = self.vars.index(name)
        value = self.ring.coerce(value)
        inv = None
        out = LaurentPolynomial(self.vars, None, self.ring)
        acc: Dict[Exps, object] = {}
        for e, c in self.terms.items():
            k = e[i]
            if k < 0:
                if inv is None:
                    try:
                        inv = self.ring.inverse(value)
                    except ZeroDivisionError:
                        raise ValueError(f"{value} is not invertible in {self.ring}") from None
                f = inv ** (-k)
            else:
                f = value ** k
            key = e[:i] + (0,) + e[i + 1:]
            acc[key] = acc.get(key, 0) + c * f
        out.terms = {e: v for e, v in ((e, self._norm(v)) for e, v in acc.items()) if v}
        return out

    def evaluate(self, values: Mapping[str, object] | Sequence[object]):
        """Value at a point (all variables)."""
        if not isinstance(values, Mapping):
            values = dict(zip(self.vars, values))
        out = self
        for name in self.vars:
            out = out.substitute(name, values[name])
        return out.constant_term()

    def change_ring(self, ring: Ring) -> "LaurentPolynomial":
        return LaurentPolynomial(self.vars, self.terms, ring)

    # text and JSON ---------------------------------------------------------
    def sorted_terms(self) -> List[Tuple[Exps, object]]:
        return sorted(self.terms.items(), key=lambda kv: tuple(-x for x in kv[0]))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = ""
        for idx, (e, c) in enumerate(self.sorted_terms()):
            mono = "*".join(
                name + ("" if k == 1 else f"^{k}") for name, k in zip(self.vars, e) if k)
            neg = Fraction(c) < 0
            mag = -Fraction(c) if neg else Fraction(c)
            if mono and mag == 1:
                body = mono
            elif mono:
                body = f"{format_rational(mag)}*{mono}"
            else:
                body = format_rational(mag)
            if idx == 0:
                out = ("-" if neg else "") + body
            else:
                out += (" - " if neg else " + ") + body
        return out

    def __repr__(self) -> str:
        return f"LaurentPolynomial({self}, vars={list(self.vars)}, ring={self.ring})"

    def to_json(self) -> str:
        def enc(c):
            c = Fraction(c)
            return c.numerator if c.denominator == 1 else format_rational(c)
        return json.dumps({"vars": list(self.vars),
                           "terms": [{"coeff": enc(c), "exps": list(e)} for e, c in self.sorted_terms()]})

    @classmethod
    def from_json(cls, text: str | Mapping, ring: Ring = QQ) -> "LaurentPolynomial":
        data = json.loads(text) if isinstance(text, str) else text
        return cls(data["vars"], {tuple(t["exps"]): Fraction(str(t["coeff"])) for t in data["terms"]}, ring)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def _tokenize(text: str) -> List[Tuple[str, str]]:
    out = []
    for num, name, op in _TOKEN.findall(text):
        if num:
            out.append(("num", num))
        elif name:
            out.append(("var", name))
        elif op.strip():
            if op not in "+-*/^()":
                raise ValueError(f"unexpected character {op!r} in {text!r}")
            out.append(("op", op))
    return out


class _Parser:
    """Recursive descent over + - * / ^ and parentheses; values are (num, den) pairs."""

    def __init__(self, text: str, variables: Sequence[str], ring: Ring):
        self.toks = _tokenize(text)
        self.pos = 0
        self.vars = tuple(variables)
        self.ring = ring

    def peek(self) -> Optional[Tuple[str, str]]:
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def take(self, op: Optional[str] = None) -> Tuple[str, str]:
        tok = self.peek()
        if tok is None or (op is not None and tok != ("op", op)):
            raise ValueError(f"expected {op or 'a token'} at position {self.pos}")
        self.pos += 1
        return tok

    def parse(self):
        val = self.expr()
        if self.peek() is not None:
            raise ValueError(f"trailing input at token {self.pos}")
        return val

    def expr(self):
        sign = 1
        while self.peek() in (("op", "+"), ("op", "-")):
            if self.take()[1] == "-":
                sign = -sign
        n, d = self.term()
        if sign < 0:
            n = -n
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            sgn = 1
            while self.peek() in (("op", "+"), ("op", "-")):
                if self.take()[1] == "-":
                    sgn = -sgn
            n2, d2 = self.term()
            if (op == "-") != (sgn < 0):
                n2 = -n2
            n, d = n * d2 + n2 * d, d * d2
        return n, d

    def term(self):
        n, d = self.power()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            n2, d2 = self.power()
            if op == "*":
                n, d = n * n2, d * d2
            else:
                if n2.is_zero():
                    raise ZeroDivisionError("division by zero")
                n, d = n * d2, d * n2
        return n, d

    def power(self):
        n, d = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            sign = 1
            if self.peek() == ("op", "("):
                self.take()
                k = self.integer()
                self.take(")")
            else:
                k = self.integer()
            if k < 0:
                n, d, k = d, n, -k
            n, d = n ** k, d ** k
        return n, d

    def integer(self) -> int:
        sign = 1
        while self.peek() in (("op", "+"), ("op", "-")):
            if self.take()[1] == "-":
                sign = -sign
        kind, val = self.take()
        if kind != "num":
            raise ValueError("exponent must be an integer")
        return sign * int(val)

    def atom(self):
        tok = self.take()
        if tok == ("op", "("):
            val = self.expr()
            self.take(")")
            return val
        kind, val = tok
        if kind == "num":
            return LaurentPolynomial(self.vars, {(0,) * len(self.vars): Fraction(int(val))}, QQ), \
                LaurentPolynomial(self.vars, {(0,) * len(self.vars): 1}, QQ)
        if kind == "var":
            if val not in self.vars:
                raise ValueError(f"unknown variable {val!r}")
            return LaurentPolynomial.variable(self.vars, val, QQ), \
                LaurentPolynomial.constant(self.vars, 1, QQ)
        raise ValueError(f"unexpected {val!r}")


def _collect_names(text: str) -> List[str]:
    names = []
    for num, name, op in _TOKEN.findall(text):
        if name and name not in names:
            names.append(name)
    return sorted(names, key=lambda v: (re.sub(r"\d+$", "", v), int(re.search(r"\d*$", v).group() or 0)))


def _parse_pair(text: str, variables: Optional[Sequence[str]]):
    if variables is None:
        variables = _collect_names(text)
    else:
        unknown = set(_collect_names(text)) - set(variables)
        if unknown:
            raise ValueError(f"unknown variables {sorted(unknown)}")
    # parse over QQ; the ring is applied afterwards so num/den coefficients work mod q
    return _Parser(text, variables, QQ).parse()


def parse_laurent(text: str, variables: Optional[Sequence[str]] = None, ring: Ring = QQ) -> LaurentPolynomial:
    """Read ``c*x1^e1*...*xk^ek + ...``; coefficients are integers or ``num/den``.

    Parentheses and products are accepted as long as the result is a
    Laurent polynomial. Without ``variables`` the names are collected and
    sorted (x2 before x10).
    """
    num, den = _parse_pair(text, variables)
    if len(den.terms) != 1:
        raise ValueError(f"{text!r} is not a Laurent polynomial")
    (e, c), = den.terms.items()
    mono = den._like({tuple(-x for x in e): 1 / Fraction(c)})
    return (num * mono).change_ring(ring)


class RationalFn:
    """numerator / denominator, the denominator a nonzero Laurent polynomial."""

    __slots__ = ("num", "den")

    def __init__(self, num: LaurentPolynomial, den: Optional[LaurentPolynomial] = None):
        if den is None:
            den = LaurentPolynomial.constant(num.vars, 1, num.ring)
        num._check(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        self.num, self.den = num, den

    @classmethod
    def parse(cls, text: str, variables: Optional[Sequence[str]] = None, ring: Ring = QQ) -> "RationalFn":
        """Any expression in + - * / ^ and parentheses, e.g. ``1/(x - y)``."""
        num, den = _parse_pair(text, variables)
        return cls(num.change_ring(ring), den.change_ring(ring))

    @property
    def vars(self) -> Tuple[str, ...]:
        return self.num.vars

    @property
    def ring(self) -> Ring:
        return self.num.ring

    def __mul__(self, other: Union["RationalFn", LaurentPolynomial]) -> "RationalFn":
        if isinstance(other, LaurentPolynomial):
            return RationalFn(self.num * other, self.den)
        return RationalFn(self.num * other.num, self.den * other.den)

    def __add__(self, other: "RationalFn") -> "RationalFn":
        return RationalFn(self.num * other.den + other.num * self.den, self.den * other.den)

    def __repr__(self) -> str:
        return f"RationalFn(({self.num}) / ({self.den}))"


# expansion -------------------------------------------------------------------

def _stage(num: LaurentPolynomial, den: LaurentPolynomial, i: int,
           target: int = 0) -> Tuple[LaurentPolynomial, LaurentPolynomial]:
    """Coefficient of x_i^target in the expansion of num/den in x_i.

    The denominator is split by powers of x_i. Its lowest coefficient that
    is not a zero divisor, c at power k0, must sit above nilpotent
    coefficients only. Then

        num/den = num x^-k0 / c * sum_m (-D/c)^m,   D = (den - c x^k0) / x^k0,

    and only finitely many m reach a given power: every term of D either
    raises the x_i-degree or carries a nilpotent coefficient. The result is
    returned over the common denominator c^(M+1).
    """
    ring = num.ring
    name = num.vars[i]
    zero = num._like({})
    if num.is_zero():
        return zero, LaurentPolynomial.constant(num.vars, 1, ring)
    parts = den.split(i)
    k0 = None
    for k, coeff in parts.items():
        if not coeff.is_zero_divisor():
            k0 = k
            break
        if not coeff.is_nilpotent():
            raise InadmissibleError(
                f"in {name}: coefficient of {name}^{k} is a zero divisor but not nilpotent")
    if k0 is None:
        raise InadmissibleError(f"in {name}: every coefficient of the denominator is a zero divisor")
    kmin = min(parts)
    c = parts[k0]
    lo, _ = num.exponent_range(i)
    lo -= target
    spread = k0 - kmin
    e = ring.nilpotency_index
    M = k0 - lo + (e - 1) * (spread + 1)
    one = LaurentPolynomial.constant(num.vars, 1, ring)
    if M < 0:
        return zero, one
    cap = k0 - lo + (e - 1) * spread
    D = zero
    for k, coeff in parts.items():
        if k != k0:
            D = D + coeff.shift(i, k - k0)

    def truncate(p: LaurentPolynomial) -> LaurentPolynomial:
        return p._like({ex: v for ex, v in p.terms.items() if ex[i] <= cap})

    def pick(p: LaurentPolynomial) -> LaurentPolynomial:
        want = k0 + target
        return p._like({ex[:i] + (0,) + ex[i + 1:]: v for ex, v in p.terms.items() if ex[i] == want})

    unit_c = c.is_constant() and ring.is_unit(c.constant_term())
    if unit_c:
        inv = ring.inverse(c.constant_term())
        total = zero
        power = one
        factor = one.scale(1)
        for m in range(M + 1):
            total = total + pick(num * power).scale(factor.constant_term())
            power = truncate(power * D)
            factor = factor.scale(-inv)
        return total.scale(inv), one
    # general case: keep c in the denominator
    c_powers = [one]
    for _ in range(M + 1):
        c_powers.append(c_powers[-1] * c)
    total = zero
    power = one
    for m in range(M + 1):
        term = pick(num * power) * c_powers[M - m]
        total = total + (term if m % 2 == 0 else -term)
        power = truncate(power * D)
    return total, c_powers[M + 1]


def _order_indices(f: RationalFn, order: Sequence[str]) -> List[int]:
    missing = [v for v in order if v not in f.vars]
    if missing:
        raise ValueError(f"variables {missing} are not in {list(f.vars)}")
    if len(set(order)) != len(order):
        raise ValueError("order repeats a variable")
    return [f.vars.index(v) for v in order]


def iterated_coefficient(f: RationalFn, order: Sequence[str], exps: Optional[Sequence[int]] = None):
    """Coefficient of x^exps in the iterated expansion along ``order``.

    ``order = [x_1, ..., x_n]`` means x_n is expanded first and x_1 last.
    With every variable of f listed the result is a ring element; with a
    subset it is a :class:`RationalFn` in the remaining variables.
    ``exps`` follows ``order`` and defaults to all zeros.
    """
    idx = _order_indices(f, order)
    if exps is None:
        exps = [0] * len(idx)
    if len(exps) != len(idx):
        raise ValueError("one exponent per ordered variable")
    num, den = f.num, f.den
    for i, target in reversed(list(zip(idx, exps))):
        new_num, c_den = _stage(num, den, i, target)
        num, den = new_num, c_den
    if len(idx) < len(f.vars):
        return RationalFn(num, den)
    if not den.is_constant():
        raise InadmissibleError("denominator did not reduce to a constant")
    d = den.constant_term()
    if not f.ring.is_unit(d):
        raise InadmissibleError(f"final denominator {d} is not a unit in {f.ring}")
    value = num.constant_term() * f.ring.inverse(d)
    return value % f.ring.modulus if f.ring.modulus else value


def iterated_constant_term(f: RationalFn, order: Sequence[str]):
    """CT_{x_1} o CT_{x_2} o ... o CT_{x_n} f with x_n expanded first."""
    return iterated_coefficient(f, order)


def univariate_laurent_expand(f: RationalFn, order: int) -> Dict[int, object]:
    """Laurent coefficients of a one-variable function up to x^order.

    Keys run from the lowest possible exponent to ``order``; zero
    coefficients are omitted.
    """
    if len(f.vars) != 1:
        raise ValueError("univariate expansion needs exactly one variable")
    name = f.vars[0]
    parts = f.den.split(0)
    if f.num.is_zero():
        return {}
    lo_num, _ = f.num.exponent_range(0)
    kmin, kmax = min(parts), max(parts)
    e = f.ring.nilpotency_index
    start = lo_num - kmax - (e - 1) * (kmax - kmin)
    out = {}
    for j in range(start, order + 1):
        v = iterated_coefficient(f, [name], [j])
        if v:
            out[j] = v
    return out


def admissible(f: RationalFn, order: Sequence[str]) -> bool:
    """Layered criterion on the denominator.

    Write g = a_0 + a_1(x_1) x_1 + ... + a_n(x_1..x_n) x_n, where a_k x_k
    collects the terms whose last nonzero exponent (in ``order``) belongs
    to x_k. Then g is admissible iff, for the first a_i that is not a zero
    divisor, all earlier a_k are nilpotent and 1/a_i is admissible. A
    constant a_0 must be a unit.
    """
    idx = _order_indices(f, order)
    den = f.den
    # clear negative exponents: a monomial factor never affects admissibility
    shift = [min(0, den.exponent_range(i)[0]) for i in range(len(den.vars))]
    den = den._like({tuple(x - s for x, s in zip(e, shift)): c for e, c in den.terms.items()})
    return _admissible_poly(den, idx)


def _admissible_poly(g: LaurentPolynomial, idx: List[int]) -> bool:
    if g.is_zero():
        return False
    if g.is_constant():
        return g.ring.is_unit(g.constant_term())
    layers: List[Dict[Exps, object]] = [dict() for _ in range(len(idx) + 1)]
    for e, c in g.terms.items():
        last = 0
        for pos, i in enumerate(idx, start=1):
            if e[i]:
                last = pos
        layers[last][e] = c
    for k, terms in enumerate(layers):
        a = g._like(terms)
        if k > 0:
            a = a.shift(idx[k - 1], -1)
        if not a.is_zero_divisor():
            return _admissible_poly(a, idx)
        if not a.is_nilpotent():
            return False
    return False
