"""Two-dimensional warm-up: classical Dedekind sums and the Rademacher-type congruence.

Run with ``python3 demos/classical_case.py``.
"""
from fractions import Fraction

from dedekind_todd import (
    classical_dedekind_sum, f_r_polynomial, verify_congruence,
)

# reciprocity: s(a,c) + s(c,a) = (a/c + c/a + 1/(ac))/12 - 1/4
for a, c in [(3, 7), (5, 12), (13, 21), (34, 55)]:
    lhs = classical_dedekind_sum(a, c) + classical_dedekind_sum(c, a)
    rhs = (Fraction(a, c) + Fraction(c, a) + Fraction(1, a * c)) / 12 - Fraction(1, 4)
    print(f"s({a},{c}) = {classical_dedekind_sum(a, c)}   reciprocity ok: {lhs == rhs}")

f = f_r_polynomial((1, 1))
print("\nf_(1,1) =", f)

# 12 q s(p, q) is an integer congruent to f_(1,1)(p) = p + p^-1 mod q
print("\n  q   p  12q s(p,q)   mod q   f(p) mod q")
for q, p in [(7, 3), (11, 4), (25, 7), (97, 35)]:
    rep = verify_congruence((1, 1), q, (p,))
    print(f"{q:3d} {p:3d} {rep.lhs:11d} {rep.lhs % q:7d} {rep.rhs:12d}")
