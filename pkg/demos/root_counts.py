"""Counting roots of polynomial congruences modulo prime powers.

The bound c p^(n - ceil(n/l)), with c the number of distinct roots mod p
and l their largest multiplicity, can be exceeded when roots of lower
multiplicity sit beside a multiple root. The per-root sum
sum m p^(n - ceil(n/m)) always holds in these experiments.
"""
from dedekind_todd import count_congruence_roots

cases = [
    ([0, 0, 1], 3, 2),          # x^2 mod 9: tight
    ([-1, 0, 1], 2, 3),         # x^2 - 1 mod 8
    ([0, -2, 1], 2, 3),         # x^2 - 2x mod 8
    ([-2, -1, 1], 3, 3),        # x^2 - x - 2 = (x+1)(x-2) mod 27
    ([1, 3, 3, 1], 5, 4),       # (x+1)^3 mod 625
]
print("coeffs           p  n  count  bound  refined  degree")
for coeffs, p, n in cases:
    rc = count_congruence_roots(coeffs, p, n)
    print(f"{str(coeffs):16s} {p}  {n}  {rc.count:5d}  {rc.bound:5d}  {rc.refined_bound:7d}  {rc.degree_bound:6d}")
