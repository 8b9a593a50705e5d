"""Exponential sums of f_(1,1): Kloosterman sums, splitting moduli, and an equidistribution sample."""
import math

from dedekind_todd import (
    empirical_weil_check, exp_sum_K, f_r_polynomial, fractional_part_histogram,
    kloosterman_direct, multiplicativity_check, weyl_average,
)

f = f_r_polynomial((1, 1))
for q in (101, 211, 499):
    k = exp_sum_K(f, q)
    print(f"K(f,{q}) = {k.value.real:+.6f}   direct {kloosterman_direct(1, 1, q).real:+.6f}"
          f"   |K|/sqrt(q) = {k.abs / math.sqrt(q):.3f}")
_, ratio = empirical_weil_check(f, [p for p in range(3, 200) if all(p % d for d in range(2, p))])
print("largest |K|/sqrt(p) for p < 200:", round(ratio, 4))

# splitting q1 q2: the factors need the CRT twists u = q2^-1 mod q1, v = q1^-1 mod q2
for q1, q2 in [(3, 5), (4, 5), (7, 11)]:
    m = multiplicativity_check(f, q1, q2)
    print(f"({q1},{q2}): plain product error {m.relative_error:.3g}, twisted {m.twisted_relative_error:.1e}")

for x in (200, 2000):
    print(f"Weyl average k=1, x={x}: {abs(weyl_average(f, 1, x).average):.5f}")
h = fractional_part_histogram((1, 1), 500, 10)
print("fractional parts, 10 bins:", h.counts, f"D* = {h.discrepancy:.4f}")
