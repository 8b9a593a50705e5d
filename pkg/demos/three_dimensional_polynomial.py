"""The congruence polynomial for the three-dimensional index (6, 4, 2).

Prints its twelve terms and checks the congruence for every unit pair
modulo a few moduli. One value is then recomputed through iterated
constant terms over Z/q.
"""
from dedekind_todd import (
    evaluate_mod, f_r_by_constant_terms, f_r_polynomial, iter_inputs, verify_congruence,
)

r = (6, 4, 2)
f = f_r_polynomial(r)
for exps, c in sorted(f.terms.items()):
    print(f"{int(c):>8d} * p1^{exps[0]} p2^{exps[1]}")

for qmax in (9, 16):
    reports = [verify_congruence(r, q, p) for q, p in iter_inputs(3, qmax, qmax)]
    print(f"q = {qmax}: {len(reports)} pairs, all hold: {all(x.holds for x in reports)}")

q, p = 13, (5, 8)
print("direct:", evaluate_mod(f, p, q), " via constant terms:", f_r_by_constant_terms(r, q, p))
