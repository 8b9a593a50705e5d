"""Iterated constant terms depend on the order of expansion.

For 1/(x - y) the constant term vanishes in both orders, while the
coefficient of x^-1 (expanding y first) and of y^-1 (expanding x first)
are +1 and -1.
"""
from dedekind_todd.laurent import RationalFn, admissible, iterated_coefficient, iterated_constant_term

f = RationalFn.parse("1/(x - y)", ["x", "y"])
for order in (["x", "y"], ["y", "x"]):
    print(order, "constant term:", iterated_constant_term(f, order),
          " residue:", iterated_coefficient(f, order, [-1, 0]),
          " admissible:", admissible(f, order))

g = RationalFn.parse("(1 + x*y)/((1 - x)*(1 - y))", ["x", "y"])
print("a polynomial-denominator example:", iterated_constant_term(g, ["x", "y"]), iterated_constant_term(g, ["y", "x"]))
