"""Generalized Dedekind sums, Todd series of lattice cones and their congruences."""
from .exactnum import (ExactRational, bernoulli_number, bernoulli_polynomial, fractional_part,
                       modinv, periodic_bernoulli)
from .cones import (ConeChain, LatticeCone, boundary, dual_cone, nonsingular_subdivision,
                    outer_inner_split, parallelepiped_lattice_points, standard_cone, subdivide)
from .toddcore import (HomogPolynomial, HomogeneousRationalFn, MultiIndex, denominator_dNn,
                       normalized_todd, todd_coefficient_t, todd_polynomial, todd_polynomial_of_cone,
                       verify_cocycle)
from .dedekind import (classical_dedekind_sum, dedekind_sum, rademacher_phi, s_from_t, t_from_s,
                       zagier_sum)
from .laurent import (QQ, ZZ, InadmissibleError, LaurentPolynomial, RationalFn, Ring, admissible,
                      iterated_coefficient, iterated_constant_term, parse_laurent)
from .congruence import (CongruenceReport, InvariantViolation, count_congruence_roots,
                         evaluate_mod, f_r_by_constant_terms, f_r_polynomial, fractional_identity,
                         iter_inputs, normalized_sum_integer, verify_congruence,
                         verify_congruence_s, verify_congruence_t, verify_zagier_congruence,
                         zagier_polynomial)
from .expsum import (check_condition_H, exp_sum_K, empirical_weil_check, fractional_part_histogram,
                     kloosterman_direct, multiplicativity_check, weyl_average)

__version__ = "0.1.0"
