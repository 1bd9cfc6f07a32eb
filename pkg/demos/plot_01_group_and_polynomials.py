"""
The symmetry group and its Chebyshev polynomials
================================================

Three integer reflections generate a 24-element group.  Averaging an
exponential over that group gives a three-variable Chebyshev polynomial.
"""

import numpy as np

from fccdct.chebyshev import (TorusPoint, cheb_eval_uvw, coords_from_uvw, evaluate_combination,
                              recurrence_product, symmetrized_exponential)
from fccdct.weyl_s4 import COXETER_RELATIONS, generate_group, orbit, relation_failures

group = generate_group()
print("group order:", group.order)
print("relations (i, j, order) that fail:", relation_failures(COXETER_RELATIONS) or "none")

###############################################################################
# Orbits of small indices.  Their sizes divide 24.

for k in [(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0), (2, 1, 3)]:
    print(k, "orbit size", len(orbit(k)))

###############################################################################
# Evaluate T_{2,1,0} two ways: as a group average of exponentials and as a
# Laurent polynomial in u = e^{2 pi i theta_1}, v, w.

p = TorusPoint((0.1, 0.35, 0.8))
uvw = p.to_uvw()
print("group average:", symmetrized_exponential((2, 1, 0), p.theta))
print("power form:   ", cheb_eval_uvw((2, 1, 0), uvw))

###############################################################################
# The degree-one polynomials are the coordinates x, y, z of the point.

s = coords_from_uvw(uvw)
print("x, y, z =", s.x, s.y, s.z)
print("T_e1, T_e2, T_e3 =", *(cheb_eval_uvw(e, uvw) for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1))))

###############################################################################
# Products expand into orbit sums with weights that add up to one.

comb = recurrence_product((1, 0, 0), (0, 1, 0))
for idx, w in comb.terms:
    print(f"  {w} * T{idx}")
lhs = symmetrized_exponential((1, 0, 0), p.theta) * symmetrized_exponential((0, 1, 0), p.theta)
print("product check:", abs(lhs - evaluate_combination(comb, p.theta)))
