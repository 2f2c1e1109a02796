"""
Dispersive weights and weak-L1 quasi-norms
==========================================

The L1 -> Linf norm of the propagator is a power of the weight w(t).
Its weak-L1 quasi-norm on a window beyond the first trap singularity
shrinks quickly as the repulsion grows.
"""

import math

import numpy as np

from mehler_nls import PotentialSpec, exponent_triple, is_sharp_admissible, weak_l1_norm, weight_profile, weight_value
from mehler_nls.weights import profile_from_function

print("weak-L1 norm of 1/|t| on [-1, 1]:", weak_l1_norm(profile_from_function(lambda t: 1 / np.abs(t), (-1, 1))))

spec = PotentialSpec((1.0, 1.0), (-1, 1))
for t in (0.1, math.pi / 4, 2.0):
    print(f"w({t:.3f}) exact {weight_value(spec, t):.5f}  bound form {weight_value(spec, t, form='bound'):.5f}")

window = (math.pi / 2, 20.0)
for w1 in (1.0, 2.0, 4.0, 8.0):
    q = weak_l1_norm(weight_profile(PotentialSpec((w1, 1.0), (-1, 1)), window))
    print(f"omega_1 = {w1}: quasi-norm over |t| > pi/2 = {q:.3e}")

for n, sigma in ((2, 1.0), (3, 1.0), (1, 2.0)):
    r, q, k = exponent_triple(n, sigma)
    print(f"n={n} sigma={sigma}: (r, q, k) = ({r:g}, {q:.4g}, {k:g}), admissible: {is_sharp_admissible(q, r, n / 2)}")
