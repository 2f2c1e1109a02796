"""
Exact linear propagation with the Mehler kernel
===============================================

The linear group of a quadratic potential is known in closed form. This
script applies it to a trap eigenstate, crosses the singular times of the
kernel, and checks the group law.
"""

import math

import numpy as np

from mehler_nls import Grid, PotentialSpec, hermite, gaussian, mehler_apply, propagate_linear
from mehler_nls.grid import l2_sq

grid = Grid((256,), (12.0,))
trap = PotentialSpec(omega=(1.0,), delta=(1,))

# The first excited state only picks up the phase exp(-3it/2).
psi = hermite(grid, 1)
for t in (1.0, 2.5, 4.0, 7.5):
    out = propagate_linear(psi, trap, 0.0, t)
    err = math.sqrt(l2_sq(grid, out.amplitude - np.exp(-1.5j * t) * psi.amplitude))
    print(f"t = {t:4.1f}  eigenphase error {err:.2e}")

# mehler_apply evaluates the kernel in one shot; it refuses t on a zero of g.
print("one-shot kernel at t = 1:",
      math.sqrt(l2_sq(grid, mehler_apply(psi, trap, 1.0).amplitude - np.exp(-1.5j) * psi.amplitude)))

# After half a period the trap reflects the state, x -> -x, up to a phase.
phi = gaussian(grid, center=1.5, width=0.8, momentum=0.4)
half = propagate_linear(phi, trap, 0.0, math.pi)
print("centre of mass after half a period:",
      float(np.sum(grid.axis(0) * np.abs(half.amplitude) ** 2) * grid.cell_volume))

# Group law on the repulsive flow, composed against a single step.
rep = PotentialSpec(omega=(1.0,), delta=(-1,))
wide = Grid((1024,), (48.0,))
phi = gaussian(wide, width=1.0)
one = propagate_linear(phi, rep, 0.0, 1.3)
two = propagate_linear(propagate_linear(phi, rep, 0.0, 0.6), rep, 0.6, 1.3)
print("group law discrepancy:", math.sqrt(l2_sq(wide, one.amplitude - two.amplitude)))
