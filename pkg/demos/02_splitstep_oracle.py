"""
Split-step against the exact propagator
=======================================

Strang splitting of the linear equation converges at second order to the
exact group. The exact evolution serves as the reference for all sign
patterns of a two-dimensional potential.
"""

import math

from mehler_nls import Grid, PotentialSpec, gaussian, mehler_apply, splitstep_linear
from mehler_nls.grid import l2_sq

grid = Grid((128, 128), (10.0, 10.0))
psi = gaussian(grid, center=(0.3, -0.2), width=1.0, momentum=(0.3, 0.0))

print(" delta     err(40)    err(80)   order")
for d1 in (-1, 0, 1):
    for d2 in (-1, 0, 1):
        spec = PotentialSpec((1.0, 1.2), (d1, d2))
        exact = mehler_apply(psi, spec, 1.0)
        errs = [math.sqrt(l2_sq(grid, splitstep_linear(psi, spec, 1.0, s).amplitude - exact.amplitude))
                for s in (40, 80)]
        order = math.log2(errs[0] / errs[1]) if errs[1] > 1e-13 else float("nan")
        print(f"({d1:+d},{d2:+d})  {errs[0]:.3e}  {errs[1]:.3e}  {order:6.3f}")
