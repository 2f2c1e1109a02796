"""
Dispersive decay: free flow and repulsive directions
====================================================

Free waves decay like |t|^(-n/2) in sup norm. A repulsive direction makes
the decay exponential: the L^4 norm falls like exp(-omega t/4) per
repulsive direction, here measured from a linear run in the co-moving frame.
"""

import math

import numpy as np

from mehler_nls import Grid, PotentialSpec, SolverConfig, decay_fit, evolve, gaussian, lp_norm, mehler_apply

for n in (1, 2):
    grid = Grid((128,) * n, (6.0,) * n)
    psi = gaussian(grid, width=0.5)
    spec = PotentialSpec((1.0,) * n, (0,) * n)
    ts = np.linspace(2.0, 10.0, 17)
    sup = [lp_norm(mehler_apply(psi, spec, float(t)), math.inf) for t in ts]
    fit = decay_fit((ts, sup), model="power")
    print(f"free n={n}: ||u||_inf ~ t^{fit.rate:.4f}  (expected {-n / 2})")

for w in (0.5, 1.0, 2.0):
    spec = PotentialSpec((w,), (-1,))
    res = evolve(gaussian(Grid((512,), (12.0,))), spec, SolverConfig(dt=0.05, t_end=12.0 / w, output_every=4))
    fit = decay_fit(res.record, "L4", (4.0 / w, 12.0 / w))
    print(f"repulsive omega={w}: L4 rate {fit.rate:.4f}  (expected {-w / 4})")
