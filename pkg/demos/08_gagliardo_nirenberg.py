"""
Weighted Gagliardo-Nirenberg ratio along a linear flow
======================================================

The L4 norm of a solution is controlled by its Heisenberg derivatives with
time-dependent weights. Along a linear horse-shoe run the ratio of the
two sides stays within a narrow band.
"""

import math

from mehler_nls import Grid, PotentialSpec, SolverConfig, evolve, gaussian
from mehler_nls.observables import GNNorms, gn_report

spec = PotentialSpec((1.0, 1.0), (-1, 1))
res = evolve(gaussian(Grid((64, 64), (8.0, 8.0)), width=1.0), spec,
             SolverConfig(dt=0.05, t_end=5.0, keep_states=True, output_every=10))
for state in res.states:
    m = res.frame.measure(state.field, state.t)
    norms = GNNorms(math.sqrt(m["mass"]), (m["J_0"], m["J_1"]), (m["H_0"], m["H_1"]))
    rep = gn_report(res.frame.lp_norm(state.field, state.t, 4.0), norms, spec, state.t, 4.0)
    print(f"t = {state.t:3.1f}  ratio {rep.ratio:.4f} ({rep.form} form)")
