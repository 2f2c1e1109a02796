"""
Reproducible experiments and an omega_1 sweep
=============================================

The harness runs any experiment from a mapping (or a YAML file via the
``mehler-nls`` command) and writes records, a summary and a manifest
with content hashes. A sweep over omega_1 shows the change from collapse
to global behaviour.
"""

import json
import sys
import tempfile
from pathlib import Path

from mehler_nls.harness import ExperimentConfig, run

out = Path(tempfile.mkdtemp(prefix="mehler_demo_"))
point = {
    "potential": {"omega": [0.5, 1.0], "delta": [-1, 1]},
    "grid": {"points": [128, 128], "extent": [6.0, 8.0]},
    "solver": {"dt": 0.002, "t_end": 2.0, "lambda": -1.0, "blowup_gradient_factor": 10.0, "output_every": 50},
    "initial": {"type": "gaussian", "width": 1.0, "amplitude": 2.0},
}
omegas = [1.0, 4.0] if "--quick" in sys.argv else [0.5, 1.0, 2.0, 3.0, 4.0, 6.0]
sweep = ExperimentConfig.from_dict({"kind": "sweep", **point,
                                    "params": {"axes": {"omega1": omegas}, "max_workers": 4}})
run(sweep, out)
for row in json.loads((out / "summary.json").read_text())["rows"]:
    print(f"omega_1 = {row['omega1']:<4} {row['termination']:<16} max Sigma {row['max_sigma_norm']:.3f}")

manifest = json.loads((out / "manifest.json").read_text())
print("manifest lists", len(manifest["files"]), "files; outputs in", out)
