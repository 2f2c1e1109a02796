import json
import math

import numpy as np
import pytest

from mehler_nls import ConfigError, Grid, gaussian, save_snapshot
from mehler_nls.harness import ExperimentConfig, SweepPlan, apply_axes, resolve_output, run, sha256_file

EVOLVE = {
    "kind": "evolve",
    "potential": {"omega": [1.0, 1.0], "delta": [1, 1]},
    "grid": {"points": [32, 32], "extent": [8.0, 8.0]},
    "solver": {"dt": 0.05, "t_end": 1.0, "output_every": 4},
    "initial": {"type": "hermite", "index": [1, 0]},
}


def cfg(**over):
    data = json.loads(json.dumps(EVOLVE))
    data.update(over)
    return ExperimentConfig.from_dict(data)


def test_eigenstate_run_has_constant_norms(tmp_path):
    out = run(cfg(), tmp_path)
    assert out.status == 0 and out.summary["termination"] == "completed"
    rec = json.loads((tmp_path / "record.json").read_text())
    for col in ("mass", "energy", "grad_norm", "L4"):
        y = np.array(rec["data"][col])
        assert np.ptp(y) < 1e-7


def test_manifest_lists_every_file_with_hash(tmp_path):
    run(cfg(), tmp_path)
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["status"] == "completed"
    assert manifest["config"]["kind"] == "evolve"
    listed = {f["path"]: f["sha256"] for f in manifest["files"]}
    on_disk = {p.name for p in tmp_path.iterdir() if p.name != "manifest.json"}
    assert set(listed) == on_disk
    for name, digest in listed.items():
        assert sha256_file(tmp_path / name) == digest
    assert {"package", "numpy", "scipy"} <= set(manifest["versions"])
    assert manifest["wall_time_s"] >= 0 and manifest["memory_estimate_bytes"] > 0


def test_determinism(tmp_path):
    c = cfg(solver={"dt": 0.05, "t_end": 1.0, "lambda": 1.0})
    run(c, tmp_path / "a")
    run(c, tmp_path / "b")
    assert (tmp_path / "a" / "record.csv").read_bytes() == (tmp_path / "b" / "record.csv").read_bytes()


def test_resume_skips_completed_run(tmp_path):
    c = cfg()
    run(c, tmp_path)
    before = (tmp_path / "record.csv").stat().st_mtime_ns
    assert run(c, tmp_path, resume=True).summary["termination"] == "completed"
    assert (tmp_path / "record.csv").stat().st_mtime_ns == before


@pytest.mark.parametrize(
    "over",
    [{"solver": {"dt": 0.05, "t_end": 1.0, "sigma": -1.0}}, {"kind": "nonsense"}, {"extra": 1},
     {"grid": {"points": [7, 32], "extent": [8.0, 8.0]}}, {"initial": {"type": "file", "path": "/nope.bin"}},
     {"initial": {"type": "gaussian", "width": -1.0}}, {"potential": {"omega": [1.0], "delta": [1]}}],
)
def test_validation_rejects_before_computing(over):
    with pytest.raises(ConfigError):
        cfg(**over)


def test_file_initial_data_with_norm(tmp_path):
    g = Grid((32, 32), (8.0, 8.0))
    save_snapshot(tmp_path / "u0.bin", gaussian(g, width=0.8))
    with pytest.raises(ConfigError):
        cfg(initial={"type": "file", "path": "u0.bin"})  # relative path, no base directory
    c = ExperimentConfig.from_dict({**EVOLVE, "initial": {"type": "file", "path": "u0.bin", "norm": 2.0}}, tmp_path)
    psi = c.initial_state()
    assert math.sqrt(np.sum(np.abs(psi.amplitude) ** 2) * g.cell_volume) == pytest.approx(2.0)


def test_module_fault_writes_error_record(tmp_path):
    bad = cfg(kind="linear-test", potential={"omega": [1.0, 1.0], "delta": [1, 1]},
              params={"times": [math.pi]})
    out = run(bad, tmp_path)
    assert out.status == 1
    err = json.loads((tmp_path / "error.json").read_text())
    assert err["error"] == "SingularTimeError"
    assert json.loads((tmp_path / "manifest.json").read_text())["status"] == "failed"


def test_output_resolution(tmp_path, monkeypatch):
    c = cfg(output=str(tmp_path / "from_config"))
    monkeypatch.delenv("MEHLER_NLS_OUT", raising=False)
    assert resolve_output(c) == tmp_path / "from_config"
    monkeypatch.setenv("MEHLER_NLS_OUT", str(tmp_path / "env"))
    assert resolve_output(c) == tmp_path / "env"
    assert resolve_output(c, str(tmp_path / "flag")) == tmp_path / "flag"


def test_check_condition():
    c = ExperimentConfig.from_dict({"kind": "check-condition",
                                    "params": {"n": 2, "sigma": 1.0, "omega2": math.e - 1, "Lambda": 1.0, "omega1": 6.0}})
    from mehler_nls.harness import _check_condition

    rep = _check_condition(c, None, None)
    assert rep["report"] == "satisfied" and rep["threshold"] == pytest.approx(2 * math.e)
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"kind": "check-condition", "params": {"n": 2, "sigma": -1.0, "omega2": 1.0,
                                                                          "omega1": 3.0}})


def sweep_config(axes, **params):
    data = {**json.loads(json.dumps(EVOLVE)), "kind": "sweep",
            "solver": {"dt": 0.05, "t_end": 0.5, "lambda": 1.0},
            "initial": {"type": "gaussian", "width": 1.0},
            "params": {"axes": axes, "max_workers": 1, **params}}
    return ExperimentConfig.from_dict(data)


def test_sweep_plan_and_axes():
    plan = SweepPlan.from_config(sweep_config({"omega1": [1.0, 2.0], "norm": [0.5, 1.0, 2.0]}))
    assert len(plan) == 6
    pt = apply_axes(plan.template, {"omega1": 3.0, "lambda": -2.0, "sigma": 0.5, "norm": 1.5})
    assert pt["potential"]["omega"][0] == 3.0 and pt["solver"]["lambda"] == -2.0
    assert pt["solver"]["sigma"] == 0.5 and pt["initial"]["norm"] == 1.5
    with pytest.raises(ConfigError):
        sweep_config({"omega3": [1.0]})
    with pytest.raises(ConfigError):
        sweep_config({"omega1": [1.0, 2.0, 3.0]}, cap=2)


def test_single_point_sweep_equals_run(tmp_path):
    sw = sweep_config({"norm": [1.0]})
    run(sw, tmp_path / "sweep")
    single = ExperimentConfig.from_dict(SweepPlan.from_config(sw).points()[0])
    run(single, tmp_path / "single")
    assert ((tmp_path / "sweep" / "points" / "p0000" / "record.csv").read_bytes()
            == (tmp_path / "single" / "record.csv").read_bytes())
    rows = json.loads((tmp_path / "sweep" / "summary.json").read_text())["rows"]
    assert rows[0]["termination"] == "completed" and rows[0]["norm"] == 1.0


def test_sweep_resume_recomputes_only_missing(tmp_path):
    sw = sweep_config({"norm": [0.5, 1.0]})
    run(sw, tmp_path)
    p0, p1 = tmp_path / "points" / "p0000", tmp_path / "points" / "p0001"
    stamp = (p0 / "record.csv").stat().st_mtime_ns
    for f in p1.iterdir():
        f.unlink()
    from mehler_nls.harness import run_sweep

    run_sweep(sw, tmp_path, resume=True)
    assert (p0 / "record.csv").stat().st_mtime_ns == stamp
    assert (p1 / "record.csv").exists()


def test_sweep_records_point_failures(tmp_path):
    sw = sweep_config({"norm": [1.0]}, point_kind="linear-test", point_params={"times": [math.pi]})
    out = run(sw, tmp_path)
    assert out.status == 0 and out.summary["failed"] == 1
    rows = json.loads((tmp_path / "summary.json").read_text())["rows"]
    assert rows[0]["status"] == 1 and "error" in rows[0]
