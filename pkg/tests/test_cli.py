import json
import subprocess
import sys
from pathlib import Path

import pytest
import yaml

from mehler_nls.cli import main
from mehler_nls.harness import KINDS

CONFIGS = Path(__file__).resolve().parents[1] / "configs"


def write(tmp_path, data, name="c.yaml"):
    path = tmp_path / name
    path.write_text(yaml.safe_dump(data))
    return path


def test_subcommands_exist():
    assert set(KINDS) == {"evolve", "linear-test", "dispersion-fit", "weights", "gn-check", "scattering",
                          "wave-operator", "sweep", "check-condition"}
    for kind in KINDS:
        with pytest.raises(SystemExit) as exc:
            main([kind, "--help"])
        assert exc.value.code == 0


def test_invalid_config_exits_2_with_error_record(tmp_path, capsys):
    path = write(tmp_path, {"kind": "evolve", "potential": {"omega": [1.0], "delta": [1]},
                            "grid": {"points": [32], "extent": [6.0]}, "solver": {"dt": 0.1, "t_end": 1.0, "sigma": -1}})
    out = tmp_path / "out"
    assert main(["evolve", "--config", str(path), "--out", str(out)]) == 2
    err = json.loads((out / "error.json").read_text())
    assert err["error"] == "ConfigError"
    assert not (out / "record.csv").exists()
    assert "ConfigError" in capsys.readouterr().err


def test_kind_mismatch_and_missing_file(tmp_path):
    path = write(tmp_path, {"kind": "weights", "potential": {"omega": [1.0], "delta": [1]}})
    assert main(["evolve", "--config", str(path)]) == 2
    assert main(["evolve", "--config", str(tmp_path / "missing.yaml")]) == 2


def test_check_condition_config(tmp_path, capsys):
    out = tmp_path / "cc"
    assert main(["check-condition", "--config", str(CONFIGS / "check_condition.yaml"), "--out", str(out)]) == 0
    summary = json.loads((out / "summary.json").read_text())
    assert summary["report"] == "satisfied"
    assert summary["threshold"] == pytest.approx(5.43656, abs=1e-5)


def test_seed_override_is_recorded(tmp_path):
    out = tmp_path / "lt"
    path = write(tmp_path, {"kind": "linear-test", "potential": {"omega": [1.0], "delta": [1]},
                            "grid": {"points": [128], "extent": [10.0]}, "params": {"times": [1.0], "substeps": 200}})
    assert main(["linear-test", "--config", str(path), "--out", str(out), "--seed", "7"]) == 0
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["seed"] == 7
    summary = json.loads((out / "summary.json").read_text())
    assert summary["round_trip_l2"] < 1e-9


def test_module_entry_point(tmp_path):
    out = tmp_path / "w"
    path = write(tmp_path, {"kind": "weights", "potential": {"omega": [1.0], "delta": [0]},
                            "params": {"window": [-1.0, 1.0], "samples": 2000}})
    proc = subprocess.run([sys.executable, "-m", "mehler_nls", "weights", "--config", str(path), "--out", str(out)],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert json.loads(proc.stdout)["summary"]["samples"] > 0
    assert (out / "profile.csv").read_text().startswith("t,w")
