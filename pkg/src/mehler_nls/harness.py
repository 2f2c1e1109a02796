"""Experiment configuration, runners, manifests and parameter sweeps.

An experiment is one YAML file::

    kind: evolve                 # or linear-test, dispersion-fit, weights, gn-check,
                                 # scattering, wave-operator, sweep, check-condition
    potential: {omega: [4.0, 1.0], delta: [-1, 1]}      # optional b: [...]
    grid: {points: [128, 128], extent: [6.0, 14.0]}
    solver: {dt: 0.002, t_end: 10.0, lambda: -1.0, sigma: 1.0}
    initial: {type: gaussian, center: 0.0, width: 1.0, momentum: 0.0, amplitude: 2.0}
    output: runs/example
    seed: 0
    params: {...}                # kind-specific, see RUNNERS

Every run writes its artifacts plus ``manifest.json`` (resolved config,
versions, wall time, memory estimate, sha256 of every file). Failures
write ``error.json`` instead of results.
"""

from __future__ import annotations

import copy
import csv
import hashlib
import itertools
import json
import math
import os
import platform
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable

import numpy as np
import scipy
import yaml

from . import __version__
from .errors import ConfigError, MehlerNLSError
from .frame import lp_label
from .grid import Grid, WaveFunction, gaussian, hermite, l2_sq, load_snapshot, save_snapshot
from .integrator import EvolutionRecord, SolverConfig, confirm_blowup, decompose_linear_remainder, default_t0, evolve
from .observables import (
    decay_fit,
    GNNorms,
    gn_report,
    scattering_diagnostic,
    wave_operator,
    wave_operator_round_trip,
)
from .propagator import mehler_apply, propagate_linear, splitstep_linear
from .trajectories import PotentialSpec, domin_threshold
from .weights import effective_dimension_check, weak_l1_norm, weight_profile

KINDS = ("evolve", "linear-test", "dispersion-fit", "weights", "gn-check", "scattering",
         "wave-operator", "sweep", "check-condition")
OUT_ENV = "MEHLER_NLS_OUT"
SWEEP_AXES = ("omega1", "omega2", "lambda", "sigma", "norm")


# -- configuration -------------------------------------------------------------


@dataclass
class ExperimentConfig:
    kind: str
    potential: PotentialSpec | None = None
    grid: Grid | None = None
    solver: SolverConfig | None = None
    initial: dict = field(default_factory=dict)
    output: str | None = None
    seed: int = 0
    params: dict = field(default_factory=dict)
    source: dict = field(default_factory=dict)  # the raw mapping, for manifests and sweeps

    @classmethod
    def from_dict(cls, data: dict, base_dir: Path | None = None) -> "ExperimentConfig":
        if not isinstance(data, dict):
            raise ConfigError("configuration must be a mapping")
        allowed = {"kind", "potential", "grid", "solver", "initial", "output", "seed", "params"}
        unknown = set(data) - allowed
        if unknown:
            raise ConfigError(f"unknown top-level keys: {sorted(unknown)}")
        kind = data.get("kind")
        if kind not in KINDS:
            raise ConfigError(f"kind must be one of {KINDS}, got {kind!r}")
        potential = grid = solver = None
        try:
            if "potential" in data:
                p = data["potential"]
                potential = PotentialSpec(tuple(p["omega"]), tuple(p["delta"]), tuple(p["b"]) if p.get("b") else None)
            if "grid" in data:
                g = data["grid"]
                n = potential.n if potential is not None else len(np.atleast_1d(g["points"]))
                pts, ext = np.broadcast_to(g["points"], (n,)), np.broadcast_to(g["extent"], (n,))
                grid = Grid(tuple(int(x) for x in pts), tuple(float(x) for x in ext))
            if "solver" in data:
                solver = SolverConfig.from_dict(data["solver"])
        except (KeyError, TypeError) as exc:
            raise ConfigError(f"malformed block: {exc}") from exc
        except ValueError as exc:  # DomainError and shape mismatches
            raise ConfigError(str(exc)) from exc
        initial = dict(data.get("initial") or {})
        if initial.get("type") == "file" and base_dir is not None:
            path = Path(initial.get("path", ""))
            initial["path"] = str(path if path.is_absolute() else base_dir / path)
        seed = data.get("seed", 0)
        if not isinstance(seed, int):
            raise ConfigError("seed must be an integer")
        cfg = cls(kind, potential, grid, solver, initial, data.get("output"), seed,
                  dict(data.get("params") or {}), copy.deepcopy(data))
        return cfg.validate()

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"config file {path} does not exist")
        try:
            data = yaml.safe_load(path.read_text())
        except yaml.YAMLError as exc:
            raise ConfigError(f"cannot parse {path}: {exc}") from exc
        return cls.from_dict(data, path.parent)

    def validate(self) -> "ExperimentConfig":
        needs_all = self.kind not in ("weights", "check-condition", "sweep")
        if needs_all:
            for name in ("potential", "grid"):
                if getattr(self, name) is None:
                    raise ConfigError(f"kind {self.kind!r} needs a {name} block")
        if self.kind in ("evolve", "dispersion-fit", "gn-check", "scattering", "wave-operator") and self.solver is None:
            raise ConfigError(f"kind {self.kind!r} needs a solver block")
        if self.kind == "weights" and self.potential is None:
            raise ConfigError("kind 'weights' needs a potential block")
        if self.potential is not None and self.grid is not None and self.grid.n != self.potential.n:
            raise ConfigError("grid and potential dimensions differ")
        if self.solver is not None and self.potential is not None:
            self.solver.validate(self.potential.n)
        elif self.solver is not None:
            self.solver.validate(1)
        if needs_all:
            kind = self.initial.get("type", "gaussian")
            if kind not in ("gaussian", "hermite", "file"):
                raise ConfigError(f"unknown initial data type {kind!r}")
            if kind == "file" and not Path(self.initial.get("path", "")).exists():
                raise ConfigError(f"initial data file {self.initial.get('path')!r} does not exist")
            if kind == "gaussian" and np.any(np.asarray(self.initial.get("width", 1.0), dtype=float) <= 0):
                raise ConfigError("gaussian width must be positive")
            if "norm" in self.initial and float(self.initial["norm"]) <= 0:
                raise ConfigError("initial norm must be positive")
        if self.kind == "sweep":
            SweepPlan.from_config(self)
        if self.kind == "check-condition":
            _condition_inputs(self)
        return self

    def initial_state(self) -> WaveFunction:
        spec = dict(self.initial)
        kind = spec.pop("type", "gaussian")
        norm = spec.pop("norm", None)
        if kind == "gaussian":
            psi = gaussian(self.grid, spec.get("center", 0.0), spec.get("width", 1.0),
                           spec.get("momentum", 0.0), spec.get("amplitude"))
        elif kind == "hermite":
            psi = hermite(self.grid, spec.get("index", 0), spec.get("omega", list(self.potential.omega)))
        else:
            psi = load_snapshot(spec["path"])
            if psi.grid != self.grid:
                raise ConfigError("initial data file grid differs from the grid block")
        if norm is not None:
            psi = psi * (float(norm) / math.sqrt(l2_sq(psi.grid, psi.amplitude)))
        return psi


def resolve_output(config: ExperimentConfig, out: str | None = None) -> Path:
    """--out, then $MEHLER_NLS_OUT, then the config's output, then runs/<kind>."""
    if out:
        return Path(out)
    if os.environ.get(OUT_ENV):
        return Path(os.environ[OUT_ENV])
    if config.output:
        return Path(config.output)
    return Path("runs") / config.kind


# -- small writers -----------------------------------------------------------------


def write_rows(path: Path, rows: list[dict]) -> Path:
    cols: list[str] = []
    for r in rows:
        for k in r:
            if k not in cols:
                cols.append(k)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(cols)
        for r in rows:
            writer.writerow([_fmt(r.get(c, "")) for c in cols])
    return path


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    return v


def write_json(path: Path, payload) -> Path:
    path.write_text(json.dumps(_jsonable(payload), indent=1, sort_keys=True))
    return path


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, float)):
        f = float(obj)
        return f if math.isfinite(f) else ("inf" if f > 0 else "-inf" if f < 0 else "nan")
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def sha256_file(path: Path) -> str:
    h = hashlib.sha256()
    with Path(path).open("rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


# -- runners -------------------------------------------------------------------------


def _evolve(cfg: ExperimentConfig, out: Path, rng) -> dict:
    psi = cfg.initial_state()
    solver = cfg.solver
    if cfg.params.get("confirm_blowup"):
        conf = confirm_blowup(psi, cfg.potential, solver, float(cfg.params.get("rel_tol", 0.1)))
        res = conf.base
        conf.refined.record.to_csv(out / "record_refined.csv")
        extra = {"blowup_times": list(conf.times), "relative_difference": conf.relative_difference,
                 "confirmed": conf.confirmed}
    else:
        res = evolve(psi, cfg.potential, solver)
        extra = {}
    res.record.to_csv(out / "record.csv")
    res.record.to_json(out / "record.json")
    save_snapshot(out / "final_state.bin", res.final.field,
                  {"t": res.final.t, "frame": solver.frame, "comoving": list(res.frame.comoving)})
    return {"termination": res.termination, "message": res.record.message, "t_final": res.final.t,
            "max_heis_sigma_norm": float(np.max(res.record["heis_sigma_norm"])), **extra}


def _linear_test(cfg: ExperimentConfig, out: Path, rng) -> dict:
    psi = cfg.initial_state()
    spec = cfg.potential
    times = [float(t) for t in cfg.params.get("times", [1.0])]
    substeps = int(cfg.params.get("substeps", 10_000))
    rows = []
    for t in times:
        ref = splitstep_linear(psi, spec, t, substeps)
        exact = propagate_linear(psi, spec, 0.0, t) if spec.has_linear_terms else mehler_apply(psi, spec, t, check_nyquist=False)
        rows.append({"t": t, "l2_vs_splitstep": math.sqrt(l2_sq(psi.grid, exact.amplitude - ref.amplitude)),
                     "mass_drift": abs(l2_sq(psi.grid, exact.amplitude) - l2_sq(psi.grid, psi.amplitude))})
    a, b = rng.uniform(0.1, 2.0, size=2)
    one = propagate_linear(psi, spec, 0.0, a + b)
    two = propagate_linear(propagate_linear(psi, spec, 0.0, a), spec, a, a + b)
    back = propagate_linear(one, spec, a + b, 0.0)
    write_rows(out / "linear_test.csv", rows)
    return {"group_law": {"a": float(a), "b": float(b), "l2": math.sqrt(l2_sq(psi.grid, one.amplitude - two.amplitude))},
            "round_trip_l2": math.sqrt(l2_sq(psi.grid, back.amplitude - psi.amplitude)),
            "max_l2_vs_splitstep": max(r["l2_vs_splitstep"] for r in rows)}


def _dispersion_fit(cfg: ExperimentConfig, out: Path, rng) -> dict:
    psi = cfg.initial_state()
    res = evolve(psi, cfg.potential, cfg.solver)
    res.record.to_csv(out / "record.csv")
    norm = cfg.params.get("norm", "L4")
    window = cfg.params.get("window")
    fit = decay_fit(res.record, norm, tuple(window) if window else None, cfg.params.get("model", "exponential"))
    write_json(out / "fit.json", fit.to_dict())
    return {"termination": res.termination, "fit": fit.to_dict()}


def _weights(cfg: ExperimentConfig, out: Path, rng) -> dict:
    spec = cfg.potential
    window = tuple(cfg.params.get("window", (-1.0, 1.0)))
    prof = weight_profile(spec, window, int(cfg.params.get("samples", 100_000)),
                          cfg.params.get("delta_cut"), cfg.params.get("form", "exact"))
    write_rows(out / "profile.csv", prof.to_rows())
    reports = [effective_dimension_check(spec.n, float(d), prof).to_dict() for d in cfg.params.get("d", [spec.n])]
    write_rows(out / "effective_dimension.csv", reports)
    return {"weak_l1": weak_l1_norm(prof), "samples": len(prof), "delta_cut": prof.delta_cut, "effective_dimension": reports}


def _gn_check(cfg: ExperimentConfig, out: Path, rng) -> dict:
    p = float(cfg.params.get("p", 4.0))
    spec = cfg.potential
    res = evolve(cfg.initial_state(), spec, replace(cfg.solver, keep_states=True))
    rows = []
    for st in res.states:
        # all norms follow from the frame field through exact identities
        m = res.frame.measure(st.field, st.t)
        norms = GNNorms(math.sqrt(m["mass"]), tuple(m[f"J_{j}"] for j in range(spec.n)),
                        tuple(m[f"H_{j}"] for j in range(spec.n)))
        rows.append(gn_report(res.frame.lp_norm(st.field, st.t, p), norms, spec, st.t, p).to_dict())
    write_rows(out / "gn_table.csv", rows)
    ratios = np.array([r["ratio"] for r in rows])
    return {"termination": res.termination, "ratio_min": float(ratios.min()), "ratio_max": float(ratios.max()),
            "spread": float(ratios.max() / ratios.min())}


def _scattering(cfg: ExperimentConfig, out: Path, rng) -> dict:
    res = evolve(cfg.initial_state(), cfg.potential, replace(cfg.solver, keep_states=True))
    res.record.to_csv(out / "record.csv")
    series = scattering_diagnostic(res)
    write_rows(out / "scattering.csv", series.to_rows())
    summary = {"termination": res.termination, "initial_distance": float(series.distance[0]),
               "final_cauchy": float(series.cauchy[-1]) if series.cauchy.size else 0.0}
    if cfg.params.get("remainder", False):
        t0 = float(cfg.params.get("t0", cfg.solver.t0 if cfg.solver.t0 is not None else default_t0(cfg.potential)))
        start = evolve(cfg.initial_state(), cfg.potential, replace(cfg.solver, t_end=t0, keep_states=False)).final
        rem = decompose_linear_remainder(start, cfg.potential, cfg.solver)
        write_rows(out / "remainder.csv", rem.to_rows())
        summary["remainder_sup_l2"] = float(rem.w_l2.max())
    return summary


def _wave_operator(cfg: ExperimentConfig, out: Path, rng) -> dict:
    u_minus = cfg.initial_state()
    tol = float(cfg.params.get("tol", 1e-3))
    wo = wave_operator(u_minus, cfg.potential, cfg.solver, tol, float(cfg.params.get("step", 0.25)),
                       float(cfg.params.get("max_time", 50.0)))
    wo.result.record.to_csv(out / "record.csv")
    save_snapshot(out / "u0.bin", wo.u0, {"t": 0.0, "t_start": wo.t_start})
    err = wave_operator_round_trip(wo, cfg.potential, cfg.solver)
    return {"termination": wo.result.termination, "t_start": wo.t_start,
            "linear_norm_at_start": wo.linear_norm_at_start, "round_trip_sigma_error": err}


def _condition_inputs(cfg: ExperimentConfig) -> dict:
    p = dict(cfg.params)
    spec = cfg.potential
    vals = {
        "n": p.get("n", spec.n if spec else None),
        "sigma": p.get("sigma", cfg.solver.sigma if cfg.solver else None),
        "omega2": p.get("omega2", spec.omega_plus() if spec else None),
        "omega1": p.get("omega1", spec.omega_minus() if spec else None),
        "Lambda": p.get("Lambda", 1.0),
    }
    missing = [k for k, v in vals.items() if v is None]
    if missing:
        raise ConfigError(f"check-condition needs {missing}")
    if float(vals["sigma"]) <= 0:
        raise ConfigError("sigma must be positive")
    if float(vals["Lambda"]) <= 0:
        raise ConfigError("Lambda must be positive")
    return vals


def _check_condition(cfg: ExperimentConfig, out: Path, rng) -> dict:
    v = _condition_inputs(cfg)
    thr = domin_threshold(int(v["n"]), float(v["sigma"]), float(v["omega2"]), float(v["Lambda"]))
    ok = float(v["omega1"]) >= thr
    return {**v, "threshold": thr, "satisfied": ok, "report": "satisfied" if ok else "not satisfied"}


RUNNERS: dict[str, Callable] = {
    "evolve": _evolve,
    "linear-test": _linear_test,
    "dispersion-fit": _dispersion_fit,
    "weights": _weights,
    "gn-check": _gn_check,
    "scattering": _scattering,
    "wave-operator": _wave_operator,
    "check-condition": _check_condition,
}


# -- run -------------------------------------------------------------------------------


def _memory_estimate(cfg: ExperimentConfig) -> int:
    if cfg.grid is None:
        return 0
    cells = math.prod(cfg.grid.points)
    # a handful of complex work arrays per step, plus kept states
    return int(16 * cells * 8)


def config_hash(source: dict) -> str:
    return hashlib.sha256(json.dumps(_jsonable(source), sort_keys=True).encode()).hexdigest()


def write_manifest(out: Path, cfg: ExperimentConfig, status: str, wall: float, summary: dict | None) -> Path:
    files = []
    for path in sorted(out.rglob("*")):
        if path.is_file() and path.name != "manifest.json" and "points" not in path.relative_to(out).parts[:1]:
            files.append({"path": str(path.relative_to(out)), "sha256": sha256_file(path), "bytes": path.stat().st_size})
    manifest = {
        "status": status,
        "kind": cfg.kind,
        "config": cfg.source,
        "config_sha256": config_hash(cfg.source),
        "seed": cfg.seed,
        "versions": {"package": __version__, "python": platform.python_version(), "numpy": np.__version__,
                     "scipy": scipy.__version__, "yaml": yaml.__version__},
        "platform": platform.platform(),
        "wall_time_s": wall,
        "memory_estimate_bytes": _memory_estimate(cfg),
        "files": files,
        "summary": summary,
    }
    return write_json(out / "manifest.json", manifest)


def completed_manifest(out: Path, cfg: ExperimentConfig) -> dict | None:
    path = out / "manifest.json"
    if not path.exists():
        return None
    try:
        manifest = json.loads(path.read_text())
    except json.JSONDecodeError:
        return None
    if manifest.get("status") == "completed" and manifest.get("config_sha256") == config_hash(cfg.source):
        return manifest
    return None


@dataclass
class RunOutcome:
    status: int
    out: Path
    summary: dict | None
    error: dict | None = None


def run(config: ExperimentConfig, out: str | Path | None = None, resume: bool = False) -> RunOutcome:
    """Execute one experiment. Exit status 0 on success, 1 on a module fault."""
    out_dir = resolve_output(config, str(out) if out else None)
    out_dir.mkdir(parents=True, exist_ok=True)
    if resume:
        done = completed_manifest(out_dir, config)
        if done is not None:
            return RunOutcome(0, out_dir, done.get("summary"))
    if config.kind == "sweep":
        return run_sweep(config, out_dir, resume)
    (out_dir / "error.json").unlink(missing_ok=True)
    write_json(out_dir / "config.json", config.source)
    rng = np.random.default_rng(config.seed)
    start = time.perf_counter()
    try:
        summary = RUNNERS[config.kind](config, out_dir, rng)
    except MehlerNLSError as exc:
        err = {"error": type(exc).__name__, "message": str(exc), "kind": config.kind}
        write_json(out_dir / "error.json", err)
        write_manifest(out_dir, config, "failed", time.perf_counter() - start, None)
        return RunOutcome(1, out_dir, None, err)
    write_json(out_dir / "summary.json", summary)
    write_manifest(out_dir, config, "completed", time.perf_counter() - start, summary)
    return RunOutcome(0, out_dir, summary)


# -- sweeps ----------------------------------------------------------------------------


@dataclass
class SweepPlan:
    """Cartesian product of parameter axes applied to a point template."""

    axes: dict[str, list]
    template: dict
    max_workers: int = field(default_factory=lambda: os.cpu_count() or 1)
    cap: int = 1000

    @classmethod
    def from_config(cls, cfg: ExperimentConfig) -> "SweepPlan":
        p = cfg.params
        axes = p.get("axes")
        if not isinstance(axes, dict) or not axes:
            raise ConfigError("sweep needs params.axes, a mapping of axis name to value list")
        bad = set(axes) - set(SWEEP_AXES)
        if bad:
            raise ConfigError(f"unknown sweep axes {sorted(bad)}; allowed {SWEEP_AXES}")
        template = {k: copy.deepcopy(v) for k, v in cfg.source.items() if k not in ("params", "kind", "output")}
        template["kind"] = p.get("point_kind", "evolve")
        template["params"] = dict(p.get("point_params", {}))
        if template["kind"] in ("sweep",):
            raise ConfigError("sweep points cannot be sweeps")
        plan = cls({k: list(v) for k, v in axes.items()}, template,
                   int(p.get("max_workers", os.cpu_count() or 1)), int(p.get("cap", 1000)))
        return plan.validate()

    def validate(self) -> "SweepPlan":
        if any(len(v) == 0 for v in self.axes.values()):
            raise ConfigError("sweep axes must be non-empty")
        if len(self) > self.cap:
            raise ConfigError(f"sweep has {len(self)} points, above the cap {self.cap}")
        if self.max_workers < 1:
            raise ConfigError("max_workers must be >= 1")
        for pt in self.points():
            ExperimentConfig.from_dict(pt)
        return self

    def __len__(self) -> int:
        return math.prod(len(v) for v in self.axes.values())

    def parameters(self) -> list[dict]:
        names = list(self.axes)
        return [dict(zip(names, combo)) for combo in itertools.product(*(self.axes[k] for k in names))]

    def points(self) -> list[dict]:
        return [apply_axes(self.template, params) for params in self.parameters()]


def apply_axes(template: dict, params: dict) -> dict:
    pt = copy.deepcopy(template)
    for name, value in params.items():
        if name in ("omega1", "omega2"):
            omega = list(pt["potential"]["omega"])
            omega[0 if name == "omega1" else 1] = float(value)
            pt["potential"]["omega"] = omega
        elif name == "lambda":
            pt.setdefault("solver", {}).pop("lam", None)
            pt["solver"]["lambda"] = float(value)
        elif name == "sigma":
            pt.setdefault("solver", {})["sigma"] = float(value)
        elif name == "norm":
            pt.setdefault("initial", {})["norm"] = float(value)
    return pt


def _point_summary(point: dict, out: str, resume: bool) -> dict:
    cfg = ExperimentConfig.from_dict(point)
    outcome = run(cfg, out, resume)
    row = {"status": outcome.status}
    summary = outcome.summary or {}
    row["termination"] = summary.get("termination", "error" if outcome.error else "")
    row["max_sigma_norm"] = summary.get("max_heis_sigma_norm", float("nan"))
    rate = float("nan")
    rec_path = Path(out) / "record.json"
    if rec_path.exists() and outcome.status == 0:
        rec = EvolutionRecord.from_json(rec_path)
        label = lp_label(4.0)
        if label in rec.columns and len(rec) >= 16:
            t = rec.t
            try:
                rate = decay_fit(rec, label, (t[-1] / 2, t[-1])).rate
            except MehlerNLSError:
                pass
    row["decay_rate_L4"] = rate
    row["scattering_residual"] = summary.get("final_cauchy", float("nan"))
    if outcome.error:
        row["error"] = outcome.error["message"]
    return row


def run_sweep(config: ExperimentConfig, out_dir: Path, resume: bool = False) -> RunOutcome:
    plan = SweepPlan.from_config(config)
    start = time.perf_counter()
    params = plan.parameters()
    points = plan.points()
    dirs = [str(out_dir / "points" / f"p{k:04d}") for k in range(len(points))]
    rows: list[dict | None] = [None] * len(points)
    if plan.max_workers == 1:
        for k, pt in enumerate(points):
            rows[k] = _point_summary(pt, dirs[k], resume)
    else:
        with ProcessPoolExecutor(max_workers=min(plan.max_workers, len(points))) as pool:
            futures = {pool.submit(_point_summary, pt, dirs[k], resume): k for k, pt in enumerate(points)}
            for fut in as_completed(futures):
                k = futures[fut]
                try:
                    rows[k] = fut.result()
                except Exception as exc:  # per-point failures are recorded, the sweep continues
                    rows[k] = {"status": 1, "termination": "error", "error": repr(exc)}
    table = [{"point": f"p{k:04d}", **params[k], **rows[k]} for k in range(len(points))]
    write_rows(out_dir / "summary.csv", table)
    summary = {"points": len(points), "failed": sum(1 for r in table if r["status"] != 0)}
    write_json(out_dir / "summary.json", {**summary, "rows": table})
    write_manifest(out_dir, config, "completed", time.perf_counter() - start, summary)
    return RunOutcome(0, out_dir, summary)
