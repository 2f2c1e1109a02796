"""Strang splitting of the NLS flow with the exact linear group.

One step over [t, t + dt] is

    half nonlinear phase  ->  exact linear step  ->  half nonlinear phase,

where the nonlinear sub-flow i u_t = lam |u|^(2 sigma) u conserves |u|
pointwise and is therefore a pure phase. The scheme is unitary, symmetric
(hence time reversible) and of order two.

Evolutions run in a :class:`~mehler_nls.frame.LensFrame`; by default the
repulsive directions are co-moving so that the exponentially spreading
solution stays on a fixed grid. Observables are reported for the
physical solution u.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Sequence

import numpy as np
import scipy.fft as sfft

from .errors import ConfigError, MehlerNLSError
from .frame import FrameState, LensFrame, lp_label
from .grid import WaveFunction, boundary_mass_fraction, l2_sq, resample, save_snapshot
from .propagator import DEFAULT_FLOOR, propagate_linear
from .trajectories import PotentialSpec

RECORD_VERSION = "1"
TERMINATIONS = ("completed", "blowup_detected", "boundary_breach", "singularity_fault")


@dataclass(frozen=True)
class SolverConfig:
    """Time stepping and monitoring parameters.

    ``t_end`` may lie before ``t_start``, in which case the run goes
    backward in time with step ``dt`` (always positive).
    """

    dt: float
    t_end: float
    lam: float = 0.0
    sigma: float = 1.0
    blowup_gradient_factor: float = 1e3
    boundary_mass_tol: float = 1e-8
    output_every: int = 1
    linear_floor: float = DEFAULT_FLOOR
    t_start: float = 0.0
    frame: str = "auto"
    lp_norms: tuple[float, ...] = (4.0, math.inf)
    keep_states: bool = False
    checkpoint_every: int = 0
    checkpoint_dir: str | None = None
    t0: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "lp_norms", tuple(float(p) for p in self.lp_norms))

    def validate(self, n: int) -> "SolverConfig":
        for name in ("dt", "t_end", "t_start", "lam", "sigma"):
            if not math.isfinite(getattr(self, name)):
                raise ConfigError(f"{name} must be finite")
        if self.dt <= 0:
            raise ConfigError("dt must be positive")
        if self.t_end == self.t_start:
            raise ConfigError("t_end must differ from t_start")
        if self.sigma <= 0:
            raise ConfigError("sigma must be positive")
        if n >= 3 and self.sigma >= 2.0 / (n - 2):
            raise ConfigError(f"sigma must be < 2/(n-2) = {2.0 / (n - 2):g} for n = {n}")
        if self.blowup_gradient_factor <= 1:
            raise ConfigError("blowup_gradient_factor must exceed 1")
        if self.boundary_mass_tol <= 0:
            raise ConfigError("boundary_mass_tol must be positive")
        if self.output_every < 1:
            raise ConfigError("output_every must be >= 1")
        if self.checkpoint_every < 0:
            raise ConfigError("checkpoint_every must be >= 0")
        if self.frame not in ("auto", "physical"):
            raise ConfigError("frame must be 'auto' or 'physical'")
        if any(p < 1 for p in self.lp_norms):
            raise ConfigError("lp_norms entries must be >= 1")
        return self

    @classmethod
    def from_dict(cls, data: dict) -> "SolverConfig":
        data = dict(data)
        if "lambda" in data:
            data["lam"] = data.pop("lambda")
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown solver keys: {sorted(unknown)}")
        if "lp_norms" in data:
            data["lp_norms"] = tuple(math.inf if str(p).lower() in ("inf", "infinity") else float(p)
                                     for p in data["lp_norms"])
        try:
            return cls(**data)
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc

    def to_dict(self) -> dict:
        out = asdict(self)
        out["lambda"] = out.pop("lam")
        out["lp_norms"] = ["inf" if math.isinf(p) else p for p in self.lp_norms]
        return out


@dataclass
class EvolutionRecord:
    """Time series of observables plus the termination reason.

    Columns, in order: t, mass, energy, grad_norm, moment_norm, sigma_norm,
    heis_sigma_norm, frame_grad_norm, boundary_mass, J_0..J_{n-1},
    H_0..H_{n-1}, then one L<p> column per requested norm.
    """

    columns: list[str]
    rows: list[list[float]] = field(default_factory=list)
    termination: str = "completed"
    message: str = ""

    @classmethod
    def for_dimension(cls, n: int, lp_norms: Sequence[float]) -> "EvolutionRecord":
        cols = ["t", "mass", "energy", "grad_norm", "moment_norm", "sigma_norm",
                "heis_sigma_norm", "frame_grad_norm", "boundary_mass"]
        cols += [f"J_{j}" for j in range(n)] + [f"H_{j}" for j in range(n)]
        cols += [lp_label(p) for p in lp_norms]
        return cls(cols)

    def append(self, values: dict[str, float]) -> None:
        self.rows.append([float(values[c]) for c in self.columns])

    def __len__(self) -> int:
        return len(self.rows)

    def __getitem__(self, name: str) -> np.ndarray:
        k = self.columns.index(name)
        return np.array([r[k] for r in self.rows])

    @property
    def t(self) -> np.ndarray:
        return self["t"]

    def to_csv(self, path) -> Path:
        path = Path(path)
        with path.open("w", newline="") as fh:
            fh.write(f"# record_version={RECORD_VERSION} termination={self.termination}\n")
            writer = csv.writer(fh)
            writer.writerow(self.columns)
            for r in self.rows:
                writer.writerow([repr(v) for v in r])
        return path

    def to_json(self, path) -> Path:
        path = Path(path)
        payload = {
            "record_version": RECORD_VERSION,
            "termination": self.termination,
            "message": self.message,
            "columns": self.columns,
            "data": {c: [r[k] for r in self.rows] for k, c in enumerate(self.columns)},
        }
        path.write_text(json.dumps(payload, indent=1, allow_nan=True))
        return path

    @classmethod
    def from_json(cls, path) -> "EvolutionRecord":
        payload = json.loads(Path(path).read_text())
        cols = payload["columns"]
        rows = [list(vals) for vals in zip(*(payload["data"][c] for c in cols))]
        return cls(cols, rows, payload["termination"], payload.get("message", ""))


@dataclass
class EvolutionResult:
    record: EvolutionRecord
    final: FrameState
    frame: LensFrame
    states: list[FrameState] = field(default_factory=list)

    @property
    def termination(self) -> str:
        return self.record.termination

    def physical(self, state: FrameState | None = None, grid=None) -> WaveFunction:
        """u at the state's time, mapped out of the frame."""
        state = self.final if state is None else state
        return self.frame.to_physical(state.field, state.t, grid)


# -- single steps ------------------------------------------------------------


def nonlinear_phase_step(psi: WaveFunction, lam: float, sigma: float, dt: float) -> WaveFunction:
    """Exact flow of i u_t = lam |u|^(2 sigma) u over time dt."""
    if lam == 0:
        return psi.copy()
    mod = np.abs(psi.amplitude)
    return psi.replace(psi.amplitude * np.exp(-1j * lam * dt * mod ** (2 * sigma)))


def strang_step(psi: WaveFunction, spec: PotentialSpec, config: SolverConfig, t: float) -> WaveFunction:
    """One physical-frame step from t to t + dt."""
    half = 0.5 * config.dt
    out = nonlinear_phase_step(psi, config.lam, config.sigma, half)
    out = propagate_linear(out, spec, t, t + config.dt, config.linear_floor)
    return nonlinear_phase_step(out, config.lam, config.sigma, half)


def _frame_step(v: WaveFunction, frame: LensFrame, config: SolverConfig, t0: float, t1: float) -> WaveFunction:
    mid = 0.5 * (t0 + t1)
    v = nonlinear_phase_step(v, config.lam, config.sigma, frame.weight_integral(config.sigma, t0, mid))
    v = frame.linear_step(v, t0, t1, config.linear_floor)
    return nonlinear_phase_step(v, config.lam, config.sigma, frame.weight_integral(config.sigma, mid, t1))


def _frame_gradient(v: WaveFunction) -> float:
    """||grad v|| by Parseval, one n-D FFT."""
    grid = v.grid
    xi2 = sum(grid.wavenumber(j) ** 2 for j in range(grid.n))
    spec = sfft.fftn(v.amplitude)
    return math.sqrt(float(np.sum(xi2 * np.abs(spec) ** 2)) * grid.cell_volume / spec.size)


# -- evolution ---------------------------------------------------------------


def evolve(psi0: WaveFunction | FrameState, spec: PotentialSpec, config: SolverConfig) -> EvolutionResult:
    """Integrate from ``config.t_start`` to ``config.t_end``.

    ``psi0`` is either the physical field at t_start or a
    :class:`FrameState` already expressed in the frame. Monitors:
    the frame gradient norm exceeding ``blowup_gradient_factor`` times its
    initial value (``blowup_detected``); boundary mass fraction above
    ``boundary_mass_tol`` (``boundary_breach``); a non-finite field or a
    propagator fault (``singularity_fault``). A final row is always
    recorded at termination.
    """
    config.validate(spec.n)
    frame = LensFrame.from_mode(spec, config.frame)
    t_start, t_end = config.t_start, config.t_end
    if isinstance(psi0, FrameState):
        if not math.isclose(psi0.t, t_start, rel_tol=0, abs_tol=1e-12):
            raise ConfigError(f"initial state is at t={psi0.t}, config starts at {t_start}")
        v = psi0.field.copy()
    else:
        if not psi0.is_finite():
            raise ConfigError("initial data is not finite")
        v = frame.from_physical(psi0, t_start)
    record = EvolutionRecord.for_dimension(spec.n, config.lp_norms)
    states: list[FrameState] = []

    def observe(field_, t):
        obs = frame.measure(field_, t, config.lam, config.sigma, config.lp_norms)
        obs["t"] = t
        obs["boundary_mass"] = boundary_mass_fraction(field_)
        record.append(obs)
        if config.keep_states:
            states.append(FrameState(t, field_.copy()))
        return obs

    observe(v, t_start)
    grad0 = _frame_gradient(v)
    nsteps = max(1, math.ceil(abs(t_end - t_start) / config.dt - 1e-9))
    h = (t_end - t_start) / nsteps
    t = t_start
    ckpt_dir = Path(config.checkpoint_dir) if config.checkpoint_dir else None
    for k in range(1, nsteps + 1):
        t_next = t_end if k == nsteps else t_start + k * h
        try:
            v_next = _frame_step(v, frame, config, t, t_next)
        except MehlerNLSError as exc:
            record.termination, record.message = "singularity_fault", f"t={t_next}: {exc}"
            break
        v, t = v_next, t_next
        if not v.is_finite():
            record.termination, record.message = "singularity_fault", f"non-finite field at t={t}"
            observe(v, t)
            break
        if grad0 > 0 and _frame_gradient(v) > config.blowup_gradient_factor * grad0:
            record.termination = "blowup_detected"
            record.message = f"gradient exceeded {config.blowup_gradient_factor:g}x initial at t={t:.6g}"
            observe(v, t)
            break
        if boundary_mass_fraction(v) > config.boundary_mass_tol:
            record.termination = "boundary_breach"
            record.message = f"boundary mass above {config.boundary_mass_tol:g} at t={t:.6g}"
            observe(v, t)
            break
        if k % config.output_every == 0 or k == nsteps:
            observe(v, t)
        if ckpt_dir is not None and config.checkpoint_every and k % config.checkpoint_every == 0:
            ckpt_dir.mkdir(parents=True, exist_ok=True)
            save_snapshot(ckpt_dir / f"state_{k:08d}.bin", v, {"t": t, "step": k, "frame": config.frame})
    return EvolutionResult(record, FrameState(t, v), frame, states)


def blowup_time(result: EvolutionResult) -> float | None:
    if result.termination != "blowup_detected":
        return None
    return float(result.record.t[-1])


@dataclass
class BlowupConfirmation:
    base: EvolutionResult
    refined: EvolutionResult
    times: tuple[float | None, float | None]
    relative_difference: float
    confirmed: bool


def confirm_blowup(psi0: WaveFunction, spec: PotentialSpec, config: SolverConfig,
                   rel_tol: float = 0.1) -> BlowupConfirmation:
    """Rerun with dt/2 and 2N; confirmed when both runs blow up within ``rel_tol``."""
    base = evolve(psi0, spec, config)
    fine_psi = resample(psi0, [2 * N for N in psi0.grid.points])
    refined = evolve(fine_psi, spec, replace(config, dt=config.dt / 2, output_every=2 * config.output_every))
    t1, t2 = blowup_time(base), blowup_time(refined)
    if t1 is None or t2 is None:
        return BlowupConfirmation(base, refined, (t1, t2), math.inf, False)
    rel = abs(t1 - t2) / abs(t2 - config.t_start)
    return BlowupConfirmation(base, refined, (t1, t2), rel, rel < rel_tol)


# -- linear / remainder decomposition ----------------------------------------


def default_t0(spec: PotentialSpec) -> float:
    """min(0.5/(1 + w2), pi/(16 w2)) with w2 the largest confining frequency."""
    w2 = spec.omega_plus()
    t0 = 0.5 / (1.0 + w2)
    return min(t0, math.pi / (16 * w2)) if w2 > 0 else t0


@dataclass
class RemainderResult:
    t: np.ndarray
    w_l2: np.ndarray
    w_heis_sigma: np.ndarray
    full: EvolutionResult
    linear: EvolutionResult

    def to_rows(self) -> list[dict]:
        return [{"t": float(a), "w_l2": float(b), "w_heis_sigma": float(c)}
                for a, b, c in zip(self.t, self.w_l2, self.w_heis_sigma)]


def decompose_linear_remainder(state: FrameState, spec: PotentialSpec, config: SolverConfig,
                               t_end: float | None = None) -> RemainderResult:
    """Split u = v + w from ``state`` onward: v linear with v = u at t0, w the remainder.

    Both evolutions share step sizes and cadence, so the recorded times
    coincide; ``w`` is measured in the same frame as u.
    """
    t_end = config.t_end if t_end is None else t_end
    cfg = replace(config, t_start=state.t, t_end=t_end, keep_states=True)
    full = evolve(state, spec, cfg)
    linear = evolve(state, spec, replace(cfg, lam=0.0))
    frame = full.frame
    ts, l2, heis = [], [], []
    for a, b in zip(full.states, linear.states):
        w = a.field - b.field
        ts.append(a.t)
        l2.append(math.sqrt(l2_sq(w.grid, w.amplitude)))
        heis.append(frame.measure(w, a.t)["heis_sigma_norm"])
    return RemainderResult(np.array(ts), np.array(l2), np.array(heis), full, linear)
