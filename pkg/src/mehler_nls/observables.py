"""Measured counterparts of the analytic quantities of the model.

Energy, the Heisenberg operators J_j(t), H_j(t), weighted
Gagliardo-Nirenberg ratios, decay-rate fits, scattering diagnostics and
the wave operator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .errors import ConfigError, DegenerateWeightError, DomainError, InsufficientDataError, NyquistViolation
from .frame import FrameState, LensFrame
from .grid import WaveFunction, derivative, grad_norm, l2_sq, lp_norm, sigma_norm
from .integrator import EvolutionRecord, EvolutionResult, SolverConfig, evolve
from .propagator import _support_radius
from .trajectories import PotentialSpec, classical_pair

WEIGHT_FLOOR = 1e-6
_KINDS = ("identity", "J", "H")


def energy(psi: WaveFunction, spec: PotentialSpec, lam: float = 0.0, sigma: float = 1.0) -> float:
    """E_V = 1/2 ||grad u||^2 + lam/(sigma+1) ||u||_r^r + int V |u|^2, r = 2 sigma + 2."""
    grid = psi.grid
    dens = np.abs(psi.amplitude) ** 2
    pot = float(np.sum(spec.potential(grid.coordinates()) * dens)) * grid.cell_volume
    out = 0.5 * grad_norm(psi) ** 2 + pot
    if lam != 0:
        r = 2 * sigma + 2
        out += lam / (sigma + 1) * lp_norm(psi, r) ** r
    return out


@dataclass(frozen=True)
class OperatorTag:
    """``kind`` in {"identity", "J", "H"} acting along ``direction``."""

    kind: str
    direction: int

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise DomainError(f"operator kind must be one of {_KINDS}")
        if self.direction < 0:
            raise DomainError("direction must be nonnegative")


def _check_direction(tag: OperatorTag, spec: PotentialSpec):
    if tag.direction >= spec.n:
        raise DomainError(f"direction {tag.direction} out of range for n = {spec.n}")


def apply_operator(psi: WaveFunction, tag: OperatorTag, spec: PotentialSpec, t: float) -> WaveFunction:
    """J_j = -delta w^2 g x_j + h i d_j and H_j = h x_j + g i d_j, at time t."""
    _check_direction(tag, spec)
    if tag.kind == "identity":
        return psi.copy()
    j = tag.direction
    g, h = classical_pair(spec.delta[j], spec.omega[j], t)
    x = psi.grid.coordinate(j)
    idu = 1j * derivative(psi.grid, psi.amplitude, j)
    if tag.kind == "J":
        a, b = -spec.delta[j] * spec.omega[j] ** 2 * g, h
    else:
        a, b = h, g
    return psi.replace(a * x * psi.amplitude + b * idu)


def factorized_operator(psi: WaveFunction, tag: OperatorTag, spec: PotentialSpec, t: float,
                        floor: float = WEIGHT_FLOOR) -> WaveFunction:
    """Same operators in conjugated-derivative form  i m e^{i beta x^2/2} d (e^{-i beta x^2/2} .).

    For J, m = h and beta = -delta w^2 g / h; for H, m = g and beta = h / g.
    Raises DegenerateWeightError when |m| falls below ``floor`` and
    NyquistViolation when the chirp changes by pi or more per cell on the
    support of psi, where the spectral derivative would alias.
    """
    _check_direction(tag, spec)
    if tag.kind == "identity":
        return psi.copy()
    j = tag.direction
    d, w = spec.delta[j], spec.omega[j]
    g, h = classical_pair(d, w, t)
    m = h if tag.kind == "J" else g
    if abs(m) < floor:
        raise DegenerateWeightError(f"{tag.kind}_{j} factorization weight {m:.3e} below floor {floor:g}")
    beta = -d * w * w * g / h if tag.kind == "J" else h / g
    if abs(beta) * _support_radius(psi.grid, psi.amplitude, j) * psi.grid.spacing[j] >= math.pi:
        raise NyquistViolation(f"{tag.kind}_{j} chirp rate {beta:.3g} is unresolved on the support")
    x = psi.grid.coordinate(j)
    chirp = np.exp(0.5j * beta * x * x)
    inner_ = derivative(psi.grid, psi.amplitude / chirp, j)
    return psi.replace(1j * m * chirp * inner_)


def operator_norm(psi: WaveFunction, tag: OperatorTag, spec: PotentialSpec, t: float) -> float:
    out = apply_operator(psi, tag, spec, t)
    return math.sqrt(l2_sq(psi.grid, out.amplitude))


# -- weighted Gagliardo-Nirenberg --------------------------------------------


@dataclass
class GNReport:
    """LHS ||f||_p, right-hand sides without C_p, and their ratios.

    ``ratio`` is the largest ratio over the forms whose weight is above the
    floor, which is the sharpest empirical lower bound on C_p.
    """

    t: float
    p: float
    lhs: float
    rhs: dict[str, float]
    ratios: dict[str, float]
    form: str
    ratio: float

    def to_dict(self) -> dict:
        return {"t": self.t, "p": self.p, "lhs": self.lhs, "form": self.form, "ratio": self.ratio,
                **{f"rhs_{k}": v for k, v in self.rhs.items()},
                **{f"ratio_{k}": v for k, v in self.ratios.items()}}


def gn_delta(n: int, p: float) -> float:
    """delta(p) = n (1/2 - 1/p)."""
    return n * (0.5 - 1.0 / p)


@dataclass(frozen=True)
class GNNorms:
    """The L2 quantities entering the weighted inequality."""

    l2: float
    J: tuple[float, ...]
    H: tuple[float, ...]


def gn_norms(psi: WaveFunction, spec: PotentialSpec, t: float) -> GNNorms:
    l2 = math.sqrt(l2_sq(psi.grid, psi.amplitude))
    J = tuple(operator_norm(psi, OperatorTag("J", j), spec, t) for j in range(spec.n))
    H = tuple(operator_norm(psi, OperatorTag("H", j), spec, t) for j in range(spec.n))
    return GNNorms(l2, J, H)


def gn_rhs(norms: GNNorms, spec: PotentialSpec, t: float, p: float, form: str,
           floor: float = WEIGHT_FLOOR) -> float:
    """Right-hand side of the weighted inequality without its constant.

    ``form`` is "cos" (J_2 with |cos w2 t|), "sin" (w2 H_2 with |sin w2 t|)
    or "combined" (J_2 + w2 H_2, no weight). Free directions k >= 3 enter
    through ||J_k f|| = ||d_k f||.
    """
    n = spec.n
    dp = gn_delta(n, p)
    w1, w2 = spec.omega[0], spec.omega[1]
    j1 = norms.J[0] / math.cosh(w1 * t)
    rest = math.prod(norms.J[2:])
    if form == "cos":
        weight = abs(math.cos(w2 * t))
        if weight < floor:
            raise DegenerateWeightError(f"|cos(w2 t)| = {weight:.2e} below floor")
        second = norms.J[1] / weight
    elif form == "sin":
        weight = abs(math.sin(w2 * t))
        if weight < floor:
            raise DegenerateWeightError(f"|sin(w2 t)| = {weight:.2e} below floor")
        second = w2 * norms.H[1] / weight
    elif form == "combined":
        second = norms.J[1] + w2 * norms.H[1]
    else:
        raise DomainError(f"unknown form {form!r}")
    return norms.l2 ** (1 - dp) * (j1 * second * rest) ** (dp / n)


def _check_gn_setting(spec: PotentialSpec, p: float):
    n = spec.n
    if n < 2 or spec.delta[0] != -1 or spec.delta[1] != 1 or any(d != 0 for d in spec.delta[2:]):
        raise DomainError("gn_check needs delta = (-1, +1, 0, ..., 0)")
    if p < 2 or (n > 2 and p >= 2 * n / (n - 2)) or math.isinf(p):
        raise DomainError(f"p must satisfy 2 <= p < 2n/(n-2), got {p}")


def gn_report(lhs: float, norms: GNNorms, spec: PotentialSpec, t: float, p: float,
              floor: float = WEIGHT_FLOOR) -> GNReport:
    """Ratio report from a measured ||f||_p and the L2 quantities."""
    _check_gn_setting(spec, p)
    rhs, ratios = {}, {}
    for form in ("cos", "sin", "combined"):
        try:
            rhs[form] = gn_rhs(norms, spec, t, p, form, floor)
        except DegenerateWeightError:
            continue
        ratios[form] = lhs / rhs[form] if rhs[form] > 0 else math.inf
    weighted = {k: v for k, v in ratios.items() if k != "combined"}
    form = max(weighted, key=weighted.get)
    return GNReport(t, p, lhs, rhs, ratios, form, weighted[form])


def gn_check(psi: WaveFunction, spec: PotentialSpec, t: float, p: float,
             floor: float = WEIGHT_FLOOR) -> GNReport:
    """Weighted Gagliardo-Nirenberg ratio ||f||_p / RHS at time t.

    Requires direction 0 repulsive, direction 1 confining and any further
    directions free, and 2 <= p < 2n/(n-2).
    """
    _check_gn_setting(spec, p)
    return gn_report(lp_norm(psi, p), gn_norms(psi, spec, t), spec, t, p, floor)


# -- decay fits ----------------------------------------------------------------


@dataclass
class DecayFit:
    """log y = rate * s + intercept with s = t (exponential) or log t (power)."""

    rate: float
    intercept: float
    residual: float
    samples: int
    model: str
    flagged: bool

    def to_dict(self) -> dict:
        return self.__dict__.copy()


def decay_fit(record: EvolutionRecord | tuple, norm: str = "L4", window: tuple[float, float] | None = None,
              model: str = "exponential", residual_flag: float = 1e-2) -> DecayFit:
    """Least-squares slope of log(norm) against t (or log t) over ``window``.

    ``record`` is an :class:`EvolutionRecord` or a pair of arrays (t, y).
    ``residual`` is the RMS of the log residuals; fits above
    ``residual_flag`` are flagged as not decaying cleanly.
    """
    if isinstance(record, EvolutionRecord):
        t, y = record.t, record[norm]
    else:
        t, y = (np.asarray(a, dtype=float) for a in record)
    if window is not None:
        keep = (t >= window[0]) & (t <= window[1])
        t, y = t[keep], y[keep]
    if t.size < 8:
        raise InsufficientDataError(f"{t.size} samples in window, need at least 8")
    if np.any(y <= 0):
        raise DomainError("series values must be positive")
    if model == "exponential":
        s = t
    elif model == "power":
        if np.any(t <= 0):
            raise DomainError("power-law fits need t > 0")
        s = np.log(t)
    else:
        raise DomainError(f"unknown model {model!r}")
    A = np.vstack([s, np.ones_like(s)]).T
    coef, *_ = np.linalg.lstsq(A, np.log(y), rcond=None)
    resid = float(np.sqrt(np.mean((A @ coef - np.log(y)) ** 2)))
    return DecayFit(float(coef[0]), float(coef[1]), resid, int(t.size), model, resid > residual_flag)


# -- scattering and wave operators -------------------------------------------


@dataclass
class ScatteringSeries:
    """Sigma distances of the pulled-back states phi(t) = U_V(-t) u(t)."""

    t: np.ndarray
    distance: np.ndarray  # ||phi(t) - phi(t_last)||_Sigma
    cauchy: np.ndarray  # ||phi(t_i) - phi(t_{i+1})||_Sigma, one shorter

    def to_rows(self) -> list[dict]:
        rows = []
        for k, (t, d) in enumerate(zip(self.t, self.distance)):
            rows.append({"t": float(t), "distance": float(d),
                         "cauchy": float(self.cauchy[k]) if k < self.cauchy.size else 0.0})
        return rows


def pulled_back_states(result: EvolutionResult, times: Sequence[float] | None = None) -> list[tuple[float, WaveFunction]]:
    if not result.states:
        raise ConfigError("the run kept no states; evolve with keep_states=True")
    states = result.states
    if times is not None:
        by_t = {round(s.t, 12): s for s in states}
        try:
            states = [by_t[round(float(t), 12)] for t in times]
        except KeyError as exc:
            raise DomainError(f"time {exc} is not a recorded time of the run") from None
    ts = [s.t for s in states]
    if any(b <= a for a, b in zip(ts, ts[1:])) and any(b >= a for a, b in zip(ts, ts[1:])):
        raise DomainError("times must be monotone")
    return [(s.t, result.frame.pullback(s.field, s.t)) for s in states]


def scattering_diagnostic(result: EvolutionResult, spec: PotentialSpec | None = None,
                          times: Sequence[float] | None = None) -> ScatteringSeries:
    """phi(t) = U_V(-t) u(t) at the kept states; distances to phi(t_last)."""
    if spec is not None and spec != result.frame.spec:
        raise DomainError("spec does not match the run")
    phis = pulled_back_states(result, times)
    ref = phis[-1][1]
    dist = np.array([sigma_norm(phi - ref) for _, phi in phis])
    cauchy = np.array([sigma_norm(a[1] - b[1]) for a, b in zip(phis, phis[1:])])
    return ScatteringSeries(np.array([t for t, _ in phis]), dist, cauchy)


@dataclass
class WaveOperatorResult:
    u0: WaveFunction
    t_start: float
    result: EvolutionResult
    u_minus: WaveFunction
    linear_norm_at_start: float
    tol: float


def linear_start_time(u_minus: WaveFunction, spec: PotentialSpec, r: float, tol: float,
                      step: float = 0.25, max_time: float = 50.0, frame: str = "auto") -> tuple[float, float]:
    """First T = -k*step with ||U_V(T) u_-||_{L^r} < tol; returns (T, norm)."""
    fr = LensFrame.from_mode(spec, frame)
    k = 0
    while k * step <= max_time:
        T = -k * step
        val = fr.lp_norm(fr.push(u_minus, T), T, r)
        if val < tol:
            return T, val
        k += 1
    raise DomainError(f"||U_V(T) u_-||_L{r:g} stays above {tol:g} for |T| <= {max_time:g}")


def wave_operator(u_minus: WaveFunction, spec: PotentialSpec, config: SolverConfig, tol: float = 1e-3,
                  step: float = 0.25, max_time: float = 50.0) -> WaveOperatorResult:
    """u(0) of the solution with U_V(-t) u(t) -> u_- as t -> -infinity.

    Starts at T_start, the first multiple of -``step`` with
    ||U_V(T) u_-||_{L^(2 sigma + 2)} < ``tol`` (or ``config.t_start`` if
    that is earlier), sets u(T_start) = U_V(T_start) u_- and evolves to 0.
    """
    r = 2 * config.sigma + 2
    T, val = linear_start_time(u_minus, spec, r, tol, step, max_time, config.frame)
    if config.t_start < T:
        T = config.t_start
    fr = LensFrame.from_mode(spec, config.frame)
    v_T = fr.push(u_minus, T, config.linear_floor)
    val = fr.lp_norm(v_T, T, r)
    res = evolve(FrameState(T, v_T), spec, replace(config, t_start=T, t_end=0.0))
    return WaveOperatorResult(res.physical(), T, res, u_minus, val, tol)


def wave_operator_round_trip(wo: WaveOperatorResult, spec: PotentialSpec, config: SolverConfig) -> float:
    """Evolve u(0) back to T_start and return ||U_V(-T_start) u(T_start) - u_-||_Sigma."""
    back = evolve(wo.u0, spec, replace(config, t_start=0.0, t_end=wo.t_start))
    phi = back.frame.pullback(back.final.field, back.final.t, config.linear_floor)
    return sigma_norm(phi - wo.u_minus)
