"""Dispersive weight w(t), weak-L1 quasi-norms and Strichartz exponents.

The propagator satisfies ||U_V(t)||_{L1 -> Linf} <= w(t)^(n/2). Two forms
are provided:

* ``"exact"``  w(t) = (prod_j 1/(2 pi |g_j(t)|))^(1/n), the true kernel
  amplitude, used for |t| > delta_cut;
* ``"bound"``  w(t) = C (prod_j f_j(t))^(1/n) with f_j = exp(-w_j |t|),
  1/|sin(w_j t)| or 1/|t| for delta_j = -1, +1, 0.

Both continue as c/|t| for |t| <= delta_cut, with c the exact value
matched at delta_cut; the bound form fixes C by continuity there too.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SingularTimeError, ZeroTimeError
from .trajectories import PotentialSpec, classical_pair

_SINGULAR_EPS = 1e-12
TUBE_FRACTION = 1e-4


def default_delta_cut(spec: PotentialSpec) -> float:
    """min_j 1/(4 w_j), capped at 0.25."""
    return min(min(1.0 / (4.0 * w) for w in spec.omega), 0.25)


def _exact(spec: PotentialSpec, t: np.ndarray) -> np.ndarray:
    prod = np.ones_like(t)
    for d, w in zip(spec.delta, spec.omega):
        prod = prod / (2 * math.pi * np.abs(classical_pair(d, w, t).g))
    return prod ** (1.0 / spec.n)


def _bound(spec: PotentialSpec, t: np.ndarray) -> np.ndarray:
    prod = np.ones_like(t)
    at = np.abs(t)
    for d, w in zip(spec.delta, spec.omega):
        if d == -1:
            prod = prod * np.exp(-w * at)
        elif d == 1:
            prod = prod / np.abs(np.sin(w * t))
        else:
            prod = prod / at
    return prod ** (1.0 / spec.n)


def weight_values(spec: PotentialSpec, t, delta_cut: float | None = None, form: str = "exact") -> np.ndarray:
    """Vectorized :func:`weight_value`."""
    if form not in ("exact", "bound"):
        raise DomainError(f"unknown weight form {form!r}")
    delta_cut = default_delta_cut(spec) if delta_cut is None else float(delta_cut)
    if delta_cut <= 0:
        raise DomainError("delta_cut must be positive")
    t = np.asarray(t, dtype=float)
    if np.any(t == 0):
        raise ZeroTimeError("the weight is undefined at t = 0")
    for d, w in zip(spec.delta, spec.omega):
        if d == 1 and np.any(np.abs(np.sin(w * t)) < _SINGULAR_EPS):
            raise SingularTimeError(f"t hits a zero of g for omega = {w}")
    dc = np.array(delta_cut)
    c_small = delta_cut * float(_exact(spec, dc))
    large = _exact(spec, t)
    if form == "bound":
        large = _bound(spec, t) * (c_small / delta_cut) / float(_bound(spec, dc))
    return np.where(np.abs(t) <= delta_cut, c_small / np.abs(t), large)


def weight_value(spec: PotentialSpec, t: float, delta_cut: float | None = None, form: str = "exact") -> float:
    """w(t): c/|t| for |t| <= delta_cut, the chosen form beyond.

    Raises ZeroTimeError at t = 0 and SingularTimeError at a zero of some g_j.
    """
    return float(weight_values(spec, np.array(t, dtype=float), delta_cut, form))


@dataclass
class WeightProfile:
    """Samples of w on a uniform midpoint grid, singular tubes removed."""

    times: np.ndarray
    values: np.ndarray
    window: tuple[float, float]
    spacing: float
    delta_cut: float
    form: str = "exact"

    def __len__(self) -> int:
        return self.times.size

    def to_rows(self) -> list[dict]:
        return [{"t": float(t), "w": float(v)} for t, v in zip(self.times, self.values)]


def excluded_times(spec: PotentialSpec, window: tuple[float, float], t: np.ndarray) -> np.ndarray:
    """Mask of samples inside a tube around 0 or around a singular time."""
    periods = [math.pi / w for w in spec.omega]
    mask = np.abs(t) < TUBE_FRACTION * min(periods)
    for d, w in zip(spec.delta, spec.omega):
        if d != 1:
            continue
        period = math.pi / w
        k = np.round(t / period)
        mask |= (k != 0) & (np.abs(t - k * period) < TUBE_FRACTION * period)
    return mask


def weight_profile(spec: PotentialSpec, window: tuple[float, float], samples: int = 100_000,
                   delta_cut: float | None = None, form: str = "exact") -> WeightProfile:
    """Sample w at the midpoints of ``samples`` equal cells of ``window``."""
    a, b = map(float, window)
    if not b > a:
        raise DomainError("window must have positive length")
    if samples < 1:
        raise DomainError("samples must be positive")
    dt = (b - a) / samples
    t = a + (np.arange(samples) + 0.5) * dt
    t = t[~excluded_times(spec, (a, b), t) & (t != 0)]
    dc = default_delta_cut(spec) if delta_cut is None else float(delta_cut)
    return WeightProfile(t, weight_values(spec, t, dc, form), (a, b), dt, dc, form)


def profile_from_function(func, window: tuple[float, float], samples: int = 100_000,
                          zero_tube: float = TUBE_FRACTION) -> WeightProfile:
    """Profile of an arbitrary positive function on midpoints, minus |t| < ``zero_tube``."""
    a, b = map(float, window)
    if not b > a:
        raise DomainError("window must have positive length")
    dt = (b - a) / samples
    t = a + (np.arange(samples) + 0.5) * dt
    t = t[np.abs(t) >= zero_tube]
    vals = np.asarray(func(t), dtype=float)
    keep = vals > 0
    return WeightProfile(t[keep], vals[keep], (a, b), dt, 0.0, "custom")


def weak_l1_norm(profile: WeightProfile) -> float:
    """max_k v_(k) * k * dt with v_(1) >= v_(2) >= ... the sorted samples."""
    if len(profile) < 100:
        raise DomainError("weak_l1_norm needs at least 100 samples")
    v = np.sort(profile.values)[::-1]
    k = np.arange(1, v.size + 1)
    return float(np.max(v * k * profile.spacing))


def exponent_triple(n: int, sigma: float) -> tuple[float, float, float]:
    """(r, q, k) = (2 sigma + 2, (4 sigma + 4)/(n sigma), 2 sigma (2 sigma + 2)/(2 - (n - 2) sigma))."""
    if n < 1 or sigma <= 0:
        raise DomainError("need n >= 1 and sigma > 0")
    if n >= 3 and sigma >= 2.0 / (n - 2):
        raise DomainError(f"sigma must be < 2/(n-2) for n = {n}")
    r = 2 * sigma + 2
    q = (4 * sigma + 4) / (n * sigma)
    k = 2 * sigma * (2 * sigma + 2) / (2 - (n - 2) * sigma)
    return r, q, k


def is_sharp_admissible(q: float, r: float, gamma: float) -> bool:
    """q, r >= 2, (q, r, gamma) != (2, inf, 1) and 1/q + gamma/r = gamma/2."""
    if gamma <= 0:
        raise DomainError("gamma must be positive")
    if q < 2 or r < 2:
        return False
    if q == 2 and math.isinf(r) and gamma == 1:
        return False
    inv_q = 0.0 if math.isinf(q) else 1.0 / q
    inv_r = 0.0 if math.isinf(r) else 1.0 / r
    return abs(inv_q + gamma * inv_r - gamma / 2) <= 1e-12


@dataclass
class EffectiveDimensionReport:
    n: int
    d: float
    weak_l1: float
    tail_l1: float
    tail_power: float | None
    finite: bool
    tail_integrable: bool | None

    def to_dict(self) -> dict:
        return self.__dict__.copy()


def effective_dimension_check(n: int, d: float, profile: WeightProfile) -> EffectiveDimensionReport:
    """Quasi-norm of w_d = w^(n/d) on the profile window, plus the L1 mass beyond |t| = 1.

    ``tail_power`` is the log-log slope of w_d over |t| > 1 (None without
    enough tail samples); the tail is integrable when it is below -1.
    """
    if d < n:
        raise DomainError("d must be >= n")
    wd = WeightProfile(profile.times, profile.values ** (n / d), profile.window, profile.spacing,
                       profile.delta_cut, profile.form)
    quasi = weak_l1_norm(wd)
    tail = np.abs(wd.times) > 1
    tail_l1 = float(np.sum(wd.values[tail]) * wd.spacing)
    power = None
    integrable = None
    if np.count_nonzero(tail) >= 8:
        slope = np.polyfit(np.log(np.abs(wd.times[tail])), np.log(wd.values[tail]), 1)[0]
        power = float(slope)
        integrable = power < -1
    finite = bool(math.isfinite(quasi) and math.isfinite(tail_l1))
    return EffectiveDimensionReport(n, float(d), quasi, tail_l1, power, finite, integrable)
