"""Classical trajectories of quadratic potentials.

The potential is

    V(x) = sum_j delta_j * omega_j**2 * x_j**2 / 2 + b_j * x_j,

with delta_j in {-1, 0, +1}. Each direction carries the pair (g_j, h_j) of
fundamental solutions of  y'' + delta_j omega_j**2 y = 0  with
g(0) = 0, g'(0) = 1 and h(0) = 1, h'(0) = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class PotentialSpec:
    """Diagonal quadratic potential in normal form.

    Parameters
    ----------
    omega : sequence of float
        Positive frequency per direction. Ignored by the flow when delta is 0.
    delta : sequence of int
        Sign per direction: -1 repulsive, 0 free, +1 confining.
    b : sequence of float, optional
        Linear coefficient per direction. Only allowed where delta is 0.
    """

    omega: tuple[float, ...]
    delta: tuple[int, ...]
    b: tuple[float, ...] | None = None

    def __post_init__(self):
        omega = tuple(float(w) for w in self.omega)
        delta = tuple(int(d) for d in self.delta)
        b = tuple(0.0 for _ in delta) if self.b is None else tuple(float(v) for v in self.b)
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "b", b)
        if not (len(omega) == len(delta) == len(b)) or len(omega) == 0:
            raise DomainError("omega, delta and b must have the same nonzero length")
        if not all(math.isfinite(w) and w > 0 for w in omega):
            raise DomainError(f"all omega_j must be positive and finite, got {omega}")
        if not all(d in (-1, 0, 1) for d in delta):
            raise DomainError(f"delta_j must be -1, 0 or +1, got {delta}")
        if any(d != 0 and bj != 0 for d, bj in zip(delta, b)):
            raise DomainError("delta_j * b_j must vanish for every direction")

    @property
    def n(self) -> int:
        return len(self.omega)

    @property
    def has_linear_terms(self) -> bool:
        return any(bj != 0 for bj in self.b)

    @classmethod
    def horseshoe(cls, omega1: float, omega2: float) -> "PotentialSpec":
        """V = (-omega1**2 x1**2 + omega2**2 x2**2) / 2."""
        return cls(omega=(omega1, omega2), delta=(-1, 1))

    def potential(self, coords: Sequence[np.ndarray]) -> np.ndarray:
        """Evaluate V on broadcastable coordinate arrays."""
        total = 0.0
        for d, w, bj, x in zip(self.delta, self.omega, self.b, coords):
            total = total + 0.5 * d * w * w * x * x + bj * x
        return total

    def omega_plus(self) -> float:
        """Largest confining frequency, 0 when there is none."""
        return max((w for d, w in zip(self.delta, self.omega) if d == 1), default=0.0)

    def omega_minus(self) -> float:
        """Largest repulsive frequency, 0 when there is none."""
        return max((w for d, w in zip(self.delta, self.omega) if d == -1), default=0.0)


class TrajectoryPair(NamedTuple):
    g: float | np.ndarray
    h: float | np.ndarray


def classical_pair(delta: int, omega: float, t) -> TrajectoryPair:
    """Return (g, h) for one direction. ``t`` may be a scalar or an array."""
    if omega <= 0:
        raise DomainError("omega must be positive")
    t_arr = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(t_arr)):
        raise DomainError("t must be finite")
    if delta == -1:
        g, h = np.sinh(omega * t_arr) / omega, np.cosh(omega * t_arr)
    elif delta == 0:
        g, h = t_arr.copy(), np.ones_like(t_arr)
    elif delta == 1:
        g, h = np.sin(omega * t_arr) / omega, np.cos(omega * t_arr)
    else:
        raise DomainError(f"delta must be -1, 0 or +1, got {delta}")
    if t_arr.ndim == 0:
        return TrajectoryPair(float(g), float(h))
    return TrajectoryPair(g, h)


def flow_matrix(delta: int, omega: float, t: float) -> np.ndarray:
    """Classical flow (x, p) -> (x(t), p(t)) as a 2x2 matrix."""
    g, h = classical_pair(delta, omega, t)
    return np.array([[h, g], [-delta * omega**2 * g, h]])


def heisenberg_matrix(delta: int, omega: float, t: float) -> np.ndarray:
    """Matrix M with (J_j, H_j)^T = M (x_j, i d_j)^T. Its determinant is -1."""
    g, h = classical_pair(delta, omega, t)
    return np.array([[-delta * omega**2 * g, h], [h, g]])


def singular_times(spec: PotentialSpec, t_max: float) -> list[tuple[float, int]]:
    """Zeros k*pi/omega_j of g_j in (0, t_max] for confining directions, ascending."""
    if not math.isfinite(t_max):
        raise DomainError("t_max must be finite")
    out = []
    for j, (d, w) in enumerate(zip(spec.delta, spec.omega)):
        if d != 1:
            continue
        period = math.pi / w
        k = 1
        while k * period <= t_max * (1 + 1e-15):
            out.append((k * period, j))
            k += 1
    out.sort()
    return out


def maslov_count(delta: int, omega: float, t: float) -> int:
    """Number of zeros of g crossed strictly between 0 and t (for |t| at a zero, the zero itself is excluded)."""
    if delta != 1:
        return 0
    return int(math.floor(omega * abs(t) / math.pi))


def domin_threshold(n: int, sigma: float, omega2: float, Lambda: float = 1.0) -> float:
    """Repulsion level above which global existence is guaranteed.

    Returns Lambda*(1+omega2) + 2 sigma**2/(2-(n-2) sigma) * (1+omega2) ln(1+omega2).
    ``Lambda`` is a non-quantified existence constant; callers choose it.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    if sigma <= 0:
        raise DomainError("sigma must be positive")
    if n >= 3 and sigma >= 2.0 / (n - 2):
        raise DomainError(f"sigma must be < 2/(n-2) = {2.0 / (n - 2)} for n = {n}")
    if omega2 < 0:
        raise DomainError("omega2 must be nonnegative")
    if Lambda < 0:
        raise DomainError("Lambda must be nonnegative")
    coef = 2.0 * sigma**2 / (2.0 - (n - 2) * sigma)
    return Lambda * (1.0 + omega2) + coef * (1.0 + omega2) * math.log1p(omega2)
