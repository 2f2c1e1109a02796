"""Co-moving lens frame for repulsive directions.

For delta_j = -1 the linear group factors exactly as

    U_j(t) = C(c) D(s) U_0(tau),    s = cosh(w t), c = w tanh(w t), tau = tanh(w t)/w,

with D(s) v(x) = s^(-1/2) v(x/s) and C(c) the multiplication by exp(i c x^2/2).
Writing u = C D v direction by direction, the frame field v obeys a free
equation in the time tau_j for each repulsive direction plus the
nonlinearity with coefficient kappa(t) = prod_j s_j(t)^(-sigma). Because
tau_j stays below 1/w_j, v never leaves a fixed box while u spreads like
exp(w t). No regridding is involved: every physical observable follows
from v through closed-form identities, and the map back to physical
space is exact up to trigonometric interpolation.

Directions that are not repulsive (or when the physical frame is
requested) are carried as they are, with the exact group U_j.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.fft as sfft

from .errors import ConfigError
from .grid import Grid, WaveFunction, evaluate_axis, inner, l2_sq, lp_norm
from .propagator import DEFAULT_FLOOR, propagate_directions
from .trajectories import PotentialSpec, classical_pair

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(6)


@dataclass(frozen=True)
class FrameState:
    """Frame field ``field`` at physical time ``t``."""

    t: float
    field: WaveFunction


class LensFrame:
    """Exact change of unknown u = prod_j C_j D_j v over the comoving directions.

    Parameters
    ----------
    spec : PotentialSpec
    comoving : sequence of bool
        Per direction; only allowed where delta_j = -1.
    """

    def __init__(self, spec: PotentialSpec, comoving: Sequence[bool]):
        comoving = tuple(bool(c) for c in comoving)
        if len(comoving) != spec.n:
            raise ConfigError("comoving flags must match the dimension")
        if any(c and d != -1 for c, d in zip(comoving, spec.delta)):
            raise ConfigError("only repulsive directions can be co-moving")
        self.spec = spec
        self.comoving = comoving

    @classmethod
    def from_mode(cls, spec: PotentialSpec, mode: str = "auto") -> "LensFrame":
        """``"auto"`` moves with every repulsive direction, ``"physical"`` with none."""
        if mode == "auto":
            return cls(spec, [d == -1 for d in spec.delta])
        if mode == "physical":
            return cls(spec, [False] * spec.n)
        raise ConfigError(f"unknown frame mode {mode!r}")

    @property
    def trivial(self) -> bool:
        return not any(self.comoving)

    def parameters(self, j: int, t: float) -> tuple[float, float, float]:
        """(s, c, tau) of direction j at time t; (1, 0, t) when not co-moving."""
        if not self.comoving[j]:
            return 1.0, 0.0, t
        w = self.spec.omega[j]
        return math.cosh(w * t), w * math.tanh(w * t), math.tanh(w * t) / w

    def identity_at(self, t: float) -> bool:
        return self.trivial or t == 0

    # -- time stepping ------------------------------------------------------

    def nonlinear_weight(self, sigma: float, t) -> np.ndarray | float:
        """kappa(t) = prod over co-moving directions of cosh(w_j t)^(-sigma)."""
        out = np.ones_like(np.asarray(t, dtype=float))
        for j, c in enumerate(self.comoving):
            if c:
                out = out * np.cosh(self.spec.omega[j] * np.asarray(t, dtype=float)) ** (-sigma)
        return out

    def weight_integral(self, sigma: float, t0: float, t1: float) -> float:
        """Integral of kappa over [t0, t1] (Gauss-Legendre, exact when kappa = 1)."""
        if self.trivial:
            return t1 - t0
        mid, half = 0.5 * (t0 + t1), 0.5 * (t1 - t0)
        return float(half * np.dot(_GL_WEIGHTS, self.nonlinear_weight(sigma, mid + half * _GL_NODES)))

    def durations(self, t0: float, t1: float) -> list[float]:
        """Per-direction duration of the linear step between physical times t0 and t1."""
        return [self.parameters(j, t1)[2] - self.parameters(j, t0)[2] for j in range(self.spec.n)]

    def _free_spec(self) -> PotentialSpec:
        # co-moving directions become free
        delta = tuple(0 if c else d for c, d in zip(self.comoving, self.spec.delta))
        return PotentialSpec(self.spec.omega, delta, self.spec.b)

    def linear_step(self, v: WaveFunction, t0: float, t1: float, floor: float = DEFAULT_FLOOR) -> WaveFunction:
        return propagate_directions(v, self._free_spec(), self.durations(t0, t1), floor)

    # -- maps to and from the physical picture ------------------------------

    def push(self, phi: WaveFunction, t: float, floor: float = DEFAULT_FLOOR) -> WaveFunction:
        """Frame field at time t of the linear solution with data ``phi`` at t = 0."""
        return self.linear_step(phi, 0.0, t, floor)

    def pullback(self, v: WaveFunction, t: float, floor: float = DEFAULT_FLOOR) -> WaveFunction:
        """U_V(-t) u(t) from the frame field, on the frame grid."""
        return self.linear_step(v, t, 0.0, floor)

    def to_physical(self, v: WaveFunction, t: float, grid: Grid | None = None) -> WaveFunction:
        """u(t) sampled on ``grid`` (default: the frame grid)."""
        grid = v.grid if grid is None else grid
        if self.identity_at(t) and grid == v.grid:
            return v.copy()
        arr = v.amplitude
        for j in range(self.spec.n):
            s, c, _ = self.parameters(j, t)
            x = grid.axis(j)
            if s == 1.0 and c == 0.0 and grid.points[j] == v.grid.points[j] and grid.extent[j] == v.grid.extent[j]:
                continue
            arr = evaluate_axis(v.grid, arr, j, x / s)
            shape = [1] * self.spec.n
            shape[j] = x.size
            arr = arr * (s**-0.5 * np.exp(0.5j * c * x * x)).reshape(shape)
        return WaveFunction(grid, arr)

    def from_physical(self, u: WaveFunction, t: float, grid: Grid | None = None) -> WaveFunction:
        """Inverse of :meth:`to_physical`; samples u outside its box as zero."""
        grid = u.grid if grid is None else grid
        if self.identity_at(t) and grid == u.grid:
            return u.copy()
        arr = u.amplitude
        for j in range(self.spec.n):
            s, c, _ = self.parameters(j, t)
            y = grid.axis(j)
            if s == 1.0 and c == 0.0 and grid.points[j] == u.grid.points[j] and grid.extent[j] == u.grid.extent[j]:
                continue
            arr = evaluate_axis(u.grid, arr, j, s * y)
            shape = [1] * self.spec.n
            shape[j] = y.size
            arr = arr * (s**0.5 * np.exp(-0.5j * c * s * s * y * y)).reshape(shape)
        return WaveFunction(grid, arr)

    # -- observables --------------------------------------------------------

    def measure(self, v: WaveFunction, t: float, lam: float = 0.0, sigma: float = 1.0,
                lp_norms: Sequence[float] = ()) -> dict[str, float]:
        """Physical observables of u(t) = frame(v) without leaving the frame grid.

        Keys: mass, energy, grad_norm, moment_norm, sigma_norm,
        heis_sigma_norm, frame_grad_norm, J_j, H_j and L<p> for each p.
        """
        grid, arr = v.grid, v.amplitude
        spec = self.spec
        n = spec.n
        mass = l2_sq(grid, arr)
        grad_sq = mom_sq = frame_sq = energy = 0.0
        J, H = [], []
        for j in range(n):
            y = grid.coordinate(j)
            dv = sfft.ifft(sfft.fft(arr, axis=j) * (1j * grid.wavenumber(j)), axis=j)
            yv = y * arr
            dv_sq, yv_sq = l2_sq(grid, dv), l2_sq(grid, yv)
            frame_sq += dv_sq
            w, d, b = spec.omega[j], spec.delta[j], spec.b[j]
            if self.comoving[j]:
                s, c, tau = self.parameters(j, t)
                grad_sq += l2_sq(grid, 1j * c * s * yv + dv / s)
                mom_sq += s * s * yv_sq
                cross = inner(grid, yv, dv).imag
                energy += 0.5 * (-w * w * yv_sq + dv_sq / (s * s) + 2 * c * cross)
                J.append(math.sqrt(dv_sq))
                H.append(math.sqrt(l2_sq(grid, yv + 1j * tau * dv)))
            else:
                g, h = classical_pair(d, w, t)
                grad_sq += dv_sq
                mom_sq += yv_sq
                energy += 0.5 * dv_sq + 0.5 * d * w * w * yv_sq
                if b != 0:
                    energy += b * float(np.sum(y * np.abs(arr) ** 2)) * grid.cell_volume
                J.append(math.sqrt(l2_sq(grid, -d * w * w * g * yv + 1j * h * dv)))
                H.append(math.sqrt(l2_sq(grid, h * yv + 1j * g * dv)))
        svals = [self.parameters(j, t)[0] for j in range(n)]
        r = 2 * sigma + 2
        if lam != 0:
            kappa = math.prod(s**-sigma for s in svals)
            energy += lam / (sigma + 1) * kappa * lp_norm(v, r) ** r
        l2 = math.sqrt(mass)
        out = {
            "mass": mass,
            "energy": energy,
            "grad_norm": math.sqrt(grad_sq),
            "moment_norm": math.sqrt(mom_sq),
            "sigma_norm": l2 + math.sqrt(grad_sq) + math.sqrt(mom_sq),
            "heis_sigma_norm": l2 + math.sqrt(sum(x * x for x in J)) + math.sqrt(sum(x * x for x in H)),
            "frame_grad_norm": math.sqrt(frame_sq),
        }
        for j in range(n):
            out[f"J_{j}"] = J[j]
        for j in range(n):
            out[f"H_{j}"] = H[j]
        for p in lp_norms:
            out[lp_label(p)] = self.lp_norm(v, t, p)
        return out

    def lp_norm(self, v: WaveFunction, t: float, p: float) -> float:
        """||u(t)||_{L^p} = prod_j s_j^(1/p - 1/2) ||v||_{L^p}."""
        expo = (0.0 if math.isinf(p) else 1.0 / p) - 0.5
        factor = math.prod(self.parameters(j, t)[0] ** expo for j in range(self.spec.n))
        return factor * lp_norm(v, p)


def lp_label(p: float) -> str:
    """Record column name of an L^p norm, e.g. ``L4`` or ``Linf``."""
    if math.isinf(p):
        return "Linf"
    return f"L{p:g}"

