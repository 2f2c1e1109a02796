"""Periodic spectral grids and the wave-function container.

Discrete Fourier convention, used everywhere in the package: on direction j
the nodes are x = -L_j + k dx_j, k = 0..N_j-1, dx_j = 2 L_j / N_j, and the
wavenumbers are ``2*pi*numpy.fft.fftfreq(N_j, dx_j)``, i.e. the lattice
(pi/L_j) * {-N_j/2, ..., N_j/2 - 1} stored in FFT order. A derivative is a
multiplication by i*xi between ``fft`` and ``ifft`` along the axis.
"""

from __future__ import annotations

import hashlib
import json
import math
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np
import scipy.fft as sfft

from .errors import DomainError

_MAGIC = b"MNLSWF1\x00"


@dataclass(frozen=True)
class Grid:
    """Tensor-product periodic grid on the box prod_j [-L_j, L_j)."""

    points: tuple[int, ...]
    extent: tuple[float, ...]

    def __post_init__(self):
        points = tuple(int(p) for p in self.points)
        extent = tuple(float(e) for e in self.extent)
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "extent", extent)
        if len(points) != len(extent) or not points:
            raise DomainError("points and extent must have the same nonzero length")
        if any(p < 8 or p % 2 for p in points):
            raise DomainError(f"every N_j must be even and >= 8, got {points}")
        if any(not (e > 0 and math.isfinite(e)) for e in extent):
            raise DomainError(f"every L_j must be positive, got {extent}")

    @classmethod
    def uniform(cls, n: int, points: int, extent: float) -> "Grid":
        return cls((points,) * n, (extent,) * n)

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.points

    @property
    def spacing(self) -> tuple[float, ...]:
        return tuple(2 * L / N for N, L in zip(self.points, self.extent))

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacing))

    @property
    def volume(self) -> float:
        return float(np.prod([2 * L for L in self.extent]))

    def axis(self, j: int) -> np.ndarray:
        N, L = self.points[j], self.extent[j]
        return -L + np.arange(N) * (2 * L / N)

    def frequencies(self, j: int) -> np.ndarray:
        return 2 * np.pi * np.fft.fftfreq(self.points[j], self.spacing[j])

    def _broadcast(self, arr: np.ndarray, j: int) -> np.ndarray:
        shape = [1] * self.n
        shape[j] = arr.size
        return arr.reshape(shape)

    def coordinate(self, j: int) -> np.ndarray:
        """x_j as an array broadcastable against the full grid."""
        return self._broadcast(self.axis(j), j)

    def wavenumber(self, j: int) -> np.ndarray:
        """xi_j as an array broadcastable against the full grid (FFT order)."""
        return self._broadcast(self.frequencies(j), j)

    def coordinates(self) -> list[np.ndarray]:
        return [self.coordinate(j) for j in range(self.n)]

    def refined(self, factor: int = 2) -> "Grid":
        """Same box, ``factor`` times as many points per direction."""
        return Grid(tuple(p * factor for p in self.points), self.extent)

    def to_dict(self) -> dict:
        return {"points": list(self.points), "extent": list(self.extent)}


@dataclass
class WaveFunction:
    """Complex amplitude sampled on a :class:`Grid`."""

    grid: Grid
    amplitude: np.ndarray

    def __post_init__(self):
        self.amplitude = np.asarray(self.amplitude, dtype=complex)
        if self.amplitude.shape != self.grid.shape:
            raise DomainError(
                f"amplitude shape {self.amplitude.shape} does not match grid {self.grid.shape}"
            )

    def copy(self) -> "WaveFunction":
        return WaveFunction(self.grid, self.amplitude.copy())

    def replace(self, amplitude: np.ndarray) -> "WaveFunction":
        return WaveFunction(self.grid, amplitude)

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.amplitude)))

    def __mul__(self, c):
        return self.replace(self.amplitude * c)

    __rmul__ = __mul__

    def __add__(self, other: "WaveFunction"):
        return self.replace(self.amplitude + other.amplitude)

    def __sub__(self, other: "WaveFunction"):
        return self.replace(self.amplitude - other.amplitude)


# -- spectral calculus -------------------------------------------------------


def derivative(grid: Grid, arr: np.ndarray, j: int) -> np.ndarray:
    """Spectral d/dx_j of a sampled field."""
    spec = sfft.fft(arr, axis=j)
    spec *= 1j * grid.wavenumber(j)
    return sfft.ifft(spec, axis=j)


def l2_sq(grid: Grid, arr: np.ndarray) -> float:
    return float(np.sum(np.abs(arr) ** 2) * grid.cell_volume)


def inner(grid: Grid, a: np.ndarray, b: np.ndarray) -> complex:
    """<a, b> = integral of conj(a) b."""
    return complex(np.vdot(a, b) * grid.cell_volume)


def spectral_l2(psi: WaveFunction) -> float:
    """L2 norm evaluated in Fourier space (Parseval check)."""
    spec = sfft.fftn(psi.amplitude)
    return math.sqrt(float(np.sum(np.abs(spec) ** 2)) * psi.grid.cell_volume / spec.size)


# -- norms -------------------------------------------------------------------


def lp_norm(psi: WaveFunction, p: float = 2.0) -> float:
    """(sum |u|^p prod dx_j)^(1/p); the max modulus for p = inf."""
    if p < 1:
        raise DomainError("p must be >= 1")
    mod = np.abs(psi.amplitude)
    if math.isinf(p):
        return float(mod.max())
    if p == 2:
        return math.sqrt(float(np.sum(mod * mod)) * psi.grid.cell_volume)
    return float((np.sum(mod**p) * psi.grid.cell_volume) ** (1.0 / p))


def l1_norm(psi: WaveFunction) -> float:
    return lp_norm(psi, 1.0)


def direction_grad_norms(psi: WaveFunction) -> list[float]:
    return [math.sqrt(l2_sq(psi.grid, derivative(psi.grid, psi.amplitude, j))) for j in range(psi.grid.n)]


def grad_norm(psi: WaveFunction) -> float:
    """||grad u||_L2, spectrally."""
    return math.sqrt(sum(v * v for v in direction_grad_norms(psi)))


def moment_norm(psi: WaveFunction) -> float:
    """||x u||_L2 with |x| the Euclidean norm."""
    r2 = sum(x * x for x in psi.grid.coordinates())
    return math.sqrt(float(np.sum(r2 * np.abs(psi.amplitude) ** 2)) * psi.grid.cell_volume)


def sigma_norm(psi: WaveFunction) -> float:
    """||u||_L2 + ||grad u||_L2 + ||x u||_L2."""
    return lp_norm(psi, 2) + grad_norm(psi) + moment_norm(psi)


def boundary_mass_fraction(psi: WaveFunction, cells: int = 2) -> float:
    """Fraction of the mass sitting within ``cells`` nodes of any box face."""
    dens = np.abs(psi.amplitude) ** 2
    total = float(dens.sum())
    if total == 0:
        return 0.0
    mask = np.zeros(dens.shape, dtype=bool)
    for j in range(psi.grid.n):
        idx = [slice(None)] * psi.grid.n
        idx[j] = np.r_[0:cells, dens.shape[j] - cells : dens.shape[j]]
        mask[tuple(idx)] = True
    return float(dens[mask].sum()) / total


# -- initial data ------------------------------------------------------------


def _as_tuple(value, n: int) -> tuple:
    if np.ndim(value) == 0:
        return (value,) * n
    value = tuple(value)
    if len(value) != n:
        raise DomainError(f"expected {n} components, got {len(value)}")
    return value


def gaussian(grid: Grid, center=0.0, width=1.0, momentum=0.0, amplitude: float | None = None) -> WaveFunction:
    """prod_j exp(-(x_j-c_j)^2/(2 w_j^2) + i k_j x_j), scaled to unit mass or to peak ``amplitude``."""
    center = _as_tuple(center, grid.n)
    width = _as_tuple(width, grid.n)
    momentum = _as_tuple(momentum, grid.n)
    field = np.ones(grid.shape, dtype=complex)
    for j in range(grid.n):
        x = grid.coordinate(j)
        field = field * np.exp(-((x - center[j]) ** 2) / (2 * width[j] ** 2) + 1j * momentum[j] * x)
    if amplitude is None:
        norm = math.prod((math.pi * w * w) ** -0.25 for w in width)
    else:
        norm = float(amplitude)
    return WaveFunction(grid, norm * field)


def hermite_function(x: np.ndarray, k: int, omega: float = 1.0) -> np.ndarray:
    """Normalized k-th eigenfunction of -d^2/2 + omega^2 x^2/2."""
    xi = math.sqrt(omega) * x
    # stable three-term recurrence for the normalized functions
    prev = np.zeros_like(xi)
    cur = (omega / math.pi) ** 0.25 * np.exp(-xi * xi / 2)
    for m in range(k):
        nxt = math.sqrt(2.0 / (m + 1)) * xi * cur - math.sqrt(m / (m + 1)) * prev
        prev, cur = cur, nxt
    return cur


def hermite(grid: Grid, index, omega=1.0) -> WaveFunction:
    """Tensor product of normalized Hermite functions."""
    index = _as_tuple(index, grid.n)
    omega = _as_tuple(omega, grid.n)
    field = np.ones(grid.shape, dtype=complex)
    for j in range(grid.n):
        field = field * hermite_function(grid.coordinate(j), int(index[j]), float(omega[j]))
    return WaveFunction(grid, field)


def hermite_energy(index: Sequence[int], omega: Sequence[float]) -> float:
    return float(sum(w * (k + 0.5) for k, w in zip(index, omega)))


# -- resampling --------------------------------------------------------------


def resample(psi: WaveFunction, points: Sequence[int]) -> WaveFunction:
    """Trigonometric resampling onto the same box with new point counts."""
    new_grid = Grid(tuple(points), psi.grid.extent)
    spec = sfft.fftn(psi.amplitude)
    for j, (old, new) in enumerate(zip(psi.grid.points, new_grid.points)):
        spec = _resize_axis(spec, j, old, new)
    scale = math.prod(new / old for old, new in zip(psi.grid.points, new_grid.points))
    out = sfft.ifftn(spec) * scale
    # nodes start at -L in both grids, so no phase correction is needed
    return WaveFunction(new_grid, out)


def _resize_axis(spec: np.ndarray, axis: int, old: int, new: int) -> np.ndarray:
    spec = np.moveaxis(spec, axis, 0)
    out = np.zeros((new,) + spec.shape[1:], dtype=complex)
    m = min(old, new) // 2
    out[:m] = spec[:m]
    out[new - m :] = spec[old - m :]
    return np.moveaxis(out, 0, axis)


def evaluate_axis(grid: Grid, arr: np.ndarray, j: int, points: np.ndarray) -> np.ndarray:
    """Trigonometric interpolation of ``arr`` along axis j at arbitrary ``points``.

    Points outside the box are extended by zero, not periodically.
    """
    N, L = grid.points[j], grid.extent[j]
    coeff = sfft.fft(arr, axis=j) / N
    xi = grid.frequencies(j)
    pts = np.asarray(points, dtype=float)
    # Nyquist mode split symmetrically so that real data interpolates to real values
    basis = np.exp(1j * np.outer(pts + L, xi))
    nyq = N // 2
    basis[:, nyq] = np.cos(xi[nyq] * (pts + L))
    coeff = np.moveaxis(coeff, j, 0)
    out = np.tensordot(basis, coeff, axes=(1, 0))
    out[(pts < -L) | (pts > L)] = 0.0
    return np.moveaxis(out, 0, j)


# -- snapshot serialization ---------------------------------------------------


def save_snapshot(path, psi: WaveFunction, metadata: dict | None = None) -> tuple[Path, Path]:
    """Write ``path`` (binary) and ``path.json`` (metadata sidecar).

    Binary layout, little endian: 8-byte magic, uint32 n, n x uint64 N_j,
    n x float64 L_j, then prod N_j complex128 values in C order.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    g = psi.grid
    header = _MAGIC + struct.pack("<I", g.n) + struct.pack(f"<{g.n}Q", *g.points) + struct.pack(f"<{g.n}d", *g.extent)
    data = np.ascontiguousarray(psi.amplitude, dtype="<c16").tobytes()
    path.write_bytes(header + data)
    side = {
        "format": "mehler-nls-wavefunction",
        "version": 1,
        "dimension": g.n,
        "points": list(g.points),
        "extent": list(g.extent),
        "dtype": "complex128-le",
        "order": "C",
        "sha256": hashlib.sha256(data).hexdigest(),
    }
    if metadata:
        side["metadata"] = metadata
    side_path = path.with_name(path.name + ".json")
    side_path.write_text(json.dumps(side, indent=2, sort_keys=True))
    return path, side_path


def load_snapshot(path) -> WaveFunction:
    raw = Path(path).read_bytes()
    if raw[:8] != _MAGIC:
        raise DomainError(f"{path}: not a wave-function snapshot")
    (n,) = struct.unpack_from("<I", raw, 8)
    off = 12
    points = struct.unpack_from(f"<{n}Q", raw, off)
    off += 8 * n
    extent = struct.unpack_from(f"<{n}d", raw, off)
    off += 8 * n
    grid = Grid(tuple(points), tuple(extent))
    amp = np.frombuffer(raw, dtype="<c16", offset=off).reshape(grid.shape)
    return WaveFunction(grid, amp.astype(complex))
