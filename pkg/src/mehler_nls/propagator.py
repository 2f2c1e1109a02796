"""Exact linear group U_V(t) = exp(-i t H_V) for diagonal quadratic potentials.

Per direction the Mehler kernel is

    K(t; x, y) = A(t) exp(i [ (x^2 + y^2) h/2 - x y ] / g),

with (g, h) from :func:`classical_pair` and A(t) = (2 pi i g)^(-1/2).
Two exact evaluations of the same kernel are implemented:

* the Fourier form: chirp(y) -> scaled DFT at x/g -> chirp(x) -> A.
  The scaled DFT is evaluated point-wise on the output nodes (Bluestein),
  so nothing wraps around the periodic box. Good when |g| is not small.
* the convolution form: writing S = (x-y)^2/(2g) - a (x^2+y^2)/2 with
  a = (1-h)/g gives U = chirp(-a) U_0(g) chirp(-a), where U_0 is the free
  group, diagonal in Fourier space. Exactly unitary on the grid; good when
  |a| is moderate, in particular for short steps.

Branch of A: A = (2 pi |g|)^(-1/2) exp(-i sgn(t) (pi/4 + m pi/2)), m being
the number of zeros of g crossed between 0 and t. This continues the
principal branch at t -> 0+ continuously through the singular times.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.fft as sfft

from .errors import NonzeroLinearTermError, NyquistViolation, SingularTimeError
from .grid import Grid, WaveFunction
from .scaled_dft import scaled_dft
from .trajectories import PotentialSpec, TrajectoryPair, classical_pair, maslov_count

DEFAULT_FLOOR = 1e-3
_SUPPORT_TOL = 1e-12
_MAX_SPLIT_DEPTH = 24


@dataclass(frozen=True)
class MehlerStepPlan:
    """Per-direction ingredients of the kernel at one step time."""

    delta: int
    omega: float
    t: float
    pair: TrajectoryPair
    chirp: float  # h / (2 g)
    scale: float  # 1 / g
    amplitude: complex


def mehler_plan(delta: int, omega: float, t: float, floor: float = DEFAULT_FLOOR) -> MehlerStepPlan:
    """Kernel data for one direction; refuses |g| < floor / omega."""
    g, h = classical_pair(delta, omega, t)
    if abs(g) < floor / omega:
        raise SingularTimeError(
            f"|g(t)| = {abs(g):.3e} below floor {floor / omega:.3e} (delta={delta}, omega={omega}, t={t})"
        )
    m = maslov_count(delta, omega, t)
    phase = -math.copysign(1.0, t) * (math.pi / 4 + m * math.pi / 2)
    amp = (2 * math.pi * abs(g)) ** -0.5 * complex(math.cos(phase), math.sin(phase))
    return MehlerStepPlan(delta, omega, t, TrajectoryPair(g, h), h / (2 * g), 1.0 / g, amp)


def lens_coefficient(delta: int, omega: float, t: float) -> float:
    """a = (1 - h)/g in cancellation-free form."""
    if delta == 1:
        return omega * math.tan(omega * t / 2)
    if delta == -1:
        return -omega * math.tanh(omega * t / 2)
    return 0.0


def _support_radius(grid: Grid, arr: np.ndarray, j: int) -> float:
    """max |y_j| over nodes where the field is non-negligible."""
    mod = np.abs(arr)
    other = tuple(k for k in range(grid.n) if k != j)
    marginal = mod.max(axis=other) if other else mod
    peak = marginal.max()
    if peak == 0:
        return 0.0
    y = grid.axis(j)
    return float(np.abs(y[marginal > _SUPPORT_TOL * peak]).max())


def fourier_phase_increment(grid: Grid, j: int, plan: MehlerStepPlan, support: float) -> float:
    """Largest phase change per cell of the kernel integrand along direction j."""
    L, dx = grid.extent[j], grid.spacing[j]
    return (abs(plan.pair.h) * support + L) * dx * abs(plan.scale)


def lens_phase_increment(grid: Grid, j: int, a: float) -> float:
    return abs(a) * grid.extent[j] * grid.spacing[j]


def _line(grid: Grid, values: np.ndarray, j: int) -> np.ndarray:
    shape = [1] * grid.n
    shape[j] = values.size
    return values.reshape(shape)


def _fourier_axis(arr: np.ndarray, grid: Grid, j: int, plan: MehlerStepPlan) -> np.ndarray:
    x = grid.axis(j)
    x0, dx = x[0], grid.spacing[j]
    s = plan.scale
    idx = np.arange(x.size)
    pre = np.exp(1j * (plan.chirp * x * x - x0 * dx * idx * s))
    post = dx * np.exp(1j * (plan.chirp * x * x - x0 * x0 * s - x0 * dx * idx * s)) * plan.amplitude
    out = scaled_dft(arr * _line(grid, pre, j), dx * dx * s, axis=j)
    return out * _line(grid, post, j)


def _lens_axis(arr: np.ndarray, grid: Grid, j: int, a: float, g: float) -> np.ndarray:
    x = grid.axis(j)
    chirp = _line(grid, np.exp(-0.5j * a * x * x), j)
    kin = _line(grid, np.exp(-0.5j * g * grid.frequencies(j) ** 2), j)
    out = sfft.fft(arr * chirp, axis=j)
    out *= kin
    return sfft.ifft(out, axis=j) * chirp


def free_propagate_axis(arr: np.ndarray, grid: Grid, j: int, tau: float) -> np.ndarray:
    """exp(i tau d_j^2 / 2) along one axis; exact on the periodic grid."""
    if tau == 0:
        return arr.copy()
    return _lens_axis(arr, grid, j, 0.0, tau)


def _lens_ok(grid: Grid, j: int, delta: int, omega: float, tau: float) -> bool:
    if delta == 1 and abs(omega * tau) >= math.pi * (1 - 1e-9):
        return False
    return lens_phase_increment(grid, j, lens_coefficient(delta, omega, tau)) < math.pi


def _fourier_plan_ok(grid, arr, j, delta, omega, tau, floor):
    try:
        plan = mehler_plan(delta, omega, tau, floor)
    except SingularTimeError:
        return None
    if fourier_phase_increment(grid, j, plan, _support_radius(grid, arr, j)) >= math.pi:
        return None
    return plan


def propagate_axis(arr, grid: Grid, j: int, delta: int, omega: float, tau: float,
                   floor: float = DEFAULT_FLOOR, _depth: int = 0) -> np.ndarray:
    """Exact one-direction propagator, composing short pieces when needed."""
    if tau == 0:
        return arr.copy()
    if _lens_ok(grid, j, delta, omega, tau):
        return _lens_axis(arr, grid, j, lens_coefficient(delta, omega, tau), classical_pair(delta, omega, tau).g)
    plan = _fourier_plan_ok(grid, arr, j, delta, omega, tau, floor)
    if plan is not None:
        return _fourier_axis(arr, grid, j, plan)
    if _depth >= _MAX_SPLIT_DEPTH:
        raise NyquistViolation(f"no admissible route for direction {j} over duration {tau}")
    half = propagate_axis(arr, grid, j, delta, omega, tau / 2, floor, _depth + 1)
    return propagate_axis(half, grid, j, delta, omega, tau / 2, floor, _depth + 1)


def mehler_apply(psi: WaveFunction, spec: PotentialSpec, t: float, floor: float = DEFAULT_FLOOR,
                 check_nyquist: bool = True) -> WaveFunction:
    """U_V(t) psi through the Fourier form of the Mehler kernel.

    Raises
    ------
    NonzeroLinearTermError
        if the potential carries linear terms.
    SingularTimeError
        if some |g_j(t)| is below ``floor / omega_j``.
    NyquistViolation
        if the kernel phase changes by pi or more per cell on the support.
    """
    if spec.has_linear_terms:
        raise NonzeroLinearTermError("linear terms b_j != 0 are handled by splitstep_linear")
    if t == 0:
        return psi.copy()
    grid = psi.grid
    plans = [mehler_plan(d, w, t, floor) for d, w in zip(spec.delta, spec.omega)]
    if check_nyquist:
        for j, plan in enumerate(plans):
            inc = fourier_phase_increment(grid, j, plan, _support_radius(grid, psi.amplitude, j))
            if inc >= math.pi:
                raise NyquistViolation(
                    f"direction {j}: kernel phase increment {inc:.3f} rad per cell at t={t}"
                )
    arr = psi.amplitude
    for j, plan in enumerate(plans):
        arr = _fourier_axis(arr, grid, j, plan)
    return psi.replace(arr)


def splitstep_linear(psi: WaveFunction, spec: PotentialSpec, t: float, substeps: int) -> WaveFunction:
    """Strang splitting: half potential phase, exact kinetic step, half potential phase."""
    if substeps < 1:
        raise ValueError("substeps must be >= 1")
    grid = psi.grid
    dt = t / substeps
    V = spec.potential(grid.coordinates())
    xi2 = sum(grid.wavenumber(j) ** 2 for j in range(grid.n))
    kin = np.exp(-0.5j * dt * xi2)
    if np.ndim(V) == 0 or not np.any(V):
        out = sfft.ifftn(sfft.fftn(psi.amplitude) * np.exp(-0.5j * t * xi2))
        return psi.replace(out)
    half = np.exp(-0.5j * dt * V)
    full = half * half
    arr = psi.amplitude * half
    for k in range(substeps):
        arr = sfft.ifftn(sfft.fftn(arr) * kin)
        arr *= full if k < substeps - 1 else half
    return psi.replace(arr)


def _linear_term_axis(arr, grid, j, b, tau):
    """Direction with V = b x (free otherwise): Strang split in steps of <= 1e-2."""
    steps = max(1, math.ceil(abs(tau) / 1e-2))
    dt = tau / steps
    x = grid.axis(j)
    half = _line(grid, np.exp(-0.5j * dt * b * x), j)
    kin = _line(grid, np.exp(-0.5j * dt * grid.frequencies(j) ** 2), j)
    for _ in range(steps):
        arr = sfft.ifft(sfft.fft(arr * half, axis=j) * kin, axis=j) * half
    return arr


def propagate_directions(psi: WaveFunction, spec: PotentialSpec, durations,
                         floor: float = DEFAULT_FLOOR) -> WaveFunction:
    """Apply prod_j U_j(durations[j]); the factors commute.

    A direction with ``None`` duration is left untouched. Short durations use
    the convolution form, fused into one n-D FFT pair when every active
    direction allows it; longer ones the Fourier form; anything else is
    split in halves until every piece is admissible, which also carries the
    kernel across singular times with the right phase. Directions with
    b_j != 0 are advanced by Strang splitting.
    """
    grid = psi.grid
    arr = psi.amplitude
    active = [j for j, tau in enumerate(durations) if tau is not None and tau != 0]
    if not active:
        return psi.copy()
    if all(spec.b[j] == 0 and _lens_ok(grid, j, spec.delta[j], spec.omega[j], durations[j]) for j in active):
        chirp = 1.0
        kin = 1.0
        for j in active:
            d, w, tau = spec.delta[j], spec.omega[j], durations[j]
            x = grid.coordinate(j)
            chirp = chirp * np.exp(-0.5j * lens_coefficient(d, w, tau) * x * x)
            kin = kin * np.exp(-0.5j * classical_pair(d, w, tau).g * grid.wavenumber(j) ** 2)
        axes = tuple(active)
        out = sfft.ifftn(sfft.fftn(arr * chirp, axes=axes) * kin, axes=axes) * chirp
        return psi.replace(out)
    for j in active:
        if spec.b[j] != 0:
            arr = _linear_term_axis(arr, grid, j, spec.b[j], durations[j])
        else:
            arr = propagate_axis(arr, grid, j, spec.delta[j], spec.omega[j], durations[j], floor)
    return psi.replace(arr)


def propagate_linear(psi: WaveFunction, spec: PotentialSpec, t_from: float, t_to: float,
                     floor: float = DEFAULT_FLOOR) -> WaveFunction:
    """U_V(t_to - t_from) psi through an admissible exact route per direction."""
    tau = t_to - t_from
    return propagate_directions(psi, spec, [tau] * spec.n, floor)
