import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mehler_nls import (
    DomainError,
    Grid,
    WaveFunction,
    gaussian,
    grad_norm,
    hermite,
    load_snapshot,
    lp_norm,
    moment_norm,
    save_snapshot,
    sigma_norm,
)
from mehler_nls.grid import evaluate_axis, resample, spectral_l2

G1 = Grid((256,), (12.0,))


def ground(grid=G1):
    x = grid.axis(0)
    return WaveFunction(grid, np.pi**-0.25 * np.exp(-x * x / 2).astype(complex))


def test_constant_field_norms():
    g = Grid((16, 8), (2.0, 3.0))
    psi = WaveFunction(g, np.full(g.shape, 1.5 + 0j))
    assert lp_norm(psi, 2) == pytest.approx(1.5 * math.sqrt(4 * 6))
    assert lp_norm(psi, math.inf) == pytest.approx(1.5)
    assert grad_norm(psi) == pytest.approx(0.0, abs=1e-12)


def test_gaussian_examples():
    psi = ground()
    assert lp_norm(psi, 2) == pytest.approx(1.0, abs=1e-10)
    assert lp_norm(psi, math.inf) == pytest.approx(np.pi**-0.25, abs=1e-12)
    assert grad_norm(psi) == pytest.approx(2**-0.5, abs=1e-8)
    assert moment_norm(psi) == pytest.approx(2**-0.5, abs=1e-8)
    assert sigma_norm(psi) == pytest.approx(1 + math.sqrt(2), abs=1e-8)
    assert sigma_norm(psi * 2.0) == pytest.approx(2 * sigma_norm(psi))
    assert sigma_norm(psi * 0.0) == 0.0


def test_plane_wave_gradient():
    g = Grid((128,), (5.0,))
    k = 2 * math.pi * 7 / 10.0
    psi = WaveFunction(g, np.exp(1j * k * g.axis(0)))
    assert grad_norm(psi) == pytest.approx(k * lp_norm(psi, 2), rel=1e-8)


def test_moment_norm_at_origin_only():
    g = Grid((16,), (1.0,))
    arr = np.zeros(16, complex)
    arr[8] = 1.0
    assert g.axis(0)[8] == 0.0
    assert moment_norm(WaveFunction(g, arr)) == 0.0


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=25)
def test_parseval(seed):
    rng = np.random.default_rng(seed)
    g = Grid((16, 32), (1.0, 2.5))
    psi = WaveFunction(g, rng.normal(size=g.shape) + 1j * rng.normal(size=g.shape))
    assert spectral_l2(psi) == pytest.approx(lp_norm(psi, 2), rel=1e-12)


@given(st.floats(1.0, 8.0))
@settings(max_examples=20)
def test_lp_interpolation_inequality(p):
    # log-convexity of p -> ||f||_p on a fixed grid
    psi = gaussian(Grid((64,), (6.0,)), width=0.7, momentum=1.0)
    a, b = lp_norm(psi, 2.0), lp_norm(psi, math.inf)
    if p >= 2:
        theta = 2.0 / p
        assert lp_norm(psi, p) <= a**theta * b ** (1 - theta) * (1 + 1e-12)


def test_hermite_orthonormal():
    g = Grid((128,), (10.0,))
    fs = [hermite(g, k).amplitude for k in range(6)]
    gram = np.array([[np.vdot(a, b) * g.cell_volume for b in fs] for a in fs])
    assert np.allclose(gram, np.eye(6), atol=1e-12)


def test_resample_and_evaluate_reproduce_smooth_field():
    psi = gaussian(Grid((64,), (8.0,)), center=0.5, width=1.0, momentum=1.5)
    fine = resample(psi, [128])
    exact = gaussian(fine.grid, center=0.5, width=1.0, momentum=1.5)
    assert np.abs(fine.amplitude - exact.amplitude).max() < 1e-12
    pts = np.array([-0.33, 0.1, 2.7, 100.0])
    vals = evaluate_axis(psi.grid, psi.amplitude, 0, pts)
    ref = (np.pi) ** -0.25 * np.exp(-((pts - 0.5) ** 2) / 2 + 1.5j * pts)
    assert np.abs(vals[:3] - ref[:3]).max() < 1e-12
    assert vals[3] == 0


def test_snapshot_round_trip(tmp_path):
    rng = np.random.default_rng(0)
    g = Grid((8, 10), (1.0, 2.0))
    psi = WaveFunction(g, rng.normal(size=g.shape) + 1j * rng.normal(size=g.shape))
    path, side = save_snapshot(tmp_path / "s.bin", psi, {"t": 1.5})
    back = load_snapshot(path)
    assert back.grid == g
    assert np.array_equal(back.amplitude, psi.amplitude)
    assert '"t": 1.5' in side.read_text()


def test_snapshot_rejects_garbage(tmp_path):
    p = tmp_path / "bad.bin"
    p.write_bytes(b"notasnapshot")
    with pytest.raises(DomainError):
        load_snapshot(p)


@pytest.mark.parametrize("points, extent", [((7,), (1.0,)), ((6,), (1.0,)), ((8,), (0.0,)), ((8, 8), (1.0,))])
def test_grid_validation(points, extent):
    with pytest.raises(DomainError):
        Grid(points, extent)
