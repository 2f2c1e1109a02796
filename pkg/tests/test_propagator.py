import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mehler_nls import (
    Grid,
    NonzeroLinearTermError,
    NyquistViolation,
    PotentialSpec,
    SingularTimeError,
    WaveFunction,
    gaussian,
    hermite,
    lp_norm,
    mehler_apply,
    propagate_linear,
    splitstep_linear,
)
from mehler_nls.grid import l2_sq
from oracles import gaussian_mehler

G1 = Grid((256,), (12.0,))


def l2(a: WaveFunction, b) -> float:
    arr = b.amplitude if isinstance(b, WaveFunction) else b
    return math.sqrt(l2_sq(a.grid, a.amplitude - arr))


def test_identity_at_zero():
    psi = gaussian(G1, width=0.8, momentum=0.5)
    for spec in (PotentialSpec((1.0,), (1,)), PotentialSpec((1.0,), (-1,))):
        assert l2(mehler_apply(psi, spec, 0.0), psi) == 0.0
        assert l2(propagate_linear(psi, spec, 0.7, 0.7), psi) == 0.0


def test_ground_state_phase():
    psi = hermite(G1, 0)
    out = mehler_apply(psi, PotentialSpec((1.0,), (1,)), 1.0)
    assert l2(out, psi.amplitude * np.exp(-0.5j)) < 1e-8


@pytest.mark.parametrize("k, omega, t", [(1, 1.0, 1.0), (2, 1.5, 0.9), (3, 0.8, 2.5)])
def test_excited_state_phase(k, omega, t):
    psi = hermite(G1, k, omega)
    out = mehler_apply(psi, PotentialSpec((omega,), (1,)), t)
    assert l2(out, psi.amplitude * np.exp(-1j * (k + 0.5) * omega * t)) < 1e-8


@pytest.mark.parametrize("delta, omega, t, width", [(-1, 1.0, 1.0, 1.0), (-1, 0.7, 1.6, 1.3), (0, 1.0, 1.5, 0.8),
                                                    (1, 2.0, 0.7, 0.6)])
def test_gaussian_oracle(delta, omega, t, width):
    psi = gaussian(G1, width=width)
    out = mehler_apply(psi, PotentialSpec((omega,), (delta,)), t)
    assert l2(out, gaussian_mehler(G1.axis(0), delta, omega, t, width)) < 1e-8


@pytest.mark.parametrize("t", [4.0, 7.5, -2.2, -5.0])
def test_eigenphase_beyond_singular_times(t):
    # the continuous branch through zeros of g, checked with both routes
    psi = hermite(G1, 1)
    spec = PotentialSpec((1.0,), (1,))
    want = psi.amplitude * np.exp(-1.5j * t)
    assert l2(propagate_linear(psi, spec, 0.0, t), want) < 1e-9
    assert l2(mehler_apply(psi, spec, t), want) < 1e-8


@pytest.mark.parametrize("omega", [1.0, 2.0, 0.75])
def test_harmonic_revival(omega):
    g = Grid((96, 96), (12.0, 12.0))
    rng = np.random.default_rng(2)
    field = sum(c * gaussian(g, center=(rng.uniform(-1, 1), rng.uniform(-1, 1)), width=0.7,
                             momentum=(rng.uniform(-1, 1), 0.5)).amplitude for c in rng.normal(size=3))
    psi = WaveFunction(g, field)
    spec = PotentialSpec((omega, omega), (1, 1))
    out = propagate_linear(psi, spec, 0.0, 2 * math.pi / omega)
    # U(2 pi/omega) = (-1)^n in n dimensions
    assert l2(out, psi) < 1e-7 * lp_norm(psi)


def test_half_period_is_parity_up_to_phase():
    g = Grid((128,), (8.0,))
    psi = gaussian(g, center=0.7, width=0.9, momentum=0.3)
    out = propagate_linear(psi, PotentialSpec((1.0,), (1,)), 0.0, math.pi)
    flipped = psi.amplitude.copy()
    flipped[1:] = flipped[1:][::-1]
    assert l2(out, -1j * flipped) < 1e-9


def identity_safe_spec():
    return st.sampled_from([
        PotentialSpec((1.0, 1.4), (1, 1)),
        PotentialSpec((0.8, 1.0), (1, 0)),
        PotentialSpec((1.2, 0.6), (0, 1)),
    ])


@given(identity_safe_spec(), st.floats(0.1, 2.0), st.floats(0.1, 2.0))
@settings(max_examples=15, deadline=None)
def test_group_law(spec, a, b):
    g = Grid((256, 256), (32.0, 32.0))
    psi = gaussian(g, center=(0.5, -0.3), width=(0.9, 1.1), momentum=(0.4, -0.2))
    two = propagate_linear(propagate_linear(psi, spec, 0.0, a), spec, a, a + b)
    one = propagate_linear(psi, spec, 0.0, a + b)
    assert l2(two, one) < 1e-9


@given(st.floats(0.1, 1.0), st.floats(0.1, 1.0))
@settings(max_examples=10, deadline=None)
def test_group_law_repulsive(a, b):
    g = Grid((512,), (40.0,))
    psi = gaussian(g, width=1.0)
    spec = PotentialSpec((1.0,), (-1,))
    two = propagate_linear(propagate_linear(psi, spec, 0.0, a), spec, a, a + b)
    assert l2(two, propagate_linear(psi, spec, 0.0, a + b)) < 1e-9


@pytest.mark.parametrize("delta", [(-1, 1), (1, 0), (0, 0), (1, 1)])
def test_forward_backward(delta):
    g = Grid((128, 128), (10.0, 10.0))
    psi = gaussian(g, center=(0.4, 0.0), width=0.8, momentum=(0.0, 1.0))
    spec = PotentialSpec((1.0, 1.3), delta)
    out = propagate_linear(propagate_linear(psi, spec, 0.0, 1.7), spec, 1.7, 0.0)
    assert l2(out, psi) < 1e-9


def test_many_composed_steps_conserve_mass():
    psi = gaussian(G1, center=0.5, width=0.9, momentum=0.5)
    spec = PotentialSpec((1.0,), (1,))
    m0 = lp_norm(psi) ** 2
    out = psi
    for _ in range(1000):
        out = mehler_apply(out, spec, 0.7)
    assert abs(lp_norm(out) ** 2 - m0) < 1e-8
    assert l2(out, propagate_linear(psi, spec, 0.0, 700.0)) < 1e-6


def test_splitstep_free_is_exact():
    g = Grid((128,), (20.0,))
    psi = gaussian(g, width=0.7, momentum=1.0)
    spec = PotentialSpec((1.0,), (0,))
    exact = propagate_linear(psi, spec, 0.0, 2.0)
    for substeps in (1, 7):
        assert l2(splitstep_linear(psi, spec, 2.0, substeps), exact) < 1e-10


def test_splitstep_order_two():
    psi = gaussian(G1, center=0.5, width=0.8)
    spec = PotentialSpec((1.0,), (1,))
    exact = mehler_apply(psi, spec, 1.0)
    errs = [l2(splitstep_linear(psi, spec, 1.0, s), exact) for s in (50, 100, 200)]
    for a, b in zip(errs, errs[1:]):
        assert 3.5 <= a / b <= 4.5


def test_splitstep_eigenstate():
    psi = hermite(G1, 0)
    out = splitstep_linear(psi, PotentialSpec((1.0,), (1,)), 1.0, 10_000)
    assert l2(out, psi.amplitude * np.exp(-0.5j)) < 1e-6


def test_linear_term_matches_avron_herbst():
    # free flow with V = b x: u(t, x) = exp(-i (b t x + b^2 t^3/6)) u_free(t, x + b t^2/2)
    g = Grid((512,), (30.0,))
    b, t = 0.4, 1.5
    psi = gaussian(g, width=1.0)
    out = propagate_linear(psi, PotentialSpec((1.0,), (0,), b=(b,)), 0.0, t)
    x = g.axis(0)
    ref = np.exp(-1j * (b * t * x + b * b * t**3 / 6)) * gaussian_mehler(x + b * t * t / 2, 0, 1.0, t)
    assert l2(out, ref) < 1e-4


def test_errors():
    psi = hermite(G1, 0)
    trap = PotentialSpec((1.0,), (1,))
    with pytest.raises(SingularTimeError):
        mehler_apply(psi, trap, math.pi)
    with pytest.raises(NyquistViolation):
        mehler_apply(psi, trap, 0.02)
    with pytest.raises(NonzeroLinearTermError):
        mehler_apply(psi, PotentialSpec((1.0,), (0,), b=(1.0,)), 1.0)
