import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mehler_nls import (
    DomainError,
    PotentialSpec,
    SingularTimeError,
    ZeroTimeError,
    effective_dimension_check,
    exponent_triple,
    is_sharp_admissible,
    weak_l1_norm,
    weight_profile,
    weight_value,
)
from mehler_nls.weights import WeightProfile, default_delta_cut, profile_from_function


def test_free_weight_is_c_over_t():
    spec = PotentialSpec((1.0, 1.0), (0, 0))
    # exact kernel amplitude: (2 pi |t|)^(-n/2) = w^(n/2) with w = 1/(2 pi |t|)
    for t in (0.01, 0.2, 1.0, 7.0, -3.0):
        assert weight_value(spec, t) == pytest.approx(1 / (2 * math.pi * abs(t)), rel=1e-12)


def test_exact_form_is_kernel_amplitude():
    spec = PotentialSpec((1.0, 1.0), (-1, 1))
    t = math.pi / 4
    amp = ((2 * math.pi * math.sinh(t)) * (2 * math.pi * math.sin(t))) ** -0.5
    assert weight_value(spec, t) ** (spec.n / 2) == pytest.approx(amp, rel=1e-12)


def test_bound_form_example():
    spec = PotentialSpec((1.0, 1.0), (-1, 1))
    t = math.pi / 4
    dc = default_delta_cut(spec)
    # the constant is fixed by continuity with the exact value at delta_cut
    bound = lambda s: (math.exp(-s) / math.sin(s)) ** 0.5
    const = weight_value(spec, dc) / bound(dc)
    assert weight_value(spec, t, form="bound") == pytest.approx(const * bound(t), rel=1e-12)


def test_small_times_branch():
    spec = PotentialSpec((2.0, 1.0), (-1, 1))
    dc = default_delta_cut(spec)
    assert dc == pytest.approx(0.125)
    c = dc * weight_value(spec, dc)
    for t in (1e-3, 0.05, -0.1):
        assert weight_value(spec, t) == pytest.approx(c / abs(t), rel=1e-12)


def test_weight_errors():
    spec = PotentialSpec((1.0, 1.0), (-1, 1))
    with pytest.raises(ZeroTimeError):
        weight_value(spec, 0.0)
    with pytest.raises(SingularTimeError):
        weight_value(spec, math.pi)
    with pytest.raises(DomainError):
        weight_value(spec, 1.0, form="other")


def test_weak_l1_of_inverse_t():
    prof = profile_from_function(lambda t: 1 / np.abs(t), (-1.0, 1.0), 100_000)
    assert weak_l1_norm(prof) == pytest.approx(2.0, rel=0.02)


def test_weak_l1_of_indicator():
    prof = profile_from_function(lambda t: ((t >= 0) & (t <= 1)).astype(float), (-1.0, 2.0), 30_000, zero_tube=0.0)
    assert weak_l1_norm(prof) == pytest.approx(1.0, rel=1e-3)


@given(st.floats(0.1, 10.0))
@settings(max_examples=20)
def test_weak_l1_homogeneous(c):
    prof = profile_from_function(lambda t: np.exp(-np.abs(t)), (-3.0, 3.0), 2000)
    scaled = WeightProfile(prof.times, c * prof.values, prof.window, prof.spacing, 0.0)
    assert weak_l1_norm(scaled) == pytest.approx(c * weak_l1_norm(prof), rel=1e-12)


def test_weak_l1_below_l1():
    prof = profile_from_function(lambda t: np.exp(-t * t), (-4.0, 4.0), 10_000)
    assert weak_l1_norm(prof) <= np.sum(prof.values) * prof.spacing


def test_weak_l1_needs_samples():
    prof = profile_from_function(lambda t: 1 + 0 * t, (0.0, 1.0), 50)
    with pytest.raises(DomainError):
        weak_l1_norm(prof)


def test_profile_skips_singular_tubes():
    spec = PotentialSpec((1.0, 1.0), (-1, 1))
    prof = weight_profile(spec, (-7.0, 7.0), 10_000)
    for k in (-2, -1, 1, 2):
        assert np.abs(prof.times - k * math.pi).min() > 0
    assert np.all(np.isfinite(prof.values))


def test_quasi_norm_decreases_with_omega1():
    w2 = 1.0
    window = (math.pi / (2 * w2), 20.0)
    vals = [weak_l1_norm(weight_profile(PotentialSpec((w1, w2), (-1, 1)), window, 100_000))
            for w1 in (1.0, 2.0, 4.0, 8.0)]
    assert all(b < a for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("n, sigma, expected", [(2, 1.0, (4, 4, 4)), (3, 1.0, (4, 8 / 3, 8)), (1, 2.0, (6, 6, 6))])
def test_exponent_triple(n, sigma, expected):
    assert exponent_triple(n, sigma) == pytest.approx(expected, rel=0, abs=1e-15)


def test_exponent_triple_domain():
    with pytest.raises(DomainError):
        exponent_triple(3, 2.0)
    with pytest.raises(DomainError):
        exponent_triple(2, 0.0)


@given(st.integers(1, 4), st.floats(0.05, 3.0))
def test_strichartz_pair_is_admissible(n, sigma):
    if n >= 3 and sigma >= 2 / (n - 2):
        return
    r, q, _ = exponent_triple(n, sigma)
    if q >= 2:
        assert is_sharp_admissible(q, r, n / 2)


def test_sharp_admissible_examples():
    assert is_sharp_admissible(math.inf, 2, 0.7)
    assert is_sharp_admissible(4, 4, 1)
    assert not is_sharp_admissible(2, math.inf, 1)
    assert not is_sharp_admissible(1.5, 6, 1)
    assert not is_sharp_admissible(4, 5, 1)


def test_effective_dimension_reduces_to_weak_l1():
    spec = PotentialSpec((1.0, 1.0), (-1, 1))
    prof = weight_profile(spec, (-5.0, 5.0), 20_000)
    rep = effective_dimension_check(2, 2.0, prof)
    assert rep.weak_l1 == weak_l1_norm(prof)


def test_effective_dimension_free_tail():
    spec = PotentialSpec((1.0,), (0,))
    prof = weight_profile(spec, (-50.0, 50.0), 200_000)
    rep = effective_dimension_check(1, 2.0, prof)
    assert rep.finite
    assert rep.tail_power == pytest.approx(-0.5, abs=1e-6)
    assert rep.tail_integrable is False
    with pytest.raises(DomainError):
        effective_dimension_check(2, 1.0, prof)
