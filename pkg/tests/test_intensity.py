from __future__ import annotations

import math

import numpy as np
import pytest

from stablefrag.intensity import (
    QuadratureError,
    StableDensityEvaluator,
    gaussian_intensity,
    intensity_mass_moment,
    levy_intensity,
    right_tail_mass,
    stable_density,
)


def test_gaussian_closed_form():
    assert stable_density(2.0, 1.0, 0.0) == pytest.approx((2 * math.pi) ** -0.5, abs=1e-15)
    assert levy_intensity(2.0, 1.0, 1.0) == pytest.approx((2 * math.pi) ** -0.5 * math.exp(-0.5), abs=1e-15)


@pytest.mark.parametrize("t", [0.3, 1.0, 2.5])
@pytest.mark.parametrize("z", [0.01, 0.5, 1.0, 7.0])
def test_gaussian_intensity_algebra(t, z):
    direct = z**-1 * math.exp(-((t * z) ** 2) / (2 * z)) / math.sqrt(2 * math.pi * z)
    assert abs(levy_intensity(2.0, t, z) - direct) < 1e-12
    assert abs(gaussian_intensity(t, z) - direct) < 1e-12


def test_normalisation_alpha_15():
    ev = StableDensityEvaluator(1.5)
    assert abs(ev.total_mass() - 1.0) < 1e-6
    assert abs(ev.negative_mass() - 1 / 1.5) < 1e-5


def test_negative_mass_matches_simulated_sign_frequency():
    # independent oracle: sign of centred sums of the stable-tail law
    from stablefrag.offspring import bn, make_stable_tail, sample_tail

    law = make_stable_tail(1.5)
    n, reps, cut = 20_000, 40_000, 64
    rng = np.random.default_rng(11)
    h = rng.multinomial(n, law.head_split(cut), size=reps)
    s = h[:, :cut] @ np.arange(cut)
    tail = sample_tail(law, cut, int(h[:, cut].sum()), rng)
    s = s + np.bincount(np.repeat(np.arange(reps), h[:, cut]), weights=tail, minlength=reps)
    freq = np.mean(s - n < 0)
    se = math.sqrt(freq * (1 - freq) / reps)
    # finite-n sums are not yet exactly stable, so allow a small bias on top of noise
    assert abs(freq - 1 / 1.5) < 4 * se + 0.01
    assert bn(law, n) > 0


@pytest.mark.parametrize("alpha", [1.3, 1.5, 1.8])
def test_scaling_consistency(alpha):
    ev = StableDensityEvaluator(alpha)
    for s in (0.3, 2.0, 5.0):
        for z in (-1.5, 0.2, 3.0):
            lhs = ev.density(z, s)
            rhs = s ** (-1 / alpha) * ev.density(z * s ** (-1 / alpha), 1.0)
            assert abs(lhs - rhs) < 1e-8


def test_continuity_towards_alpha_two():
    # with exponent lam^alpha fixed, the alpha -> 2 limit is N(0, 2)
    near = StableDensityEvaluator(1.99)
    for z in (-1.0, 0.0, 1.0):
        limit = stable_density(2.0, 2.0, z)
        assert near.density(z) == pytest.approx(limit, rel=0.02)


def test_density_nonnegative_and_left_tail_light():
    ev = StableDensityEvaluator(1.5)
    vals = ev.density(np.linspace(-8, 30, 77))
    assert np.all(vals >= 0)
    assert ev.density(-6.0) < 1e-10


def test_right_tail_expansion_matches_quadrature():
    ev = StableDensityEvaluator(1.5)
    from scipy import integrate

    body = integrate.quad(lambda z: ev.density(z), 20.0, 60.0, limit=200)[0]
    assert body == pytest.approx(right_tail_mass(1.5, 20.0) - right_tail_mass(1.5, 60.0), rel=1e-6)


@pytest.mark.parametrize("alpha", [1.5, 2.0])
@pytest.mark.parametrize("t", [0.5, 1.0, 2.0])
def test_mass_moment(alpha, t):
    assert abs(intensity_mass_moment(alpha, t) - 1 / ((alpha - 1) * t)) < 1e-4


def test_intensity_decays():
    assert levy_intensity(1.5, 1.0, 1e3) < 1e-6
    assert levy_intensity(2.0, 1.0, 1e3) < 1e-6


def test_argument_checks():
    with pytest.raises(ValueError):
        StableDensityEvaluator(1.0)
    with pytest.raises(ValueError):
        StableDensityEvaluator(2.1)
    with pytest.raises(ValueError):
        stable_density(1.5, 0.0, 1.0)
    with pytest.raises(ValueError):
        levy_intensity(1.5, 1.0, -1.0)
    with pytest.raises(ValueError):
        levy_intensity(1.5, 0.0, 1.0)


def test_quadrature_error_reported():
    ev = StableDensityEvaluator(1.5, tol=1e-30)
    with pytest.raises(QuadratureError):
        ev.density(0.7)
