import math

import numpy as np
import pytest
from scipy import integrate, special

from bellnoise.noise import (
    StaticNoiseSpec,
    TelegraphSpec,
    TelegraphTrajectory,
    accumulate_phase,
    accumulate_phases,
    bessel_i0,
    bessel_i1,
    decay_factor,
    sample_static,
    sample_telegraph_trajectory,
    substream,
    telegraph_autocorrelation,
    telegraph_phase_density,
    telegraph_spectrum,
)


class TestSpecs:
    def test_static_requires_positive_spread(self):
        with pytest.raises(ValueError):
            StaticNoiseSpec(c0=0.0, delta_c=0.0)

    def test_telegraph_requires_positive_rate(self):
        with pytest.raises(ValueError):
            TelegraphSpec(gamma=-1.0)


class TestStaticSampler:
    def test_support_mean_and_variance(self):
        spec = StaticNoiseSpec(c0=0.6, delta_c=1.4)
        rng = substream(101, 0)
        n = 10**6
        draws = np.array([sample_static(spec, rng) for _ in range(n)])
        assert draws.min() >= spec.low
        assert draws.max() <= spec.high
        mean_se = spec.delta_c / math.sqrt(12.0 * n)
        assert abs(draws.mean() - spec.c0) <= 3.0 * mean_se
        # sampling error of the variance estimator for a uniform distribution
        var = spec.delta_c**2 / 12.0
        var_se = spec.delta_c**2 * math.sqrt(1.0 / 80.0 - 1.0 / 144.0) / math.sqrt(n)
        assert abs(draws.var() - var) <= 3.0 * var_se


class TestTelegraphSampler:
    def test_flip_count_is_poisson_mean(self):
        spec = TelegraphSpec(gamma=2.5)
        horizon = 2.0
        n = 20_000
        counts = np.array(
            [
                len(sample_telegraph_trajectory(spec, horizon, substream(7, i)).flip_times)
                for i in range(n)
            ]
        )
        lam = spec.gamma * horizon
        assert abs(counts.mean() - lam) <= 3.0 * math.sqrt(lam / n)

    def test_autocorrelation_decays_exponentially(self):
        spec = TelegraphSpec(gamma=1.0)
        horizon = 1.5
        n = 100_000
        probes = np.array([0.25, 0.5, 1.0, 1.5])
        acc = np.zeros(probes.size)
        for i in range(n):
            trajectory = sample_telegraph_trajectory(spec, horizon, substream(13, i))
            acc += trajectory.initial_value * trajectory.value_at(probes)
        estimate = acc / n
        expected = telegraph_autocorrelation(spec.gamma, probes)
        assert np.all(np.abs(estimate - expected) <= 3.0 / math.sqrt(n) + 1e-12)

    def test_vanishing_rate_gives_flip_free_trajectories(self):
        spec = TelegraphSpec(gamma=1e-6)
        for i in range(1000):
            trajectory = sample_telegraph_trajectory(spec, 1.0, substream(3, i))
            assert trajectory.flip_times.size == 0

    def test_initial_value_unbiased(self):
        spec = TelegraphSpec(gamma=1.0)
        n = 20_000
        values = [
            sample_telegraph_trajectory(spec, 0.1, substream(29, i)).initial_value
            for i in range(n)
        ]
        assert abs(np.mean(values)) <= 3.0 / math.sqrt(n)

    def test_rejects_nonpositive_horizon(self):
        with pytest.raises(ValueError):
            sample_telegraph_trajectory(TelegraphSpec(gamma=1.0), 0.0, substream(0, 0))

    def test_seeding_contract_reproducible(self):
        spec = TelegraphSpec(gamma=3.0)
        first = sample_telegraph_trajectory(spec, 5.0, substream(42, 9))
        second = sample_telegraph_trajectory(spec, 5.0, substream(42, 9))
        other = sample_telegraph_trajectory(spec, 5.0, substream(42, 10))
        assert first.initial_value == second.initial_value
        assert np.array_equal(first.flip_times, second.flip_times)
        assert not np.array_equal(first.flip_times, other.flip_times)


class TestPhaseAccumulation:
    def test_flip_free_phase_is_linear(self):
        trajectory = TelegraphTrajectory(1, np.array([]), 10.0)
        nu = 0.7
        for t in (0.0, 1.0, 4.5, 10.0):
            assert accumulate_phase(trajectory, nu, t) == -nu * t

    def test_single_flip_exact(self):
        trajectory = TelegraphTrajectory(-1, np.array([2.0]), 10.0)
        # integral of c on [0, 3] is -2 + 1 = -1
        assert accumulate_phase(trajectory, 1.5, 3.0) == pytest.approx(1.5, abs=1e-15)

    def test_phase_bounded_by_window(self):
        spec = TelegraphSpec(gamma=4.0)
        nu = 1.3
        for i in range(200):
            trajectory = sample_telegraph_trajectory(spec, 2.0, substream(17, i))
            t = float(substream(18, i).uniform(0.0, 2.0))
            assert abs(accumulate_phase(trajectory, nu, t)) <= nu * t + 1e-12

    def test_grid_matches_scalar(self):
        spec = TelegraphSpec(gamma=2.0)
        trajectory = sample_telegraph_trajectory(spec, 3.0, substream(23, 0))
        times = np.linspace(0.0, 3.0, 17)
        grid = accumulate_phases(trajectory, 0.9, times)
        scalars = [accumulate_phase(trajectory, 0.9, t) for t in times]
        assert np.allclose(grid, scalars, atol=0, rtol=0)

    def test_beyond_horizon_rejected(self):
        trajectory = TelegraphTrajectory(1, np.array([]), 1.0)
        with pytest.raises(ValueError, match="within"):
            accumulate_phase(trajectory, 1.0, 1.5)

    def test_mean_phase_factor_matches_decay_factor(self):
        spec = TelegraphSpec(gamma=1.0)
        nu, t = 2.0, 1.2
        n = 20_000
        values = np.empty(n, dtype=complex)
        for i in range(n):
            trajectory = sample_telegraph_trajectory(spec, t, substream(31, i))
            values[i] = np.exp(1j * accumulate_phase(trajectory, nu, t))
        spread = values.std() / math.sqrt(n)
        assert abs(values.mean() - decay_factor(nu, spec.gamma, t)) <= 3.0 * spread + 1e-12


class TestDecayFactor:
    def test_unity_at_time_zero(self):
        for coupling, gamma in ((2.0, 5.0), (4.0, 0.2), (1.0, 1.0)):
            assert decay_factor(coupling, gamma, 0.0) == pytest.approx(1.0, abs=1e-15)

    def test_static_limit_is_cosine(self):
        t = np.linspace(0.0, 10.0, 101)
        values = decay_factor(3.0, 1e-12, t)
        assert np.max(np.abs(values - np.cos(3.0 * t))) <= 1e-9

    def test_degenerate_branch(self):
        gamma = 1.7
        t = np.linspace(0.0, 10.0 / gamma, 50)
        exact = np.exp(-gamma * t) * (1.0 + gamma * t)
        assert np.allclose(decay_factor(gamma, gamma, t), exact, atol=0, rtol=0)
        # both closed branches approach the same limit just off the degeneracy
        for off in (1 - 1e-6, 1 + 1e-6):
            assert np.max(np.abs(decay_factor(gamma * off, gamma, t) - exact)) <= 1e-5

    def test_continuous_across_branch_point(self):
        gamma = 2.0
        t = np.linspace(0.0, 10.0 / gamma, 64)
        center = decay_factor(gamma, gamma, t)
        for factor in (1 - 1e-7, 1 + 1e-7):
            assert np.max(np.abs(decay_factor(gamma, gamma * factor, t) - center)) <= 1e-5

    def test_fast_switching_positive_and_monotone(self):
        t = np.linspace(0.0, 20.0, 1000)
        values = decay_factor(2.0, 5.0, t)
        assert np.all(values > 0.0)
        assert np.all(np.diff(values) <= 1e-15)

    def test_bounded_by_one(self, rng):
        for _ in range(50):
            coupling = rng.uniform(0.0, 6.0)
            gamma = rng.uniform(0.05, 6.0)
            t = rng.uniform(0.0, 30.0, size=16)
            values = np.atleast_1d(decay_factor(coupling, gamma, np.sort(t)))
            assert np.all(np.abs(values) <= 1.0 + 1e-12)

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            decay_factor(-1.0, 1.0, 0.5)
        with pytest.raises(ValueError):
            decay_factor(1.0, 0.0, 0.5)
        with pytest.raises(ValueError):
            decay_factor(1.0, 1.0, -0.5)


def _i0_power_series(x, terms=80):
    total = 0.0
    for k in range(terms):
        total += (0.25 * x * x) ** k / (math.factorial(k) ** 2)
    return total


def _i1_power_series(x, terms=80):
    total = 0.0
    for k in range(terms):
        total += (0.25 * x * x) ** k / (math.factorial(k) * math.factorial(k + 1))
    return 0.5 * x * total


class TestBessel:
    def test_matches_power_series_reference(self):
        for x in np.linspace(0.0, 30.0, 121):
            assert bessel_i0(x) == pytest.approx(_i0_power_series(x), rel=1e-12)
            assert bessel_i1(x) == pytest.approx(_i1_power_series(x), rel=1e-12, abs=1e-300)

    def test_matches_scipy(self):
        x = np.linspace(0.0, 30.0, 301)
        assert np.max(np.abs(bessel_i0(x) - special.i0(x)) / special.i0(x)) <= 1e-12
        i1 = special.i1(x)
        assert np.max(np.abs(bessel_i1(x) - i1) / np.maximum(i1, 1e-300)) <= 1e-12

    def test_parity(self):
        assert bessel_i0(-3.0) == bessel_i0(3.0)
        assert bessel_i1(-3.0) == -bessel_i1(3.0)
        assert bessel_i0(0.0) == 1.0
        assert bessel_i1(0.0) == 0.0


class TestPhaseDensity:
    def test_zero_outside_window(self):
        value = telegraph_phase_density(1.0, 1.0, 2.0, phi=2.5)
        assert value.continuous_density == 0.0
        assert value.atom_weight == pytest.approx(0.5 * math.exp(-2.0))

    def test_total_mass_is_one(self):
        for gamma, nu, t in ((0.5, 1.0, 1.0), (2.0, 1.0, 1.5), (1.0, 3.0, 2.0)):
            mass, err = integrate.quad(
                lambda phi: telegraph_phase_density(nu, gamma, t, phi).continuous_density,
                -nu * t,
                nu * t,
                limit=200,
            )
            total = mass + 2.0 * telegraph_phase_density(nu, gamma, t, 0.0).atom_weight
            assert abs(total - 1.0) <= 1e-8

    def test_no_flip_limit(self):
        gamma, nu, t = 1e-9, 1.0, 1.0
        value = telegraph_phase_density(nu, gamma, t, 0.0)
        assert value.atom_weight == pytest.approx(0.5, abs=1e-9)
        mass, _ = integrate.quad(
            lambda phi: telegraph_phase_density(nu, gamma, t, phi).continuous_density,
            -nu * t,
            nu * t,
        )
        assert mass <= 2e-9

    def test_characteristic_function_is_decay_factor(self):
        for gamma, nu, t in ((0.5, 1.0, 1.0), (3.0, 1.0, 1.0), (1.0, 2.0, 1.5)):
            cont, _ = integrate.quad(
                lambda phi: math.cos(phi)
                * telegraph_phase_density(nu, gamma, t, phi).continuous_density,
                -nu * t,
                nu * t,
                limit=200,
            )
            atoms = 2.0 * telegraph_phase_density(nu, gamma, t, 0.0).atom_weight * math.cos(nu * t)
            assert abs(cont + atoms - decay_factor(nu, gamma, t)) <= 1e-6

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            telegraph_phase_density(0.0, 1.0, 1.0, 0.0)
        with pytest.raises(ValueError):
            telegraph_phase_density(1.0, 1.0, 0.0, 0.0)


class TestAutocorrelationAndSpectrum:
    def test_autocorrelation_at_zero(self):
        assert telegraph_autocorrelation(2.0, 0.0) == 1.0

    def test_spectrum_at_zero(self):
        assert telegraph_spectrum(2.0, 0.0) == pytest.approx(1.0 / 2.0)

    def test_wiener_khinchin_normalisation(self):
        gamma = 1.3
        total, _ = integrate.quad(lambda w: telegraph_spectrum(gamma, w), -np.inf, np.inf)
        assert total == pytest.approx(2.0 * math.pi, rel=1e-9)
