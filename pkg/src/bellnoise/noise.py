"""Classical noise processes driving the qubit dephasing.

Two processes are covered: static disorder (a flat-distributed coupling drawn
once per realization) and random telegraph noise (an exponential-waiting-time
dichotomic process).  Telegraph sampling is event-driven, so trajectories and
the phases integrated along them are exact; there is no time discretisation
anywhere in this module.

Reproducibility contract: samplers take an explicit ``numpy.random.Generator``
and hold no state of their own.  Ensemble code derives one generator per
sample index via :func:`substream`, which makes results independent of worker
count and iteration order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np


@dataclass(frozen=True)
class StaticNoiseSpec:
    """Flat-distributed static coupling: uniform on ``[c0 - delta_c/2, c0 + delta_c/2]``."""

    c0: float
    delta_c: float

    def __post_init__(self):
        if not self.delta_c > 0:
            raise ValueError(f"delta_c must be positive, got {self.delta_c}")

    @property
    def low(self):
        return self.c0 - 0.5 * self.delta_c

    @property
    def high(self):
        return self.c0 + 0.5 * self.delta_c


@dataclass(frozen=True)
class TelegraphSpec:
    """Random telegraph noise switching between -1 and +1 at rate ``gamma``."""

    gamma: float

    def __post_init__(self):
        if not self.gamma > 0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")


@dataclass(frozen=True, eq=False)
class TelegraphTrajectory:
    """One telegraph realization: initial sign and the flip times up to ``horizon``."""

    initial_value: int
    flip_times: np.ndarray
    horizon: float

    def value_at(self, t):
        """Trajectory value (+1 or -1) at time(s) ``t``."""
        count = np.searchsorted(self.flip_times, t, side="right")
        value = self.initial_value * (-1.0) ** count
        return float(value) if np.ndim(t) == 0 else value


def substream(seed, index):
    """Independent generator for one sample of a seeded ensemble."""
    return np.random.default_rng([int(seed), int(index)])


def sample_static(spec, rng):
    """Draw one static coupling value from the flat distribution."""
    return float(rng.uniform(spec.low, spec.high))


def sample_telegraph_trajectory(spec, horizon, rng):
    """Draw one telegraph trajectory on ``[0, horizon]``.

    The initial value is +1 or -1 equiprobably (the stationary choice) and
    waiting times between flips are exponential with rate ``gamma``, drawn in
    blocks so a trajectory costs O(gamma * horizon) generator calls.
    """
    if not horizon > 0:
        raise ValueError(f"horizon must be positive, got {horizon}")
    initial = 1 if rng.random() < 0.5 else -1
    mean_flips = spec.gamma * horizon
    block = max(8, int(mean_flips + 5.0 * math.sqrt(mean_flips) + 8.0))
    scale = 1.0 / spec.gamma
    times = np.cumsum(rng.exponential(scale, size=block))
    while times[-1] < horizon:
        more = np.cumsum(rng.exponential(scale, size=block)) + times[-1]
        times = np.concatenate([times, more])
    flips = times[times < horizon]
    return TelegraphTrajectory(initial, flips, float(horizon))


def accumulate_phases(trajectory, nu, times):
    """Dephasing phases ``phi(t) = -nu * integral_0^t c`` on a grid of times.

    The integral is evaluated exactly segment by segment, so the only error
    is floating-point rounding.  All times must lie in ``[0, horizon]``.
    """
    times = np.asarray(times, dtype=float)
    if times.size and (times.min() < 0.0 or times.max() > trajectory.horizon):
        raise ValueError(
            f"times must lie within [0, {trajectory.horizon}], "
            f"got range [{times.min()}, {times.max()}]"
        )
    flips = trajectory.flip_times
    k = len(flips)
    # Value on each inter-flip segment, and the running integral at each flip.
    segment_values = trajectory.initial_value * (-1.0) ** np.arange(k + 1)
    bounds = np.concatenate([[0.0], flips])
    integral_at_flip = np.concatenate([[0.0], np.cumsum(segment_values[:k] * np.diff(bounds))])
    idx = np.searchsorted(flips, times, side="right")
    integral = integral_at_flip[idx] + segment_values[idx] * (times - bounds[idx])
    return -nu * integral


def accumulate_phase(trajectory, nu, t):
    """Dephasing phase at a single time (see :func:`accumulate_phases`)."""
    return float(accumulate_phases(trajectory, nu, np.asarray([float(t)]))[0])


def decay_factor(coupling, gamma, t):
    """Averaged telegraph phase factor ``<exp(i * coupling * integral c dt)>``.

    Hyperbolic branch for ``gamma > coupling`` (fast switching, monotone
    decay), trigonometric branch for ``gamma < coupling`` (slow switching,
    damped oscillation).  Within a relative 1e-9 of the branch point the
    degenerate limit ``exp(-gamma t) (1 + gamma t)`` is used, since both
    closed branches lose precision as the discriminant vanishes.
    """
    if coupling < 0:
        raise ValueError(f"coupling must be nonnegative, got {coupling}")
    if not gamma > 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("t must be nonnegative")
    if abs(gamma - coupling) <= 1e-9 * gamma:
        out = np.exp(-gamma * t) * (1.0 + gamma * t)
    elif gamma > coupling:
        delta = math.sqrt(gamma * gamma - coupling * coupling)
        # exp(-gamma t) cosh/sinh combined into pure exponentials: no overflow
        # at large t, and the slow mode dominates without cancellation.
        out = 0.5 * (
            (1.0 + gamma / delta) * np.exp(-(gamma - delta) * t)
            + (1.0 - gamma / delta) * np.exp(-(gamma + delta) * t)
        )
    else:
        delta = math.sqrt(coupling * coupling - gamma * gamma)
        out = np.exp(-gamma * t) * (np.cos(delta * t) + (gamma / delta) * np.sin(delta * t))
    return float(out) if out.ndim == 0 else out


_SERIES_CUTOFF = 15.0
_SERIES_TERMS = 48


def _i0_series(x):
    t = 0.25 * x * x
    term = np.ones_like(x)
    total = np.ones_like(x)
    for k in range(1, _SERIES_TERMS):
        term = term * t / (k * k)
        total += term
    return total


def _i1_series(x):
    t = 0.25 * x * x
    term = np.ones_like(x)
    total = np.ones_like(x)
    for k in range(1, _SERIES_TERMS):
        term = term * t / (k * (k + 1))
        total += term
    return 0.5 * x * total


def _i_asymptotic(x, order):
    # DLMF 10.40.1 truncated at the smallest term; adequate to ~exp(-2x)
    # relative error, i.e. below 1e-12 for x > 15.
    mu = 4.0 * order * order
    total = np.ones_like(x)
    term = np.ones_like(x)
    previous = np.inf
    for k in range(1, 40):
        term = term * -(mu - (2 * k - 1) ** 2) / (8.0 * k * x)
        largest = float(np.max(np.abs(term)))
        if largest >= previous:
            break
        total += term
        previous = largest
        if largest < 1e-18:
            break
    return np.exp(x) / np.sqrt(2.0 * np.pi * x) * total


def bessel_i0(x):
    """Modified Bessel function I0: ascending series below 15, asymptotic above."""
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    ax = np.atleast_1d(np.abs(x))
    out = np.empty_like(ax)
    small = ax <= _SERIES_CUTOFF
    if np.any(small):
        out[small] = _i0_series(ax[small])
    if np.any(~small):
        out[~small] = _i_asymptotic(ax[~small], 0)
    return float(out[0]) if scalar else out


def bessel_i1(x):
    """Modified Bessel function I1 (odd in x); same series/asymptotic split as I0."""
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    ax = np.atleast_1d(np.abs(x))
    out = np.empty_like(ax)
    small = ax <= _SERIES_CUTOFF
    if np.any(small):
        out[small] = _i1_series(ax[small])
    if np.any(~small):
        out[~small] = _i_asymptotic(ax[~small], 1)
    out = out * np.sign(np.atleast_1d(x))
    return float(out[0]) if scalar else out


class PhaseDensity(NamedTuple):
    """Continuous density at one phase plus the weight of each boundary atom."""

    continuous_density: float
    atom_weight: float


def telegraph_phase_density(nu, gamma, t, phi):
    """Distribution of the accumulated telegraph phase at time ``t``.

    The distribution has two atoms of weight ``exp(-gamma t)/2`` at
    ``phi = +-nu t`` (the flip-free trajectories) and a continuous part
    supported on the open window ``|phi| < nu t``:

        p(phi) = (gamma / 2 nu) exp(-gamma t) [ I1(u)/w + I0(u) ],
        w = sqrt(1 - (phi / nu t)^2),  u = gamma t w.

    Outside the window the continuous density is zero.  Normalisation and the
    identity ``<exp(i phi)> = decay_factor(nu, gamma, t)`` are exercised by
    the tests.
    """
    if not nu > 0:
        raise ValueError(f"nu must be positive, got {nu}")
    if not gamma > 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    if not t > 0:
        raise ValueError(f"t must be positive, got {t}")
    atom = 0.5 * math.exp(-gamma * t)
    window = nu * t
    if abs(phi) >= window:
        return PhaseDensity(0.0, atom)
    w = math.sqrt(1.0 - (phi / window) ** 2)
    u = gamma * t * w
    # I1(u)/w = gamma*t * I1(u)/u stays finite as the window edge is approached.
    i1_over_u = 0.5 + u * u / 16.0 if u < 1e-6 else bessel_i1(u) / u
    density = atom * (gamma / nu) * (gamma * t * i1_over_u + bessel_i0(u))
    return PhaseDensity(float(density), atom)


def telegraph_autocorrelation(gamma, t):
    """Stationary autocorrelation ``<c(t) c(0)> = exp(-2 gamma |t|)``."""
    return np.exp(-2.0 * gamma * np.abs(np.asarray(t, dtype=float)))[()]


def telegraph_spectrum(gamma, omega):
    """Lorentzian power spectrum ``4 gamma / (omega^2 + 4 gamma^2)``."""
    omega = np.asarray(omega, dtype=float)
    return (4.0 * gamma / (omega * omega + 4.0 * gamma * gamma))[()]
