"""Stochastic evolution of a Bell pair under classical dephasing.

Each noise realization rotates the two qubits by accumulated phases
``phi_A, phi_B`` and maps the initial Bell state to a pure state that
depends only on ``exp(2i (phi_A + phi_B))``.  Ensemble averages therefore
live in a one-complex-parameter family (:func:`dephased_bell_state`), and
this module provides three mutually checking routes to them: Monte Carlo,
Gauss-Legendre quadrature (static noise), and closed forms.

The single-qubit energy offset only ever multiplies the evolution by a
global phase, so it never appears in any output.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .noise import (
    accumulate_phases,
    decay_factor,
    sample_static,
    sample_telegraph_trajectory,
    substream,
)

TOPOLOGIES = ("separate", "common")

_CHUNK = 1024


def check_topology(topology):
    if topology not in TOPOLOGIES:
        raise ValueError(f"unknown topology {topology!r}, expected one of {TOPOLOGIES}")
    return topology


@dataclass(frozen=True)
class HamiltonianSpec:
    """Single-qubit parameters: coupling ``nu`` to the noise, energy ``epsilon``.

    ``epsilon`` contributes a global phase only and is retained for interface
    completeness; all observables are independent of it.
    """

    nu: float
    epsilon: float = 0.0

    def __post_init__(self):
        if not self.nu > 0:
            raise ValueError(f"nu must be positive, got {self.nu}")


def sinc(x):
    """sin(x)/x with the removable singularity handled explicitly."""
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 1e-8
    safe = np.where(small, 1.0, x)
    out = np.where(small, 1.0 - x * x / 6.0, np.sin(safe) / safe)
    return float(out) if out.ndim == 0 else out


def dephased_bell_state(z):
    """Density matrix of the Bell pair dephased by mean phase factor ``z``.

    ``z`` is the ensemble average of ``exp(2i (phi_A + phi_B))``; ``z = 1``
    gives back the Bell projector and ``z = 0`` the fully dephased mixture.
    Hermiticity and unit trace hold by construction.
    """
    z = complex(z)
    plus = 0.25 * (1.0 + z.real)
    minus = 0.25 * (1.0 - z.real)
    off = 0.25j * z.imag
    return np.array(
        [
            [plus, off, off, plus],
            [-off, minus, minus, -off],
            [-off, minus, minus, -off],
            [plus, off, off, plus],
        ],
        dtype=complex,
    )


def realization_state(phi_a, phi_b):
    """Pure two-qubit state for one noise realization with the given phases."""
    return dephased_bell_state(np.exp(2j * (float(phi_a) + float(phi_b))))


def closed_form_static(ham, noise, topology, t):
    """Static-noise average in closed form.

    The mean phase factor is ``exp(-4i c0 nu t)`` times ``sinc(delta_c nu t)^2``
    for separate environments or ``sinc(2 delta_c nu t)`` for a common one.
    """
    check_topology(topology)
    if t < 0:
        raise ValueError(f"t must be nonnegative, got {t}")
    x = noise.delta_c * ham.nu * t
    envelope = sinc(x) ** 2 if topology == "separate" else sinc(2.0 * x)
    z = np.exp(-4j * noise.c0 * ham.nu * t) * envelope
    return dephased_bell_state(z)


def closed_form_rtn(ham, rtn, topology, t):
    """Telegraph-noise average in closed form.

    The mean phase factor is ``decay_factor(2 nu)^2`` for separate
    environments and ``decay_factor(4 nu)`` for a common one; it is real, so
    the state is an X-form mixture of two Bell states at all times.
    """
    check_topology(topology)
    if topology == "separate":
        lam = decay_factor(2.0 * ham.nu, rtn.gamma, t) ** 2
    else:
        lam = decay_factor(4.0 * ham.nu, rtn.gamma, t)
    return dephased_bell_state(lam)


def average_static_quadrature(ham, noise, topology, t, nodes=64):
    """Static-noise average by Gauss-Legendre quadrature of realization states.

    Tensor-product rule over (c_A, c_B) for separate environments, a single
    axis for a common one.  The integrand oscillates like
    ``exp(2i nu t (c_A + c_B))``, so the rule is spectrally convergent while
    ``delta_c nu t`` (separate) or ``2 delta_c nu t`` (common) stays below
    roughly 1.4x the node count; beyond that, raise ``nodes``.
    """
    check_topology(topology)
    if nodes < 2:
        raise ValueError(f"need at least 2 quadrature nodes, got {nodes}")
    x, w = np.polynomial.legendre.leggauss(int(nodes))
    couplings = noise.c0 + 0.5 * noise.delta_c * x
    weights = 0.5 * w  # flat density times half-width: weights sum to 1
    acc = np.zeros((4, 4), dtype=complex)
    if topology == "separate":
        for wi, ci in zip(weights, couplings):
            for wj, cj in zip(weights, couplings):
                acc += (wi * wj) * realization_state(-ham.nu * ci * t, -ham.nu * cj * t)
    else:
        for wi, ci in zip(weights, couplings):
            acc += wi * realization_state(-ham.nu * ci * t, -ham.nu * ci * t)
    return acc


def _static_chunk(args):
    ham, noise, topology, times, seed, start, stop = args
    acc = np.zeros(times.shape, dtype=complex)
    for index in range(start, stop):
        rng = substream(seed, index)
        if topology == "separate":
            total = sample_static(noise, rng) + sample_static(noise, rng)
        else:
            total = 2.0 * sample_static(noise, rng)
        acc += np.exp(-2j * ham.nu * total * times)
    return acc


def _rtn_chunk(args):
    ham, rtn, topology, times, seed, start, stop = args
    acc = np.zeros(times.shape, dtype=complex)
    horizon = float(times.max()) if times.size else 0.0
    for index in range(start, stop):
        rng = substream(seed, index)
        if horizon == 0.0:
            acc += 1.0
            continue
        if topology == "separate":
            traj_a = sample_telegraph_trajectory(rtn, horizon, rng)
            traj_b = sample_telegraph_trajectory(rtn, horizon, rng)
            phi_sum = accumulate_phases(traj_a, ham.nu, times) + accumulate_phases(
                traj_b, ham.nu, times
            )
        else:
            trajectory = sample_telegraph_trajectory(rtn, horizon, rng)
            phi_sum = 2.0 * accumulate_phases(trajectory, ham.nu, times)
        acc += np.exp(2j * phi_sum)
    return acc


def _mc_mean(chunk_fn, payload, n_samples, workers):
    # Chunk boundaries are fixed by n_samples alone and each chunk is reduced
    # in index order, so the result is bit-identical for any worker count.
    tasks = [
        payload + (start, min(start + _CHUNK, n_samples))
        for start in range(0, n_samples, _CHUNK)
    ]
    if workers <= 1:
        partials = [chunk_fn(task) for task in tasks]
    else:
        with ProcessPoolExecutor(max_workers=int(workers)) as pool:
            partials = list(pool.map(chunk_fn, tasks))
    return np.sum(np.stack(partials, axis=0), axis=0) / float(n_samples)


def _time_grid(t):
    times = np.asarray(t, dtype=float)
    scalar = times.ndim == 0
    times = np.atleast_1d(times)
    if np.any(times < 0):
        raise ValueError("times must be nonnegative")
    if times.size > 1 and np.any(np.diff(times) <= 0):
        raise ValueError("time grid must be strictly ascending")
    return times, scalar


def average_static_mc(ham, noise, topology, t, n_samples, seed, workers=1):
    """Static-noise average by Monte Carlo over flat coupling draws.

    ``t`` may be a scalar or an ascending grid; one coupling draw per sample
    is reused across the whole grid.  Deterministic for fixed ``seed``
    regardless of ``workers``.
    """
    check_topology(topology)
    if n_samples < 1:
        raise ValueError(f"n_samples must be >= 1, got {n_samples}")
    times, scalar = _time_grid(t)
    payload = (ham, noise, topology, times, int(seed))
    z = _mc_mean(_static_chunk, payload, int(n_samples), workers)
    states = np.stack([dephased_bell_state(value) for value in z])
    return states[0] if scalar else states


def average_rtn_mc(ham, rtn, topology, t_grid, n_traj, seed, workers=1):
    """Telegraph-noise average by Monte Carlo over event-driven trajectories.

    Separate environments draw two independent trajectories per sample, a
    common environment draws one shared trajectory.  Each trajectory is
    evaluated at every grid time, so successive times share realizations
    (correlated along the grid, unbiased at each point).  Deterministic for
    fixed ``seed`` regardless of ``workers``.
    """
    check_topology(topology)
    if n_traj < 1:
        raise ValueError(f"n_traj must be >= 1, got {n_traj}")
    times, scalar = _time_grid(t_grid)
    payload = (ham, rtn, topology, times, int(seed))
    z = _mc_mean(_rtn_chunk, payload, int(n_traj), workers)
    states = np.stack([dephased_bell_state(value) for value in z])
    return states[0] if scalar else states
