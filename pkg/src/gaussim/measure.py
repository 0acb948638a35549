"""Gaussian measurements: homodyne, heterodyne, conditioning, feedforward.

Measurements are destructive: the measured mode is removed from the state
and the remaining modes are updated by Gaussian conditioning (a Schur
complement on the measured rows).  Sampled homodyne outcomes have variance
exactly equal to the measured quadrature's covariance entry, so a vacuum
homodyne has variance 1.
"""

from dataclasses import dataclass

import numpy as np

from .maps import GaussianMap, apply, displacement, phase_shift
from .states import GaussianState, partial_trace

# Conditioning divides by the measured variance; below this floor the
# quadrature is treated as infinitely squeezed and rejected.
VARIANCE_FLOOR = 1e-12


class RandomSource:
    """Deterministic random stream with reproducible per-trajectory children.

    Wraps a counter-based (Philox) generator seeded from a 64-bit integer;
    identical seeds give bit-identical outcome sequences.  ``child(i)``
    derives an independent stream for trajectory ``i`` that does not depend
    on how many draws the parent has made.
    """

    def __init__(self, seed, _seq=None):
        self._seed = int(seed)
        seq = _seq if _seq is not None else np.random.SeedSequence(self._seed)
        self._gen = np.random.Generator(np.random.Philox(seq))

    @property
    def seed(self):
        return self._seed

    def child(self, index):
        """Independent stream for sub-task ``index``, reproducible from (seed, index)."""
        seq = np.random.SeedSequence(entropy=self._seed, spawn_key=(int(index),))
        return RandomSource(self._seed, _seq=seq)

    def normal(self, mean=0.0, std=1.0):
        return float(mean + std * self._gen.standard_normal())

    def standard_normal(self, size=None):
        return self._gen.standard_normal(size)


class MeasurementRecord:
    """Ordered, uniquely-labeled real outcomes accumulated along a trajectory."""

    def __init__(self):
        self._entries = []
        self._by_label = {}

    def add(self, label, value):
        if label in self._by_label:
            raise ValueError(f"duplicate measurement label {label!r}")
        self._by_label[label] = float(value)
        self._entries.append((label, float(value)))

    def value(self, label):
        if label not in self._by_label:
            raise KeyError(f"no measurement recorded under label {label!r}")
        return self._by_label[label]

    def __contains__(self, label):
        return label in self._by_label

    def __len__(self):
        return len(self._entries)

    @property
    def entries(self):
        return list(self._entries)

    def to_json(self):
        """Serialize to [{label, value}, ...] in execution order."""
        return [{"label": k, "value": v} for k, v in self._entries]


def _condition_and_drop(state, mode, b_idx, added_noise, outcome):
    """Condition the non-measured modes on an outcome, then drop the mode.

    Args:
        state: pre-measurement state.
        mode: mode being measured (removed from the output).
        b_idx: list of measured row indices (1 for homodyne, 2 for heterodyne).
        added_noise: matrix added to Gamma_BB before inversion (0 or I).
        outcome: measured value(s), length matching b_idx.

    Returns:
        GaussianState on state.n - 1 modes.
    """
    n = state.n
    keep_modes = [m for m in range(n) if m != mode]
    a_idx = np.array([*keep_modes, *(n + m for m in keep_modes)], dtype=int)
    b_idx = np.asarray(b_idx, dtype=int)
    outcome = np.atleast_1d(np.asarray(outcome, dtype=float))

    gamma_bb = state.gamma[np.ix_(b_idx, b_idx)] + added_noise
    gamma_ba = state.gamma[np.ix_(b_idx, a_idx)]
    if np.min(np.linalg.eigvalsh(gamma_bb)) < VARIANCE_FLOOR:
        raise ValueError(
            "measured quadrature has vanishing variance "
            f"({np.min(np.linalg.eigvalsh(gamma_bb))}); cannot condition on it"
        )
    innovation = outcome - state.xi[b_idx]
    solve = np.linalg.solve(gamma_bb, gamma_ba)
    xi = state.xi[a_idx] + innovation @ solve
    gamma = state.gamma[np.ix_(a_idx, a_idx)] - gamma_ba.T @ solve
    return GaussianState(n - 1, xi, gamma)


def _rotated(state, mode, theta):
    """Rotate one mode so its q row carries the q cos(theta) + p sin(theta) statistics."""
    if theta == 0.0:
        return state
    return apply(phase_shift(state.n, mode, theta), state)


def homodyne(state, mode, theta, rng):
    """Measure the quadrature q cos(theta) + p sin(theta) of one mode.

    The outcome is drawn from the exact marginal (mean xi_B, variance
    Gamma_BB); the remaining modes are conditioned on it and the measured
    mode is removed.

    Args:
        state: input state (n >= 1 modes).
        mode (int): mode to measure.
        theta (float): quadrature angle in radians.
        rng (RandomSource): outcome sampler.

    Returns:
        tuple: (outcome, reduced state on n - 1 modes).

    Raises:
        ValueError: on a bad mode index or an infinitely squeezed quadrature.
    """
    if not 0 <= mode < state.n:
        raise ValueError(f"mode {mode} out of range for {state.n} modes")
    rotated = _rotated(state, mode, theta)
    var = rotated.gamma[mode, mode]
    if var < VARIANCE_FLOOR:
        raise ValueError(
            f"measured quadrature has vanishing variance ({var}); "
            "cannot condition on it"
        )
    outcome = rng.normal(rotated.xi[mode], np.sqrt(var))
    return outcome, _condition_and_drop(rotated, mode, [mode], 0.0, outcome)


def homodyne_project(state, mode, theta, forced_outcome):
    """Deterministic homodyne: condition on a supplied outcome.

    Same update as :func:`homodyne` with the outcome given instead of
    sampled; useful for post-selection and testing.
    """
    if not 0 <= mode < state.n:
        raise ValueError(f"mode {mode} out of range for {state.n} modes")
    rotated = _rotated(state, mode, theta)
    return _condition_and_drop(rotated, mode, [mode], 0.0, forced_outcome)


def heterodyne(state, mode, rng):
    """Simultaneously measure both quadratures of one mode.

    The joint outcome is drawn from a Gaussian with covariance
    Gamma_BB + I (one unit of vacuum noise, the minimum for a joint
    quadrature measurement); conditioning uses the same noisy covariance.

    Returns:
        tuple: (outcome_q, outcome_p, reduced state on n - 1 modes).
    """
    if not 0 <= mode < state.n:
        raise ValueError(f"mode {mode} out of range for {state.n} modes")
    b_idx = [mode, state.n + mode]
    noisy = state.gamma[np.ix_(b_idx, b_idx)] + np.eye(2)
    chol = np.linalg.cholesky(noisy)
    outcome = state.xi[b_idx] + chol @ rng.standard_normal(2)
    reduced = _condition_and_drop(state, mode, b_idx, np.eye(2), outcome)
    return float(outcome[0]), float(outcome[1]), reduced


def discard_measurement(state, mode):
    """Measure a mode and throw the outcome away.

    Averaging the conditional states over the outcome distribution restores
    the unconditioned marginal, so this is exactly the partial trace over
    the complement.
    """
    if not 0 <= mode < state.n:
        raise ValueError(f"mode {mode} out of range for {state.n} modes")
    return partial_trace(state, [m for m in range(state.n) if m != mode])


@dataclass(frozen=True)
class Feedforward:
    """A displacement whose magnitude is a recorded outcome times a gain.

    At execution time this resolves to displacement(alpha) with
    alpha = gain * record[source] along the chosen quadrature (``"q"`` or
    ``"p"``) of the target mode.
    """

    gain: float
    source: str
    target: int
    direction: str

    def __post_init__(self):
        if self.direction not in ("q", "p"):
            raise ValueError(f"direction must be 'q' or 'p', got {self.direction!r}")

    def displacement_map(self, record, n):
        """Resolve against a record into a concrete displacement on ``n`` modes.

        Raises:
            KeyError: if the source label has not been recorded.
            ValueError: if the target mode is out of range.
        """
        if not 0 <= self.target < n:
            raise ValueError(f"mode {self.target} out of range for {n} modes")
        value = record.value(self.source)
        alpha = np.zeros(2 * n)
        idx = self.target if self.direction == "q" else n + self.target
        alpha[idx] = self.gain * value
        return displacement(alpha)

    def apply(self, state, record):
        """Apply the resolved displacement to a state."""
        return apply(self.displacement_map(record, state.n), state)


def feedforward(gain, source_label, target_mode, direction):
    """Build a measurement-conditioned displacement instruction."""
    return Feedforward(float(gain), source_label, int(target_mode), direction)
