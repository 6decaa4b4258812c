"""Classical simulation of the phase-encoded coherent-state circuit.

States are carried as plain ndarrays: a coherent amplitude vector is one
complex amplitude beta_k per mode (mean photon number sum |beta_k|^2), and a
single-photon register is a normalized complex probability-amplitude vector
over modes. Phases encode features; balanced splitters interfere a training
register against a test register; bucket detectors on the difference ports
click with probability 1 - exp(-tau |beta|^2) per mode.

Rather than materializing the superposition over all training points, each
simulated run heralds one training index uniformly and prepares the product
coherent state for that index, which is observationally equivalent for
bucket detection on the difference ports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linear_optics import is_power_of_two, walsh_hadamard_matrix

ATOL = 1e-12


@dataclass(frozen=True)
class NoiseModel:
    """Channel transmissivity and detector efficiency.

    Transmissivity may be given directly or derived from a loss coefficient
    and propagation length as eta = exp(-lambda * L). If both forms are given
    they must agree to within 1e-12.
    """

    transmissivity_eta: float | None = None
    detector_efficiency_tau: float = 1.0
    loss_coefficient_lambda: float | None = None
    propagation_length_L: float | None = None

    def __post_init__(self) -> None:
        eta = self.transmissivity_eta
        lam, length = self.loss_coefficient_lambda, self.propagation_length_L
        if (lam is None) != (length is None):
            raise ValueError("loss coefficient and propagation length come as a pair")
        if lam is not None:
            if lam < 0 or length < 0:
                raise ValueError("loss coefficient and length must be non-negative")
            derived = math.exp(-lam * length)
            if eta is None:
                object.__setattr__(self, "transmissivity_eta", derived)
            elif abs(eta - derived) > ATOL:
                raise ValueError(
                    f"transmissivity {eta} inconsistent with exp(-lambda L) = {derived}"
                )
        elif eta is None:
            object.__setattr__(self, "transmissivity_eta", 1.0)
        if not 0.0 <= self.transmissivity_eta <= 1.0:
            raise ValueError(
                f"transmissivity must lie in [0, 1], got {self.transmissivity_eta}"
            )
        if not 0.0 <= self.detector_efficiency_tau <= 1.0:
            raise ValueError(
                f"detector efficiency must lie in [0, 1], got {self.detector_efficiency_tau}"
            )


IDEAL_NOISE = NoiseModel(transmissivity_eta=1.0, detector_efficiency_tau=1.0)


@dataclass(frozen=True)
class DetectionOutcome:
    """Clicks on the difference-port detectors for one heralded run."""

    clicks: np.ndarray
    heralded_index: int


def distribute_single_photon(mode_count: int, input_port: int) -> np.ndarray:
    """Single-photon amplitudes after the Walsh-Hadamard multiport.

    Returns row `input_port` of the transform; from port 0 the photon is a
    uniform combination with amplitude 1/sqrt(mode_count) on every mode.
    """
    if not is_power_of_two(mode_count):
        raise ValueError(
            f"mode count must be a power of two (pad first), got {mode_count}"
        )
    if not 0 <= input_port < mode_count:
        raise ValueError(f"input port {input_port} out of range for {mode_count} modes")
    t = mode_count.bit_length() - 1
    return walsh_hadamard_matrix(t)[input_port].copy()


def split_resource_coherent(alpha: complex, mode_count: int) -> np.ndarray:
    """Split one resource coherent state evenly over `mode_count` modes.

    Every output mode carries amplitude alpha / sqrt(mode_count), conserving
    the total mean photon number |alpha|^2.
    """
    if mode_count < 1:
        raise ValueError("mode count must be at least 1")
    if not is_power_of_two(mode_count):
        raise ValueError(
            f"mode count must be a power of two (pad first), got {mode_count}"
        )
    return np.full(mode_count, alpha / math.sqrt(mode_count), dtype=np.complex128)


def encode_phases(state: np.ndarray, phases: np.ndarray) -> np.ndarray:
    """Imprint one phase per mode: beta_k -> exp(i theta_k) beta_k.

    Phases must lie in [0, pi/2], the range produced by min-max feature
    scaling; moduli are unchanged.
    """
    state = np.asarray(state, dtype=np.complex128)
    phases = np.asarray(phases, dtype=np.float64)
    if phases.shape != state.shape:
        raise ValueError(
            f"phase vector of shape {phases.shape} does not match state of shape {state.shape}"
        )
    if np.any(phases < 0.0) or np.any(phases > math.pi / 2 + ATOL):
        raise ValueError("phases must lie in [0, pi/2]")
    return state * np.exp(1j * phases)


def interfere_pairs(
    train: np.ndarray, test: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Interfere two registers on parallel balanced splitters, mode by mode.

    Returns (sum_ports, diff_ports) with sum_k = (train_k + test_k)/sqrt(2)
    and diff_k = (train_k - test_k)/sqrt(2); total mean photon number is
    conserved. Only the difference ports feed the bucket detectors.
    """
    train = np.asarray(train, dtype=np.complex128)
    test = np.asarray(test, dtype=np.complex128)
    if train.shape != test.shape:
        raise ValueError(
            f"mode-count mismatch: {train.shape} vs {test.shape}"
        )
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    return (train + test) * inv_sqrt2, (train - test) * inv_sqrt2


def no_photon_probability(diff_ports: np.ndarray) -> float:
    """Probability that every difference-port mode is in the vacuum.

    For coherent amplitudes this is exp(-sum_k |beta_k|^2), which lies in
    (0, 1] and hits 1 exactly when all amplitudes vanish.
    """
    diff_ports = np.asarray(diff_ports, dtype=np.complex128)
    return float(np.exp(-np.sum(np.abs(diff_ports) ** 2)))


def apply_loss(state: np.ndarray, noise: NoiseModel) -> np.ndarray:
    """Amplitude damping by a fictitious beam splitter: beta -> sqrt(eta) beta."""
    state = np.asarray(state, dtype=np.complex128)
    return state * math.sqrt(noise.transmissivity_eta)


def transmission_fidelity(beta_mod_sq: float, eta: float) -> float:
    """Overlap fidelity between a coherent mode and its damped image.

    |<beta | sqrt(eta) beta>|^2 = exp(-|beta|^2 (1 - sqrt(eta))^2); equals 1
    for a lossless channel or a vacuum input, and decreases with the mode's
    mean photon number for any fixed eta < 1.
    """
    if beta_mod_sq < 0:
        raise ValueError("mean photon number must be non-negative")
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"transmissivity must lie in [0, 1], got {eta}")
    return float(np.exp(-beta_mod_sq * (1.0 - math.sqrt(eta)) ** 2))


def no_click_probabilities(diff_ports: np.ndarray, noise: NoiseModel) -> np.ndarray:
    """Per-mode probability that an inefficient bucket detector stays silent.

    Marginalizing Poisson photon statistics over per-photon misses gives
    exp(-tau |beta_k|^2) for each mode; tau = 1 recovers the ideal projector
    onto the no-photon subspace.
    """
    diff_ports = np.asarray(diff_ports, dtype=np.complex128)
    tau = noise.detector_efficiency_tau
    return np.exp(-tau * np.abs(diff_ports) ** 2)


def silent_run_probability(diff_ports: np.ndarray, noise: NoiseModel) -> float:
    """Probability that all difference-port detectors stay silent in one run.

    Modes are independent, so this is the product of the per-mode no-click
    probabilities.
    """
    return float(np.prod(no_click_probabilities(diff_ports, noise)))


def sample_detection(
    diff_ports: np.ndarray, noise: NoiseModel, rng: np.random.Generator
) -> np.ndarray:
    """Sample one round of bucket detection on the difference ports.

    Returns a boolean click per mode; mode k clicks with probability
    1 - exp(-tau |beta_k|^2), independently of the other modes.
    """
    silent = no_click_probabilities(diff_ports, noise)
    return rng.random(silent.shape) >= silent


def herald_training_index(training_count: int, rng: np.random.Generator) -> int:
    """Draw which training point this run encodes, uniformly and without bias."""
    if training_count < 1:
        raise ValueError("training count must be at least 1")
    return int(rng.integers(training_count))


def run_heralded_round(
    train_phases: np.ndarray,
    test_phases: np.ndarray,
    alpha: complex,
    noise: NoiseModel,
    rng: np.random.Generator,
) -> DetectionOutcome:
    """Simulate one full run: herald an index, encode, interfere, detect.

    `train_phases` is the (M, N) matrix of encoded training phases and
    `test_phases` the length-N test phase vector; N must be a power of two
    (pad degenerate modes with zero phase on both sides first).
    """
    train_phases = np.asarray(train_phases, dtype=np.float64)
    if train_phases.ndim != 2:
        raise ValueError("training phases must be an (M, N) matrix")
    m = herald_training_index(train_phases.shape[0], rng)
    n = train_phases.shape[1]
    train = encode_phases(split_resource_coherent(alpha, n), train_phases[m])
    test = encode_phases(split_resource_coherent(alpha, n), test_phases)
    _, diff = interfere_pairs(train, test)
    diff = apply_loss(diff, noise)
    return DetectionOutcome(clicks=sample_detection(diff, noise, rng), heralded_index=m)


def detector_error_probability(
    alpha_sq: float, n_features: int, delta: float, tau: float, cutoff: int
) -> float:
    """Probability that photons reach a detector but none is registered.

    For one difference-port mode with phase parity `delta`, the mean photon
    number is mu = (alpha_sq / n_features) (1 - cos delta). Summing the
    Poisson weights against the per-photon miss probability (1 - tau)^n up
    to the Fock cutoff gives

        sum_{n=1}^{cutoff} e^{-mu} mu^n / n! (1 - tau)^n,

    which increases with the cutoff towards exp(-tau mu) - exp(-mu).
    """
    if cutoff < 1:
        raise ValueError("cutoff must be at least 1")
    if not 0.0 <= tau <= 1.0:
        raise ValueError(f"detector efficiency must lie in [0, 1], got {tau}")
    mu = (alpha_sq / n_features) * (1.0 - math.cos(delta))
    total = 0.0
    term = math.exp(-mu)
    miss = 1.0 - tau
    for n in range(1, cutoff + 1):
        term *= mu * miss / n
        total += term
    return total


def detector_error_limit(alpha_sq: float, n_features: int, delta: float, tau: float) -> float:
    """Closed form of the detector error as the Fock cutoff goes to infinity."""
    mu = (alpha_sq / n_features) * (1.0 - math.cos(delta))
    return math.exp(-tau * mu) - math.exp(-mu)


def pad_to_power_of_two(phases: np.ndarray) -> np.ndarray:
    """Zero-pad a phase vector up to the next power-of-two mode count.

    Padded modes carry phase 0 on both the training and the test side, so
    they never contribute to interference or to the measured distance.
    """
    phases = np.asarray(phases, dtype=np.float64)
    n = phases.shape[-1]
    if is_power_of_two(n):
        return phases
    padded = 1 << (n - 1).bit_length()
    width = [(0, 0)] * (phases.ndim - 1) + [(0, padded - n)]
    return np.pad(phases, width)
