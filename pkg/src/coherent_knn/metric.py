"""Feature-to-phase scaling and the coherent distance metric (CDM).

Raw features are min-max scaled into phases on [0, pi/2]. Between two phase
vectors the CDM is sum_k (1 - cos(theta_k - theta'_k)), recoverable from the
all-detectors-silent probability P(0) of the interference circuit as
-(N / |alpha|^2) ln P(0). The sampled estimator reproduces the shot-noise
statistics of counting silent detection rounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import photonic
from .photonic import NoiseModel

HALF_PI = math.pi / 2


@dataclass(frozen=True)
class ScalerParams:
    """Per-feature minima and maxima fitted on the training split only."""

    mins: np.ndarray
    maxs: np.ndarray

    def __post_init__(self) -> None:
        mins = np.asarray(self.mins, dtype=np.float64)
        maxs = np.asarray(self.maxs, dtype=np.float64)
        if mins.shape != maxs.shape or mins.ndim != 1:
            raise ValueError("mins and maxs must be 1-D vectors of equal length")
        if np.any(maxs < mins):
            raise ValueError("every feature max must be >= its min")
        object.__setattr__(self, "mins", mins)
        object.__setattr__(self, "maxs", maxs)

    @property
    def degenerate(self) -> np.ndarray:
        """Mask of features whose training range collapsed to a point."""
        return self.maxs == self.mins


def fit_scaler(training_features: np.ndarray) -> ScalerParams:
    """Column-wise min and max of the training feature matrix."""
    x = np.asarray(training_features, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] < 1:
        raise ValueError("training features must be a non-empty 2-D matrix")
    return ScalerParams(mins=x.min(axis=0), maxs=x.max(axis=0))


def to_phases(x: np.ndarray, scaler: ScalerParams) -> np.ndarray:
    """Map a feature vector to phases theta_k in [0, pi/2].

    theta_k = (pi/2) (x_k - min_k) / (max_k - min_k); values outside the
    fitted range are clamped, and degenerate features map to phase 0.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.shape != scaler.mins.shape:
        raise ValueError(
            f"feature vector of shape {x.shape} does not match scaler of shape {scaler.mins.shape}"
        )
    span = np.where(scaler.degenerate, 1.0, scaler.maxs - scaler.mins)
    unit = (x - scaler.mins) / span
    unit = np.where(scaler.degenerate, 0.0, np.clip(unit, 0.0, 1.0))
    return HALF_PI * unit


def phase_matrix(features: np.ndarray, scaler: ScalerParams) -> np.ndarray:
    """Apply `to_phases` to every row of a feature matrix."""
    features = np.asarray(features, dtype=np.float64)
    return np.vstack([to_phases(row, scaler) for row in features])


def cdm_exact(theta: np.ndarray, theta_tilde: np.ndarray) -> float:
    """Coherent distance sum_k (1 - cos(theta_k - theta'_k)).

    Symmetric, non-negative, zero iff the phase vectors agree, and bounded
    by the feature count when phases lie in [0, pi/2].
    """
    theta = np.asarray(theta, dtype=np.float64)
    theta_tilde = np.asarray(theta_tilde, dtype=np.float64)
    if theta.shape != theta_tilde.shape:
        raise ValueError(f"length mismatch: {theta.shape} vs {theta_tilde.shape}")
    return float(np.sum(1.0 - np.cos(theta - theta_tilde)))


def manhattan(theta: np.ndarray, theta_tilde: np.ndarray) -> float:
    """Manhattan distance sum_k |theta_k - theta'_k| on the phase space."""
    theta = np.asarray(theta, dtype=np.float64)
    theta_tilde = np.asarray(theta_tilde, dtype=np.float64)
    if theta.shape != theta_tilde.shape:
        raise ValueError(f"length mismatch: {theta.shape} vs {theta_tilde.shape}")
    return float(np.sum(np.abs(theta - theta_tilde)))


def cdm_from_probability(p0: float, n_features: int, alpha_sq: float) -> float:
    """Invert the no-photon probability into a distance.

    Returns -(n_features / alpha_sq) ln(p0); composing with
    `photonic.no_photon_probability` on the interfered difference ports
    round-trips to `cdm_exact`.
    """
    if p0 <= 0.0:
        raise ValueError(f"no-photon probability must be positive, got {p0}")
    return -(n_features / alpha_sq) * math.log(p0)


@dataclass(frozen=True)
class CdmEstimate:
    """Monte-Carlo distance estimate from sampled detection rounds."""

    distance: float
    p0_hat: float
    runs: int
    std_error: float


def estimate_cdm(
    theta: np.ndarray,
    theta_tilde: np.ndarray,
    alpha: complex,
    runs: int,
    noise: NoiseModel,
    rng: np.random.Generator,
) -> CdmEstimate:
    """Estimate the coherent distance from `runs` simulated detection rounds.

    Each round prepares both encoded registers (padding the feature count up
    to a power of two with zero phases), interferes them, applies channel
    loss, and watches the difference-port detectors. p0_hat is the fraction
    of rounds in which every detector stayed silent; the silent count is
    drawn in one step from its exact Binomial(runs, P(all silent)) law
    rather than looping over rounds. The estimate is clamped below at
    max(exp(-|alpha|^2), 1/(2 runs)) so the log stays finite, and the
    standard error propagates the binomial variance through the log.
    """
    if runs < 1:
        raise ValueError("need at least one detection round")
    theta = photonic.pad_to_power_of_two(np.asarray(theta, dtype=np.float64))
    theta_tilde = photonic.pad_to_power_of_two(np.asarray(theta_tilde, dtype=np.float64))
    n = theta.shape[0]
    alpha_sq = abs(alpha) ** 2

    train = photonic.encode_phases(photonic.split_resource_coherent(alpha, n), theta)
    test = photonic.encode_phases(photonic.split_resource_coherent(alpha, n), theta_tilde)
    _, diff = photonic.interfere_pairs(train, test)
    diff = photonic.apply_loss(diff, noise)

    silent_prob = photonic.silent_run_probability(diff, noise)
    silent_count = int(rng.binomial(runs, silent_prob))

    floor = max(math.exp(-alpha_sq), 1.0 / (2.0 * runs))
    p0_hat = min(max(silent_count / runs, floor), 1.0)
    distance = cdm_from_probability(p0_hat, n, alpha_sq)
    std_error = (n / alpha_sq) * math.sqrt((1.0 - p0_hat) / (p0_hat * runs))
    return CdmEstimate(distance=distance, p0_hat=p0_hat, runs=runs, std_error=std_error)


def roundtrip_metric(alpha_sq: float | None = None):
    """Exact CDM computed through the probability channel, for oracle checks.

    Builds the difference-port amplitudes, evaluates the no-photon
    probability, and inverts it; algebraically identical to `cdm_exact`.
    """

    def distance(theta: np.ndarray, theta_tilde: np.ndarray) -> float:
        th = photonic.pad_to_power_of_two(np.asarray(theta, dtype=np.float64))
        tt = photonic.pad_to_power_of_two(np.asarray(theta_tilde, dtype=np.float64))
        n = th.shape[0]
        a_sq = float(n) if alpha_sq is None else alpha_sq
        alpha = math.sqrt(a_sq)
        train = photonic.encode_phases(photonic.split_resource_coherent(alpha, n), th)
        test = photonic.encode_phases(photonic.split_resource_coherent(alpha, n), tt)
        _, diff = photonic.interfere_pairs(train, test)
        return cdm_from_probability(photonic.no_photon_probability(diff), n, a_sq)

    return distance


def sampled_metric(
    alpha_sq: float | None,
    runs: int,
    noise: NoiseModel,
    rng: np.random.Generator,
):
    """Distance function backed by `estimate_cdm`, for plugging into KNN.

    With alpha_sq None the resource amplitude defaults to one mean photon
    per (padded) mode, |alpha|^2 = N.
    """

    def distance(theta: np.ndarray, theta_tilde: np.ndarray) -> float:
        n = photonic.pad_to_power_of_two(np.asarray(theta, dtype=np.float64)).shape[0]
        a_sq = float(n) if alpha_sq is None else alpha_sq
        return estimate_cdm(
            theta, theta_tilde, math.sqrt(a_sq), runs, noise, rng
        ).distance

    return distance
