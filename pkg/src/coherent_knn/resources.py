"""Gate, photon, and register-size accounting for the optical pipeline.

Counts follow directly from the circuit structure for M training points and
N features: one M-mode and two N-mode Walsh-Hadamard multiports (at
(T/2) log2 T splitters each), N interference splitters, M*N conditional
phase (cross-Kerr) gates, N test-side phase shifters, and 2N + 1 photons
(two resource coherent states at one mean photon per mode plus the
heralding photon). Non-power-of-two sizes are padded before counting.
"""

from __future__ import annotations

from dataclasses import dataclass

from .linear_optics import is_power_of_two, synthesize_walsh_hadamard


def _pad(n: int) -> int:
    if n < 1:
        raise ValueError(f"size must be positive, got {n}")
    return n if is_power_of_two(n) else 1 << (n - 1).bit_length()


@dataclass(frozen=True)
class ResourceAudit:
    requested_training_points: int
    requested_features: int
    training_points: int  # padded
    features: int  # padded
    beam_splitters: int
    cross_kerr_gates: int
    phase_shifters: int
    photons: int
    space_complexity_terms: dict[str, int]


def audit_resources(training_points: int, features: int) -> ResourceAudit:
    """Element counts for the full pipeline at the given (padded) sizes."""
    m, n = _pad(training_points), _pad(features)
    log_m = m.bit_length() - 1
    log_n = n.bit_length() - 1
    return ResourceAudit(
        requested_training_points=training_points,
        requested_features=features,
        training_points=m,
        features=n,
        beam_splitters=(m * log_m) // 2 + n * log_n + n,
        cross_kerr_gates=m * n,
        phase_shifters=n,
        photons=2 * n + 1,
        space_complexity_terms={
            "photon_register": log_m,
            "coherent_registers": 2 * n * log_n,
        },
    )


def instantiated_gate_counts(training_points: int, features: int) -> dict[str, int]:
    """Counts taken from actually synthesized layouts and encode operations.

    Beam splitters are counted as placements of the heralding multiport plus
    the two feature multiports plus the N interference splitters; cross-Kerr
    gates as one conditional phase per (training point, feature mode); phase
    shifters as the test-side encoders.
    """
    m, n = _pad(training_points), _pad(features)
    herald_multiport = synthesize_walsh_hadamard(m) if m >= 2 else None
    feature_multiport = synthesize_walsh_hadamard(n) if n >= 2 else None
    herald_count = len(herald_multiport.placements) if herald_multiport else 0
    feature_count = len(feature_multiport.placements) if feature_multiport else 0
    return {
        "beam_splitters": herald_count + 2 * feature_count + n,
        "cross_kerr_gates": m * n,
        "phase_shifters": n,
    }
