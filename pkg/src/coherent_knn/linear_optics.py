"""Beam splitter unitaries and Walsh-Hadamard interferometer synthesis.

A multiport device acting on T spatial modes is described by a T x T unitary.
This module builds the two-mode beam splitter matrix, the recursive
Walsh-Hadamard matrix, and cascaded layouts of two-mode gates that realize the
Walsh-Hadamard transform with (T/2) * log2(T) balanced splitters arranged in a
butterfly pattern (stage s couples mode pairs whose indices differ in bit s).

Mode indices are 0-based throughout. Amplitude vectors are plain complex
ndarrays; a layout's composed unitary applies the lowest layer first.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

ATOL = 1e-12

# 2^t beyond this would allocate multi-GB matrices; sizes this build needs
# top out at t = 6.
_MAX_HADAMARD_ORDER = 13


@dataclass(frozen=True)
class BeamSplitterParams:
    """Parameters of a lossless two-mode beam splitter.

    Attributes:
        gamma: mixing angle in radians, within [0, pi/2]. Transmittance is
            cos^2(gamma), reflectance sin^2(gamma).
        phi_0: global phase in radians.
        phi_tau: transmitted phase in radians.
        phi_rho: reflected phase in radians.
    """

    gamma: float
    phi_0: float = 0.0
    phi_tau: float = 0.0
    phi_rho: float = 0.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.gamma <= math.pi / 2:
            raise ValueError(
                f"gamma must lie in [0, pi/2], got {self.gamma!r}"
            )

    @property
    def transmittance(self) -> float:
        return math.cos(self.gamma) ** 2

    @property
    def reflectance(self) -> float:
        return math.sin(self.gamma) ** 2


def balanced_splitter_params() -> BeamSplitterParams:
    """Canonical balanced splitter whose matrix is the real Hadamard H1.

    The parameter set (gamma=pi/4, phi_tau=phi_rho=pi/2) produces i*H1 with a
    zero global phase; fixing phi_0 = -pi/2 cancels the leading i so that
    downstream amplitude formulas carry real H1 coefficients.
    """
    return BeamSplitterParams(
        gamma=math.pi / 4,
        phi_0=-math.pi / 2,
        phi_tau=math.pi / 2,
        phi_rho=math.pi / 2,
    )


def bs_unitary(params: BeamSplitterParams) -> np.ndarray:
    """Build the 2x2 unitary of a lossless beam splitter.

    Returns e^{i phi_0} * [[cos(g) e^{i phi_tau},  sin(g) e^{i phi_rho}],
                           [-sin(g) e^{-i phi_rho}, cos(g) e^{-i phi_tau}]].
    """
    c = math.cos(params.gamma)
    s = math.sin(params.gamma)
    global_phase = np.exp(1j * params.phi_0)
    mat = np.array(
        [
            [c * np.exp(1j * params.phi_tau), s * np.exp(1j * params.phi_rho)],
            [-s * np.exp(-1j * params.phi_rho), c * np.exp(-1j * params.phi_tau)],
        ],
        dtype=np.complex128,
    )
    return global_phase * mat


def hadamard_gate() -> np.ndarray:
    """The real 2x2 Hadamard H1 = (1/sqrt(2)) [[1, 1], [1, -1]]."""
    return np.array([[1.0, 1.0], [1.0, -1.0]], dtype=np.complex128) / math.sqrt(2.0)


def walsh_hadamard_matrix(t: int) -> np.ndarray:
    """Recursive Walsh-Hadamard matrix of dimension 2^t.

    H_0 = [[1]] and H_t = (1/sqrt(2)) [[H_{t-1}, H_{t-1}], [H_{t-1}, -H_{t-1}]];
    every entry is +-1/sqrt(2^t).

    Args:
        t: non-negative recursion depth; the matrix has dimension 2^t.

    Raises:
        ValueError: if t is negative or the dimension would be unreasonably
            large for dense storage.
    """
    if t < 0:
        raise ValueError(f"recursion depth must be non-negative, got {t}")
    if t > _MAX_HADAMARD_ORDER:
        raise ValueError(
            f"2^{t} x 2^{t} exceeds the supported dense-matrix size "
            f"(max t = {_MAX_HADAMARD_ORDER})"
        )
    h = np.array([[1.0]], dtype=np.complex128)
    for _ in range(t):
        h = np.block([[h, h], [h, -h]]) / math.sqrt(2.0)
    return h


def is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def embed_two_mode(gate: np.ndarray, a: int, b: int, total: int) -> np.ndarray:
    """Embed a 2x2 gate acting on modes (a, b) into a total-mode identity."""
    gate = np.asarray(gate, dtype=np.complex128)
    if gate.shape != (2, 2):
        raise ValueError(f"expected a 2x2 gate, got shape {gate.shape}")
    if a == b:
        raise ValueError("gate modes must be distinct")
    if not (0 <= a < total and 0 <= b < total):
        raise ValueError(
            f"mode indices ({a}, {b}) out of range for {total} modes"
        )
    u = np.eye(total, dtype=np.complex128)
    u[a, a] = gate[0, 0]
    u[a, b] = gate[0, 1]
    u[b, a] = gate[1, 0]
    u[b, b] = gate[1, 1]
    return u


@dataclass(frozen=True)
class GatePlacement:
    """One two-mode gate at a position in an interferometer cascade.

    Attributes:
        gate: 2x2 complex unitary.
        mode_a: first mode index.
        mode_b: second mode index.
        layer: execution-order index; lower layers are applied first.
    """

    gate: np.ndarray
    mode_a: int
    mode_b: int
    layer: int

    def __post_init__(self) -> None:
        if self.mode_a == self.mode_b:
            raise ValueError("placement modes must be distinct")


@dataclass(frozen=True)
class InterferometerLayout:
    """Ordered two-mode gate placements realizing a multiport unitary."""

    mode_count: int
    placements: tuple[GatePlacement, ...]

    def __post_init__(self) -> None:
        for p in self.placements:
            if not (0 <= p.mode_a < self.mode_count and 0 <= p.mode_b < self.mode_count):
                raise ValueError(
                    f"placement modes ({p.mode_a}, {p.mode_b}) out of range "
                    f"for {self.mode_count} modes"
                )

    def unitary(self) -> np.ndarray:
        """Compose all placements, lowest layer first."""
        u = np.eye(self.mode_count, dtype=np.complex128)
        for p in sorted(self.placements, key=lambda p: p.layer):
            u = embed_two_mode(p.gate, p.mode_a, p.mode_b, self.mode_count) @ u
        return u

    def to_json(self) -> str:
        """Serialize as {mode_count, placements:[{layer, mode_a, mode_b, gate}]}.

        Each gate is a row-major list of four [re, im] pairs.
        """
        payload = {
            "mode_count": self.mode_count,
            "placements": [
                {
                    "layer": p.layer,
                    "mode_a": p.mode_a,
                    "mode_b": p.mode_b,
                    "gate": [
                        [float(z.real), float(z.imag)]
                        for z in np.asarray(p.gate).ravel()
                    ],
                }
                for p in self.placements
            ],
        }
        return json.dumps(payload, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "InterferometerLayout":
        payload = json.loads(text)
        placements = tuple(
            GatePlacement(
                gate=np.array(
                    [complex(re, im) for re, im in entry["gate"]],
                    dtype=np.complex128,
                ).reshape(2, 2),
                mode_a=int(entry["mode_a"]),
                mode_b=int(entry["mode_b"]),
                layer=int(entry["layer"]),
            )
            for entry in payload["placements"]
        )
        return cls(mode_count=int(payload["mode_count"]), placements=placements)


def synthesize_walsh_hadamard(total_modes: int) -> InterferometerLayout:
    """Cascade of balanced splitters realizing the Walsh-Hadamard transform.

    Stage s (layer s) couples every mode pair (m, m + 2^s) for which bit s of
    m is zero; with t = log2(total_modes) stages this places exactly
    (total_modes / 2) * t gates and composes to walsh_hadamard_matrix(t).

    Args:
        total_modes: number of modes; must be a power of two, at least 2.
    """
    if not is_power_of_two(total_modes) or total_modes < 2:
        raise ValueError(
            f"mode count must be a power of two >= 2, got {total_modes}"
        )
    t = total_modes.bit_length() - 1
    h1 = hadamard_gate()
    placements = []
    for stage in range(t):
        step = 1 << stage
        for m in range(total_modes):
            if m & step:
                continue
            placements.append(
                GatePlacement(gate=h1, mode_a=m, mode_b=m + step, layer=stage)
            )
    return InterferometerLayout(mode_count=total_modes, placements=tuple(placements))


def apply_unitary(u: np.ndarray, amplitudes: np.ndarray) -> np.ndarray:
    """Transform an amplitude vector by a mode unitary (norm preserving)."""
    u = np.asarray(u, dtype=np.complex128)
    amplitudes = np.asarray(amplitudes, dtype=np.complex128)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {u.shape}")
    if amplitudes.shape != (u.shape[0],):
        raise ValueError(
            f"amplitude vector of length {amplitudes.shape} does not match "
            f"unitary of dimension {u.shape[0]}"
        )
    return u @ amplitudes


def is_unitary(u: np.ndarray, atol: float = ATOL) -> bool:
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    eye = np.eye(u.shape[0])
    return bool(np.allclose(u @ u.conj().T, eye, atol=atol, rtol=0.0))
