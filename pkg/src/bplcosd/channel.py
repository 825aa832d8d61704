"""Depolarizing Pauli noise, syndrome measurement, and LLR initialization.

The error model: each qubit independently suffers I with probability 1 - p
and X, Y, Z each with probability p / 3; each measured syndrome bit is then
flipped independently with probability q.

All log-likelihood ratios are in natural-log units and clamped to
+/- LLR_MAX so no infinities leak into the decoders.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .gf2 import symplectic_syndrome

PAULI_I, PAULI_X, PAULI_Y, PAULI_Z = 0, 1, 2, 3
PAULI_SYMBOLS = "IXYZ"

# Larger than any LLR arising from realistic channel parameters, yet small
# enough that exp(+/-LLR_MAX) stays comfortably inside float64 range.
LLR_MAX = 50.0

# code = _CODE_FROM_XZ[x + 2*z]
_CODE_FROM_XZ = np.array([PAULI_I, PAULI_X, PAULI_Z, PAULI_Y], dtype=np.uint8)


class PauliVector:
    """Length-n Pauli error pattern with binary symplectic views.

    Stored as two uint8 bit vectors: x (X-component) and z (Z-component);
    Y on qubit j means x[j] = z[j] = 1.  Multiplication is bitwise XOR of
    both components (phases are ignored throughout).
    """

    __slots__ = ("x", "z")

    def __init__(self, x, z):
        x = np.asarray(x, dtype=np.uint8) & 1
        z = np.asarray(z, dtype=np.uint8) & 1
        if x.shape != z.shape or x.ndim != 1:
            raise ValueError("x and z must be 1-D bit vectors of equal length")
        self.x = x
        self.z = z

    @classmethod
    def identity(cls, n: int) -> "PauliVector":
        return cls(np.zeros(n, dtype=np.uint8), np.zeros(n, dtype=np.uint8))

    @classmethod
    def from_string(cls, s: str) -> "PauliVector":
        codes = np.array([PAULI_SYMBOLS.index(ch) for ch in s.upper()], dtype=np.uint8)
        return cls.from_codes(codes)

    @classmethod
    def from_codes(cls, codes) -> "PauliVector":
        """Build from per-qubit codes 0..3 = I, X, Y, Z."""
        codes = np.asarray(codes, dtype=np.uint8)
        x = ((codes == PAULI_X) | (codes == PAULI_Y)).astype(np.uint8)
        z = ((codes == PAULI_Z) | (codes == PAULI_Y)).astype(np.uint8)
        return cls(x, z)

    @classmethod
    def single(cls, n: int, qubit: int, code: int) -> "PauliVector":
        codes = np.zeros(n, dtype=np.uint8)
        codes[qubit] = code
        return cls.from_codes(codes)

    @property
    def n(self) -> int:
        return self.x.size

    @property
    def codes(self) -> np.ndarray:
        return _CODE_FROM_XZ[self.x + 2 * self.z]

    @property
    def weight(self) -> int:
        return int(np.count_nonzero(self.x | self.z))

    def symplectic_product(self, other: "PauliVector") -> int:
        """0 if the two Paulis commute, 1 if they anticommute."""
        if self.n != other.n:
            raise ValueError("length mismatch")
        return int((np.dot(self.x, other.z) + np.dot(self.z, other.x)) & 1)

    def __mul__(self, other: "PauliVector") -> "PauliVector":
        if self.n != other.n:
            raise ValueError("length mismatch")
        return PauliVector(self.x ^ other.x, self.z ^ other.z)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PauliVector):
            return NotImplemented
        return bool(np.array_equal(self.x, other.x) and np.array_equal(self.z, other.z))

    def __hash__(self):
        return hash((self.x.tobytes(), self.z.tobytes()))

    def to_string(self) -> str:
        return "".join(PAULI_SYMBOLS[c] for c in self.codes)

    def __repr__(self) -> str:
        return f"PauliVector({self.to_string()})"


@dataclass(frozen=True)
class NoiseModel:
    """Depolarizing rate p and syndrome bit-flip rate q."""

    p: float
    q: float

    def __post_init__(self):
        if not (0.0 <= self.p <= 1.0 and 0.0 <= self.q <= 1.0):
            raise ValueError("probabilities must lie in [0, 1]")


@dataclass(frozen=True)
class SyndromeSample:
    """True syndrome and its bit-flip-corrupted observation."""

    sigma_true: np.ndarray
    z: np.ndarray


@dataclass(frozen=True)
class LlrState:
    """Initial soft information: per-qubit (X, Y, Z) channel LLR tuples
    relative to I, and per-check LLRs of the true syndrome bits."""

    channel_tuples: np.ndarray  # (n, 3) float64
    syndrome_llrs: np.ndarray  # (num_checks,) float64


def trial_rng(master_seed: int, *indices: int) -> np.random.Generator:
    """Generator for one trial, seeded from (master_seed, *indices).

    Uses numpy's SeedSequence spawning via default_rng on the full key, so
    any trial can be reproduced independently of execution order.
    """
    return np.random.default_rng((master_seed, *indices))


def sample_error(code, p: float, rng: np.random.Generator) -> PauliVector:
    """Draw an i.i.d. depolarizing error: I w.p. 1-p; X, Y, Z each w.p. p/3."""
    u = rng.random(code.n)
    codes = np.zeros(code.n, dtype=np.uint8)
    codes[u < p] = PAULI_Z
    codes[u < 2.0 * p / 3.0] = PAULI_Y
    codes[u < p / 3.0] = PAULI_X
    return PauliVector.from_codes(codes)


def measure_syndrome(code, e: PauliVector, q: float, rng: np.random.Generator) -> SyndromeSample:
    """Measure the true syndrome of e and pass it through the bit-flip channel."""
    if e.n != code.n:
        raise ValueError("error pattern length does not match code")
    sigma = symplectic_syndrome(code.H, e)
    flips = (rng.random(sigma.size) < q).astype(np.uint8)
    return SyndromeSample(sigma, sigma ^ flips)


def _clamped_log_ratio(num: float, den: float) -> float:
    if den <= 0.0:
        return LLR_MAX
    if num <= 0.0:
        return -LLR_MAX
    return float(min(max(math.log(num / den), -LLR_MAX), LLR_MAX))


def init_llrs(code, noise: NoiseModel, z: np.ndarray) -> LlrState:
    """Initial LLRs for the observed syndrome z.

    Channel tuple per qubit: ln((1-p)/(p/3)) for each of X, Y, Z.
    Syndrome LLR per check m: (1 - 2 z_m) * ln((1-q)/q).
    """
    z = np.asarray(z, dtype=np.uint8)
    ch = _clamped_log_ratio(1.0 - noise.p, noise.p / 3.0)
    tuples = np.full((code.n, 3), ch, dtype=np.float64)
    syn_mag = _clamped_log_ratio(1.0 - noise.q, noise.q)
    syn = (1.0 - 2.0 * z.astype(np.float64)) * syn_mag
    return LlrState(tuples, syn)
