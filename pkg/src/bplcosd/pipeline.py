"""Two-stage BP with LCOSD post-processing on the extended check matrix.

Stage 1 runs BP with the first normalization factor; a syndrome-consistent
hard decision is returned directly.  Otherwise stage 2 reruns BP with the
second factor, and on further failure the posterior qubit tuples are
marginalized into Z/X binary LLRs, concatenated with the beta-weighted
syndrome LLRs, and handed to LCOSD over (H | I).  A null-space vector of
(H | I) decomposes as (e^Z | e^X | sigma) with sigma equal to the syndrome
of the extracted Pauli pattern, so every LCOSD answer is self-consistent.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bp import BpConfig, TannerGraph, bp_decode
from .channel import LLR_MAX, NoiseModel, PauliVector, init_llrs
from .codes import StabilizerCode
from .gf2 import BitMatrix, symplectic_syndrome
from .lcosd import LcosdConfig, lcosd_decode


@dataclass(frozen=True)
class PipelineConfig:
    """Stage configs, syndrome weight beta, and LCOSD parameters."""

    bp_stage1: BpConfig = field(default_factory=lambda: BpConfig(alpha=5.0 / 8.0))
    bp_stage2: BpConfig = field(default_factory=lambda: BpConfig(alpha=1.0))
    beta: float = 7.5
    lcosd: LcosdConfig = field(default_factory=LcosdConfig)

    def __post_init__(self):
        if self.beta <= 0:
            raise ValueError("beta must be positive")


@dataclass(frozen=True)
class DecodeResult:
    """Estimated Pauli error and true syndrome, with the producing stage.

    symplectic_syndrome(H, e_hat) == sigma_hat holds on every path: by the
    early-stop rule for the BP stages and by construction for LCOSD.
    """

    e_hat: PauliVector
    sigma_hat: np.ndarray
    path: str  # "bp-stage1" | "bp-stage2" | "lcosd"
    iterations: tuple[int, int]
    list_size_used: int


def marginalize(lambda_tuples: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Collapse (X, Y, Z) LLR tuples into binary Z- and X-component LLRs.

    lambda_x = ln[(1 + exp(-L_Z)) / (exp(-L_Y) + exp(-L_X))] and symmetrically
    for lambda_z; computed via logaddexp and clamped.  Returns (lambda_z,
    lambda_x) in that order.
    """
    lt = np.asarray(lambda_tuples, dtype=np.float64)
    lx, ly, lz = lt[:, 0], lt[:, 1], lt[:, 2]
    lam_x = np.logaddexp(0.0, -lz) - np.logaddexp(-ly, -lx)
    lam_z = np.logaddexp(0.0, -lx) - np.logaddexp(-ly, -lz)
    np.clip(lam_x, -LLR_MAX, LLR_MAX, out=lam_x)
    np.clip(lam_z, -LLR_MAX, LLR_MAX, out=lam_z)
    return lam_z, lam_x


def extend_parity(H: BitMatrix) -> BitMatrix:
    """H' = (H | I): one extra column per check for the true syndrome bit."""
    return BitMatrix.hstack(H, BitMatrix.identity(H.rows))


def concatenate(lambda_z, lambda_x, syndrome_llrs, beta: float) -> np.ndarray:
    """Virtual-codeword LLRs (lambda_z | lambda_x | beta * L).

    Z-marginals come first so they align with the X-part columns of H (the
    symplectic product crosses components).
    """
    lam_z = np.asarray(lambda_z, dtype=np.float64)
    lam_x = np.asarray(lambda_x, dtype=np.float64)
    ls = np.asarray(syndrome_llrs, dtype=np.float64)
    if lam_z.size != lam_x.size:
        raise ValueError("marginal LLR lengths differ")
    return np.concatenate([lam_z, lam_x, beta * ls])


def extract(c, n_qubits: int) -> tuple[PauliVector, np.ndarray]:
    """Split a virtual codeword into (Pauli pattern, syndrome estimate).

    Qubit i maps (c_i, c_{n+i}) = (0,0) -> I, (0,1) -> X, (1,0) -> Z,
    (1,1) -> Y; the trailing block is the estimated true syndrome.
    """
    c = np.asarray(c, dtype=np.uint8)
    if c.size < 2 * n_qubits:
        raise ValueError("virtual codeword too short")
    e = PauliVector(x=c[n_qubits : 2 * n_qubits], z=c[:n_qubits])
    return e, c[2 * n_qubits :].copy()


def bp_lcosd_decode(
    code: StabilizerCode,
    z,
    noise: NoiseModel,
    config: PipelineConfig | None = None,
    graph: TannerGraph | None = None,
) -> DecodeResult:
    """Decode one observed syndrome with the full two-stage pipeline."""
    if config is None:
        config = PipelineConfig()
    if graph is None:
        graph = TannerGraph.from_code(code)
    init = init_llrs(code, noise, z)
    out1 = bp_decode(graph, init, config.bp_stage1)
    if out1.converged:
        return DecodeResult(
            out1.hard_pauli, out1.hard_syndrome, "bp-stage1", (out1.iterations_used, 0), 0
        )
    out2 = bp_decode(graph, init, config.bp_stage2)
    if out2.converged:
        return DecodeResult(
            out2.hard_pauli,
            out2.hard_syndrome,
            "bp-stage2",
            (out1.iterations_used, out2.iterations_used),
            0,
        )
    lam_z, lam_x = marginalize(out2.lambda_tuples)
    virtual_llrs = concatenate(lam_z, lam_x, out2.syndrome_llrs, config.beta)
    result = lcosd_decode(extend_parity(code.H), virtual_llrs, config.lcosd)
    e_hat, sigma_hat = extract(result.codeword, code.n)
    return DecodeResult(
        e_hat,
        sigma_hat,
        "lcosd",
        (out1.iterations_used, out2.iterations_used),
        result.list_size,
    )


def is_logical_error(code: StabilizerCode, e_true: PauliVector, e_hat: PauliVector) -> bool:
    """True unless e_hat equals e_true up to a stabilizer element.

    The residual r = e_true * e_hat must have zero syndrome and commute
    with every logical representative to count as a success.
    """
    if e_true.n != e_hat.n:
        raise ValueError("length mismatch")
    r = e_true * e_hat
    if symplectic_syndrome(code.H, r).any():
        return True
    for logical in code.logical_x + code.logical_z:
        if r.symplectic_product(logical):
            return True
    return False
